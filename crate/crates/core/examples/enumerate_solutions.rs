//! Exhaustive enumeration of T(Z_3) with the main-theorem and extraneous
//! checks, and a sampled E/F check at d = 7.

use cliffordlab::enumerate::{
    collect_t, derive_ef, sample_ef, verify_extraneous_properties, verify_main_theorem, EnumConfig,
};
use cliffordlab::modring::Modulus;

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(3)?;
    let cfg = EnumConfig::default();
    let main = verify_main_theorem(d, &cfg)?;
    println!(
        "|T(Z_3)| = {} from {} candidates, {} violations, {} workers, {} ms",
        main.t_count, main.points_scanned, main.violation_count, main.workers, main.elapsed_ms
    );
    let extra = verify_extraneous_properties(d, &cfg)?;
    println!("extraneous-component check: {} violations", extra.violation_count);

    let points = collect_t(d, &cfg)?;
    let pt = &points[points.len() / 2];
    println!(
        "a sample point: q = {:?}, completions = {:?}",
        (1..=4).map(|i| pt.q(i).map(|x| x.value())).collect::<Vec<_>>(),
        pt.completion_count()
    );

    let (rep, stats) = sample_ef(Modulus::new(7)?, 20_000, 1, &derive_ef()?)?;
    println!("d = 7: {stats:?}, {} violations", rep.violation_count);
    Ok(())
}
