//! Checking a claimed decomposition `I = C_1 ∩ C_2` over Q and several primes.

use cliffordlab::polysys::{q_ideal, verify_decomposition_certificate, PolyFile, QPoly, VarTable};

fn main() -> cliffordlab::Result<()> {
    let vars = VarTable::new(["x"])?;
    let x = QPoly::q_var(1, 0);
    let ideal = q_ideal(&vars, vec![&(&x * &x) + &x])?;
    let comps = [q_ideal(&vars, vec![x.clone()])?, q_ideal(&vars, vec![&x + &QPoly::q_const(1, 1)])?];

    let good = verify_decomposition_certificate(&ideal, &comps, &[3, 5, 7], true)?;
    println!("(x^2 + x) = (x) ∩ (x + 1): passed = {} over {:?}", good.passed(), good.domains);
    println!("exact cofactors: {:?}", good.exact_cofactors);

    let broken = verify_decomposition_certificate(
        &q_ideal(&vars, vec![x.clone()])?,
        &[q_ideal(&vars, vec![&x * &x])?],
        &[3],
        false,
    )?;
    for f in &broken.failures {
        println!("{} {}: generator {} has normal form {}", f.domain, f.direction, f.polynomial, f.witness);
    }

    // The same ideal in the file format read by `cliffordlab verify-certificate`.
    println!("{}", serde_json::to_string(&PolyFile::from_polys(&vars, ideal.gens()))?);
    Ok(())
}
