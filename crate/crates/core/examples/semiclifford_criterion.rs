//! The minor criterion versus a direct search for a Lagrangian semibasis in
//! the kernel, over every Φ-quadruple with Φ_1 = 0 at d = 3.

use cliffordlab::gatealg::{ConjugateTuple, SymMat};
use cliffordlab::modring::Modulus;
use cliffordlab::semicliff::{is_semiclifford_direct, kernel_matrix, last_column_minors, minors_criterion};

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(3)?;
    let (mut semi, mut total) = (0, 0);
    let mut example = None;
    for idx in 0..3u32.pow(9) {
        let digits: Vec<i64> = (0..9).map(|k| ((idx / 3u32.pow(k)) % 3) as i64).collect();
        let mut t = ConjugateTuple::identity(d, 2);
        for (k, g) in t.gates_mut()[1..].iter_mut().enumerate() {
            g.phi = SymMat::from_i64(d, 2, &digits[3 * k..3 * k + 3])?;
        }
        let fast = minors_criterion(&t)?;
        assert_eq!(fast, is_semiclifford_direct(&t)?);
        total += 1;
        semi += fast as u32;
        if !fast && example.is_none() {
            example = Some(t);
        }
    }
    println!("{semi} of {total} quadruples are semi-Clifford; both criteria agree everywhere");
    if let Some(t) = example {
        let k = kernel_matrix(&t)?;
        let minors: Vec<u32> = last_column_minors(&k).iter().map(|m| m.value()).collect();
        println!("first non-semi-Clifford quadruple has minors {minors:?}");
    }
    Ok(())
}
