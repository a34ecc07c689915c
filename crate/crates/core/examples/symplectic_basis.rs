//! Lagrangian semibases and their completion to a symplectic basis of `Z_3^4`.

use cliffordlab::modring::Modulus;
use cliffordlab::symplectic::{
    complete_symplectic_basis, extend_to_semibasis, is_lagrangian_semibasis, sym_product, SympVec,
};

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(3)?;
    // Interleaved layout (z1, x1, z2, x2).
    let a = SympVec::from_i64(d, &[1, 0, 0, 1])?;
    let b = extend_to_semibasis(&a)?;
    println!("a = {:?}, first completing b = {:?}", a.values(), b.values());
    println!("[a, b] = {}, semibasis: {}", sym_product(&a, &b)?, is_lagrangian_semibasis(&[a.clone(), b.clone()]));

    let (a, a_star, b, b_star) = complete_symplectic_basis(&a, &b)?;
    for (name, v) in [("a", &a), ("a*", &a_star), ("b", &b), ("b*", &b_star)] {
        println!("{name:>2} = {:?}", v.values());
    }
    println!(
        "[a, a*] = {}, [b, b*] = {}, [a, b*] = {}",
        sym_product(&a, &a_star)?,
        sym_product(&b, &b_star)?,
        sym_product(&a, &b_star)?
    );

    let orthogonal = cliffordlab::symplectic::scan_vectors(d, 4)
        .filter(|w| sym_product(&a, &SympVec::new(w.clone()).unwrap()).unwrap().is_zero())
        .count();
    println!("vectors orthogonal to a: {orthogonal}");
    Ok(())
}
