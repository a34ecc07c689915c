//! Symbolic Pauli and almost-diagonal Clifford products, checked against
//! explicit 9×9 matrices.

use cliffordlab::gatealg::{almost_diag_mul, conj_pauli_by_quad, AlmostDiagClifford, PauliOp, SymMat};
use cliffordlab::modring::{FpElem, Modulus};
use cliffordlab::statevector::{almost_diag_matrix, pauli_matrix, quad_clifford_matrix, TOL};

fn values(v: &[FpElem]) -> Vec<u32> {
    v.iter().map(|x| x.value()).collect()
}

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(3)?;
    let z = PauliOp::z(d, 1, 0);
    let x = PauliOp::x(d, 1, 0);
    let zx = cliffordlab::gatealg::pauli_mul(&z, &x)?;
    let xz = cliffordlab::gatealg::pauli_mul(&x, &z)?;
    println!("ZX has phase {}, XZ has phase {}", zx.c, xz.c);

    // Φ = (Φ11, Φ22, 2Φ12)
    let phi = SymMat::from_i64(d, 2, &[1, 2, 1])?;
    let p = PauliOp::from_i64(d, 0, &[0, 1], &[1, 1])?;
    let conj = conj_pauli_by_quad(&phi, &p)?;
    println!("D P D* = w^{} Z^{:?} X^{:?}", conj.c, values(&conj.p), values(&conj.q));
    let dm = quad_clifford_matrix(&phi)?;
    let lhs = dm.mul(&pauli_matrix(&p)?).mul(&dm.adjoint());
    println!("matches the 9x9 matrix: {}", lhs.approx_eq(&pauli_matrix(&conj)?, TOL));

    let a = AlmostDiagClifford::new(phi, p)?;
    let b = AlmostDiagClifford::new(SymMat::from_i64(d, 2, &[0, 1, 2])?, PauliOp::from_i64(d, 2, &[1, 0], &[0, 2])?)?;
    let ab = almost_diag_mul(&a, &b)?;
    let num = almost_diag_matrix(&a)?.mul(&almost_diag_matrix(&b)?);
    println!(
        "product phi = {:?}, c = {}; matrix agreement: {}",
        values(ab.phi.entries()),
        ab.c(),
        almost_diag_matrix(&ab)?.approx_eq(&num, TOL)
    );
    Ok(())
}
