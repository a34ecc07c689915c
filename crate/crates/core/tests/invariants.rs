use std::sync::OnceLock;

use proptest::prelude::*;

use cliffordlab::enumerate::{collect_t, derive_ef, sample_valid_tuples, EnumConfig};
use cliffordlab::gatealg::{almost_diag_mul, pauli_mul, word, AlmostDiagClifford, ConjugateTuple, PauliOp, SymMat};
use cliffordlab::modring::Modulus;
use cliffordlab::polysys::{build_augmented_system, numeric_bottom_right, EfDerivation, PolyMatrix};
use cliffordlab::statevector::{
    almost_diag_matrix, csum_matrix, fourier_matrix, pauli_matrix, quad_clifford_matrix, TOL,
};
use cliffordlab::symplectic::{rank_and_kernel, FpMatrix, SympVec};

fn m(d: u64) -> Modulus {
    Modulus::new(d).unwrap()
}

fn valid_tuples() -> &'static [ConjugateTuple] {
    static TUPLES: OnceLock<Vec<ConjugateTuple>> = OnceLock::new();
    TUPLES.get_or_init(|| {
        let points = collect_t(m(3), &EnumConfig::with_jobs(1)).unwrap();
        sample_valid_tuples(&points, 256, 17).unwrap()
    })
}

fn ef() -> &'static (EfDerivation, PolyMatrix) {
    static EF: OnceLock<(EfDerivation, PolyMatrix)> = OnceLock::new();
    EF.get_or_init(|| (derive_ef().unwrap(), build_augmented_system(true).1))
}

fn gate_strategy(d: u64) -> impl Strategy<Value = AlmostDiagClifford> {
    prop::collection::vec(0..d as i64, 8).prop_map(move |e| {
        let d = m(d);
        AlmostDiagClifford::new(
            SymMat::from_i64(d, 2, &e[..3]).unwrap(),
            PauliOp::from_i64(d, e[3], &e[4..6], &e[6..8]).unwrap(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_associative(a in gate_strategy(3), b in gate_strategy(3), c in gate_strategy(3)) {
        let left = almost_diag_mul(&almost_diag_mul(&a, &b).unwrap(), &c).unwrap();
        let right = almost_diag_mul(&a, &almost_diag_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let pl = pauli_mul(&pauli_mul(&a.pauli, &b.pauli).unwrap(), &c.pauli).unwrap();
        let pr = pauli_mul(&a.pauli, &pauli_mul(&b.pauli, &c.pauli).unwrap()).unwrap();
        prop_assert_eq!(pl, pr);
        let num = almost_diag_matrix(&a).unwrap()
            .mul(&almost_diag_matrix(&b).unwrap())
            .mul(&almost_diag_matrix(&c).unwrap());
        prop_assert!(almost_diag_matrix(&left).unwrap().approx_eq(&num, TOL));
    }

    #[test]
    fn constructed_matrices_are_unitary(g in prop::sample::select(vec![3u64, 5]).prop_flat_map(gate_strategy)) {
        let d = g.modulus();
        prop_assert!(pauli_matrix(&g.pauli).unwrap().is_unitary(TOL));
        prop_assert!(quad_clifford_matrix(&g.phi).unwrap().is_unitary(TOL));
        prop_assert!(almost_diag_matrix(&g).unwrap().is_unitary(TOL));
        prop_assert!(fourier_matrix(d).unwrap().is_unitary(TOL));
        prop_assert!(csum_matrix(d).unwrap().is_unitary(TOL));
    }

    #[test]
    fn words_on_basis_vectors_return_elements(idx in 0usize..256) {
        let t = &valid_tuples()[idx];
        for i in 0..4 {
            let e = SympVec::unit(m(3), 2, i);
            prop_assert_eq!(&word(t, &e).unwrap(), t.gate(i));
        }
    }

    #[test]
    fn words_multiply_up_to_phase(idx in 0usize..256, a in prop::collection::vec(0i64..3, 4), b in prop::collection::vec(0i64..3, 4)) {
        let t = &valid_tuples()[idx];
        let d = m(3);
        let va = SympVec::from_i64(d, &a).unwrap();
        let vb = SympVec::from_i64(d, &b).unwrap();
        let sum = word(t, &va.add(&vb)).unwrap();
        let prod = almost_diag_mul(&word(t, &va).unwrap(), &word(t, &vb).unwrap()).unwrap();
        prop_assert_eq!(&sum.phi, &prod.phi);
        prop_assert_eq!(&sum.pauli.p, &prod.pauli.p);
        prop_assert_eq!(&sum.pauli.q, &prod.pauli.q);
        let ms = almost_diag_matrix(&sum).unwrap();
        let mp = almost_diag_matrix(&prod).unwrap();
        prop_assert!(ms.approx_eq_up_to_phase(&mp, TOL));
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in 1usize..6, cols in 1usize..7, entries in prop::collection::vec(0i64..7, 36)) {
        let d = m(7);
        let data: Vec<Vec<i64>> = (0..rows).map(|r| entries[r * 6..r * 6 + cols].to_vec()).collect();
        let mat = FpMatrix::from_rows(d, &data).unwrap();
        let (rank, kernel) = rank_and_kernel(&mat);
        prop_assert_eq!(rank + kernel.len(), cols);
        prop_assert_eq!(rank, mat.rank());
        for k in &kernel {
            prop_assert!(mat.mul_vec(k).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn ef_ratio_matches_numeric_elimination(point in prop::collection::vec(0u32..7, 25)) {
        let (ef, aug) = ef();
        let p = m(7);
        let numeric = aug.eval_mod(p, &point).unwrap();
        if let Some(ratio) = ef.ratio_mod(p, &point).unwrap() {
            prop_assert_eq!(numeric_bottom_right(&numeric, &ef.pivots, ef.last_row), Some(ratio));
        }
    }
}
