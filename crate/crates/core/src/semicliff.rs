//! Decision procedures for the semi-Clifford property of simplified
//! two-qudit third-level gates.
//!
//! A simplified gate is semi-Clifford iff the kernel of its
//! [`KernelMatrix`] contains a Lagrangian semibasis. When the first tuple
//! element is a Pauli this reduces to three 2×2 minors vanishing.

use crate::error::{Error, Result};
use crate::gatealg::{phi_coefficient_matrix, ConjugateTuple};
use crate::modring::FpElem;
use crate::symplectic::{is_lagrangian_semibasis, rank_and_kernel, FpMatrix, SympVec};

/// Largest `d` accepted by the kernel-pair search.
pub const DIRECT_SEARCH_LIMIT: u32 = 13;

/// `3 × 4` matrix with column `i` equal to `(Φ_i1, Φ_i2, Φ_i3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelMatrix(pub FpMatrix);

impl KernelMatrix {
    pub fn entry(&self, row: usize, col: usize) -> FpElem {
        self.0.get(row, col)
    }
}

pub fn kernel_matrix(t: &ConjugateTuple) -> Result<KernelMatrix> {
    phi_coefficient_matrix(t).map(KernelMatrix)
}

/// Searches all pairs of nonzero kernel vectors for a Lagrangian semibasis.
pub fn is_semiclifford_direct(t: &ConjugateTuple) -> Result<bool> {
    kernel_contains_semibasis(&kernel_matrix(t)?)
}

pub fn kernel_contains_semibasis(k: &KernelMatrix) -> Result<bool> {
    let d = k.0.modulus();
    if d.value() > DIRECT_SEARCH_LIMIT {
        return Err(Error::DimensionTooLarge { d: d.value(), limit: DIRECT_SEARCH_LIMIT });
    }
    let (_, basis) = rank_and_kernel(&k.0);
    if basis.len() < 2 {
        return Ok(false);
    }
    let dv = d.value() as u64;
    let total = dv.pow(basis.len() as u32);
    let vectors: Vec<SympVec> = (1..total)
        .map(|mut idx| {
            let mut v = vec![d.zero(); 4];
            for b in &basis {
                let coef = d.elem((idx % dv) as i64);
                idx /= dv;
                for (x, y) in v.iter_mut().zip(b) {
                    *x += coef * *y;
                }
            }
            SympVec::new(v).expect("length 4")
        })
        .collect();
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            if is_lagrangian_semibasis(&[a.clone(), b.clone()]) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The three 2×2 minors of the last two kernel-matrix columns:
/// `Φ31Φ42 − Φ32Φ41`, `Φ31Φ43 − Φ33Φ41`, `Φ32Φ43 − Φ33Φ42`.
pub fn last_column_minors(k: &KernelMatrix) -> [FpElem; 3] {
    let a = |r| k.entry(r, 2);
    let b = |r| k.entry(r, 3);
    [a(0) * b(1) - a(1) * b(0), a(0) * b(2) - a(2) * b(0), a(1) * b(2) - a(2) * b(1)]
}

/// Closed-form criterion, valid when `U_1` is a Pauli.
pub fn minors_criterion(t: &ConjugateTuple) -> Result<bool> {
    if !t.gate(0).is_pauli() {
        return Err(Error::PreconditionPhi1Nonzero);
    }
    Ok(last_column_minors(&kernel_matrix(t)?).iter().all(|m| m.is_zero()))
}
