//! The symplectic space `Z_d^{2n}` of Pauli exponent vectors.
//!
//! Vectors use the interleaved layout `(z1, x1, z2, x2, ...)`; the block
//! `(p, q)` form is converted with [`SympVec::from_blocks`] and
//! [`SympVec::to_blocks`].

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{FpElem, Modulus};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SympVec {
    coords: Vec<FpElem>,
}

impl SympVec {
    pub fn new(coords: Vec<FpElem>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: coords.len() + coords.len() % 2, got: coords.len() });
        }
        let m = coords[0].modulus();
        if let Some(bad) = coords.iter().find(|c| c.modulus() != m) {
            return Err(Error::ModulusMismatch(m.value(), bad.modulus().value()));
        }
        Ok(SympVec { coords })
    }

    pub fn from_i64(m: Modulus, coords: &[i64]) -> Result<Self> {
        SympVec::new(coords.iter().map(|&c| m.elem(c)).collect())
    }

    pub fn zero(m: Modulus, n: usize) -> Self {
        SympVec { coords: vec![m.zero(); 2 * n] }
    }

    /// The `i`-th standard basis vector of `Z_d^{2n}`.
    pub fn unit(m: Modulus, n: usize, i: usize) -> Self {
        let mut v = SympVec::zero(m, n);
        v.coords[i] = m.one();
        v
    }

    /// Builds the interleaved vector of the Pauli exponent pair `(p, q)`.
    pub fn from_blocks(p: &[FpElem], q: &[FpElem]) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), got: q.len() });
        }
        SympVec::new(p.iter().zip(q).flat_map(|(&z, &x)| [z, x]).collect())
    }

    pub fn to_blocks(&self) -> (Vec<FpElem>, Vec<FpElem>) {
        let p = self.coords.iter().step_by(2).copied().collect();
        let q = self.coords.iter().skip(1).step_by(2).copied().collect();
        (p, q)
    }

    pub fn coords(&self) -> &[FpElem] {
        &self.coords
    }

    pub fn values(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Number of qudits `n`.
    pub fn qudits(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn modulus(&self) -> Modulus {
        self.coords[0].modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: FpElem) -> SympVec {
        SympVec { coords: self.coords.iter().map(|&c| c * s).collect() }
    }

    pub fn add(&self, other: &SympVec) -> SympVec {
        assert_eq!(self.len(), other.len());
        SympVec { coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, other: &SympVec) -> SympVec {
        self.add(&other.scale(-self.modulus().one()))
    }

    /// Sort key for the deterministic scan order: the first coordinate varies
    /// fastest, so compare from the last coordinate down.
    pub fn scan_key(&self) -> Vec<u32> {
        self.coords.iter().rev().map(|c| c.value()).collect()
    }
}

impl fmt::Debug for SympVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values())
    }
}

/// `[u, v] = Σ_i (u_{z_i} v_{x_i} − u_{x_i} v_{z_i})`.
pub fn sym_product(u: &SympVec, v: &SympVec) -> Result<FpElem> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    if u.modulus() != v.modulus() {
        return Err(Error::ModulusMismatch(u.modulus().value(), v.modulus().value()));
    }
    let m = u.modulus();
    let mut acc = m.zero();
    for (a, b) in u.coords.chunks_exact(2).zip(v.coords.chunks_exact(2)) {
        acc += a[0] * b[1] - a[1] * b[0];
    }
    Ok(acc)
}

/// Dense matrix over `Z_d`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {}", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = FpMatrix::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(modulus: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = FpMatrix::zeros(modulus, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = modulus.reduce_i64(v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn get(&self, r: usize, c: usize) -> FpElem {
        self.modulus.elem(self.data[r * self.cols + c] as i64)
    }

    pub fn set(&mut self, r: usize, c: usize, v: FpElem) {
        assert_eq!(v.modulus(), self.modulus);
        self.data[r * self.cols + c] = v.value();
    }

    pub fn mul_vec(&self, v: &[FpElem]) -> Result<Vec<FpElem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let m = self.modulus;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = 0u32;
                for (c, x) in v.iter().enumerate() {
                    acc = m.add_raw(acc, m.mul_raw(self.data[r * self.cols + c], x.value()));
                }
                m.elem(acc as i64)
            })
            .collect())
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let m = self.modulus;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.data[r * self.cols + col] != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..self.cols {
                    self.data.swap(piv * self.cols + c, row * self.cols + c);
                }
            }
            let inv = m.inv_raw(self.data[row * self.cols + col]).expect("nonzero pivot");
            for c in 0..self.cols {
                let i = row * self.cols + c;
                self.data[i] = m.mul_raw(self.data[i], inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.data[r * self.cols + col];
                if factor == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let sub = m.mul_raw(factor, self.data[row * self.cols + c]);
                    let i = r * self.cols + c;
                    self.data[i] = m.sub_raw(self.data[i], sub);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Gaussian elimination over `Z_d`: the rank and a basis of `{v : Mv = 0}`.
///
/// Basis vectors are indexed by free columns in increasing order, each with a
/// 1 in its own free position.
pub fn rank_and_kernel(m: &FpMatrix) -> (usize, Vec<Vec<FpElem>>) {
    let mut r = m.clone();
    let pivots = r.rref();
    let d = m.modulus;
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![d.zero(); m.cols];
        v[free] = d.one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -d.elem(r.data[i * r.cols + free] as i64);
        }
        basis.push(v);
    }
    (pivots.len(), basis)
}

/// Solves `M x = b` with free variables set to zero; `None` if inconsistent.
pub fn solve(m: &FpMatrix, b: &[FpElem]) -> Option<Vec<FpElem>> {
    assert_eq!(b.len(), m.rows);
    let d = m.modulus;
    let mut aug = FpMatrix::zeros(d, m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.data[r * (m.cols + 1) + c] = m.data[r * m.cols + c];
        }
        aug.data[r * (m.cols + 1) + m.cols] = b[r].value();
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![d.zero(); m.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = d.elem(aug.data[i * (m.cols + 1) + m.cols] as i64);
    }
    Some(x)
}

/// True iff `vs` is a linearly independent set of `n` pairwise-isotropic
/// vectors in `Z_d^{2n}`.
pub fn is_lagrangian_semibasis(vs: &[SympVec]) -> bool {
    let Some(first) = vs.first() else {
        return false;
    };
    let n = first.qudits();
    if vs.len() != n || vs.iter().any(|v| v.len() != 2 * n || v.modulus() != first.modulus()) {
        return false;
    }
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            if !sym_product(a, b).expect("checked dimensions").is_zero() {
                return false;
            }
        }
    }
    let d = first.modulus();
    let mut m = FpMatrix::zeros(d, vs.len(), 2 * n);
    for (r, v) in vs.iter().enumerate() {
        for (c, x) in v.coords().iter().enumerate() {
            m.set(r, c, *x);
        }
    }
    m.rank() == vs.len()
}

/// All vectors of `Z_d^len` in scan order (first coordinate fastest).
pub fn scan_vectors(d: Modulus, len: usize) -> impl Iterator<Item = Vec<FpElem>> {
    let total = (d.value() as u64).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let c = idx % d.value() as u64;
                idx /= d.value() as u64;
                d.elem(c as i64)
            })
            .collect()
    })
}

/// First vector `v'` in scan order with `[v, v'] = 0` and `{v, v'}`
/// independent. Restricted to `Z_d^4`.
pub fn extend_to_semibasis(v: &SympVec) -> Result<SympVec> {
    if v.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: v.len() });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let d = v.modulus();
    scan_vectors(d, 4)
        .map(|c| SympVec { coords: c })
        .find(|w| is_lagrangian_semibasis(&[v.clone(), w.clone()]))
        .ok_or(Error::NotASemibasis)
}

/// Completes a Lagrangian semibasis `{a, b}` of `Z_d^4` to a symplectic basis
/// `(a, a*, b, b*)`.
///
/// `a*` solves `[a, w] = 1, [b, w] = 0`, and `b*` solves
/// `[b, w] = 1, [a, w] = 0, [a*, w] = 0`, each with free variables zero.
pub fn complete_symplectic_basis(a: &SympVec, b: &SympVec) -> Result<(SympVec, SympVec, SympVec, SympVec)> {
    if a.len() != 4 || b.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: a.len().max(b.len()) });
    }
    if !is_lagrangian_semibasis(&[a.clone(), b.clone()]) {
        return Err(Error::NotASemibasis);
    }
    let d = a.modulus();
    let a_star = solve_pairings(d, &[(a, 1), (b, 0)]).ok_or(Error::NotASemibasis)?;
    let b_star = solve_pairings(d, &[(b, 1), (a, 0), (&a_star, 0)]).ok_or(Error::NotASemibasis)?;
    Ok((a.clone(), a_star, b.clone(), b_star))
}

/// Solves `[u_k, w] = t_k` for `w`.
fn solve_pairings(d: Modulus, constraints: &[(&SympVec, i64)]) -> Option<SympVec> {
    let len = constraints[0].0.len();
    let mut m = FpMatrix::zeros(d, constraints.len(), len);
    let mut rhs = Vec::with_capacity(constraints.len());
    for (r, (u, t)) in constraints.iter().enumerate() {
        // [u, w] = Σ u_z w_x − u_x w_z
        for i in 0..len / 2 {
            m.set(r, 2 * i + 1, u.coords[2 * i]);
            m.set(r, 2 * i, -u.coords[2 * i + 1]);
        }
        rhs.push(d.elem(*t));
    }
    solve(&m, &rhs).map(|coords| SympVec { coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn sv(d: u64, c: &[i64]) -> SympVec {
        SympVec::from_i64(m(d), c).unwrap()
    }

    #[test]
    fn sym_product_examples() {
        for d in [3, 5, 7] {
            for k3 in 0..d as i64 {
                for k4 in 0..d as i64 {
                    let p = sym_product(&sv(d, &[1, 0, 0, 0]), &sv(d, &[0, 0, k3, k4])).unwrap();
                    assert!(p.is_zero());
                }
            }
        }
        // 1·1 − 2·0 + 0·0 − 1·1 = 0
        assert!(sym_product(&sv(3, &[1, 2, 0, 1]), &sv(3, &[0, 1, 1, 0])).unwrap().is_zero());
        assert_eq!(sym_product(&sv(3, &[1, 0, 0, 0]), &sv(3, &[0, 1, 0, 0])).unwrap().value(), 1);
        assert!(sym_product(&sv(3, &[1, 0]), &sv(3, &[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn block_layout_round_trip() {
        let d = m(5);
        let p = vec![d.elem(1), d.elem(2)];
        let q = vec![d.elem(3), d.elem(4)];
        let v = SympVec::from_blocks(&p, &q).unwrap();
        assert_eq!(v.values(), vec![1, 3, 2, 4]);
        assert_eq!(v.to_blocks(), (p, q));
    }

    #[test]
    fn rank_and_kernel_examples() {
        let d = m(3);
        let (r, k) = rank_and_kernel(&FpMatrix::zeros(d, 3, 4));
        assert_eq!((r, k.len()), (0, 4));
        let (r, k) = rank_and_kernel(&FpMatrix::identity(d, 4));
        assert_eq!((r, k.len()), (4, 0));
        let mat = FpMatrix::from_rows(d, &[vec![1, 2, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 0]]).unwrap();
        let (r, k) = rank_and_kernel(&mat);
        assert_eq!((r, k.len()), (2, 2));
        for v in &k {
            assert!(mat.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn lagrangian_semibasis_examples() {
        assert!(is_lagrangian_semibasis(&[sv(3, &[1, 0, 0, 0]), sv(3, &[0, 0, 1, 0])]));
        assert!(!is_lagrangian_semibasis(&[sv(3, &[1, 0, 0, 0]), sv(3, &[2, 0, 0, 0])]));
        assert!(!is_lagrangian_semibasis(&[sv(3, &[1, 0, 0, 0]), sv(3, &[0, 1, 0, 0])]));
        assert!(!is_lagrangian_semibasis(&[sv(3, &[1, 0, 0, 0])]));
        assert!(!is_lagrangian_semibasis(&[]));
    }

    #[test]
    fn extend_examples() {
        assert_eq!(extend_to_semibasis(&sv(3, &[1, 0, 0, 0])).unwrap(), sv(3, &[0, 0, 1, 0]));
        let v = sv(5, &[0, 0, 0, 1]);
        let w = extend_to_semibasis(&v).unwrap();
        assert!(is_lagrangian_semibasis(&[v, w]));
        assert!(matches!(extend_to_semibasis(&sv(3, &[0, 0, 0, 0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn extend_every_nonzero_vector_d3() {
        let d = m(3);
        let mut count = 0;
        for c in scan_vectors(d, 4) {
            let v = SympVec::new(c).unwrap();
            if v.is_zero() {
                continue;
            }
            let w = extend_to_semibasis(&v).unwrap();
            assert!(sym_product(&v, &w).unwrap().is_zero());
            assert!(is_lagrangian_semibasis(&[v, w]));
            count += 1;
        }
        assert_eq!(count, 80);
    }

    #[test]
    fn isotropic_count_is_d_cubed() {
        let d = m(3);
        for c in scan_vectors(d, 4) {
            let v = SympVec::new(c).unwrap();
            if v.is_zero() {
                continue;
            }
            let orth = scan_vectors(d, 4)
                .filter(|w| sym_product(&v, &SympVec::new(w.clone()).unwrap()).unwrap().is_zero())
                .count();
            assert_eq!(orth, 27);
        }
    }

    fn check_basis(a: &SympVec, a_s: &SympVec, b: &SympVec, b_s: &SympVec) {
        let p = |x: &SympVec, y: &SympVec| sym_product(x, y).unwrap().value();
        assert_eq!(p(a, a_s), 1);
        assert_eq!(p(b, b_s), 1);
        assert_eq!(p(a, b), 0);
        assert_eq!(p(a, b_s), 0);
        assert_eq!(p(a_s, b), 0);
        assert_eq!(p(a_s, b_s), 0);
        let d = a.modulus();
        let mut mat = FpMatrix::zeros(d, 4, 4);
        for (r, v) in [a, a_s, b, b_s].iter().enumerate() {
            for c in 0..4 {
                mat.set(r, c, v.coords()[c]);
            }
        }
        assert_eq!(mat.rank(), 4);
        assert!(is_lagrangian_semibasis(&[a.clone(), b.clone()]));
        assert!(is_lagrangian_semibasis(&[a_s.clone(), b_s.clone()]));
    }

    #[test]
    fn completion_examples() {
        let (a, a_s, b, b_s) = complete_symplectic_basis(&sv(3, &[1, 0, 0, 0]), &sv(3, &[0, 0, 1, 0])).unwrap();
        assert_eq!(a_s, sv(3, &[0, 1, 0, 0]));
        assert_eq!(b_s, sv(3, &[0, 0, 0, 1]));
        check_basis(&a, &a_s, &b, &b_s);

        let (a, a_s, b, b_s) = complete_symplectic_basis(&sv(3, &[1, 0, 0, 0]), &sv(3, &[0, 0, 1, 1])).unwrap();
        check_basis(&a, &a_s, &b, &b_s);

        assert!(matches!(
            complete_symplectic_basis(&sv(3, &[1, 0, 0, 0]), &sv(3, &[0, 1, 0, 0])),
            Err(Error::NotASemibasis)
        ));
    }

    #[test]
    fn completion_of_every_semibasis_d3() {
        let d = m(3);
        for c in scan_vectors(d, 4) {
            let a = SympVec::new(c).unwrap();
            if a.is_zero() {
                continue;
            }
            for c2 in scan_vectors(d, 4) {
                let b = SympVec::new(c2).unwrap();
                if is_lagrangian_semibasis(&[a.clone(), b.clone()]) {
                    let (a, a_s, b, b_s) = complete_symplectic_basis(&a, &b).unwrap();
                    check_basis(&a, &a_s, &b, &b_s);
                }
            }
        }
    }

    #[test]
    fn sym_product_bilinear_antisymmetric() {
        let d = m(7);
        let vecs: Vec<SympVec> = scan_vectors(d, 4).step_by(97).map(|c| SympVec::new(c).unwrap()).collect();
        for u in &vecs {
            assert!(sym_product(u, u).unwrap().is_zero());
            for v in vecs.iter().step_by(3) {
                let uv = sym_product(u, v).unwrap();
                assert_eq!(uv, -sym_product(v, u).unwrap());
                for w in vecs.iter().step_by(5) {
                    let lhs = sym_product(&u.add(w), v).unwrap();
                    assert_eq!(lhs, uv + sym_product(w, v).unwrap());
                }
            }
        }
    }
}
