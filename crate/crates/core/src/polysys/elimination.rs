//! Polynomial matrices, minors, and fraction-free elimination.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::modring::{BigRational, FpElem, Modulus};
use crate::symplectic::{solve, FpMatrix};

use super::eval::CompiledPoly;
use super::poly::QPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<QPoly>,
}

impl PolyMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix { nvars, rows, cols, data: vec![QPoly::q_zero(nvars); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<QPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let nvars = rows.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(PolyMatrix { nvars, rows: nrows, cols, data })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &QPoly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: QPoly) {
        self.data[r * self.cols + c] = v;
    }

    /// Appends `col` as a new last column.
    pub fn augment(&self, col: &[QPoly]) -> PolyMatrix {
        assert_eq!(col.len(), self.rows);
        let mut out = PolyMatrix::zeros(self.nvars, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            out.set(r, self.cols, col[r].clone());
        }
        out
    }

    /// Entry-wise image at a point of `Z_p`.
    pub fn eval_mod(&self, p: Modulus, point: &[u32]) -> Result<FpMatrix> {
        let mut m = FpMatrix::zeros(p, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = CompiledPoly::new(self.get(r, c), p)?.eval(point);
                m.set(r, c, p.elem(v as i64));
            }
        }
        Ok(m)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinants of the selected rows against every `rows.len()`-subset of
/// columns, by Laplace expansion with shared subresults. Keys are column
/// bitmasks.
fn minors_for_rows(m: &PolyMatrix, rows: &[usize]) -> HashMap<u64, QPoly> {
    let mut layer: HashMap<u64, QPoly> = HashMap::new();
    layer.insert(0, QPoly::q_const(m.nvars, 1));
    for &r in rows {
        let mut next: HashMap<u64, QPoly> = HashMap::new();
        for (mask, det) in &layer {
            for c in 0..m.cols {
                if mask & (1 << c) != 0 || m.get(r, c).is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let term = m.get(r, c) * det;
                let entry = next.entry(mask | (1 << c)).or_insert_with(|| QPoly::q_zero(m.nvars));
                *entry = if above % 2 == 0 { &*entry + &term } else { &*entry - &term };
            }
        }
        layer = next;
    }
    layer
}

/// All `order × order` minors, row subsets outer and column subsets inner,
/// both in lexicographic order.
pub fn minors(m: &PolyMatrix, order: usize) -> Result<Vec<QPoly>> {
    if order == 0 || order > m.rows.min(m.cols) || m.cols > 64 {
        return Err(Error::DimensionMismatch { expected: m.rows.min(m.cols), got: order });
    }
    let mut out = Vec::new();
    for rows in combinations(m.rows, order) {
        let dets = minors_for_rows(m, &rows);
        for cols in combinations(m.cols, order) {
            let mask = cols.iter().fold(0u64, |acc, &c| acc | (1 << c));
            out.push(dets.get(&mask).cloned().unwrap_or_else(|| QPoly::q_zero(m.nvars)));
        }
    }
    Ok(out)
}

/// Result of fraction-free elimination on `[A | b]`.
#[derive(Clone, Debug)]
pub struct EfDerivation {
    /// Bottom-right entry, integer content removed, positive leading term.
    pub e: QPoly,
    /// Last pivot, normalized the same way.
    pub f: QPoly,
    /// The raw bottom-right entry is `e_scale · e`.
    pub e_scale: BigRational,
    /// The raw last pivot is `f_scale · f`.
    pub f_scale: BigRational,
    /// `(original row, column)` of each pivot, in elimination order.
    pub pivots: Vec<(usize, usize)>,
    /// Original index of the row whose coefficient part vanished.
    pub last_row: usize,
}

impl EfDerivation {
    /// `E / F` at a point of `Z_p`, scaled back to the raw bottom-right entry.
    /// `None` when `F` vanishes there.
    pub fn ratio_mod(&self, p: Modulus, point: &[u32]) -> Result<Option<FpElem>> {
        let e = p.elem(CompiledPoly::new(&self.e, p)?.eval(point) as i64);
        let f = p.elem(CompiledPoly::new(&self.f, p)?.eval(point) as i64);
        if f.is_zero() {
            return Ok(None);
        }
        let es = crate::modring::rational_mod(&self.e_scale, p)?;
        let fs = crate::modring::rational_mod(&self.f_scale, p)?;
        Ok(Some(es * e * (fs * f).inv()?))
    }
}

/// Bareiss elimination over the coefficient columns (all but the last).
/// Pivot: leftmost column with a nonzero entry at or below the current row,
/// topmost such row.
pub fn bareiss_eliminate(aug: &PolyMatrix) -> Result<EfDerivation> {
    let (rows, cols) = (aug.rows, aug.cols);
    let mut a: Vec<Vec<QPoly>> = (0..rows).map(|r| (0..cols).map(|c| aug.get(r, c).clone()).collect()).collect();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut prev = QPoly::q_const(aug.nvars, 1);
    let mut pivots = Vec::new();
    let mut k = 0;
    for col in 0..cols - 1 {
        if k == rows {
            break;
        }
        let Some(piv) = (k..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(k, piv);
        perm.swap(k, piv);
        for i in k + 1..rows {
            for j in col + 1..cols {
                let num = &(&a[k][col] * &a[i][j]) - &(&a[i][col] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).ok_or_else(|| Error::Parse("inexact Bareiss division".into()))?;
            }
            a[i][col] = QPoly::q_zero(aug.nvars);
        }
        prev = a[k][col].clone();
        pivots.push((perm[k], col));
        k += 1;
    }
    if pivots.is_empty() {
        return Err(Error::AllPivotsZero);
    }
    if k == rows {
        return Err(Error::Parse("coefficient matrix has full row rank; no consistency row".into()));
    }
    let last = rows - 1;
    if (0..cols - 1).any(|c| !a[last][c].is_zero()) {
        return Err(Error::Parse("last row has a nonzero coefficient part".into()));
    }
    let (e_scale, e) = a[last][cols - 1].primitive_part();
    let (f_scale, f) = prev.primitive_part();
    Ok(EfDerivation { e, f, e_scale, f_scale, pivots, last_row: perm[last] })
}

/// Bottom-right entry of numeric elimination on `[A | b]` using the given
/// pivot rows and columns: the Schur complement `x − r P⁻¹ c`. `None` when
/// the pivot block is singular.
pub fn numeric_bottom_right(aug: &FpMatrix, pivots: &[(usize, usize)], last_row: usize) -> Option<FpElem> {
    let p = aug.modulus();
    let n = pivots.len();
    let bcol = aug.cols() - 1;
    let mut block = FpMatrix::zeros(p, n, n);
    for (i, &(r, _)) in pivots.iter().enumerate() {
        for (j, &(_, c)) in pivots.iter().enumerate() {
            block.set(i, j, aug.get(r, c));
        }
    }
    if block.rank() < n {
        return None;
    }
    let rhs: Vec<FpElem> = pivots.iter().map(|&(r, _)| aug.get(r, bcol)).collect();
    let y = solve(&block, &rhs)?;
    let mut acc = aug.get(last_row, bcol);
    for (j, &(_, c)) in pivots.iter().enumerate() {
        acc -= aug.get(last_row, c) * y[j];
    }
    Some(acc)
}

/// Whether `A x = b` has a solution over `Z_p`.
pub fn numeric_consistent(aug: &FpMatrix) -> bool {
    let cols = aug.cols();
    let mut a = FpMatrix::zeros(aug.modulus(), aug.rows(), cols - 1);
    for r in 0..aug.rows() {
        for c in 0..cols - 1 {
            a.set(r, c, aug.get(r, c));
        }
    }
    a.rank() == aug.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::systems::build_linear_system;

    fn q(n: usize, i: usize) -> QPoly {
        QPoly::q_var(n, i)
    }

    #[test]
    fn small_minors() {
        let m = PolyMatrix::from_rows(vec![vec![q(4, 0), q(4, 1)], vec![q(4, 2), q(4, 3)]]).unwrap();
        let two = minors(&m, 2).unwrap();
        assert_eq!(two, vec![&(&q(4, 0) * &q(4, 3)) - &(&q(4, 1) * &q(4, 2))]);
        let one = minors(&m, 1).unwrap();
        assert_eq!(one, vec![q(4, 0), q(4, 1), q(4, 2), q(4, 3)]);
        assert!(minors(&m, 3).is_err());
    }

    #[test]
    fn order1_minors_of_linear_system_are_entries() {
        let (_, a, _) = build_linear_system(false);
        let one = minors(&a, 1).unwrap();
        assert_eq!(one.len(), 48);
        for r in 0..6 {
            for c in 0..8 {
                assert_eq!(&one[r * 8 + c], a.get(r, c));
            }
        }
    }

    #[test]
    fn three_by_three_determinant() {
        // det [[x,1,0],[0,y,1],[1,0,z]] = xyz + 1
        let n = 3;
        let one = QPoly::q_const(n, 1);
        let zero = QPoly::q_zero(n);
        let m = PolyMatrix::from_rows(vec![
            vec![q(n, 0), one.clone(), zero.clone()],
            vec![zero.clone(), q(n, 1), one.clone()],
            vec![one.clone(), zero.clone(), q(n, 2)],
        ])
        .unwrap();
        let d = minors(&m, 3).unwrap();
        assert_eq!(d[0], &(&(&q(n, 0) * &q(n, 1)) * &q(n, 2)) + &one);
    }

    #[test]
    fn bareiss_on_small_system() {
        // rows: [x, 1 | a], [2x, 2 | b] → last row coefficient part vanishes,
        // bottom-right = x·b − 2x·a over pivot x, so E ∝ b − 2a up to x.
        let n = 3;
        let (x, a, b) = (q(n, 0), q(n, 1), q(n, 2));
        let two = QPoly::q_const(n, 2);
        let m = PolyMatrix::from_rows(vec![
            vec![x.clone(), QPoly::q_const(n, 1), a.clone()],
            vec![&two * &x, two.clone(), b.clone()],
        ])
        .unwrap();
        let ef = bareiss_eliminate(&m).unwrap();
        assert_eq!(ef.pivots, vec![(0, 0)]);
        assert_eq!(ef.last_row, 1);
        assert_eq!(ef.f, x);
        let expect = &(&x * &b) - &(&(&two * &x) * &a);
        assert_eq!(&ef.e.scale(&ef.e_scale), &expect);
    }

    #[test]
    fn all_zero_is_rejected() {
        let m = PolyMatrix::zeros(2, 2, 3);
        assert!(matches!(bareiss_eliminate(&m), Err(Error::AllPivotsZero)));
    }
}
