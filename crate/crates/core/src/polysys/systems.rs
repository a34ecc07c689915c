//! The third-level polynomial system, the semi-Clifford minors, and the
//! linear system in the `p` variables.

use crate::gatealg::pair_constant;

use super::elimination::PolyMatrix;
use super::poly::{QPoly, VarTable};

/// Canonical variable table. With `phi1_zero` the `Φ_1` variables are
/// omitted (25 variables), otherwise there are 28.
pub fn canonical_vars(phi1_zero: bool) -> VarTable {
    let mut names = Vec::new();
    let first = if phi1_zero { 2 } else { 1 };
    for i in first..=4 {
        for k in 1..=3 {
            names.push(format!("phi{i}{k}"));
        }
    }
    for i in 1..=4 {
        for k in 1..=2 {
            names.push(format!("q{i}{k}"));
        }
    }
    for i in 1..=4 {
        for k in 1..=2 {
            names.push(format!("p{i}{k}"));
        }
    }
    VarTable::new(names).expect("unique names")
}

/// Builder for polynomials over a canonical table.
pub struct Symbols {
    vars: VarTable,
}

impl Symbols {
    pub fn new(phi1_zero: bool) -> Self {
        Symbols { vars: canonical_vars(phi1_zero) }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    fn get(&self, name: &str) -> QPoly {
        match self.vars.index(name) {
            Some(i) => QPoly::q_var(self.vars.len(), i),
            None => self.zero(),
        }
    }

    pub fn zero(&self) -> QPoly {
        QPoly::q_zero(self.vars.len())
    }

    pub fn constant(&self, v: i64) -> QPoly {
        QPoly::q_const(self.vars.len(), v)
    }

    /// `Φ_{ik}`, zero when eliminated. Indices are 1-based.
    pub fn phi(&self, i: usize, k: usize) -> QPoly {
        self.get(&format!("phi{i}{k}"))
    }

    pub fn q(&self, i: usize, k: usize) -> QPoly {
        self.get(&format!("q{i}{k}"))
    }

    pub fn p(&self, i: usize, k: usize) -> QPoly {
        self.get(&format!("p{i}{k}"))
    }

    /// `2 Φ_i q_j`, which has integer coefficients.
    pub fn doubled_phi_q(&self, i: usize, j: usize) -> [QPoly; 2] {
        let two = self.constant(2);
        let (a, b, c) = (self.phi(i, 1), self.phi(i, 2), self.phi(i, 3));
        let (x, y) = (self.q(j, 1), self.q(j, 2));
        [&(&(&two * &a) * &x) + &(&c * &y), &(&c * &x) + &(&(&two * &b) * &y)]
    }

    /// `q_jᵗ Φ_i q_j`.
    pub fn quad(&self, i: usize, j: usize) -> QPoly {
        let (a, b, c) = (self.phi(i, 1), self.phi(i, 2), self.phi(i, 3));
        let (x, y) = (self.q(j, 1), self.q(j, 2));
        let t1 = &(&a * &x) * &x;
        let t2 = &(&b * &y) * &y;
        let t3 = &(&c * &x) * &y;
        &(&t1 + &t2) + &t3
    }

    pub fn p_dot_q(&self, i: usize, j: usize) -> QPoly {
        &(&self.p(i, 1) * &self.q(j, 1)) + &(&self.p(i, 2) * &self.q(j, 2))
    }
}

/// Index pairs `(i, j)`, 1-based, in the row order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
pub fn pairs() -> [(usize, usize); 6] {
    [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
}

fn c_ij(i: usize, j: usize) -> i64 {
    pair_constant(i - 1, j - 1)
}

/// Eighteen polynomials: for each pair, the two components of
/// `2(Φ_i q_j − Φ_j q_i)` and the scalar
/// `q_iᵗΦ_j q_i − q_jᵗΦ_i q_j + p_i·q_j − p_j·q_i − c_ij`.
pub fn build_third_level_system(phi1_zero: bool) -> (VarTable, Vec<QPoly>) {
    let s = Symbols::new(phi1_zero);
    let mut out = Vec::with_capacity(18);
    for (i, j) in pairs() {
        let a = s.doubled_phi_q(i, j);
        let b = s.doubled_phi_q(j, i);
        out.push(&a[0] - &b[0]);
        out.push(&a[1] - &b[1]);
        let scalar = &(&(&s.quad(j, i) - &s.quad(i, j)) + &s.p_dot_q(i, j)) - &s.p_dot_q(j, i);
        out.push(&scalar - &s.constant(c_ij(i, j)));
    }
    (s.vars().clone(), out)
}

/// The three 2×2 minors of the last two kernel-matrix columns.
pub fn build_semiclifford_system() -> (VarTable, Vec<QPoly>) {
    let s = Symbols::new(false);
    let m = |a: usize, b: usize| &(&s.phi(3, a) * &s.phi(4, b)) - &(&s.phi(3, b) * &s.phi(4, a));
    (s.vars().clone(), vec![m(1, 2), m(1, 3), m(2, 3)])
}

/// `A p = b` with `p = (p_1, …, p_4)` stacked; row `(i, j)` carries `q_jᵗ`
/// in block `i` and `−q_iᵗ` in block `j`, and
/// `b = q_jᵗΦ_i q_j − q_iᵗΦ_j q_i + c_ij`.
pub fn build_linear_system(phi1_zero: bool) -> (VarTable, PolyMatrix, Vec<QPoly>) {
    let s = Symbols::new(phi1_zero);
    let mut a = PolyMatrix::zeros(s.vars().len(), 6, 8);
    let mut b = Vec::with_capacity(6);
    for (row, (i, j)) in pairs().into_iter().enumerate() {
        for k in 1..=2 {
            a.set(row, 2 * (i - 1) + k - 1, s.q(j, k));
            a.set(row, 2 * (j - 1) + k - 1, -&s.q(i, k));
        }
        b.push(&(&s.quad(i, j) - &s.quad(j, i)) + &s.constant(c_ij(i, j)));
    }
    (s.vars().clone(), a, b)
}

/// `[A | b]`.
pub fn build_augmented_system(phi1_zero: bool) -> (VarTable, PolyMatrix) {
    let (vars, a, b) = build_linear_system(phi1_zero);
    (vars, a.augment(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::{BigRational, Modulus};
    use num_traits::Zero;

    fn point(vars: &VarTable, assign: &[(&str, i64)]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); vars.len()];
        for (name, x) in assign {
            v[vars.index(name).unwrap()] = BigRational::from_integer((*x).into());
        }
        v
    }

    #[test]
    fn variable_tables() {
        assert_eq!(canonical_vars(false).len(), 28);
        let v = canonical_vars(true);
        assert_eq!(v.len(), 25);
        assert_eq!(v.name(0), "phi21");
        assert_eq!(v.name(9), "q11");
        assert_eq!(v.name(24), "p42");
    }

    #[test]
    fn third_level_shape() {
        let (vars, sys) = build_third_level_system(false);
        assert_eq!(sys.len(), 18);
        assert_eq!(vars.len(), 28);
        for f in &sys {
            assert!(f.is_integral());
        }
        let (vars, sys) = build_third_level_system(true);
        assert_eq!(vars.len(), 25);
        assert!(vars.index("phi11").is_none());
        assert_eq!(sys.len(), 18);
    }

    #[test]
    fn identity_tuple_satisfies_system() {
        // identity tuple: p1=(1,0) (Z1), q2=(1,0) (X1), p3=(0,1), q4=(0,1)
        let (vars, sys) = build_third_level_system(false);
        let pt = point(&vars, &[("p11", 1), ("q21", 1), ("p32", 1), ("q42", 1)]);
        for f in &sys {
            assert!(f.eval(&pt).is_zero(), "{}", f.format_with(vars.names()));
        }
        let pt = point(&vars, &[("p11", 1), ("q21", 1)]);
        assert!(!sys[17].eval(&pt).is_zero());
    }

    #[test]
    fn semiclifford_minors() {
        let (vars, sys) = build_semiclifford_system();
        assert_eq!(sys.len(), 3);
        for f in &sys {
            assert_eq!(f.len(), 2);
            assert_eq!(f.total_degree(), 2);
        }
        let pt = point(&vars, &[("phi31", 1), ("phi42", 1)]);
        let vals: Vec<BigRational> = sys.iter().map(|f| f.eval(&pt)).collect();
        assert_eq!(vals, vec![BigRational::from_integer(1.into()), BigRational::zero(), BigRational::zero()]);
        let pt = point(&vars, &[("phi31", 2), ("phi32", 1), ("phi33", 1), ("phi41", 2), ("phi42", 1), ("phi43", 1)]);
        assert!(sys.iter().all(|f| f.eval(&pt).is_zero()));
    }

    #[test]
    fn linear_system_shape() {
        let (vars, a, b) = build_linear_system(false);
        assert_eq!((a.rows(), a.cols(), b.len()), (6, 8, 6));
        let qs: Vec<usize> = (1..=4)
            .flat_map(|i| (1..=2).map(move |k| (i, k)))
            .map(|(i, k)| vars.index(&format!("q{i}{k}")).unwrap())
            .collect();
        for r in 0..6 {
            for c in 0..8 {
                let e = a.get(r, c);
                assert!(e.total_degree() <= 1);
                assert!(e.support().iter().all(|v| qs.contains(v)));
            }
        }
        let zero = vec![BigRational::zero(); vars.len()];
        let consts: Vec<i64> = b.iter().map(|f| f.eval(&zero).to_integer().try_into().unwrap()).collect();
        assert_eq!(consts, vec![1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn linear_system_matches_scalar_equations() {
        // A·p − b equals the scalar third-level polynomials
        let p = Modulus::new(7).unwrap();
        let (vars, a, b) = build_linear_system(false);
        let (_, sys) = build_third_level_system(false);
        let s = Symbols::new(false);
        let pvec: Vec<QPoly> = (1..=4).flat_map(|i| (1..=2).map(move |k| (i, k))).map(|(i, k)| s.p(i, k)).collect();
        for r in 0..6 {
            let mut lhs = QPoly::q_zero(vars.len());
            for c in 0..8 {
                lhs = &lhs + &(a.get(r, c) * &pvec[c]);
            }
            let resid = &lhs - &b[r];
            assert_eq!(resid, sys[3 * r + 2]);
            assert!(resid.reduce_mod(p).is_ok());
        }
    }
}
