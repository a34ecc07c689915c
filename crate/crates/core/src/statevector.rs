//! Dense complex matrices for small `d`: explicit Pauli and Clifford
//! matrices, numerical checks of the symbolic algebra, and a simulator for
//! the semi-Clifford gate-teleportation circuit.
//!
//! Basis states `|z_1 … z_n⟩` are indexed big-endian: `z_1` is the most
//! significant digit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gatealg::{AlmostDiagClifford, ConjugateTuple, PauliOp, SymMat};
use crate::modring::Modulus;

/// Largest matrix dimension built by this module.
pub const MAX_DIM: usize = 1024;

/// Largest `d` for [`fourier_matrix`] and [`csum_matrix`].
pub const MAX_CIRCUIT_D: u32 = 31;

/// Tolerance for unitarity and relation checks.
pub const TOL: f64 = 1e-10;

/// `ω^k` with `ω = e^{2πi/d}`; `k` is reduced first.
pub fn omega_pow(d: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / d as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = DenseMatrix::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn pow(&self, k: u32) -> DenseMatrix {
        (0..k).fold(DenseMatrix::identity(self.dim), |acc, _| acc.mul(self))
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = DenseMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, x * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVec) -> StateVec {
        assert_eq!(self.dim, v.amps.len());
        let n = self.dim;
        let amps = (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v.amps[j]).sum()).collect();
        StateVec { amps }
    }

    /// Frobenius norm of `self − other` (an upper bound on the operator norm).
    pub fn distance(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn approx_eq(&self, other: &DenseMatrix, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Equality after aligning the phase of the largest entry of `self`.
    pub fn approx_eq_up_to_phase(&self, other: &DenseMatrix, tol: f64) -> bool {
        match phase_between(&self.data, &other.data) {
            Some(ph) => self.distance(&other.scale(ph)) <= tol,
            None => self.distance(other) <= tol,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint()).approx_eq(&DenseMatrix::identity(self.dim), tol)
    }

    /// `λ` if `self = λ I` within `tol`.
    pub fn as_scalar(&self, tol: f64) -> Option<Complex64> {
        let lambda = self.get(0, 0);
        self.approx_eq(&DenseMatrix::identity(self.dim).scale(lambda), tol).then_some(lambda)
    }
}

/// The unit `u` with `a ≈ u · b`, taken at the largest entry of `a`.
fn phase_between(a: &[Complex64], b: &[Complex64]) -> Option<Complex64> {
    let (idx, _) = a.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let (x, y) = (a[idx], b[idx]);
    if x.norm() < TOL || y.norm() < TOL {
        return None;
    }
    let r = x / y;
    Some(r / r.norm())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVec {
    amps: Vec<Complex64>,
}

impl StateVec {
    pub fn new(amps: Vec<Complex64>) -> Self {
        StateVec { amps }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        StateVec { amps }
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> StateVec {
        let n = self.norm();
        StateVec { amps: self.amps.iter().map(|a| a / n).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVec) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|` for normalized inputs.
    pub fn fidelity(&self, other: &StateVec) -> f64 {
        self.inner(other).norm()
    }

    pub fn approx_eq_up_to_phase(&self, other: &StateVec, tol: f64) -> bool {
        let dist =
            |ph: Complex64| self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b * ph).norm_sqr()).sum::<f64>().sqrt();
        match phase_between(&self.amps, &other.amps) {
            Some(ph) => dist(ph) <= tol,
            None => dist(Complex64::new(1.0, 0.0)) <= tol,
        }
    }
}

fn check_dim(d: Modulus, n: usize) -> Result<usize> {
    let dim = (d.value() as usize).checked_pow(n as u32).filter(|&x| x <= MAX_DIM);
    dim.ok_or(Error::DimensionTooLarge { d: d.value(), limit: MAX_DIM as u32 })
}

fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut z = vec![0; n];
    for k in (0..n).rev() {
        z[k] = idx % d;
        idx /= d;
    }
    z
}

fn index(z: &[usize], d: usize) -> usize {
    z.iter().fold(0, |acc, &x| acc * d + x)
}

/// `ω^c Z^p X^q` as a `d^n × d^n` matrix.
pub fn pauli_matrix(op: &PauliOp) -> Result<DenseMatrix> {
    let m = op.modulus();
    let n = op.qudits();
    let dim = check_dim(m, n)?;
    let d = m.value() as usize;
    let mut out = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let z = digits(col, d, n);
        let shifted: Vec<usize> = z.iter().zip(&op.q).map(|(&zi, qi)| (zi + qi.value() as usize) % d).collect();
        let phase: i64 = op.c.value() as i64
            + shifted.iter().zip(&op.p).map(|(&s, pi)| (s * pi.value() as usize) as i64).sum::<i64>();
        out.set(index(&shifted, d), col, omega_pow(m.value(), phase));
    }
    Ok(out)
}

/// `D_Φ = diag(ω^{zᵗΦz})`.
pub fn quad_clifford_matrix(phi: &SymMat) -> Result<DenseMatrix> {
    let m = phi.modulus();
    let n = phi.n();
    let dim = check_dim(m, n)?;
    let d = m.value() as usize;
    let entries: Vec<Complex64> = (0..dim)
        .map(|i| {
            let z: Vec<_> = digits(i, d, n).iter().map(|&x| m.elem(x as i64)).collect();
            omega_pow(m.value(), phi.quad_form(&z).value() as i64)
        })
        .collect();
    Ok(DenseMatrix::diagonal(&entries))
}

/// `D_Φ · ω^c Z^p X^q`.
pub fn almost_diag_matrix(g: &AlmostDiagClifford) -> Result<DenseMatrix> {
    Ok(quad_clifford_matrix(&g.phi)?.mul(&pauli_matrix(&g.pauli)?))
}

/// Every relation of a conjugate tuple that fails numerically. Each element
/// must have order `d` up to a phase (`U^d` a unit scalar); pairs satisfy
/// `U_k V_k = ω V_k U_k`; elements of distinct pairs commute.
pub fn tuple_relation_failures(t: &ConjugateTuple) -> Result<Vec<String>> {
    let m = t.modulus();
    let mats = t.gates().iter().map(almost_diag_matrix).collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for (i, a) in mats.iter().enumerate() {
        if !a.is_unitary(TOL) {
            failures.push(format!("element {i} is not unitary"));
        }
        match a.pow(m.value()).as_scalar(TOL) {
            Some(l) if (l.norm() - 1.0).abs() <= TOL => {}
            _ => failures.push(format!("element {i} does not have order {} up to phase", m.value())),
        }
    }
    let w = omega_pow(m.value(), 1);
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let lhs = mats[i].mul(&mats[j]);
            let rhs = mats[j].mul(&mats[i]);
            let paired = i % 2 == 0 && j == i + 1;
            let expect = if paired { rhs.scale(w) } else { rhs };
            if !lhs.approx_eq(&expect, TOL) {
                failures.push(if paired {
                    format!("elements {i}, {j}: UV != ωVU")
                } else {
                    format!("elements {i}, {j} do not commute")
                });
            }
        }
    }
    Ok(failures)
}

pub fn verify_tuple_numerically(t: &ConjugateTuple) -> Result<bool> {
    Ok(tuple_relation_failures(t)?.is_empty())
}

fn check_circuit_d(d: Modulus) -> Result<usize> {
    if d.value() > MAX_CIRCUIT_D {
        return Err(Error::DimensionTooLarge { d: d.value(), limit: MAX_CIRCUIT_D });
    }
    Ok(d.value() as usize)
}

/// `H[j][k] = ω^{jk}/√d`.
pub fn fourier_matrix(d: Modulus) -> Result<DenseMatrix> {
    let n = check_circuit_d(d)?;
    let s = 1.0 / (n as f64).sqrt();
    let mut h = DenseMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            h.set(j, k, omega_pow(d.value(), (j * k) as i64) * s);
        }
    }
    Ok(h)
}

/// `CSUM|a, b⟩ = |a, b + a⟩` with the first register as control.
pub fn csum_matrix(d: Modulus) -> Result<DenseMatrix> {
    let n = check_circuit_d(d)?;
    let mut m = DenseMatrix::zeros(n * n);
    for a in 0..n {
        for b in 0..n {
            m.set(a * n + (a + b) % n, a * n + b, Complex64::new(1.0, 0.0));
        }
    }
    Ok(m)
}

/// Post-selected result of the teleportation circuit for one outcome.
#[derive(Clone, Debug)]
pub struct TeleportOutcome {
    /// Normalized output on the ancilla wire.
    pub state: StateVec,
    pub probability: f64,
}

/// Simulates the one-qudit semi-Clifford teleportation circuit for `G = C_1 D C_2`.
///
/// Wiring: the ancilla is prepared as `D H|0⟩ = D|+⟩`; the data wire gets
/// `C_2` then `H²`; a CSUM with the ancilla as control adds the ancilla value
/// to the data wire; the data wire is projected onto `|outcome⟩`; the ancilla
/// then gets `C_1` followed by `(C_1 D X* D* C_1*)^outcome`.
pub fn teleport(
    d_gate: &DenseMatrix,
    c1: &DenseMatrix,
    c2: &DenseMatrix,
    psi: &StateVec,
    outcome: usize,
) -> Result<TeleportOutcome> {
    teleport_wired(d_gate, c1, c2, psi, outcome, true)
}

fn teleport_wired(
    d_gate: &DenseMatrix,
    c1: &DenseMatrix,
    c2: &DenseMatrix,
    psi: &StateVec,
    outcome: usize,
    ancilla_controls: bool,
) -> Result<TeleportOutcome> {
    let n = d_gate.dim();
    if [c1.dim(), c2.dim(), psi.dim()].iter().any(|&x| x != n) {
        return Err(Error::DimensionMismatch { expected: n, got: c1.dim().max(c2.dim()).max(psi.dim()) });
    }
    let m = Modulus::new(n as u64)?;
    if outcome >= n {
        return Err(Error::Parse(format!("outcome {outcome} out of range for d = {n}")));
    }
    let h = fourier_matrix(m)?;
    let ancilla = d_gate.apply(&h.apply(&StateVec::basis(n, 0)));
    let data = h.mul(&h).apply(&c2.apply(psi));
    // joint index: control * n + target
    let (ctrl, targ) = if ancilla_controls { (&ancilla, &data) } else { (&data, &ancilla) };
    let mut joint = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            joint[a * n + b] = ctrl.amps[a] * targ.amps[b];
        }
    }
    let joint = csum_matrix(m)?.apply(&StateVec::new(joint));
    let at = |anc: usize| if ancilla_controls { anc * n + outcome } else { outcome * n + anc };
    let projected = StateVec::new((0..n).map(|a| joint.amps[at(a)]).collect());
    let probability = projected.norm().powi(2);
    if probability < TOL {
        return Err(Error::Parse(format!("outcome {outcome} has zero probability")));
    }
    let x = pauli_matrix(&PauliOp::x(m, 1, 0))?;
    let correction = c1.mul(d_gate).mul(&x.adjoint()).mul(&d_gate.adjoint()).mul(&c1.adjoint());
    let out = correction.pow(outcome as u32).mul(c1).apply(&projected.normalized());
    Ok(TeleportOutcome { state: out, probability })
}

/// Fidelity and probability of every outcome for one random instance.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TeleportTrial {
    pub fidelities: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl TeleportTrial {
    pub fn passed(&self, tol: f64) -> bool {
        let d = self.probabilities.len() as f64;
        self.fidelities.iter().all(|f| (f - 1.0).abs() <= tol)
            && self.probabilities.iter().all(|p| (p - 1.0 / d).abs() <= tol)
    }
}

/// Random diagonal `D`, Haar-random `C_1, C_2` and `ψ`, teleported for every outcome.
pub fn random_teleport_trial<R: Rng>(d: Modulus, rng: &mut R) -> Result<TeleportTrial> {
    let n = check_circuit_d(d)?;
    let dg = random_diagonal_unitary(n, rng);
    let c1 = random_unitary(n, rng);
    let c2 = random_unitary(n, rng);
    let psi = random_state(n, rng);
    let target = c1.mul(&dg).mul(&c2).apply(&psi);
    let mut trial = TeleportTrial { fidelities: Vec::with_capacity(n), probabilities: Vec::with_capacity(n) };
    for k in 0..n {
        let out = teleport(&dg, &c1, &c2, &psi, k)?;
        trial.fidelities.push(out.state.fidelity(&target));
        trial.probabilities.push(out.probability);
    }
    Ok(trial)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> DenseMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            let prev = cols[k].clone();
            for (x, y) in cols[j].iter_mut().zip(&prev) {
                *x -= proj * y;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut m = DenseMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Diagonal unitary with uniformly random phases.
pub fn random_diagonal_unitary<R: Rng>(dim: usize, rng: &mut R) -> DenseMatrix {
    let entries: Vec<Complex64> =
        (0..dim).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect();
    DenseMatrix::diagonal(&entries)
}

/// Uniformly random unit vector.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> StateVec {
    let amps = (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    StateVec::new(amps).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gatealg::{almost_diag_mul, conj_pauli_by_quad};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    #[test]
    fn pauli_relations() {
        let d = m(3);
        let id = pauli_matrix(&PauliOp::identity(d, 2)).unwrap();
        assert!(id.approx_eq(&DenseMatrix::identity(9), TOL));
        let z = pauli_matrix(&PauliOp::z(d, 1, 0)).unwrap();
        let x = pauli_matrix(&PauliOp::x(d, 1, 0)).unwrap();
        assert!(z.mul(&x).approx_eq(&x.mul(&z).scale(omega_pow(3, 1)), TOL));
        assert!(x.pow(3).approx_eq(&DenseMatrix::identity(3), TOL));
        assert!(z.pow(3).approx_eq(&DenseMatrix::identity(3), TOL));
        // Z|z⟩ = ω^z|z⟩ and X|z⟩ = |z+1⟩
        assert!((z.get(2, 2) - omega_pow(3, 2)).norm() < TOL);
        assert!((x.get(0, 2) - Complex64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn quad_clifford_examples() {
        let d = m(3);
        let zero = quad_clifford_matrix(&SymMat::zero(d, 2)).unwrap();
        assert!(zero.approx_eq(&DenseMatrix::identity(9), TOL));
        let one = quad_clifford_matrix(&SymMat::from_i64(d, 1, &[1]).unwrap()).unwrap();
        let w = omega_pow(3, 1);
        let expect = DenseMatrix::diagonal(&[Complex64::new(1.0, 0.0), w, w]);
        assert!(one.approx_eq(&expect, TOL));
        let a = SymMat::from_i64(d, 2, &[1, 2, 1]).unwrap();
        let b = SymMat::from_i64(d, 2, &[2, 2, 2]).unwrap();
        let prod = quad_clifford_matrix(&a).unwrap().mul(&quad_clifford_matrix(&b).unwrap());
        assert!(prod.approx_eq(&quad_clifford_matrix(&a.add(&b)).unwrap(), TOL));
    }

    #[test]
    fn dimension_cap() {
        assert!(pauli_matrix(&PauliOp::identity(m(11), 3)).is_err());
        assert!(fourier_matrix(m(37)).is_err());
    }

    #[test]
    fn tuple_checks() {
        let d = m(3);
        let id = ConjugateTuple::identity(d, 2);
        assert!(verify_tuple_numerically(&id).unwrap());
        let mut bad = id.clone();
        bad.gates_mut()[1] = bad.gate(1).pow(2);
        let fails = tuple_relation_failures(&bad).unwrap();
        assert_eq!(fails, vec!["elements 0, 1: UV != ωVU".to_string()]);
    }

    #[test]
    fn order_up_to_phase() {
        // (D_1 X)^3 = ω² I at d = 3
        let d = m(3);
        let g = AlmostDiagClifford::new(SymMat::from_i64(d, 1, &[1]).unwrap(), PauliOp::x(d, 1, 0)).unwrap();
        let cube = almost_diag_matrix(&g).unwrap().pow(3);
        let lambda = cube.as_scalar(TOL).unwrap();
        assert!((lambda - omega_pow(3, 2)).norm() < TOL);
    }

    #[test]
    fn symbolic_products_match_matrices() {
        let d = m(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gate = |rng: &mut ChaCha8Rng| {
            let e: Vec<i64> = (0..7).map(|_| rng.random_range(0..3)).collect();
            let phi = SymMat::from_i64(d, 2, &e[..3]).unwrap();
            let pauli = PauliOp::from_i64(d, e[6], &e[3..5], &e[5..7]).unwrap();
            AlmostDiagClifford::new(phi, pauli).unwrap()
        };
        for _ in 0..200 {
            let a = gate(&mut rng);
            let b = gate(&mut rng);
            let sym = almost_diag_matrix(&almost_diag_mul(&a, &b).unwrap()).unwrap();
            let num = almost_diag_matrix(&a).unwrap().mul(&almost_diag_matrix(&b).unwrap());
            assert!(sym.approx_eq(&num, TOL));
            let dm = quad_clifford_matrix(&a.phi).unwrap();
            let conj = dm.mul(&pauli_matrix(&b.pauli).unwrap()).mul(&dm.adjoint());
            let closed = pauli_matrix(&conj_pauli_by_quad(&a.phi, &b.pauli).unwrap()).unwrap();
            assert!(conj.approx_eq(&closed, TOL));
        }
    }

    #[test]
    fn circuit_pieces() {
        let d = m(3);
        let h = fourier_matrix(d).unwrap();
        assert!(h.is_unitary(TOL));
        let plus = h.apply(&StateVec::basis(3, 0));
        for a in plus.amps() {
            assert!((a - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < TOL);
        }
        let h2 = h.mul(&h);
        for z in 0..3 {
            let out = h2.apply(&StateVec::basis(3, z));
            assert!(out.approx_eq_up_to_phase(&StateVec::basis(3, (3 - z) % 3), TOL));
            assert!((out.amps()[(3 - z) % 3] - Complex64::new(1.0, 0.0)).norm() < TOL);
        }
        let c = csum_matrix(d).unwrap();
        assert!(c.is_unitary(TOL));
        assert!(c.pow(3).approx_eq(&DenseMatrix::identity(9), TOL));
    }

    #[test]
    fn teleport_identity() {
        let id = DenseMatrix::identity(3);
        let out = teleport(&id, &id, &id, &StateVec::basis(3, 0), 0).unwrap();
        assert!(out.state.approx_eq_up_to_phase(&StateVec::basis(3, 0), 1e-9));
        assert!((out.probability - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn teleport_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3, 5, 7] {
            for _ in 0..10 {
                let trial = random_teleport_trial(m(d), &mut rng).unwrap();
                assert_eq!(trial.fidelities.len(), d as usize);
                assert!(trial.passed(1e-9), "{trial:?}");
            }
        }
    }

    #[test]
    fn reversed_csum_does_not_teleport() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dg = random_diagonal_unitary(3, &mut rng);
        let c1 = random_unitary(3, &mut rng);
        let c2 = random_unitary(3, &mut rng);
        let psi = random_state(3, &mut rng);
        let target = c1.mul(&dg).mul(&c2).apply(&psi);
        let worst = (0..3)
            .filter_map(|k| teleport_wired(&dg, &c1, &c2, &psi, k, false).ok())
            .map(|o| o.state.fidelity(&target))
            .fold(1.0f64, f64::min);
        assert!(worst < 0.99, "fidelity {worst}");
    }
}
