//! The end-to-end acceptance suite behind `cliffordlab selftest`.
//!
//! Each criterion is a self-contained check returning a [`CriterionResult`].
//! Randomized criteria draw from `ChaCha8Rng` seeded with `seed + id`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{
    collect_t, derive_ef, sample_ef, sample_valid_tuples, verify_ef_cover_exhaustive, verify_extraneous_properties,
    verify_main_theorem, EnumConfig,
};
use crate::error::{Error, Result};
use crate::gatealg::{
    almost_diag_mul, conj_pauli_by_quad, phi1_reduce, tuple_satisfies_polyeqns, AlmostDiagClifford, ConjugateTuple,
    PauliOp, SymMat,
};
use crate::modring::Modulus;
use crate::polysys::{
    build_linear_system, build_third_level_system, minors, q_ideal, verify_decomposition_certificate, QPoly, VarTable,
    DEFAULT_PRIMES,
};
use crate::semicliff::{is_semiclifford_direct, minors_criterion};
use crate::statevector::{
    almost_diag_matrix, pauli_matrix, quad_clifford_matrix, random_teleport_trial, verify_tuple_numerically, TOL,
};

/// Pinned counts of `T(Z_d)`.
pub const REGRESSION_FIXTURE: &str = include_str!("../fixtures/regression.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinnedCount {
    pub d: u32,
    #[serde(rename = "T_count")]
    pub t_count: u64,
    pub points_scanned: u64,
    pub command: String,
}

#[derive(Deserialize)]
struct Fixture {
    t_counts: Vec<PinnedCount>,
}

pub fn pinned_counts() -> Vec<PinnedCount> {
    serde_json::from_str::<Fixture>(REGRESSION_FIXTURE).expect("bundled fixture parses").t_counts
}

pub fn pinned_count(d: u32) -> Option<PinnedCount> {
    pinned_counts().into_iter().find(|p| p.d == d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {} ({} ms)", self.id, self.name, self.detail, self.elapsed_ms)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub enumeration: EnumConfig,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: 1, enumeration: EnumConfig::default() }
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "main-theorem-d3"),
    (2, "system-shape"),
    (3, "minor-vanishing"),
    (4, "ef-cover"),
    (5, "criterion-equivalence"),
    (6, "matrix-oracle"),
    (7, "conjugate-tuple-axioms"),
    (8, "phi1-reduction"),
    (9, "teleportation"),
    (10, "certificate-verifier"),
    (11, "extraneous-components"),
];

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg).expect("id in range")).collect()
}

/// Runs one criterion; an internal error is reported as a failure.
pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Result<CriterionResult> {
    let name =
        CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).ok_or_else(|| Error::Parse(format!("no criterion {id}")))?;
    let start = Instant::now();
    let seed = cfg.seed.wrapping_add(id as u64);
    let outcome = match id {
        1 => main_theorem(cfg),
        2 => system_shape(),
        3 => minor_vanishing(seed),
        4 => ef_cover(cfg, seed),
        5 => criterion_equivalence(),
        6 => matrix_oracle(seed),
        7 => tuple_axioms(cfg, seed),
        8 => phi1_reduction(cfg, seed),
        9 => teleportation(seed),
        10 => certificates(),
        _ => extraneous(cfg),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionResult { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() as u64 })
}

type Outcome = Result<(bool, String)>;

fn d3() -> Modulus {
    Modulus::new(3).expect("prime")
}

fn main_theorem(cfg: &AcceptanceConfig) -> Outcome {
    let rep = verify_main_theorem(d3(), &cfg.enumeration)?;
    let pinned = pinned_count(3).map(|p| p.t_count);
    let count_ok = pinned == Some(rep.t_count);
    Ok((
        rep.passed() && count_ok,
        format!(
            "|T(Z_3)| = {} (pinned {}), {} violations",
            rep.t_count,
            pinned.map_or("none".into(), |c| c.to_string()),
            rep.violation_count
        ),
    ))
}

fn system_shape() -> Outcome {
    let used = |vars: &VarTable, sys: &[QPoly]| {
        let mut seen = vec![false; vars.len()];
        for f in sys {
            for i in f.support() {
                seen[i] = true;
            }
        }
        seen.iter().filter(|&&s| s).count()
    };
    let (full_vars, full) = build_third_level_system(false);
    let (red_vars, red) = build_third_level_system(true);
    let shape =
        [full.len(), full_vars.len(), used(&full_vars, &full), red.len(), red_vars.len(), used(&red_vars, &red)];
    Ok((
        shape == [18, 28, 28, 18, 25, 25],
        format!("{} polynomials in {} variables; with Phi_1 = 0: {} in {}", shape[0], shape[1], shape[3], shape[4]),
    ))
}

/// Order-6 minors of the coefficient matrix of the linear system in `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorCheck {
    pub minor_count: usize,
    pub nonzero_minors: Vec<usize>,
    pub prime: u32,
    pub samples: usize,
    /// Random points where the evaluated matrix has rank 6.
    pub full_rank_points: usize,
}

impl MinorCheck {
    pub fn passed(&self) -> bool {
        self.minor_count == 28 && self.nonzero_minors.is_empty() && self.full_rank_points == 0
    }

    pub fn summary(&self) -> String {
        let sym = if self.nonzero_minors.is_empty() {
            "all zero".to_string()
        } else {
            format!("{} nonzero", self.nonzero_minors.len())
        };
        format!(
            "{} minors, {sym}; {}/{} random Z_{} points with a nonzero minor",
            self.minor_count, self.full_rank_points, self.samples, self.prime
        )
    }
}

pub fn check_minors(samples: usize, prime: u32, seed: u64) -> Result<MinorCheck> {
    let (vars, a, _) = build_linear_system(true);
    let ms = minors(&a, 6)?;
    let p = Modulus::new(prime as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut full_rank_points = 0;
    for _ in 0..samples {
        let point: Vec<u32> = (0..vars.len()).map(|_| rng.random_range(0..prime)).collect();
        if a.eval_mod(p, &point)?.rank() == 6 {
            full_rank_points += 1;
        }
    }
    Ok(MinorCheck {
        minor_count: ms.len(),
        nonzero_minors: ms.iter().enumerate().filter(|(_, m)| !m.is_zero()).map(|(i, _)| i).collect(),
        prime,
        samples,
        full_rank_points,
    })
}

fn minor_vanishing(seed: u64) -> Outcome {
    let c = check_minors(1000, 7, seed)?;
    Ok((c.passed(), c.summary()))
}

fn ef_cover(cfg: &AcceptanceConfig, seed: u64) -> Outcome {
    let ef = derive_ef()?;
    let exhaustive = verify_ef_cover_exhaustive(d3(), &cfg.enumeration, &ef)?;
    let mut ok = exhaustive.passed();
    let mut parts = vec![format!("d=3: {} points, {} violations", exhaustive.t_count, exhaustive.violation_count)];
    for d in [5, 7] {
        let (rep, stats) = sample_ef(Modulus::new(d)?, 100_000, seed, &ef)?;
        ok &= rep.passed() && stats.consistent == 100_000;
        parts.push(format!(
            "d={d}: {} consistent samples ({} with F != 0), {} violations",
            stats.consistent, stats.f_nonzero, rep.violation_count
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_equivalence() -> Outcome {
    let d = d3();
    let mut agree = 0u32;
    let mut semi = 0u32;
    let mut mismatches = Vec::new();
    for idx in 0..3u32.pow(9) {
        let digits: Vec<i64> = (0..9).map(|k| ((idx / 3u32.pow(k)) % 3) as i64).collect();
        let mut t = ConjugateTuple::identity(d, 2);
        for (k, g) in t.gates_mut()[1..].iter_mut().enumerate() {
            g.phi = SymMat::from_i64(d, 2, &digits[3 * k..3 * k + 3])?;
        }
        let a = minors_criterion(&t)?;
        let b = is_semiclifford_direct(&t)?;
        if a == b {
            agree += 1;
            semi += a as u32;
        } else if mismatches.len() < 3 {
            mismatches.push(format!("{digits:?}"));
        }
    }
    let mut detail = format!("{agree}/19683 agree ({semi} semi-Clifford)");
    if !mismatches.is_empty() {
        detail.push_str(&format!("; first mismatches {}", mismatches.join(", ")));
    }
    Ok((agree == 19683, detail))
}

fn random_gate<R: Rng>(d: Modulus, rng: &mut R) -> Result<AlmostDiagClifford> {
    let v = d.value() as i64;
    let e: Vec<i64> = (0..8).map(|_| rng.random_range(0..v)).collect();
    AlmostDiagClifford::new(SymMat::from_i64(d, 2, &e[..3])?, PauliOp::from_i64(d, e[3], &e[4..6], &e[6..8])?)
}

fn matrix_oracle(seed: u64) -> Outcome {
    let d = d3();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bad_mul, mut bad_conj, mut worst) = (0, 0, 0f64);
    for _ in 0..10_000 {
        let a = random_gate(d, &mut rng)?;
        let b = random_gate(d, &mut rng)?;
        let ma = almost_diag_matrix(&a)?;
        let sym = almost_diag_matrix(&almost_diag_mul(&a, &b)?)?;
        let num = ma.mul(&almost_diag_matrix(&b)?);
        let dist = sym.distance(&num);
        worst = worst.max(dist);
        if !sym.approx_eq_up_to_phase(&num, TOL) || dist > TOL {
            bad_mul += 1;
        }
        let dm = quad_clifford_matrix(&a.phi)?;
        let conj = dm.mul(&pauli_matrix(&b.pauli)?).mul(&dm.adjoint());
        let closed = pauli_matrix(&conj_pauli_by_quad(&a.phi, &b.pauli)?)?;
        let dist = conj.distance(&closed);
        worst = worst.max(dist);
        if dist > TOL {
            bad_conj += 1;
        }
    }
    Ok((
        bad_mul == 0 && bad_conj == 0,
        format!("10000 products, {bad_mul} mismatches; 10000 conjugations, {bad_conj} mismatches; max deviation {worst:.1e}"),
    ))
}

fn valid_tuples(cfg: &AcceptanceConfig, n: usize, seed: u64) -> Result<Vec<ConjugateTuple>> {
    let points = collect_t(d3(), &cfg.enumeration)?;
    sample_valid_tuples(&points, n, seed)
}

fn tuple_axioms(cfg: &AcceptanceConfig, seed: u64) -> Outcome {
    let tuples = valid_tuples(cfg, 1000, seed)?;
    let mut ok = 0;
    for t in &tuples {
        if tuple_satisfies_polyeqns(t) && verify_tuple_numerically(t)? {
            ok += 1;
        }
    }
    Ok((ok == tuples.len(), format!("{ok}/{} sampled tuples satisfy every relation", tuples.len())))
}

fn phi1_reduction(cfg: &AcceptanceConfig, seed: u64) -> Outcome {
    let tuples = valid_tuples(cfg, 10_000, seed)?;
    let mut ok = 0;
    let mut nonzero_input = 0;
    for t in &tuples {
        nonzero_input += !t.gate(0).phi.is_zero() as usize;
        let r = phi1_reduce(t)?;
        if r.gate(0).phi.is_zero() && tuple_satisfies_polyeqns(&r) {
            ok += 1;
        }
    }
    Ok((
        ok == tuples.len(),
        format!("{ok}/{} reduced tuples valid with Phi_1 = 0 ({nonzero_input} inputs had Phi_1 != 0)", tuples.len()),
    ))
}

fn teleportation(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ok, mut min_fid, mut max_dev) = (0, 1f64, 0f64);
    for _ in 0..100 {
        let trial = random_teleport_trial(d3(), &mut rng)?;
        ok += trial.passed(1e-9) as usize;
        min_fid = trial.fidelities.iter().copied().fold(min_fid, f64::min);
        max_dev = trial.probabilities.iter().map(|p| (p - 1.0 / 3.0).abs()).fold(max_dev, f64::max);
    }
    Ok((ok == 100, format!("{ok}/100 instances; min fidelity {min_fid:.12}, max |P - 1/3| {max_dev:.1e}")))
}

fn certificates() -> Outcome {
    let vars = VarTable::new(["x"])?;
    let x = QPoly::q_var(1, 0);
    let one = QPoly::q_const(1, 1);
    let ideal = q_ideal(&vars, vec![&(&x * &x) + &x])?;
    let comps = [q_ideal(&vars, vec![x.clone()])?, q_ideal(&vars, vec![&x + &one])?];
    let primes = &DEFAULT_PRIMES[..3];
    let good = verify_decomposition_certificate(&ideal, &comps, primes, true)?;
    let broken_ideal = q_ideal(&vars, vec![x.clone()])?;
    let broken = verify_decomposition_certificate(&broken_ideal, &[q_ideal(&vars, vec![&x * &x])?], primes, false)?;
    let witness = broken.failures.first().map(|f| f.witness.clone());
    Ok((
        good.passed() && good.domains.len() == 4 && !broken.passed() && witness.as_deref() == Some("x"),
        format!(
            "(x^2+x) = (x) ∩ (x+1) passes over {}; (x) vs (x^2) fails with witness {}",
            good.domains.join(", "),
            witness.unwrap_or_else(|| "none".into())
        ),
    ))
}

fn extraneous(cfg: &AcceptanceConfig) -> Outcome {
    let rep = verify_extraneous_properties(d3(), &cfg.enumeration)?;
    Ok((
        rep.passed(),
        format!("{} points of T(Z_3) scanned, {} with q1 = q2 = 0 or q3 = q4 = 0", rep.t_count, rep.violation_count),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses() {
        let p = pinned_count(3).unwrap();
        assert_eq!(p.t_count, 20736);
        assert_eq!(p.command, "cliffordlab verify-main -d 3");
        assert!(pinned_count(4).is_none());
    }

    #[test]
    fn display_line() {
        let r = CriterionResult { id: 2, name: "system-shape", passed: true, detail: "ok".into(), elapsed_ms: 3 };
        assert_eq!(r.to_string(), "[PASS]  2 system-shape: ok (3 ms)");
        assert!(run_criterion(12, &AcceptanceConfig::default()).is_err());
    }
}
