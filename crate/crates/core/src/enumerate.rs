//! Brute-force oracles over `Z_d`: the points of `T` (simplified
//! third-level data with `Φ_1 = 0`), and the checks run on them.
//!
//! A point stores `Φ_2, Φ_3, Φ_4` and `q_1..q_4`. The `p` part is optional:
//! without it, membership means the linear system in `p` is consistent.
//! Consistency is decided by rank over `Z_d`, so `p` is never enumerated.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gatealg::{pair_constant, word, AlmostDiagClifford, ConjugateTuple, PauliOp, SymMat};
use crate::modring::{FpElem, Modulus};
use crate::polysys::{bareiss_eliminate, build_augmented_system, Assignment, CompiledPoly, EfDerivation};
use crate::report::Report;
use crate::symplectic::{
    complete_symplectic_basis, is_lagrangian_semibasis, rank_and_kernel, solve, FpMatrix, SympVec,
};

/// Environment variable overriding the default worker count.
pub const JOBS_ENV: &str = "CLIFFORDLAB_JOBS";

/// At most this many violating points are listed in a report.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

/// Worker count from `CLIFFORDLAB_JOBS`, else the available parallelism.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub jobs: usize,
    /// Permits `d = 5`.
    pub allow_large: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { jobs: default_jobs(), allow_large: false }
    }
}

impl EnumConfig {
    pub fn with_jobs(jobs: usize) -> Self {
        EnumConfig { jobs: jobs.max(1), allow_large: false }
    }
}

fn check_dimension(d: Modulus, allow_large: bool) -> Result<()> {
    match d.value() {
        3 => Ok(()),
        5 if allow_large => Ok(()),
        v => Err(Error::DimensionTooLarge { d: v, limit: if allow_large { 5 } else { 3 } }),
    }
}

/// A point of the `(Φ, q)` space with `Φ_1 = 0`, optionally with `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolutionPoint {
    d: Modulus,
    /// `Φ_2, Φ_3, Φ_4`.
    phi: [SymMat; 3],
    q: [[FpElem; 2]; 4],
    p: Option<[[FpElem; 2]; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PointJson {
    d: u32,
    phi: [[u32; 3]; 3],
    q: [[u32; 2]; 4],
    p: Option<[[u32; 2]; 4]>,
}

impl Serialize for SolutionPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = |v: &[FpElem]| -> Vec<u32> { v.iter().map(|x| x.value()).collect() };
        let phi = self.phi.each_ref().map(|m| raw(m.entries()).try_into().expect("three entries"));
        let q = self.q.map(|v| [v[0].value(), v[1].value()]);
        let p = self.p.map(|pp| pp.map(|v| [v[0].value(), v[1].value()]));
        PointJson { d: self.d.value(), phi, q, p }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolutionPoint {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = PointJson::deserialize(de)?;
        let d = Modulus::new(j.d as u64).map_err(serde::de::Error::custom)?;
        let e = |v: u32| d.elem(v as i64);
        let phi = j.phi.map(|m| SymMat::new(2, m.iter().map(|&x| e(x)).collect()).expect("2x2"));
        Ok(SolutionPoint {
            d,
            phi,
            q: j.q.map(|v| [e(v[0]), e(v[1])]),
            p: j.p.map(|pp| pp.map(|v| [e(v[0]), e(v[1])])),
        })
    }
}

impl SolutionPoint {
    pub fn new(d: Modulus, phi: [SymMat; 3], q: [[FpElem; 2]; 4], p: Option<[[FpElem; 2]; 4]>) -> Result<Self> {
        for m in &phi {
            if m.n() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: m.n() });
            }
            if m.modulus() != d {
                return Err(Error::ModulusMismatch(d.value(), m.modulus().value()));
            }
        }
        let all = q.iter().flatten().chain(p.iter().flatten().flatten());
        for x in all {
            if x.modulus() != d {
                return Err(Error::ModulusMismatch(d.value(), x.modulus().value()));
            }
        }
        Ok(SolutionPoint { d, phi, q, p })
    }

    pub fn from_i64(d: Modulus, phi: [[i64; 3]; 3], q: [[i64; 2]; 4], p: Option<[[i64; 2]; 4]>) -> Self {
        let phi = phi.map(|m| SymMat::from_i64(d, 2, &m).expect("2x2"));
        let q = q.map(|v| [d.elem(v[0]), d.elem(v[1])]);
        let p = p.map(|pp| pp.map(|v| [d.elem(v[0]), d.elem(v[1])]));
        SolutionPoint { d, phi, q, p }
    }

    /// The point of the identity gate's tuple `(Z_1, X_1, Z_2, X_2)`.
    pub fn identity(d: Modulus) -> Self {
        SolutionPoint::from_i64(
            d,
            [[0; 3]; 3],
            [[0, 0], [1, 0], [0, 0], [0, 1]],
            Some([[1, 0], [0, 0], [0, 1], [0, 0]]),
        )
    }

    pub fn modulus(&self) -> Modulus {
        self.d
    }

    /// `Φ_i` for `i` in `1..=4` (1-based); `Φ_1` is zero.
    pub fn phi(&self, i: usize) -> SymMat {
        if i == 1 {
            SymMat::zero(self.d, 2)
        } else {
            self.phi[i - 2].clone()
        }
    }

    /// `q_i`, 1-based.
    pub fn q(&self, i: usize) -> [FpElem; 2] {
        self.q[i - 1]
    }

    pub fn p(&self) -> Option<&[[FpElem; 2]; 4]> {
        self.p.as_ref()
    }

    pub fn with_p(&self, p: Option<[[FpElem; 2]; 4]>) -> Self {
        SolutionPoint { p, ..self.clone() }
    }

    pub fn with_phi(&self, i: usize, phi: SymMat) -> Self {
        let mut out = self.clone();
        out.phi[i - 2] = phi;
        out
    }

    /// `Φ_i q_j = Φ_j q_i` for every pair.
    pub fn satisfies_commutation(&self) -> bool {
        (1..=4).all(|i| {
            (i + 1..=4).all(|j| self.phi(i).doubled_apply(&self.q(j)) == self.phi(j).doubled_apply(&self.q(i)))
        })
    }

    /// `[A | b]` of the linear system in `p`, rows `(1,2),(1,3),…,(3,4)`.
    pub fn linear_system(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.d, 6, 9);
        for (row, (i, j)) in PAIRS.iter().enumerate() {
            for k in 0..2 {
                m.set(row, 2 * (i - 1) + k, self.q(*j)[k]);
                m.set(row, 2 * (j - 1) + k, -self.q(*i)[k]);
            }
            let b = self.phi(*i).quad_form(&self.q(*j)) - self.phi(*j).quad_form(&self.q(*i))
                + self.d.elem(pair_constant(i - 1, j - 1));
            m.set(row, 8, b);
        }
        m
    }

    fn split_system(&self) -> (FpMatrix, Vec<FpElem>) {
        let aug = self.linear_system();
        let mut a = FpMatrix::zeros(self.d, 6, 8);
        let mut b = Vec::with_capacity(6);
        for r in 0..6 {
            for c in 0..8 {
                a.set(r, c, aug.get(r, c));
            }
            b.push(aug.get(r, 8));
        }
        (a, b)
    }

    pub fn is_consistent(&self) -> bool {
        let (a, _) = self.split_system();
        a.rank() == self.linear_system().rank()
    }

    /// A solution `p` of the linear system, free variables set to zero.
    pub fn completion(&self) -> Option<[[FpElem; 2]; 4]> {
        let (a, b) = self.split_system();
        let x = solve(&a, &b)?;
        Some([[x[0], x[1]], [x[2], x[3]], [x[4], x[5]], [x[6], x[7]]])
    }

    /// Number of `p` completing the point: `d^(8 − rank A)` when consistent.
    pub fn completion_count(&self) -> Option<u64> {
        if !self.is_consistent() {
            return None;
        }
        let (a, _) = self.split_system();
        Some((self.d.value() as u64).pow((8 - a.rank()) as u32))
    }

    /// The point's tuple `(U_1, V_1, U_2, V_2)` with the given `p`, phases zero.
    pub fn to_tuple(&self, p: &[[FpElem; 2]; 4]) -> ConjugateTuple {
        let gates = (1..=4)
            .map(|i| {
                let pauli = PauliOp { c: self.d.zero(), p: p[i - 1].to_vec(), q: self.q(i).to_vec() };
                AlmostDiagClifford::new(self.phi(i), pauli).expect("two qudits")
            })
            .collect();
        ConjugateTuple::new(gates).expect("four gates")
    }

    /// Inverse of [`to_tuple`](Self::to_tuple) for tuples with `Φ_1 = 0`.
    pub fn from_tuple(t: &ConjugateTuple) -> Result<Self> {
        if t.qudits() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: t.qudits() });
        }
        if !t.gate(0).is_pauli() {
            return Err(Error::PreconditionPhi1Nonzero);
        }
        let g = t.gates();
        let two = |v: &[FpElem]| [v[0], v[1]];
        Ok(SolutionPoint {
            d: t.modulus(),
            phi: [g[1].phi.clone(), g[2].phi.clone(), g[3].phi.clone()],
            q: [two(g[0].q()), two(g[1].q()), two(g[2].q()), two(g[3].q())],
            p: Some([two(g[0].p()), two(g[1].p()), two(g[2].p()), two(g[3].p())]),
        })
    }

    /// Values in the order of the 25-variable table (`p` zero when absent).
    pub fn values25(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(25);
        for m in &self.phi {
            v.extend(m.entries().iter().map(|x| x.value()));
        }
        v.extend(self.q.iter().flatten().map(|x| x.value()));
        match &self.p {
            Some(p) => v.extend(p.iter().flatten().map(|x| x.value())),
            None => v.extend([0; 8]),
        }
        v
    }
}

impl Assignment for SolutionPoint {
    fn value_of(&self, name: &str) -> Option<FpElem> {
        let b = name.as_bytes();
        let digit = |k: usize| b.get(k).and_then(|c| (*c as char).to_digit(10)).map(|x| x as usize);
        let (prefix, i, k) = if let Some(rest) = name.strip_prefix("phi") {
            if rest.len() != 2 {
                return None;
            }
            ("phi", digit(3)?, digit(4)?)
        } else {
            if name.len() != 3 {
                return None;
            }
            (&name[..1], digit(1)?, digit(2)?)
        };
        if !(1..=4).contains(&i) {
            return None;
        }
        match prefix {
            "phi" if (1..=3).contains(&k) => Some(self.phi(i).entries()[k - 1]),
            "q" if (1..=2).contains(&k) => Some(self.q(i)[k - 1]),
            "p" if (1..=2).contains(&k) => self.p.map(|p| p[i - 1][k - 1]),
            _ => None,
        }
    }
}

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Membership in `T`: commutation equations, and either the scalar
/// equations (when `p` is present) or consistency of the linear system.
pub fn point_in_t(pt: &SolutionPoint) -> bool {
    if !pt.satisfies_commutation() {
        return false;
    }
    match &pt.p {
        Some(p) => {
            let sys = pt.linear_system();
            let flat: Vec<FpElem> = p.iter().flatten().copied().collect();
            (0..6).all(|r| {
                let lhs = (0..8).fold(pt.d.zero(), |acc, c| acc + sys.get(r, c) * flat[c]);
                lhs == sys.get(r, 8)
            })
        }
        None => pt.is_consistent(),
    }
}

/// The three 2×2 minors of the `Φ_3`, `Φ_4` columns, as raw residues.
fn minors_raw(m: Modulus, phi3: &[u32; 3], phi4: &[u32; 3]) -> [u32; 3] {
    let det = |a: usize, b: usize| m.sub_raw(m.mul_raw(phi3[a], phi4[b]), m.mul_raw(phi3[b], phi4[a]));
    [det(0, 1), det(0, 2), det(1, 2)]
}

/// `None` if the semi-Clifford minors vanish at `pt`, else a description.
pub fn main_theorem_violation(pt: &SolutionPoint) -> Option<String> {
    let raw = |s: &SymMat| -> [u32; 3] { [s.entries()[0].value(), s.entries()[1].value(), s.entries()[2].value()] };
    let mins = minors_raw(pt.d, &raw(&pt.phi[1]), &raw(&pt.phi[2]));
    (mins != [0, 0, 0]).then(|| format!("semi-Clifford minors {:?} not all zero", mins))
}

/// `None` unless `pt` has one of the shapes ruled out by the extraneous
/// components.
pub fn extraneous_violation(pt: &SolutionPoint) -> Option<String> {
    let zero = |i: usize| pt.q(i).iter().all(|x| x.is_zero());
    let dependent = |i: usize, j: usize| {
        let (a, b) = (pt.q(i), pt.q(j));
        (a[0] * b[1] - a[1] * b[0]).is_zero()
    };
    if (1..=4).all(zero) {
        return Some("all q vanish".into());
    }
    if zero(1) && zero(2) {
        return Some("q1 = q2 = 0".into());
    }
    if zero(3) && zero(4) {
        return Some("q3 = q4 = 0".into());
    }
    if zero(1) && dependent(2, 3) && dependent(2, 4) {
        return Some("q1 = 0 with q3, q4 proportional to q2".into());
    }
    None
}

/// Precomputed tables for one modulus. Vectors of `Z_d²` are indexed by
/// `x0 + d·x1`; symmetric matrices by `a + d·b + d²·c`.
struct Tables {
    m: Modulus,
    phis: Vec<[u32; 3]>,
    vecs: Vec<[u32; 2]>,
    /// `dphi[Φ][x]` = index of `2Φx`.
    dphi: Vec<Vec<u32>>,
    /// `sol[Φ][r]` = all `x` with `2Φx = r`.
    sol: Vec<Vec<Vec<u32>>>,
}

impl Tables {
    fn new(m: Modulus) -> Self {
        let d = m.value();
        let vecs: Vec<[u32; 2]> = (0..d * d).map(|i| [i % d, i / d]).collect();
        let phis: Vec<[u32; 3]> = (0..d * d * d).map(|i| [i % d, (i / d) % d, i / (d * d)]).collect();
        let dphi: Vec<Vec<u32>> = phis
            .iter()
            .map(|phi| {
                vecs.iter()
                    .map(|x| {
                        let y0 = m.add_raw(m.mul_raw(m.add_raw(phi[0], phi[0]), x[0]), m.mul_raw(phi[2], x[1]));
                        let y1 = m.add_raw(m.mul_raw(phi[2], x[0]), m.mul_raw(m.add_raw(phi[1], phi[1]), x[1]));
                        y0 + d * y1
                    })
                    .collect()
            })
            .collect();
        let sol = dphi
            .iter()
            .map(|row| {
                let mut s = vec![Vec::new(); (d * d) as usize];
                for (x, &r) in row.iter().enumerate() {
                    s[r as usize].push(x as u32);
                }
                s
            })
            .collect();
        Tables { m, phis, vecs, dphi, sol }
    }

    fn consistent(&self, phi: [&[u32; 3]; 4], q: [&[u32; 2]; 4]) -> bool {
        raw_consistent(self.m, phi, q)
    }

    fn to_point(&self, raw: &RawPoint) -> SolutionPoint {
        let m = self.m;
        let e = |v: u32| m.elem(v as i64);
        let phi = raw
            .phi
            .map(|p| self.phis[p as usize])
            .map(|p| SymMat::new(2, p.iter().map(|&x| e(x)).collect()).expect("2x2"));
        let q = raw.q.map(|x| self.vecs[x as usize]).map(|v| [e(v[0]), e(v[1])]);
        SolutionPoint { d: m, phi, q, p: None }
    }
}

fn raw_quad(m: Modulus, phi: &[u32; 3], x: &[u32; 2]) -> u32 {
    let t0 = m.mul_raw(phi[0], m.mul_raw(x[0], x[0]));
    let t1 = m.mul_raw(phi[1], m.mul_raw(x[1], x[1]));
    let t2 = m.mul_raw(phi[2], m.mul_raw(x[0], x[1]));
    m.add_raw(m.add_raw(t0, t1), t2)
}

/// Decides consistency of `[A | b]` by elimination.
fn raw_consistent(m: Modulus, phi: [&[u32; 3]; 4], q: [&[u32; 2]; 4]) -> bool {
    let mut a = [[0u32; 9]; 6];
    for (row, &(i, j)) in PAIRS.iter().enumerate() {
        let (i, j) = (i - 1, j - 1);
        for k in 0..2 {
            a[row][2 * i + k] = q[j][k];
            a[row][2 * j + k] = m.neg_raw(q[i][k]);
        }
        let b = m.sub_raw(raw_quad(m, phi[i], q[j]), raw_quad(m, phi[j], q[i]));
        a[row][8] = m.add_raw(b, pair_constant(i, j) as u32);
    }
    let mut rank = 0;
    for col in 0..8 {
        let Some(piv) = (rank..6).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = m.inv_raw(a[rank][col]).expect("nonzero");
        for c in col..9 {
            a[rank][c] = m.mul_raw(a[rank][c], inv);
        }
        for r in rank + 1..6 {
            let f = a[r][col];
            if f != 0 {
                for c in col..9 {
                    a[r][c] = m.sub_raw(a[r][c], m.mul_raw(f, a[rank][c]));
                }
            }
        }
        rank += 1;
        if rank == 6 {
            break;
        }
    }
    (rank..6).all(|r| a[r][8] == 0)
}

/// Indices into [`Tables`]: `Φ_2..Φ_4` and `q_1..q_4`.
#[derive(Clone, Copy, Debug)]
struct RawPoint {
    phi: [u32; 3],
    q: [u32; 4],
}

impl RawPoint {
    fn values25(&self, t: &Tables) -> [u32; 25] {
        let mut v = [0u32; 25];
        for (k, &p) in self.phi.iter().enumerate() {
            v[3 * k..3 * k + 3].copy_from_slice(&t.phis[p as usize]);
        }
        for (k, &x) in self.q.iter().enumerate() {
            v[9 + 2 * k..11 + 2 * k].copy_from_slice(&t.vecs[x as usize]);
        }
        v
    }
}

struct UnitOutcome<A> {
    acc: A,
    count: u64,
    scanned: u64,
}

/// Visits every point of `T(Z_d)` exactly once. Work units are
/// `(q_1, Φ_2)` pairs with `Φ_2 q_1 = 0`; results come back in unit order.
fn scan<A, I, F>(t: &Tables, jobs: usize, init: I, visit: F) -> Result<Vec<UnitOutcome<A>>>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &RawPoint) + Sync,
{
    let nv = t.vecs.len() as u32;
    let np = t.phis.len() as u32;
    let admissible: Vec<Vec<u32>> =
        (0..nv).map(|q1| (0..np).filter(|&p| t.dphi[p as usize][q1 as usize] == 0).collect()).collect();
    let units: Vec<(u32, u32)> =
        (0..nv).flat_map(|q1| admissible[q1 as usize].iter().map(move |&p2| (q1, p2))).collect();
    let zero_phi = [0u32; 3];
    let run_unit = |&(q1, p2): &(u32, u32)| {
        let mut out = UnitOutcome { acc: init(), count: 0, scanned: 0 };
        let adm = &admissible[q1 as usize];
        let phi2 = &t.phis[p2 as usize];
        let q1v = &t.vecs[q1 as usize];
        for &p3 in adm {
            for &p4 in adm {
                let (phi3, phi4) = (&t.phis[p3 as usize], &t.phis[p4 as usize]);
                for q2 in 0..nv {
                    let r3 = t.dphi[p3 as usize][q2 as usize];
                    let r4 = t.dphi[p4 as usize][q2 as usize];
                    let s3 = &t.sol[p2 as usize][r3 as usize];
                    let s4 = &t.sol[p2 as usize][r4 as usize];
                    for &q3 in s3 {
                        for &q4 in s4 {
                            if t.dphi[p3 as usize][q4 as usize] != t.dphi[p4 as usize][q3 as usize] {
                                continue;
                            }
                            out.scanned += 1;
                            let qs = [q1v, &t.vecs[q2 as usize], &t.vecs[q3 as usize], &t.vecs[q4 as usize]];
                            if t.consistent([&zero_phi, phi2, phi3, phi4], qs) {
                                out.count += 1;
                                visit(&mut out.acc, &RawPoint { phi: [p2, p3, p4], q: [q1, q2, q3, q4] });
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    Ok(pool.install(|| units.par_iter().map(run_unit).collect()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub point: SolutionPoint,
    pub reason: String,
}

/// Outcome of a scan or sampling check. Passes iff there are no violations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub d: u32,
    /// Candidates that reached the consistency test (enumeration) or raw
    /// draws (sampling).
    pub points_scanned: u64,
    pub t_count: u64,
    /// First [`MAX_LISTED_VIOLATIONS`] violations, in scan order.
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub elapsed_ms: u64,
    pub workers: usize,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new(&self.check);
        r.passed = self.passed();
        r.d = Some(self.d);
        r.t_count = Some(self.t_count);
        r.points_scanned = Some(self.points_scanned);
        r.violations = self.violations.iter().map(|v| serde_json::to_value(v).expect("serializable")).collect();
        r.violation_count = self.violation_count;
        r.workers = Some(self.workers);
        r.seed = self.seed;
        r.elapsed_ms = self.elapsed_ms;
        r.notes = self.notes.clone();
        r
    }
}

/// Scans `T(Z_d)` and reports every point where `checker` returns a reason.
pub fn scan_t<F>(d: Modulus, cfg: &EnumConfig, check: &str, checker: F) -> Result<VerificationReport>
where
    F: Fn(&SolutionPoint) -> Option<String> + Sync,
{
    check_dimension(d, cfg.allow_large)?;
    let start = Instant::now();
    let t = Tables::new(d);
    let units = scan(&t, cfg.jobs, Vec::new, |acc: &mut Vec<Violation>, raw| {
        let pt = t.to_point(raw);
        if let Some(reason) = checker(&pt) {
            acc.push(Violation { point: pt, reason });
        }
    })?;
    Ok(merge(check, d, cfg.jobs, units, start))
}

fn merge(
    check: &str,
    d: Modulus,
    jobs: usize,
    units: Vec<UnitOutcome<Vec<Violation>>>,
    start: Instant,
) -> VerificationReport {
    let mut rep = VerificationReport {
        check: check.to_string(),
        d: d.value(),
        points_scanned: 0,
        t_count: 0,
        violations: Vec::new(),
        violation_count: 0,
        elapsed_ms: 0,
        workers: jobs.max(1),
        seed: None,
        notes: Vec::new(),
    };
    for u in units {
        rep.points_scanned += u.scanned;
        rep.t_count += u.count;
        rep.violation_count += u.acc.len() as u64;
        for v in u.acc {
            if rep.violations.len() < MAX_LISTED_VIOLATIONS {
                rep.violations.push(v);
            }
        }
    }
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// Visits every point of `T(Z_d)` in a fixed order.
pub fn enumerate_t(d: Modulus, cfg: &EnumConfig, mut emit: impl FnMut(&SolutionPoint)) -> Result<VerificationReport> {
    check_dimension(d, cfg.allow_large)?;
    let start = Instant::now();
    let t = Tables::new(d);
    let units = scan(&t, cfg.jobs, Vec::new, |acc: &mut Vec<RawPoint>, raw| acc.push(*raw))?;
    let mut stripped = Vec::with_capacity(units.len());
    for u in units {
        for raw in &u.acc {
            emit(&t.to_point(raw));
        }
        stripped.push(UnitOutcome { acc: Vec::new(), count: u.count, scanned: u.scanned });
    }
    Ok(merge("enumerate", d, cfg.jobs, stripped, start))
}

/// All points of `T(Z_d)` in scan order.
pub fn collect_t(d: Modulus, cfg: &EnumConfig) -> Result<Vec<SolutionPoint>> {
    let mut out = Vec::new();
    enumerate_t(d, cfg, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Checks the semi-Clifford minors on every point of `T(Z_d)`.
pub fn verify_main_theorem(d: Modulus, cfg: &EnumConfig) -> Result<VerificationReport> {
    scan_t(d, cfg, "main-theorem", main_theorem_violation)
}

/// Checks that no point of `T(Z_d)` lies on an extraneous component.
pub fn verify_extraneous_properties(d: Modulus, cfg: &EnumConfig) -> Result<VerificationReport> {
    scan_t(d, cfg, "extraneous", extraneous_violation)
}

/// `E` and `F` compiled for evaluation modulo one prime.
pub struct EfEvaluator {
    e: CompiledPoly,
    f: CompiledPoly,
}

impl EfEvaluator {
    pub fn new(ef: &EfDerivation, d: Modulus) -> Result<Self> {
        Ok(EfEvaluator { e: CompiledPoly::new(&ef.e, d)?, f: CompiledPoly::new(&ef.f, d)? })
    }

    /// `(E, F)` at a point in 25-variable order.
    pub fn eval(&self, values: &[u32]) -> (u32, u32) {
        (self.e.eval(values), self.f.eval(values))
    }
}

/// Derives `E`, `F` from the linear system with `Φ_1 = 0`.
pub fn derive_ef() -> Result<EfDerivation> {
    let (_, aug) = build_augmented_system(true);
    bareiss_eliminate(&aug)
}

/// Every point of `T(Z_3)` has `E = 0` or `F = 0`.
pub fn verify_ef_cover_exhaustive(d: Modulus, cfg: &EnumConfig, ef: &EfDerivation) -> Result<VerificationReport> {
    check_dimension(d, cfg.allow_large)?;
    let ev = EfEvaluator::new(ef, d)?;
    let start = Instant::now();
    let t = Tables::new(d);
    let units = scan(&t, cfg.jobs, Vec::new, |acc: &mut Vec<Violation>, raw| {
        let (e, f) = ev.eval(&raw.values25(&t));
        if e != 0 && f != 0 {
            acc.push(Violation { point: t.to_point(raw), reason: format!("E = {e}, F = {f}") });
        }
    })?;
    Ok(merge("ef-cover", d, cfg.jobs, units, start))
}

fn random_symmat<R: Rng>(d: Modulus, rng: &mut R) -> [u32; 3] {
    let v = d.value();
    [rng.random_range(0..v), rng.random_range(0..v), rng.random_range(0..v)]
}

fn random_vec<R: Rng>(d: Modulus, rng: &mut R) -> [u32; 2] {
    let v = d.value();
    [rng.random_range(0..v), rng.random_range(0..v)]
}

/// Counters from [`sample_ef`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EfSampleStats {
    /// Uniform `(Φ, q)` draws until `samples` consistent ones were found.
    pub draws: u64,
    pub consistent: u64,
    /// Consistent draws with `F ≠ 0` (where `E = 0` is forced).
    pub f_nonzero: u64,
    /// Draws of random `q` with `Φ` from the commutation kernel.
    pub t_draws: u64,
    /// Those that were points of `T`.
    pub t_points: u64,
}

/// Seeded sampling check at any odd prime `d`. Stage one draws uniform
/// `(Φ, q)` with `Φ_1 = 0`, keeps consistent draws until `samples` are
/// accepted, and checks `F ≠ 0 ⇒ E = 0`. Stage two draws random `q`, picks
/// `Φ` uniformly from the solutions of the commutation equations (linear in
/// `Φ`), and checks `E = 0 ∨ F = 0` on the resulting points of `T`.
pub fn sample_ef(
    d: Modulus,
    samples: u64,
    seed: u64,
    ef: &EfDerivation,
) -> Result<(VerificationReport, EfSampleStats)> {
    let start = Instant::now();
    let ev = EfEvaluator::new(ef, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = EfSampleStats::default();
    let mut violations = Vec::new();
    let mut violation_count = 0u64;
    let zero = [0u32; 3];
    let mut record = |pt: SolutionPoint, reason: String, violations: &mut Vec<Violation>| {
        violation_count += 1;
        if violations.len() < MAX_LISTED_VIOLATIONS {
            violations.push(Violation { point: pt, reason });
        }
    };
    let max_draws = samples.saturating_mul(1000).max(1000);
    while stats.consistent < samples && stats.draws < max_draws {
        stats.draws += 1;
        let phi = [random_symmat(d, &mut rng), random_symmat(d, &mut rng), random_symmat(d, &mut rng)];
        let q = [random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng)];
        if !raw_consistent(d, [&zero, &phi[0], &phi[1], &phi[2]], [&q[0], &q[1], &q[2], &q[3]]) {
            continue;
        }
        stats.consistent += 1;
        let vals = raw_values(&phi, &q);
        let (e, f) = ev.eval(&vals);
        if f != 0 {
            stats.f_nonzero += 1;
            if e != 0 {
                record(raw_point(d, &phi, &q), format!("consistent with F = {f} but E = {e}"), &mut violations);
            }
        }
    }
    let t_target = samples;
    while stats.t_draws < t_target {
        stats.t_draws += 1;
        let q = [random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng)];
        let Some(phi) = random_commuting_phis(d, &q, &mut rng) else {
            continue;
        };
        if !raw_consistent(d, [&zero, &phi[0], &phi[1], &phi[2]], [&q[0], &q[1], &q[2], &q[3]]) {
            continue;
        }
        stats.t_points += 1;
        let (e, f) = ev.eval(&raw_values(&phi, &q));
        if e != 0 && f != 0 {
            record(raw_point(d, &phi, &q), format!("point of T with E = {e}, F = {f}"), &mut violations);
        }
    }
    let rep = VerificationReport {
        check: "ef-sample".into(),
        d: d.value(),
        points_scanned: stats.draws + stats.t_draws,
        t_count: stats.t_points,
        violations,
        violation_count,
        elapsed_ms: start.elapsed().as_millis() as u64,
        workers: 1,
        seed: Some(seed),
        notes: vec![format!(
            "{} uniform draws, {} consistent, {} with F != 0; {} kernel draws, {} points of T",
            stats.draws, stats.consistent, stats.f_nonzero, stats.t_draws, stats.t_points
        )],
    };
    Ok((rep, stats))
}

fn raw_values(phi: &[[u32; 3]; 3], q: &[[u32; 2]; 4]) -> [u32; 25] {
    let mut v = [0u32; 25];
    for k in 0..3 {
        v[3 * k..3 * k + 3].copy_from_slice(&phi[k]);
    }
    for k in 0..4 {
        v[9 + 2 * k..11 + 2 * k].copy_from_slice(&q[k]);
    }
    v
}

fn raw_point(d: Modulus, phi: &[[u32; 3]; 3], q: &[[u32; 2]; 4]) -> SolutionPoint {
    let i = |v: u32| v as i64;
    SolutionPoint::from_i64(d, phi.map(|p| p.map(i)), q.map(|v| v.map(i)), None)
}

/// A uniformly random solution `(Φ_2, Φ_3, Φ_4)` of the commutation
/// equations for fixed `q` (with `Φ_1 = 0`); `None` for the zero solution.
fn random_commuting_phis<R: Rng>(d: Modulus, q: &[[u32; 2]; 4], rng: &mut R) -> Option<[[u32; 3]; 3]> {
    // Row for pair (i, j), component k: coefficients of 2Φ_i q_j − 2Φ_j q_i
    // in the nine unknowns (Φ_2, Φ_3, Φ_4).
    let mut mat = FpMatrix::zeros(d, 12, 9);
    let e = |v: u32| d.elem(v as i64);
    let two = d.elem(2);
    let mut row = 0;
    for &(i, j) in &PAIRS {
        for comp in 0..2 {
            for (who, qv, sign) in [(i, q[j - 1], d.one()), (j, q[i - 1], -d.one())] {
                if who == 1 {
                    continue;
                }
                let base = 3 * (who - 2);
                // component 0: 2a x0 + c x1; component 1: c x0 + 2b x1
                let (ca, cb, cc) =
                    if comp == 0 { (two * e(qv[0]), d.zero(), e(qv[1])) } else { (d.zero(), two * e(qv[1]), e(qv[0])) };
                mat.set(row, base, mat.get(row, base) + sign * ca);
                mat.set(row, base + 1, mat.get(row, base + 1) + sign * cb);
                mat.set(row, base + 2, mat.get(row, base + 2) + sign * cc);
            }
            row += 1;
        }
    }
    let (_, basis) = rank_and_kernel(&mat);
    let mut x = [d.zero(); 9];
    for b in &basis {
        let c = d.elem(rng.random_range(0..d.value()) as i64);
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += c * *bi;
        }
    }
    if basis.is_empty() {
        return None;
    }
    let v: Vec<u32> = x.iter().map(|f| f.value()).collect();
    Some([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
}

/// A random symplectic basis `(a, a*, b, b*)` of `Z_d^4`.
pub fn random_symplectic_basis<R: Rng>(d: Modulus, rng: &mut R) -> (SympVec, SympVec, SympVec, SympVec) {
    let v = d.value() as i64;
    let draw = |rng: &mut R| {
        let c: Vec<i64> = (0..4).map(|_| rng.random_range(0..v)).collect();
        SympVec::from_i64(d, &c).expect("length 4")
    };
    loop {
        let a = draw(rng);
        let b = draw(rng);
        if is_lagrangian_semibasis(&[a.clone(), b.clone()]) {
            if let Ok(basis) = complete_symplectic_basis(&a, &b) {
                return basis;
            }
        }
    }
}

/// Random tuples satisfying the third-level equations, built from points
/// of `T`: a random completion `p`, random phases, then the words of the
/// tuple along a random symplectic basis (so `Φ_1` is generally nonzero).
pub fn sample_valid_tuples(points: &[SolutionPoint], n: usize, seed: u64) -> Result<Vec<ConjugateTuple>> {
    if points.is_empty() {
        return Err(Error::InvalidTuple);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let pt = &points[rng.random_range(0..points.len())];
        let d = pt.modulus();
        let (a, _) = pt.split_system();
        let particular = pt.completion().ok_or(Error::InvalidTuple)?;
        let (_, kernel) = rank_and_kernel(&a);
        let mut flat: Vec<FpElem> = particular.iter().flatten().copied().collect();
        for k in &kernel {
            let c = d.elem(rng.random_range(0..d.value()) as i64);
            for (x, y) in flat.iter_mut().zip(k) {
                *x += c * *y;
            }
        }
        let p = [[flat[0], flat[1]], [flat[2], flat[3]], [flat[4], flat[5]], [flat[6], flat[7]]];
        let mut base = pt.to_tuple(&p);
        for g in base.gates_mut() {
            g.pauli.c = d.elem(rng.random_range(0..d.value()) as i64);
        }
        let (a, a_star, b, b_star) = random_symplectic_basis(d, &mut rng);
        let gates = [a, a_star, b, b_star].iter().map(|w| word(&base, w)).collect::<Result<Vec<_>>>()?;
        out.push(ConjugateTuple::new(gates)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gatealg::tuple_satisfies_polyeqns;
    use crate::polysys::{build_third_level_system, eval_poly};
    use crate::semicliff::minors_criterion;

    fn m(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    #[test]
    fn identity_and_zero_points() {
        let d = m(3);
        let id = SolutionPoint::identity(d);
        assert!(point_in_t(&id));
        assert!(point_in_t(&id.with_p(None)));
        let zero = SolutionPoint::from_i64(d, [[0; 3]; 3], [[0; 2]; 4], None);
        assert!(!point_in_t(&zero));
        assert!(tuple_satisfies_polyeqns(&id.to_tuple(id.p().unwrap())));
        assert_eq!(id.to_tuple(id.p().unwrap()), ConjugateTuple::identity(d, 2));
        assert_eq!(SolutionPoint::from_tuple(&ConjugateTuple::identity(d, 2)).unwrap(), id);
    }

    #[test]
    fn q1_zero_with_q3_q4_zero_is_not_in_t() {
        let d = m(3);
        let pt = SolutionPoint::from_i64(d, [[0; 3]; 3], [[0, 0], [1, 0], [0, 0], [0, 0]], None);
        assert!(!point_in_t(&pt));
        assert!(extraneous_violation(&pt).is_some());
    }

    #[test]
    fn perturbing_phi4_leaves_t() {
        let d = m(3);
        let pt = SolutionPoint::from_i64(d, [[0; 3]; 3], [[1, 0], [0, 1], [1, 1], [0, 1]], None);
        let pt = pt.with_p(pt.completion());
        let moved = pt.with_phi(4, SymMat::from_i64(d, 2, &[1, 0, 0]).unwrap());
        assert!(!moved.satisfies_commutation());
        assert!(!point_in_t(&moved));
    }

    #[test]
    fn violation_path_flags_bad_minors() {
        let d = m(3);
        let fake = SolutionPoint::from_i64(d, [[0; 3], [1, 0, 0], [0, 1, 0]], [[0; 2]; 4], None);
        assert_eq!(main_theorem_violation(&fake).unwrap(), "semi-Clifford minors [1, 0, 0] not all zero");
        assert!(main_theorem_violation(&SolutionPoint::identity(d)).is_none());
    }

    #[test]
    fn assignment_names() {
        let d = m(5);
        let pt = SolutionPoint::from_i64(d, [[1, 2, 3], [4, 0, 1], [2, 2, 2]], [[1, 2], [3, 4], [0, 1], [2, 0]], None);
        assert_eq!(pt.value_of("phi11").unwrap().value(), 0);
        assert_eq!(pt.value_of("phi23").unwrap().value(), 3);
        assert_eq!(pt.value_of("q32").unwrap().value(), 1);
        assert_eq!(pt.value_of("p11"), None);
        assert_eq!(pt.value_of("phi5"), None);
        assert_eq!(pt.value_of("x11"), None);
        let (vars, sys) = build_third_level_system(true);
        for f in sys.iter().take(2) {
            assert!(eval_poly(f, &vars, &pt, d).is_ok());
        }
        assert!(eval_poly(&sys[2], &vars, &pt, d).is_err());
    }

    #[test]
    fn tables_agree_with_point_methods() {
        let d = m(3);
        let t = Tables::new(d);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let phi = [random_symmat(d, &mut rng), random_symmat(d, &mut rng), random_symmat(d, &mut rng)];
            let q =
                [random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng)];
            let pt = raw_point(d, &phi, &q);
            let zero = [0u32; 3];
            let fast = t.consistent([&zero, &phi[0], &phi[1], &phi[2]], [&q[0], &q[1], &q[2], &q[3]]);
            assert_eq!(fast, pt.is_consistent());
            assert_eq!(pt.values25()[..17], raw_values(&phi, &q)[..17]);
        }
    }

    #[test]
    fn commuting_phis_commute() {
        let d = m(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let q =
                [random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng), random_vec(d, &mut rng)];
            if let Some(phi) = random_commuting_phis(d, &q, &mut rng) {
                assert!(raw_point(d, &phi, &q).satisfies_commutation());
            }
        }
    }

    #[test]
    fn dimension_guard() {
        let cfg = EnumConfig::with_jobs(1);
        assert!(matches!(verify_main_theorem(m(5), &cfg), Err(Error::DimensionTooLarge { d: 5, limit: 3 })));
        let big = EnumConfig { jobs: 1, allow_large: true };
        assert!(matches!(verify_main_theorem(m(7), &big), Err(Error::DimensionTooLarge { d: 7, limit: 5 })));
    }

    #[test]
    fn minors_check_matches_semicliff() {
        let d = m(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let phi = [random_symmat(d, &mut rng), random_symmat(d, &mut rng), random_symmat(d, &mut rng)];
            let pt = raw_point(d, &phi, &[[0, 0], [1, 0], [0, 0], [0, 1]]);
            let zeros = [[d.zero(); 2]; 4];
            let t = pt.to_tuple(&zeros);
            assert_eq!(main_theorem_violation(&pt).is_none(), minors_criterion(&t).unwrap());
        }
    }
}
