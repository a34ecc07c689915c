//! Exhaustive enumeration at d = 3 against an independent brute-force count.

#![allow(clippy::needless_range_loop)]

use cliffordlab::enumerate::{collect_t, point_in_t, verify_main_theorem, EnumConfig, SolutionPoint};
use cliffordlab::gatealg::tuple_satisfies_polyeqns;
use cliffordlab::modring::Modulus;
use cliffordlab::polysys::{build_third_level_system, CompiledPoly, VarTable};
use cliffordlab::symplectic::FpMatrix;

const D: u32 = 3;

fn d3() -> Modulus {
    Modulus::new(3).unwrap()
}

/// `φ_1 z_1² + φ_2 z_2² + φ_3 z_1 z_2`.
fn quad(phi: [u32; 3], z: [u32; 2]) -> u32 {
    (phi[0] * z[0] * z[0] + phi[1] * z[1] * z[1] + phi[2] * z[0] * z[1]) % D
}

/// The polar form `Q(x + y) − Q(x) − Q(y)`.
fn polar(phi: [u32; 3], x: [u32; 2], y: [u32; 2]) -> u32 {
    let s = [(x[0] + y[0]) % D, (x[1] + y[1]) % D];
    (quad(phi, s) + 2 * D - quad(phi, x) - quad(phi, y)) % D
}

/// `2Φ_i q_j = 2Φ_j q_i`, tested against both unit vectors.
fn commute(phi_i: [u32; 3], q_j: [u32; 2], phi_j: [u32; 3], q_i: [u32; 2]) -> bool {
    [[1, 0], [0, 1]].iter().all(|&e| polar(phi_i, q_j, e) == polar(phi_j, q_i, e))
}

fn all_phis() -> Vec<[u32; 3]> {
    (0..27).map(|i| [i % 3, (i / 3) % 3, i / 9]).collect()
}

fn all_vecs() -> Vec<[u32; 2]> {
    (0..9).map(|i| [i % 3, i / 3]).collect()
}

struct PolySystem {
    vars: VarTable,
    polys: Vec<CompiledPoly>,
    /// Indices of the polynomials that involve `p`.
    with_p: Vec<usize>,
}

impl PolySystem {
    fn new() -> Self {
        let (vars, sys) = build_third_level_system(true);
        let with_p = sys
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.support().iter().any(|&v| vars.name(v).starts_with('p') && !vars.name(v).starts_with("phi"))
            })
            .map(|(i, _)| i)
            .collect();
        let polys = sys.iter().map(|f| CompiledPoly::new(f, d3()).unwrap()).collect();
        PolySystem { vars, polys, with_p }
    }

    fn point(&self, phi: [[u32; 3]; 3], q: [[u32; 2]; 4], p: [u32; 8]) -> Vec<u32> {
        let mut v = vec![0; self.vars.len()];
        let mut set = |name: String, x: u32| v[self.vars.index(&name).unwrap()] = x;
        for i in 0..3 {
            for k in 0..3 {
                set(format!("phi{}{}", i + 2, k + 1), phi[i][k]);
            }
        }
        for i in 0..4 {
            for k in 0..2 {
                set(format!("q{}{}", i + 1, k + 1), q[i][k]);
                set(format!("p{}{}", i + 1, k + 1), p[2 * i + k]);
            }
        }
        v
    }

    /// A solution `p` of the linear part, found by Gaussian elimination on
    /// the system read off the polynomials' affine dependence on `p`.
    fn solve_p(&self, phi: [[u32; 3]; 3], q: [[u32; 2]; 4]) -> Option<[u32; 8]> {
        let m = d3();
        let rows: Vec<Vec<i64>> = self
            .with_p
            .iter()
            .map(|&k| {
                let f0 = self.polys[k].eval(&self.point(phi, q, [0; 8])) as i64;
                let mut row: Vec<i64> = (0..8)
                    .map(|c| {
                        let mut e = [0; 8];
                        e[c] = 1;
                        self.polys[k].eval(&self.point(phi, q, e)) as i64 - f0
                    })
                    .collect();
                row.push(-f0);
                row
            })
            .collect();
        let mut aug = FpMatrix::from_rows(m, &rows).unwrap();
        let pivots = aug.rref();
        if pivots.contains(&8) {
            return None;
        }
        let mut p = [0u32; 8];
        for (r, &c) in pivots.iter().enumerate() {
            p[c] = aug.get(r, 8).value();
        }
        Some(p)
    }
}

#[test]
fn brute_force_count_matches_enumeration() {
    let sys = PolySystem::new();
    assert_eq!(sys.with_p.len(), 6);
    let phis = all_phis();
    let vecs = all_vecs();
    let zero = [0u32; 3];
    let (mut candidates, mut count) = (0u64, 0u64);
    for idx in 0..9u32.pow(4) {
        let q = [0, 1, 2, 3].map(|k| vecs[((idx / 9u32.pow(k)) % 9) as usize]);
        // Pairs with the first element: Φ_1 = 0.
        let adm: Vec<Vec<[u32; 3]>> =
            (1..4).map(|j| phis.iter().copied().filter(|&ph| commute(zero, q[j], ph, q[0])).collect()).collect();
        for &p2 in &adm[0] {
            for &p3 in &adm[1] {
                if !commute(p2, q[2], p3, q[1]) {
                    continue;
                }
                for &p4 in &adm[2] {
                    if !commute(p2, q[3], p4, q[1]) || !commute(p3, q[3], p4, q[2]) {
                        continue;
                    }
                    candidates += 1;
                    let phi = [p2, p3, p4];
                    if let Some(p) = sys.solve_p(phi, q) {
                        count += 1;
                        let pt = sys.point(phi, q, p);
                        assert!(sys.polys.iter().all(|f| f.eval(&pt) == 0), "{phi:?} {q:?} {p:?}");
                    }
                }
            }
        }
    }
    let rep = verify_main_theorem(d3(), &EnumConfig::with_jobs(1)).unwrap();
    assert_eq!(count, rep.t_count);
    assert_eq!(candidates, rep.points_scanned);
    assert_eq!(count, 20736);
}

#[test]
fn worker_count_does_not_change_results() {
    let one = verify_main_theorem(d3(), &EnumConfig::with_jobs(1)).unwrap();
    let three = verify_main_theorem(d3(), &EnumConfig::with_jobs(3)).unwrap();
    assert_eq!(one.t_count, three.t_count);
    assert_eq!(one.points_scanned, three.points_scanned);
    assert_eq!(one.violation_count, three.violation_count);
    let a = collect_t(d3(), &EnumConfig::with_jobs(1)).unwrap();
    let b = collect_t(d3(), &EnumConfig::with_jobs(4)).unwrap();
    assert_eq!(a, b);
    let again = verify_main_theorem(d3(), &EnumConfig::with_jobs(1)).unwrap();
    let strip = |r: &cliffordlab::enumerate::VerificationReport| {
        let mut r = r.to_report();
        r.elapsed_ms = 0;
        r.to_json()
    };
    assert_eq!(strip(&one), strip(&again));
}

#[test]
fn every_point_completes_to_a_valid_tuple() {
    let points = collect_t(d3(), &EnumConfig::with_jobs(1)).unwrap();
    assert_eq!(points.len(), 20736);
    for pt in &points {
        let p = pt.completion().expect("consistent");
        let full = pt.with_p(Some(p));
        assert!(point_in_t(&full));
        let sys = pt.linear_system();
        let mut a = FpMatrix::zeros(d3(), 6, 8);
        for r in 0..6 {
            for c in 0..8 {
                a.set(r, c, sys.get(r, c));
            }
        }
        assert_eq!(pt.completion_count(), Some(3u64.pow(8 - a.rank() as u32)));
        let t = pt.to_tuple(&p);
        assert!(tuple_satisfies_polyeqns(&t));
        assert_eq!(SolutionPoint::from_tuple(&t).unwrap(), full);
    }
}
