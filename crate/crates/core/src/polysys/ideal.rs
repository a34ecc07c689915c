//! Ideals, membership, intersection, and decomposition certificates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modring::{is_power_of_two, BigRational, Coefficient, FpElem, Modulus, Rationals};

use super::groebner::{groebner, Buchberger};
use super::poly::{Monomial, MonomialOrder, MultiPoly, QPoly, VarTable};

/// Default primes for certificate checks.
pub const DEFAULT_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<C: Coefficient> {
    vars: VarTable,
    gens: Vec<MultiPoly<C>>,
}

pub type QIdeal = Ideal<BigRational>;

impl<C: Coefficient> Ideal<C> {
    /// Zero generators are dropped.
    pub fn new(vars: VarTable, gens: Vec<MultiPoly<C>>) -> Result<Self> {
        for g in &gens {
            if g.nvars() != vars.len() {
                return Err(Error::DimensionMismatch { expected: vars.len(), got: g.nvars() });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { vars, gens })
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn gens(&self) -> &[MultiPoly<C>] {
        &self.gens
    }

    pub fn groebner(&self, order: MonomialOrder) -> Ideal<C> {
        Ideal { vars: self.vars.clone(), gens: groebner(&self.gens, order) }
    }

    pub fn contains(&self, f: &MultiPoly<C>) -> bool {
        ideal_member(f, self)
    }

    /// Mutual generator membership.
    pub fn same_as(&self, other: &Ideal<C>) -> bool {
        let a = groebner(&self.gens, MonomialOrder::GrevLex);
        let b = groebner(&other.gens, MonomialOrder::GrevLex);
        a == b
    }
}

impl QIdeal {
    pub fn reduce_mod(&self, p: Modulus) -> Result<Ideal<FpElem>> {
        let gens = self.gens.iter().map(|g| g.reduce_mod(p)).collect::<Result<Vec<_>>>()?;
        Ideal::new(self.vars.clone(), gens)
    }
}

pub fn ideal_member<C: Coefficient>(f: &MultiPoly<C>, i: &Ideal<C>) -> bool {
    let order = MonomialOrder::GrevLex;
    let g = groebner(&i.gens, order);
    f.with_order(order).reduce(&g).is_zero()
}

/// `I ∩ J` by eliminating `t` from `t·I + (1 − t)·J`.
pub fn ideal_intersect<C: Coefficient>(i: &Ideal<C>, j: &Ideal<C>) -> Result<Ideal<C>> {
    if i.vars != j.vars {
        return Err(Error::Parse("ideals use different variable tables".into()));
    }
    let n = i.vars.len();
    let Some(dom) = i.gens.first().or(j.gens.first()).map(|g| g.domain()) else {
        return Ok(i.clone());
    };
    if i.gens.is_empty() || j.gens.is_empty() {
        return Ideal::new(i.vars.clone(), Vec::new());
    }
    let order = MonomialOrder::Elimination(1);
    let shift: Vec<usize> = (1..=n).collect();
    let t = MultiPoly::var(n + 1, order, dom, 0);
    let one_minus_t = &MultiPoly::constant(n + 1, order, C::one(dom)) - &t;
    let mut gens = Vec::new();
    for g in &i.gens {
        gens.push(&t * &g.with_order(order).remap(n + 1, &shift));
    }
    for g in &j.gens {
        gens.push(&one_minus_t * &g.with_order(order).remap(n + 1, &shift));
    }
    let basis = groebner(&gens, order);
    let out: Vec<MultiPoly<C>> = basis
        .iter()
        .filter(|g| g.degree_in(0) == 0)
        .map(|g| {
            let terms = g.terms().iter().map(|(m, c)| (Monomial::new(m.exps()[1..].to_vec()), c.clone()));
            MultiPoly::from_terms(n, MonomialOrder::GrevLex, dom, terms)
        })
        .collect();
    Ideal::new(i.vars.clone(), groebner(&out, MonomialOrder::GrevLex))
}

/// One failed membership in a certificate check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MembershipFailure {
    /// `"Q"` or `"Z_p"`.
    pub domain: String,
    /// `"ideal_in_component"` or `"intersection_in_ideal"`.
    pub direction: String,
    pub component: Option<usize>,
    pub generator: usize,
    /// The generator that failed.
    pub polynomial: String,
    /// Its nonzero normal form, or the reason the check could not run.
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExactCofactorSummary {
    /// Memberships with explicit cofactors whose denominators are powers of two.
    pub certified: usize,
    /// Memberships whose Q-cofactors needed other denominators.
    pub inconclusive: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CertificateReport {
    pub domains: Vec<String>,
    pub components: usize,
    pub memberships_checked: usize,
    pub failures: Vec<MembershipFailure>,
    pub exact_cofactors: Option<ExactCofactorSummary>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_domain<C: Coefficient>(
    ideal: &Ideal<C>,
    comps: &[Ideal<C>],
    label: &str,
    report: &mut CertificateReport,
) -> Result<()> {
    let order = MonomialOrder::GrevLex;
    let names = ideal.vars.names();
    for (k, comp) in comps.iter().enumerate() {
        let g = groebner(&comp.gens, order);
        for (idx, f) in ideal.gens.iter().enumerate() {
            report.memberships_checked += 1;
            let r = f.with_order(order).reduce(&g);
            if !r.is_zero() {
                report.failures.push(MembershipFailure {
                    domain: label.to_string(),
                    direction: "ideal_in_component".into(),
                    component: Some(k),
                    generator: idx,
                    polynomial: f.format_with(names),
                    witness: r.format_with(names),
                });
            }
        }
    }
    let mut meet = comps[0].clone();
    for c in &comps[1..] {
        meet = ideal_intersect(&meet, c)?;
    }
    let g = groebner(&ideal.gens, order);
    for (idx, h) in meet.gens.iter().enumerate() {
        report.memberships_checked += 1;
        let r = h.with_order(order).reduce(&g);
        if !r.is_zero() {
            report.failures.push(MembershipFailure {
                domain: label.to_string(),
                direction: "intersection_in_ideal".into(),
                component: None,
                generator: idx,
                polynomial: h.format_with(names),
                witness: r.format_with(names),
            });
        }
    }
    Ok(())
}

/// Cofactors `h` with `f = Σ h_t · gens_t`, if `f` lies in the ideal.
pub fn membership_cofactors(f: &QPoly, gens: &[QPoly]) -> Option<Vec<QPoly>> {
    let order = MonomialOrder::GrevLex;
    let st = Buchberger::run(gens, order, true);
    let cof = st.cofactors.expect("tracking enabled");
    let f = f.with_order(order);
    let (qs, r) = f.divide(&st.basis, true);
    if !r.is_zero() {
        return None;
    }
    let n = f.nvars();
    let mut h: Vec<QPoly> = (0..gens.len()).map(|_| MultiPoly::zero(n, order, Rationals)).collect();
    for (q, row) in qs.iter().zip(&cof) {
        if q.is_zero() {
            continue;
        }
        for (t, c) in row.iter().enumerate() {
            h[t] = &h[t] + &(q * c);
        }
    }
    Some(h)
}

fn denominators_are_powers_of_two(h: &[QPoly]) -> bool {
    h.iter().all(|p| p.terms().iter().all(|(_, c)| is_power_of_two(c.denom())))
}

/// Checks `I = ∩ components` by mutual generator membership over `Q` and
/// over `Z_p` for each prime. With `exact_cofactors`, every `I ⊆ C_k`
/// membership and every `∩C_k ⊆ I` membership is also witnessed by explicit
/// `Q`-cofactors, which certify `Z[1/2]`-membership when all their
/// denominators are powers of two.
pub fn verify_decomposition_certificate(
    ideal: &QIdeal,
    components: &[QIdeal],
    primes: &[u64],
    exact_cofactors: bool,
) -> Result<CertificateReport> {
    if components.is_empty() {
        return Err(Error::Parse("certificate has no components".into()));
    }
    for c in components {
        if c.vars != ideal.vars {
            return Err(Error::Parse("component uses a different variable table".into()));
        }
    }
    let mut moduli = Vec::new();
    for &p in primes {
        moduli.push(Modulus::new(p)?);
    }
    let mut report = CertificateReport {
        domains: Vec::new(),
        components: components.len(),
        memberships_checked: 0,
        failures: Vec::new(),
        exact_cofactors: None,
    };
    report.domains.push("Q".into());
    check_domain(ideal, components, "Q", &mut report)?;
    for p in moduli {
        let label = format!("Z_{}", p.value());
        report.domains.push(label.clone());
        let reduced = ideal.reduce_mod(p).and_then(|i| {
            let comps = components.iter().map(|c| c.reduce_mod(p)).collect::<Result<Vec<_>>>()?;
            Ok((i, comps))
        });
        match reduced {
            Ok((i, comps)) => check_domain::<FpElem>(&i, &comps, &label, &mut report)?,
            Err(e) => report.failures.push(MembershipFailure {
                domain: label,
                direction: "reduction".into(),
                component: None,
                generator: 0,
                polynomial: String::new(),
                witness: e.to_string(),
            }),
        }
    }
    if exact_cofactors {
        let mut summary = ExactCofactorSummary { certified: 0, inconclusive: Vec::new() };
        let names = ideal.vars.names();
        for (k, comp) in components.iter().enumerate() {
            for (idx, f) in ideal.gens.iter().enumerate() {
                match membership_cofactors(f, &comp.gens) {
                    Some(h) if denominators_are_powers_of_two(&h) => summary.certified += 1,
                    Some(_) => summary
                        .inconclusive
                        .push(format!("generator {idx} in component {k}: cofactor denominators not powers of 2")),
                    None => summary
                        .inconclusive
                        .push(format!("generator {idx} ({}) not in component {k}", f.format_with(names))),
                }
            }
        }
        let mut meet = components[0].clone();
        for c in &components[1..] {
            meet = ideal_intersect(&meet, c)?;
        }
        for (idx, h) in meet.gens.iter().enumerate() {
            match membership_cofactors(h, &ideal.gens) {
                Some(c) if denominators_are_powers_of_two(&c) => summary.certified += 1,
                Some(_) => summary
                    .inconclusive
                    .push(format!("intersection generator {idx}: cofactor denominators not powers of 2")),
                None => summary.inconclusive.push(format!("intersection generator {idx} not in ideal")),
            }
        }
        report.exact_cofactors = Some(summary);
    }
    Ok(report)
}

/// Convenience: builds an ideal over `Q` from polynomials in a fresh table.
pub fn q_ideal(vars: &VarTable, gens: Vec<QPoly>) -> Result<QIdeal> {
    Ideal::new(vars.clone(), gens)
}

/// Images of a rational ideal in `Z_p`, one per prime.
pub fn fp_images(ideal: &QIdeal, primes: &[u64]) -> Result<Vec<Ideal<FpElem>>> {
    primes.iter().map(|&p| ideal.reduce_mod(Modulus::new(p)?)).collect()
}
