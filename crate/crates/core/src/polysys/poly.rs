//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modring::{BigRational, Coefficient, FpElem, Modulus, Rationals};

/// Ordered, duplicate-free variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(VarTable { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// A copy with one extra variable in front, named so it does not clash.
    pub fn with_leading(&self, base: &str) -> (VarTable, String) {
        let mut name = base.to_string();
        while self.names.contains(&name) {
            name.push('_');
        }
        let mut names = vec![name.clone()];
        names.extend(self.names.iter().cloned());
        (VarTable { names }, name)
    }
}

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }
}

/// Monomial orders. Variables earlier in the table are larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    /// Product order eliminating the first `k` variables: grevlex on the
    /// first block, ties broken by grevlex on the rest.
    Elimination(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::Elimination(k) => grevlex(&a.0[..k], &b.0[..k]).then_with(|| grevlex(&a.0[k..], &b.0[k..])),
        }
    }
}

/// Key adapter so a runtime order can drive a `BTreeMap`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Keyed(Monomial, MonomialOrder);

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.1.cmp(&self.0, &other.0)
    }
}

/// A polynomial as a list of `(monomial, coefficient)` pairs, strictly
/// decreasing in its monomial order, without zero coefficients.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coefficient> {
    nvars: usize,
    order: MonomialOrder,
    domain: C::Domain,
    terms: Vec<(Monomial, C)>,
}

impl<C: Coefficient> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<C: Coefficient> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format_with(&names))
    }
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(nvars: usize, order: MonomialOrder, domain: C::Domain) -> Self {
        MultiPoly { nvars, order, domain, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: C) -> Self {
        let domain = c.domain();
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::one(nvars), c)] };
        MultiPoly { nvars, order, domain, terms }
    }

    pub fn from_i64(nvars: usize, order: MonomialOrder, domain: C::Domain, v: i64) -> Self {
        MultiPoly::constant(nvars, order, C::from_i64(domain, v))
    }

    pub fn var(nvars: usize, order: MonomialOrder, domain: C::Domain, i: usize) -> Self {
        MultiPoly { nvars, order, domain, terms: vec![(Monomial::var(nvars, i), C::one(domain))] }
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        order: MonomialOrder,
        domain: C::Domain,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length");
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly { nvars, order, domain, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn domain(&self) -> C::Domain {
        self.domain
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0)
    }

    /// Indices of variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0)).collect()
    }

    pub fn coeff_of(&self, m: &Monomial) -> C {
        self.terms.iter().find(|(t, _)| t == m).map_or_else(|| C::zero(self.domain), |(_, c)| c.clone())
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly { nvars: self.nvars, order, domain: self.domain, terms }
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        assert_eq!(self.order, other.order, "monomial order mismatch");
        assert_eq!(self.domain, other.domain, "coefficient domain mismatch");
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        self.check_compat(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => self.order.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { c.neg() } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        self.terms[i].1.sub(&other.terms[j].1)
                    } else {
                        self.terms[i].1.add(&other.terms[j].1)
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MultiPoly { nvars: self.nvars, order: self.order, domain: self.domain, terms: out }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.order, self.domain);
        }
        MultiPoly {
            nvars: self.nvars,
            order: self.order,
            domain: self.domain,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    /// Multiplication by `c · m`; keeps the term order.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars, self.order, self.domain);
        }
        MultiPoly {
            nvars: self.nvars,
            order: self.order,
            domain: self.domain,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.mul(c))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MultiPoly::constant(self.nvars, self.order, C::one(self.domain));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff().and_then(|c| c.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero(self.domain);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn map_coeffs<D: Coefficient>(&self, domain: D::Domain, f: impl Fn(&C) -> Result<D>) -> Result<MultiPoly<D>> {
        let terms = self.terms.iter().map(|(m, c)| Ok((m.clone(), f(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly::from_terms(self.nvars, self.order, domain, terms))
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            (Monomial(e), c.clone())
        });
        MultiPoly::from_terms(nvars, self.order, self.domain, terms)
    }

    /// Division by `divisors` in the polynomial's order. Returns the
    /// quotients (one per divisor) and the remainder.
    pub fn divide(&self, divisors: &[MultiPoly<C>], want_quotients: bool) -> (Vec<MultiPoly<C>>, MultiPoly<C>) {
        let order = self.order;
        let mut work: BTreeMap<Keyed, C> =
            self.terms.iter().map(|(m, c)| (Keyed(m.clone(), order), c.clone())).collect();
        let lead: Vec<Option<(Monomial, C)>> = divisors
            .iter()
            .map(|g| {
                g.check_compat(self);
                g.leading_term().map(|(m, c)| (m.clone(), c.inv().expect("field coefficients")))
            })
            .collect();
        let mut quotients: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); divisors.len()];
        let mut rem = Vec::new();
        while let Some((Keyed(m, _), c)) = work.pop_last() {
            let hit = lead.iter().enumerate().find(|(_, l)| l.as_ref().is_some_and(|(lm, _)| lm.divides(&m)));
            match hit {
                Some((k, Some((lm, lc_inv)))) => {
                    let qm = lm.quotient_of(&m);
                    let qc = c.mul(lc_inv);
                    for (gm, gc) in divisors[k].terms.iter().skip(1) {
                        let key = Keyed(gm.mul(&qm), order);
                        let delta = gc.mul(&qc);
                        match work.get_mut(&key) {
                            Some(v) => {
                                *v = v.sub(&delta);
                                if v.is_zero() {
                                    work.remove(&key);
                                }
                            }
                            None => {
                                work.insert(key, delta.neg());
                            }
                        }
                    }
                    if want_quotients {
                        quotients[k].push((qm, qc));
                    }
                }
                _ => rem.push((m, c)),
            }
        }
        let quotients = quotients
            .into_iter()
            .map(|q| MultiPoly { nvars: self.nvars, order, domain: self.domain, terms: q })
            .collect();
        (quotients, MultiPoly { nvars: self.nvars, order, domain: self.domain, terms: rem })
    }

    pub fn reduce(&self, divisors: &[MultiPoly<C>]) -> MultiPoly<C> {
        self.divide(divisors, false).1
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &MultiPoly<C>) -> Option<MultiPoly<C>> {
        if divisor.is_zero() {
            return None;
        }
        let (mut q, r) = self.divide(std::slice::from_ref(divisor), true);
        r.is_zero().then(|| q.remove(0))
    }

    pub fn format_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(
                        |(i, &e)| {
                            if e == 1 {
                                names[i].as_ref().to_string()
                            } else {
                                format!("{}^{}", names[i].as_ref(), e)
                            }
                        },
                    )
                    .collect();
            if vars.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl<C: Coefficient> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        self.merge(rhs, false)
    }
}

impl<C: Coefficient> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        self.merge(rhs, true)
    }
}

impl<C: Coefficient> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            nvars: self.nvars,
            order: self.order,
            domain: self.domain,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }
}

impl<C: Coefficient> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        self.check_compat(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(self.nvars, self.order, self.domain);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = self.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MultiPoly { nvars: self.nvars, order, domain: self.domain, terms }
    }
}

/// Polynomials with rational coefficients.
pub type QPoly = MultiPoly<BigRational>;
/// Polynomials over `Z_p`.
pub type FpPoly = MultiPoly<FpElem>;

impl QPoly {
    pub fn q_zero(nvars: usize) -> Self {
        MultiPoly::zero(nvars, MonomialOrder::GrevLex, Rationals)
    }

    pub fn q_const(nvars: usize, v: i64) -> Self {
        MultiPoly::from_i64(nvars, MonomialOrder::GrevLex, Rationals, v)
    }

    pub fn q_var(nvars: usize, i: usize) -> Self {
        MultiPoly::var(nvars, MonomialOrder::GrevLex, Rationals, i)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Writes `self = s · P` with `P` having coprime integer coefficients and
    /// a positive leading coefficient; returns `(s, P)`.
    pub fn primitive_part(&self) -> (BigRational, QPoly) {
        if self.is_zero() {
            return (<BigRational as One>::one(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut s = BigRational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            s = -s;
        }
        let inv = s.recip();
        (s, self.scale(&inv))
    }

    /// Image modulo `p`.
    pub fn reduce_mod(&self, p: Modulus) -> Result<FpPoly> {
        self.map_coeffs(p, |c| FpElem::from_rational(p, c))
    }
}
