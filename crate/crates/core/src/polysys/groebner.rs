//! Buchberger's algorithm with the product and chain criteria.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::modring::Coefficient;

use super::poly::{Monomial, MonomialOrder, MultiPoly};

fn s_poly<C: Coefficient>(f: &MultiPoly<C>, g: &MultiPoly<C>) -> MultiPoly<C> {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let one = C::one(f.domain());
    let a = f.mul_term(&fm.quotient_of(&l), &one.div(fc).expect("field"));
    let b = g.mul_term(&gm.quotient_of(&l), &one.div(gc).expect("field"));
    &a - &b
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Chooses the pending pair with the smallest lcm (normal strategy).
fn pop_min(pairs: &mut Vec<Pair>, order: MonomialOrder) -> Pair {
    let mut best = 0;
    for k in 1..pairs.len() {
        let c = order.cmp(&pairs[k].lcm, &pairs[best].lcm);
        if c == Ordering::Less || (c == Ordering::Equal && (pairs[k].j, pairs[k].i) < (pairs[best].j, pairs[best].i)) {
            best = k;
        }
    }
    pairs.swap_remove(best)
}

/// Buchberger state shared by the plain and the cofactor-tracking drivers.
pub(crate) struct Buchberger<C: Coefficient> {
    pub basis: Vec<MultiPoly<C>>,
    /// For each basis element, its expression in the input generators.
    pub cofactors: Option<Vec<Vec<MultiPoly<C>>>>,
}

impl<C: Coefficient> Buchberger<C> {
    pub fn run(gens: &[MultiPoly<C>], order: MonomialOrder, track: bool) -> Self {
        let ngens = gens.len();
        let mut basis = Vec::new();
        let mut cofactors = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            let g = g.with_order(order);
            if g.is_zero() {
                continue;
            }
            if track {
                let mut row: Vec<MultiPoly<C>> =
                    (0..ngens).map(|_| MultiPoly::zero(g.nvars(), order, g.domain())).collect();
                let inv = g.leading_coeff().and_then(|c| c.inv()).expect("field");
                row[k] = MultiPoly::constant(g.nvars(), order, inv);
                cofactors.push(row);
            }
            basis.push(g.monic());
        }
        let mut state = Buchberger { basis, cofactors: track.then_some(cofactors) };
        if state.basis.is_empty() {
            return state;
        }
        let mut pairs: Vec<Pair> = Vec::new();
        for j in 0..state.basis.len() {
            for i in 0..j {
                pairs.push(state.pair(i, j));
            }
        }
        let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
        while !pairs.is_empty() {
            let p = pop_min(&mut pairs, order);
            done.insert((p.i, p.j));
            let (li, lj) = (state.lm(p.i), state.lm(p.j));
            if li.coprime(lj) {
                continue;
            }
            let pending = |a: usize, b: usize| {
                let key = (a.min(b), a.max(b));
                !done.contains(&key)
            };
            let chain = (0..state.basis.len())
                .any(|k| k != p.i && k != p.j && state.lm(k).divides(&p.lcm) && !pending(p.i, k) && !pending(p.j, k));
            if chain {
                continue;
            }
            let s = s_poly(&state.basis[p.i], &state.basis[p.j]);
            let (qs, r) = s.divide(&state.basis, state.cofactors.is_some());
            if r.is_zero() {
                continue;
            }
            let inv = r.leading_coeff().and_then(|c| c.inv()).expect("field");
            if let Some(cof) = state.cofactors.as_mut() {
                // r = s − Σ q_k g_k, s = a g_i − b g_j
                let (fm, fc) = state.basis[p.i].leading_term().unwrap();
                let (gm, gc) = state.basis[p.j].leading_term().unwrap();
                let one = C::one(r.domain());
                let a_m = fm.quotient_of(&p.lcm);
                let a_c = one.div(fc).unwrap();
                let b_m = gm.quotient_of(&p.lcm);
                let b_c = one.div(gc).unwrap();
                let mut row: Vec<MultiPoly<C>> =
                    (0..ngens).map(|t| &cof[p.i][t].mul_term(&a_m, &a_c) - &cof[p.j][t].mul_term(&b_m, &b_c)).collect();
                for (k, q) in qs.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    for t in 0..ngens {
                        row[t] = &row[t] - &(q * &cof[k][t]);
                    }
                }
                let row = row.iter().map(|h| h.scale(&inv)).collect();
                cof.push(row);
            }
            state.basis.push(r.scale(&inv));
            let n = state.basis.len() - 1;
            for i in 0..n {
                pairs.push(state.pair(i, n));
            }
        }
        state.reduce_basis(order);
        state
    }

    fn lm(&self, i: usize) -> &Monomial {
        self.basis[i].leading_monomial().expect("nonzero basis element")
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        Pair { i, j, lcm: self.lm(i).lcm(self.lm(j)) }
    }

    /// Minimalizes, interreduces, and sorts by decreasing leading monomial.
    fn reduce_basis(&mut self, order: MonomialOrder) {
        let n = self.basis.len();
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..n {
            let redundant =
                (0..n).any(|j| j != i && self.lm(j).divides(self.lm(i)) && (self.lm(j) != self.lm(i) || j < i));
            if !redundant {
                keep.push(i);
            }
        }
        let mut basis: Vec<MultiPoly<C>> = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut cof: Option<Vec<Vec<MultiPoly<C>>>> =
            self.cofactors.as_ref().map(|c| keep.iter().map(|&i| c[i].clone()).collect());
        for k in 0..basis.len() {
            let others: Vec<MultiPoly<C>> =
                basis.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g.clone()).collect();
            let (qs, r) = basis[k].divide(&others, cof.is_some());
            if let Some(cof) = cof.as_mut() {
                let idx: Vec<usize> = (0..basis.len()).filter(|&j| j != k).collect();
                let mut row = cof[k].clone();
                for (q, &j) in qs.iter().zip(&idx) {
                    if q.is_zero() {
                        continue;
                    }
                    for t in 0..row.len() {
                        row[t] = &row[t] - &(q * &cof[j][t]);
                    }
                }
                cof[k] = row;
            }
            basis[k] = r;
        }
        let mut idx: Vec<usize> = (0..basis.len()).collect();
        idx.sort_by(|&a, &b| order.cmp(basis[b].leading_monomial().unwrap(), basis[a].leading_monomial().unwrap()));
        self.basis = idx.iter().map(|&i| basis[i].clone()).collect();
        self.cofactors = cof.map(|c| idx.iter().map(|&i| c[i].clone()).collect());
    }
}

/// The reduced Gröbner basis of the ideal generated by `gens`: monic,
/// interreduced, sorted by decreasing leading monomial.
pub fn groebner<C: Coefficient>(gens: &[MultiPoly<C>], order: MonomialOrder) -> Vec<MultiPoly<C>> {
    Buchberger::run(gens, order, false).basis
}

/// True if `basis` is a Gröbner basis (all S-polynomials reduce to zero).
pub fn is_groebner_basis<C: Coefficient>(basis: &[MultiPoly<C>]) -> bool {
    let basis: Vec<_> = basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    for j in 0..basis.len() {
        for i in 0..j {
            if !s_poly(&basis[i], &basis[j]).reduce(&basis).is_zero() {
                return false;
            }
        }
    }
    true
}
