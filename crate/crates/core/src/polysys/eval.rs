//! Fast evaluation of rational polynomials at points of `Z_p`.

use crate::error::{Error, Result};
use crate::modring::{rational_mod, FpElem, Modulus};

use super::poly::{QPoly, VarTable};

/// Anything that assigns values in `Z_d` to named variables.
pub trait Assignment {
    fn value_of(&self, name: &str) -> Option<FpElem>;
}

impl Assignment for std::collections::HashMap<String, FpElem> {
    fn value_of(&self, name: &str) -> Option<FpElem> {
        self.get(name).copied()
    }
}

/// A polynomial with coefficients reduced mod `p` and sparse exponents.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    modulus: Modulus,
    nvars: usize,
    terms: Vec<(u32, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn new(f: &QPoly, p: Modulus) -> Result<Self> {
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let c = rational_mod(c, p)?;
            if c.is_zero() {
                continue;
            }
            let exps = m.exps().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
            terms.push((c.value(), exps));
        }
        Ok(CompiledPoly { modulus: p, nvars: f.nvars(), terms })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `point` holds residues in `[0, p)`, one per variable.
    pub fn eval(&self, point: &[u32]) -> u32 {
        debug_assert_eq!(point.len(), self.nvars);
        let m = self.modulus;
        let mut acc = 0u32;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for &(i, e) in exps {
                let x = point[i];
                t = m.mul_raw(t, if e == 1 { x } else { m.pow_raw(x, e as u64) });
            }
            acc = m.add_raw(acc, t);
        }
        acc
    }
}

/// Evaluates `f` (over the variables `vars`) at `point`, modulo `d`.
pub fn eval_poly(f: &QPoly, vars: &VarTable, point: &impl Assignment, d: Modulus) -> Result<FpElem> {
    let mut values = vec![0u32; vars.len()];
    for i in f.support() {
        let name = vars.name(i);
        let v = point.value_of(name).ok_or_else(|| Error::MissingAssignment(name.to_string()))?;
        if v.modulus() != d {
            return Err(Error::ModulusMismatch(v.modulus().value(), d.value()));
        }
        values[i] = v.value();
    }
    Ok(d.elem(CompiledPoly::new(f, d)?.eval(&values) as i64))
}
