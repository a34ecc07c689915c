//! JSON exchange format for polynomial lists.
//!
//! ```json
//! {"vars": ["x", "y"], "polys": [[{"c": "-3", "e": [1, 0]}, {"c": "1/2", "e": [0, 2]}]]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{parse_rational, rational_to_string, Rationals};

use super::ideal::QIdeal;
use super::poly::{Monomial, MonomialOrder, MultiPoly, QPoly, VarTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub vars: Vec<String>,
    pub polys: Vec<Vec<TermJson>>,
}

impl PolyFile {
    pub fn from_polys(vars: &VarTable, polys: &[QPoly]) -> Self {
        PolyFile {
            vars: vars.names().to_vec(),
            polys: polys
                .iter()
                .map(|p| {
                    p.terms().iter().map(|(m, c)| TermJson { c: rational_to_string(c), e: m.exps().to_vec() }).collect()
                })
                .collect(),
        }
    }

    pub fn to_polys(&self) -> Result<(VarTable, Vec<QPoly>)> {
        let vars = VarTable::new(self.vars.iter().cloned())?;
        let n = vars.len();
        let mut out = Vec::with_capacity(self.polys.len());
        for (k, terms) in self.polys.iter().enumerate() {
            let mut parsed = Vec::with_capacity(terms.len());
            for t in terms {
                if t.e.len() != n {
                    return Err(Error::Parse(format!(
                        "polynomial {k}: exponent vector of length {} for {n} variables",
                        t.e.len()
                    )));
                }
                parsed.push((Monomial::new(t.e.clone()), parse_rational(&t.c)?));
            }
            out.push(MultiPoly::from_terms(n, MonomialOrder::GrevLex, Rationals, parsed));
        }
        Ok((vars, out))
    }

    pub fn to_ideal(&self) -> Result<QIdeal> {
        let (vars, polys) = self.to_polys()?;
        QIdeal::new(vars, polys)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
