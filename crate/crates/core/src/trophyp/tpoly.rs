use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::motring::LaurentPoly;
use crate::poly_text::{self, var_name};
use crate::rat::Rat;

/// A Laurent polynomial in `x₁..x_n` with coefficients in `ℚ[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, BTreeMap<u32, Rat>>,
}

impl TPoly {
    /// Builds from `(exponent, t-exponent, coefficient)` triples; repeated
    /// monomials are added.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<i64>, u32, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, BTreeMap<u32, Rat>> = BTreeMap::new();
        for (m, k, c) in terms {
            if m.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.len() });
            }
            *map.entry(m).or_default().entry(k).or_insert_with(Rat::zero) += c;
        }
        for tp in map.values_mut() {
            tp.retain(|_, c| !c.is_zero());
        }
        map.retain(|_, tp| !tp.is_empty());
        Ok(Self { n, terms: map })
    }

    pub fn parse(n: usize, src: &str) -> Result<Self> {
        let mut out = Vec::new();
        for t in poly_text::parse_terms(src)? {
            let k = u32::try_from(t.t_exp).map_err(|_| Error::Parse(format!("negative power of t in {src:?}")))?;
            let mut m = vec![0i64; n];
            for (i, e) in t.exps {
                if i >= n {
                    return Err(Error::Parse(format!("variable {} out of range for n={n}", var_name(i, n.max(i + 1)))));
                }
                m[i] += e;
            }
            out.push((m, k, t.coeff));
        }
        Self::new(n, out)
    }

    /// The constant family `h` (no dependence on `t`).
    pub fn from_laurent(h: &LaurentPoly) -> Self {
        let terms = h.terms().iter().map(|(m, c)| (m.clone(), BTreeMap::from([(0, c.clone())]))).collect();
        Self { n: h.nvars(), terms }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BTreeMap<u32, Rat>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Per monomial: `(val(c_m), leading coefficient)`.
    pub fn leading_terms(&self) -> Vec<(Vec<i64>, (u32, Rat))> {
        self.terms
            .iter()
            .map(|(m, tp)| {
                let (k, c) = tp.iter().next().expect("nonzero coefficient");
                (m.clone(), (*k, c.clone()))
            })
            .collect()
    }

    /// Whether no coefficient involves `t`.
    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|tp| tp.keys().all(|k| *k == 0))
    }

    /// `self - c·t^k`.
    pub fn minus_monomial_t(&self, k: u32, c: &Rat) -> Self {
        let mut out = self.clone();
        let z = vec![0; self.n];
        let tp = out.terms.entry(z.clone()).or_default();
        *tp.entry(k).or_insert_with(Rat::zero) -= c;
        tp.retain(|_, c| !c.is_zero());
        if tp.is_empty() {
            out.terms.remove(&z);
        }
        out
    }

    /// Restriction to `{x_i = 0 : i ∉ keep}` in the kept variables.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Vec::new();
        for (m, tp) in &self.terms {
            if (0..self.n).any(|i| !keep.contains(&i) && m[i] < 0) {
                return Err(Error::Invalid(format!("cannot set a variable with negative exponent to zero in {self}")));
            }
            if (0..self.n).any(|i| !keep.contains(&i) && m[i] != 0) {
                continue;
            }
            let e: Vec<i64> = keep.iter().map(|&i| m[i]).collect();
            out.extend(tp.iter().map(|(k, c)| (e.clone(), *k, c.clone())));
        }
        Self::new(keep.len(), out)
    }

    /// The specialization at a rational value of `t`.
    pub fn at_t(&self, t: &Rat) -> Result<LaurentPoly> {
        let terms = self.terms.iter().map(|(m, tp)| {
            let c = tp.iter().fold(Rat::zero(), |s, (k, c)| s + c * num_traits::pow(t.clone(), *k as usize));
            (m.clone(), c)
        });
        LaurentPoly::new(self.n, terms)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let terms = self.terms.iter().rev().flat_map(|(m, tp)| {
            tp.iter().map(move |(k, c)| {
                let mut factors = Vec::new();
                if *k != 0 {
                    factors.push(("t".to_string(), i64::from(*k)));
                }
                factors.extend(m.iter().enumerate().filter(|(_, e)| **e != 0).map(|(i, e)| (var_name(i, n), *e)));
                (factors, c.clone())
            })
        });
        crate::motring::write_poly(f, terms)
    }
}
