use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly_text::{self, var_name};
use crate::rat::Rat;

/// A Laurent polynomial in `n` variables, as a map from exponent vectors to
/// nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<i64>, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.len() });
            }
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { n, terms: map })
    }

    /// Parses text such as `x + y + 1`, `x^2*y^-1 - 3/2`, or `x1*x4 + 1`.
    pub fn parse(n: usize, src: &str) -> Result<Self> {
        let terms = poly_text::parse_terms(src)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.t_exp != 0 {
                return Err(Error::Parse(format!("unexpected parameter t in {src:?}")));
            }
            let mut e = vec![0i64; n];
            for (i, k) in t.exps {
                if i >= n {
                    return Err(Error::Parse(format!("variable {} out of range for n={n}", var_name(i, n.max(i + 1)))));
                }
                e[i] += k;
            }
            out.push((e, t.coeff));
        }
        Self::new(n, out)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single nonzero term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.n]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, k) in x.iter().zip(e) {
                t *= pow(xi, *k);
            }
            s += t;
        }
        s
    }

    /// Normal form up to a unit of the Laurent ring: exponents shifted so that
    /// the lexicographically least one is zero, coefficients scaled so that the
    /// lexicographically largest exponent has coefficient one.
    pub fn canonical(&self) -> Self {
        let (Some((lo, _)), Some((_, lc))) = (self.terms.iter().next(), self.terms.iter().next_back()) else {
            return self.clone();
        };
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(lo).map(|(a, b)| a - b).collect(), c / lc))
            .collect();
        Self { n: self.n, terms }
    }

    /// Polynomial `f - t` for the given constant.
    pub fn minus_const(&self, t: &Rat) -> Self {
        let mut p = self.clone();
        let z = vec![0; self.n];
        let c = p.terms.remove(&z).unwrap_or_else(Rat::zero) - t;
        if !c.is_zero() {
            p.terms.insert(z, c);
        }
        p
    }

    /// Restricts to the coordinate subspace `{x_i = 0 : i ∉ keep}`, keeping the
    /// remaining variables in order. Terms with a negative exponent in a
    /// vanishing variable are rejected.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let vanishes = (0..self.n).any(|i| !keep.contains(&i) && e[i] != 0);
            if vanishes {
                if (0..self.n).any(|i| !keep.contains(&i) && e[i] < 0) {
                    return Err(Error::Invalid(format!("cannot restrict a Laurent term with negative exponent: {self}")));
                }
                continue;
            }
            out.push((keep.iter().map(|&i| e[i]).collect(), c.clone()));
        }
        Self::new(keep.len(), out)
    }
}

fn pow(x: &Rat, k: i64) -> Rat {
    let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn write_poly(
    f: &mut impl fmt::Write,
    terms: impl Iterator<Item = (Vec<(String, i64)>, Rat)>,
) -> fmt::Result {
    let mut s = String::new();
    for (factors, c) in terms {
        let first = s.is_empty();
        poly_text::write_term(&mut s, &c, &factors, first);
    }
    if s.is_empty() {
        s.push('0');
    }
    f.write_str(&s)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let terms = self.terms.iter().rev().map(|(e, c)| {
            let factors = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, k)| (var_name(i, n), *k))
                .collect();
            (factors, c.clone())
        });
        write_poly(f, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_canonical() {
        let p = LaurentPoly::parse(2, "1 + y + x").unwrap();
        assert_eq!(p.to_string(), "x+y+1");
        let q = LaurentPoly::parse(2, "2*x^3*y^-1 + 2*x^2*y^-1 + 2*x*y^-1").unwrap();
        assert_eq!(q.canonical().to_string(), "x^2+x+1");
        let r = LaurentPoly::parse(2, "-2*x - 2*y").unwrap().canonical();
        assert_eq!(r.to_string(), "x*y^-1+1");
        assert_eq!(r.canonical(), r);
        assert_eq!(LaurentPoly::parse(1, "x^2 - 1").unwrap().to_string(), "x^2-1");
        assert!(LaurentPoly::parse(1, "x - x").unwrap().is_zero());
        assert!(LaurentPoly::parse(1, "y").is_err());
    }

    #[test]
    fn restrict_and_shift() {
        let p = LaurentPoly::parse(3, "x*y + z^2").unwrap();
        assert_eq!(p.restrict(&[2]).unwrap().to_string(), "x^2");
        assert_eq!(p.minus_const(&crate::rat::int(1)).to_string(), "x*y+z^2-1");
    }
}
