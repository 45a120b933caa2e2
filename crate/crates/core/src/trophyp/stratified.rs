use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motring::{LaurentPoly, MotClass};
use crate::polyhedra::{AffineForm, BasicCell, Constraint, ConstructibleSet};
use crate::rat::int;

use super::{build_complex, schon_terms, sum_terms, vol_trop_preimage, SchonTerm, TPoly};

/// Valuation condition on one affine coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orthant {
    Free,
    /// `val ≥ 0`
    Closed,
    /// `val > 0`
    Open,
}

/// `{w ∈ ℚᵏ : w_i satisfies pattern_i}`.
pub fn orthant(pattern: &[Orthant]) -> ConstructibleSet {
    let k = pattern.len();
    let cons = pattern
        .iter()
        .enumerate()
        .filter_map(|(i, o)| match o {
            Orthant::Free => None,
            Orthant::Closed => Some(Constraint::ge(AffineForm::coordinate(k, i))),
            Orthant::Open => Some(Constraint::gt(AffineForm::coordinate(k, i))),
        })
        .collect();
    ConstructibleSet::from_cell(BasicCell::new(k, cons).expect("dimensions agree"))
}

/// The volume of `{g = 0} ∩ {val(x) ∈ Γ}` in affine space, split along the
/// coordinate orbits. On the orbit where exactly the coordinates in `A` are
/// nonzero the tropical condition is `Γ_A`; by default it is the product of
/// the per-coordinate pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedAffineProblem {
    pub equation: TPoly,
    pub pattern: Vec<Orthant>,
    pub overrides: BTreeMap<Vec<usize>, ConstructibleSet>,
}

impl StratifiedAffineProblem {
    pub fn new(equation: TPoly, pattern: Vec<Orthant>) -> Result<Self> {
        if pattern.len() != equation.nvars() {
            return Err(Error::DimensionMismatch { expected: equation.nvars(), found: pattern.len() });
        }
        if equation.terms().keys().flatten().any(|e| *e < 0) {
            return Err(Error::Invalid(format!("affine equation has a negative exponent: {equation}")));
        }
        Ok(Self { equation, pattern, overrides: BTreeMap::new() })
    }

    /// The equation `f = t`.
    pub fn level(f: &LaurentPoly, pattern: Vec<Orthant>) -> Result<Self> {
        Self::new(TPoly::from_laurent(f).minus_monomial_t(1, &int(1)), pattern)
    }

    pub fn gamma(&self, subset: &[usize]) -> ConstructibleSet {
        match self.overrides.get(subset) {
            Some(g) => g.clone(),
            None => orthant(&subset.iter().map(|&i| self.pattern[i]).collect::<Vec<_>>()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumKind {
    /// The restricted equation vanishes identically: the whole orbit counts.
    Whole,
    /// The restricted equation is a single term: no points on the orbit.
    NoPoints,
    Hypersurface,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    /// Coordinates that stay nonzero.
    pub subset: Vec<usize>,
    pub equation: TPoly,
    pub kind: StratumKind,
    pub terms: Vec<SchonTerm>,
    pub class: MotClass,
}

pub fn stratum_reports(p: &StratifiedAffineProblem) -> Result<Vec<StratumReport>> {
    let n = p.equation.nvars();
    if n > 16 {
        return Err(Error::Invalid(format!("too many coordinates for orbit enumeration: {n}")));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let g = p.equation.restrict(&subset)?;
        let gamma = p.gamma(&subset);
        if gamma.ambient_dim != subset.len() {
            return Err(Error::DimensionMismatch { expected: subset.len(), found: gamma.ambient_dim });
        }
        let (kind, terms, class) = if g.is_zero() {
            (StratumKind::Whole, Vec::new(), vol_trop_preimage(subset.len(), &gamma)?)
        } else if g.terms().len() == 1 {
            (StratumKind::NoPoints, Vec::new(), MotClass::zero())
        } else {
            let complex = build_complex(&g)?;
            let terms = schon_terms(&complex, &g, &gamma)?;
            let class = sum_terms(&terms);
            (StratumKind::Hypersurface, terms, class)
        };
        out.push(StratumReport { subset, equation: g, kind, terms, class });
    }
    Ok(out)
}

pub fn vol_affine_stratified(p: &StratifiedAffineProblem) -> Result<MotClass> {
    Ok(stratum_reports(p)?.iter().fold(MotClass::zero(), |acc, s| &acc + &s.class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motring::realize_auto;

    fn lp(n: usize, s: &str) -> LaurentPoly {
        LaurentPoly::parse(n, s).unwrap()
    }

    #[test]
    fn linear_point() {
        let p = StratifiedAffineProblem::level(&lp(1, "x"), vec![Orthant::Free]).unwrap();
        assert_eq!(vol_affine_stratified(&p).unwrap(), MotClass::one());
    }

    #[test]
    fn conic_and_node() {
        let p = StratifiedAffineProblem::level(&lp(2, "x^2 + y^2"), vec![Orthant::Closed; 2]).unwrap();
        let v = vol_affine_stratified(&p).unwrap();
        for q in [5, 13] {
            assert_eq!(realize_auto(&v, q).unwrap(), q as i128 - 1);
        }
        assert_eq!(realize_auto(&v, 7).unwrap(), 8);
        let p = StratifiedAffineProblem::level(&lp(2, "x*y"), vec![Orthant::Closed; 2]).unwrap();
        let v = vol_affine_stratified(&p).unwrap();
        assert_eq!(v, MotClass::parse("L - 1").unwrap());
    }

    #[test]
    fn vanishing_equation_counts_whole_orbits() {
        let p = StratifiedAffineProblem::new(TPoly::parse(1, "t*x - t*x").unwrap(), vec![Orthant::Closed]).unwrap();
        // {val ≥ 0} in ℚ has χ′ = 1 and the origin adds a point
        assert_eq!(vol_affine_stratified(&p).unwrap(), MotClass::lefschetz());
        assert!(StratifiedAffineProblem::new(TPoly::parse(1, "x^-1").unwrap(), vec![Orthant::Free]).is_err());
    }
}
