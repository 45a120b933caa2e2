//! Tropical volumes of hypersurfaces over `k((t))`.
//!
//! A hypersurface `g = Σ c_m(t) xᵐ` in the torus is cut into the cells of the
//! arrangement of tie hyperplanes `val(c_m) + ⟨w,m⟩ = val(c_m') + ⟨w,m'⟩`.
//! On cells where the minimum is attained at least twice the initial form
//! contributes its class, weighted by `χ′(Γ ∩ γ̊)`.

mod stratified;
mod tpoly;
mod verify;

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::chi_prime;
use crate::motring::{split_torus_factor, torus_class, ClassSymbol, LaurentPoly, MotClass, MuAction};
use crate::polyhedra::{arrangement_cells, intersect, AffineForm, ConstructibleSet, RelOpenCell};
use crate::rat::{int, Rat};

pub use stratified::{
    orthant, stratum_reports, vol_affine_stratified, Orthant, StratifiedAffineProblem, StratumKind, StratumReport,
};
pub use tpoly::TPoly;
pub use verify::{
    check_schon_ff, invariance_checks, verify_dm, verify_integral_identity, CellSchon, DmReport, InvarianceReport,
    KsReport, PrimeCheck, SchonReport,
};

/// `min_m val(c_m) + ⟨w, m⟩` and the exponents attaining it.
pub fn trop_value(g: &TPoly, w: &[Rat]) -> Result<(Rat, Vec<Vec<i64>>)> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if w.len() != g.nvars() {
        return Err(Error::DimensionMismatch { expected: g.nvars(), found: w.len() });
    }
    let mut best: Option<Rat> = None;
    let mut argmin = Vec::new();
    for (m, (val, _)) in g.leading_terms() {
        let mut v = int(val as i64);
        for (wi, mi) in w.iter().zip(&m) {
            v += wi * int(*mi);
        }
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => argmin.push(m),
            _ => {
                best = Some(v);
                argmin = vec![m];
            }
        }
    }
    Ok((best.expect("nonzero polynomial"), argmin))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropCell {
    pub cell: RelOpenCell,
    /// Exponents of the terms attaining the minimum on the cell.
    pub dual: Vec<Vec<i64>>,
}

impl TropCell {
    pub fn dim(&self) -> usize {
        self.cell.dim
    }

    pub fn bounded(&self) -> bool {
        self.cell.bounded
    }

    pub fn sample(&self) -> &[Rat] {
        &self.cell.sample
    }

    /// Whether the cell lies in the tropical hypersurface.
    pub fn is_tropical(&self) -> bool {
        self.dual.len() >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalComplex {
    pub n: usize,
    pub cells: Vec<TropCell>,
}

fn tie_forms(g: &TPoly) -> Vec<AffineForm> {
    let lead = g.leading_terms();
    let mut seen = BTreeSet::new();
    let mut forms = Vec::new();
    for (i, (m, (a, _))) in lead.iter().enumerate() {
        for (m2, (b, _)) in &lead[i + 1..] {
            let coeffs = m.iter().zip(m2).map(|(x, y)| int(x - y)).collect();
            let f = AffineForm::new(coeffs, int(*a as i64 - *b as i64));
            if let Some((c, _)) = f.canonical() {
                if seen.insert(c.clone()) {
                    forms.push(c);
                }
            }
        }
    }
    forms
}

pub fn build_complex(g: &TPoly) -> Result<TropicalComplex> {
    build_complex_with(g, &[])
}

/// The complex refined by additional hyperplanes.
pub fn build_complex_with(g: &TPoly, extra: &[AffineForm]) -> Result<TropicalComplex> {
    let n = g.nvars();
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if n == 0 {
        return Err(Error::Invalid("tropical complex needs at least one variable".into()));
    }
    if let Some(f) = extra.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let mut forms = tie_forms(g);
    forms.extend(extra.iter().cloned());
    let cells = arrangement_cells(n, &forms)
        .into_iter()
        .map(|cell| {
            let (_, dual) = trop_value(g, &cell.sample).expect("dimensions checked");
            TropCell { cell, dual }
        })
        .collect();
    Ok(TropicalComplex { n, cells })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialForm {
    pub poly: LaurentPoly,
    pub weight: Vec<Rat>,
    pub action: MuAction,
}

impl InitialForm {
    pub fn symbol(&self) -> Result<ClassSymbol> {
        ClassSymbol::hypersurface(&self.poly, self.action.clone())
    }

    /// The class `[in_w X]` with its torus factor split off. A binomial with
    /// primitive exponent difference `b` and `⟨v, b⟩ ≡ 0` cuts out a translate
    /// of a subtorus, and is emitted as `(𝕃−1)^{n−1}`.
    pub fn class(&self) -> Result<MotClass> {
        let exps: Vec<&Vec<i64>> = self.poly.terms().keys().collect();
        if let [a, b] = exps[..] {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let content = diff.iter().fold(0i64, |g, x| g.gcd(x));
            let d = self.action.order() as i64;
            let pairing: i64 = diff.iter().zip(self.action.weights()).map(|(x, v)| x * v).sum();
            if content == 1 && pairing.rem_euclid(d) == 0 {
                return Ok(torus_class(self.poly.nvars() - 1));
            }
        }
        split_torus_factor(&self.symbol()?)
    }
}

pub fn initial_form(g: &TPoly, w: &[Rat]) -> Result<InitialForm> {
    let (_, argmin) = trop_value(g, w)?;
    let lead = g.leading_terms();
    let terms = argmin.into_iter().map(|m| {
        let c = lead.iter().find(|(e, _)| *e == m).map(|(_, (_, c))| c.clone()).expect("argmin term exists");
        (m, c)
    });
    let poly = LaurentPoly::new(g.nvars(), terms)?;
    if poly.is_zero() {
        return Err(Error::ZeroInitialForm);
    }
    Ok(InitialForm { poly, weight: w.to_vec(), action: MuAction::from_weight(w) })
}

/// One summand `χ′(Γ ∩ γ̊) · [in_γ X]` of a schön volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchonTerm {
    pub cell: TropCell,
    pub chi: i64,
    pub initial: InitialForm,
    pub class: MotClass,
}

/// Nonzero summands of the volume of `{g = 0} ∩ trop⁻¹(Γ)` over the given complex.
pub fn schon_terms(complex: &TropicalComplex, g: &TPoly, gamma: &ConstructibleSet) -> Result<Vec<SchonTerm>> {
    if gamma.ambient_dim != complex.n {
        return Err(Error::DimensionMismatch { expected: complex.n, found: gamma.ambient_dim });
    }
    let terms: Vec<Result<Option<SchonTerm>>> = complex
        .cells
        .par_iter()
        .filter(|c| c.is_tropical())
        .map(|c| {
            let piece = intersect(gamma, &ConstructibleSet::from_cell(c.cell.carrier.clone()));
            let chi = chi_prime(&piece).value;
            if chi == 0 {
                return Ok(None);
            }
            let initial = initial_form(g, c.sample())?;
            let class = initial.class()?;
            Ok(Some(SchonTerm { cell: c.clone(), chi, initial, class }))
        })
        .collect();
    terms.into_iter().filter_map(Result::transpose).collect()
}

/// `Σ_γ χ′(Γ ∩ γ̊)·[in_γ X]` for a schön hypersurface `X = {g = 0}`.
pub fn vol_schon(g: &TPoly, gamma: &ConstructibleSet) -> Result<MotClass> {
    let complex = build_complex(g)?;
    Ok(sum_terms(&schon_terms(&complex, g, gamma)?))
}

pub(crate) fn sum_terms(terms: &[SchonTerm]) -> MotClass {
    terms.iter().fold(MotClass::zero(), |acc, t| &acc + &t.class.scale(t.chi))
}

/// `χ′(Γ)·(𝕃−1)ⁿ`.
pub fn vol_trop_preimage(n: usize, gamma: &ConstructibleSet) -> Result<MotClass> {
    if gamma.ambient_dim != n {
        return Err(Error::DimensionMismatch { expected: n, found: gamma.ambient_dim });
    }
    let chi = if n == 0 { i64::from(gamma.contains(&[])) } else { chi_prime(gamma).value };
    Ok(torus_class(n).scale(chi))
}

/// Per-fiber volume at `v`: the class of `in_v X` if `v ∈ trop(X)`, else zero.
pub fn fiber_volume(g: &TPoly, v: &[Rat]) -> Result<MotClass> {
    let (_, argmin) = trop_value(g, v)?;
    if argmin.len() < 2 {
        return Ok(MotClass::zero());
    }
    initial_form(g, v)?.class()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motring::realize_auto;
    use crate::polyhedra::{BasicCell, Constraint};
    use crate::rat::{rat, rat_vec};

    fn is_integral(w: &[Rat]) -> bool {
        w.iter().all(|x| x.is_integer())
    }

    fn tp(n: usize, s: &str) -> TPoly {
        TPoly::parse(n, s).unwrap()
    }

    #[test]
    fn trop_values() {
        let (v, d) = trop_value(&tp(2, "x + y + 1"), &rat_vec(&[0, 0])).unwrap();
        assert_eq!((v, d.len()), (int(0), 3));
        let (v, d) = trop_value(&tp(2, "x + y + t"), &rat_vec(&[1, 1])).unwrap();
        assert_eq!((v, d.len()), (int(1), 3));
        let (v, d) = trop_value(&tp(1, "x + t^2"), &rat_vec(&[0])).unwrap();
        assert_eq!((v, d), (int(0), vec![vec![1]]));
    }

    #[test]
    fn tropical_line() {
        let c = build_complex(&tp(2, "x + y + 1")).unwrap();
        let by = |k: usize| c.cells.iter().filter(|x| x.dual.len() == k).collect::<Vec<_>>();
        assert_eq!(by(3).len(), 1);
        assert_eq!(by(3)[0].sample(), &rat_vec(&[0, 0])[..]);
        assert_eq!(by(2).len(), 3);
        assert!(by(2).iter().all(|x| x.dim() == 1 && !x.bounded()));
        // pairwise tie lines run past the vertex, so the sectors come cut in two
        let sectors: BTreeSet<_> = by(1).iter().map(|x| x.dual.clone()).collect();
        assert_eq!(sectors.len(), 3);
        assert!(c.cells.iter().filter(|x| x.dim() == 2).all(|x| x.dual.len() == 1));
        assert_eq!(c.cells.iter().filter(|x| x.dim() == 0).count(), 1);

        let c = build_complex(&tp(2, "x + y + t")).unwrap();
        let v: Vec<_> = c.cells.iter().filter(|x| x.dual.len() == 3).collect();
        assert_eq!(v[0].sample(), &rat_vec(&[1, 1])[..]);

        let c = build_complex(&tp(1, "x + 1")).unwrap();
        assert_eq!(c.cells.len(), 3);
        assert_eq!(c.cells.iter().filter(|x| x.bounded()).count(), 1);
    }

    #[test]
    fn initial_forms() {
        let f = initial_form(&tp(2, "x + y + 1"), &rat_vec(&[0, 0])).unwrap();
        assert_eq!(f.poly, LaurentPoly::parse(2, "x + y + 1").unwrap());
        assert!(f.action.is_trivial());
        let f = initial_form(&tp(2, "x + y + t"), &rat_vec(&[1, 1])).unwrap();
        assert_eq!(f.poly, LaurentPoly::parse(2, "x + y + 1").unwrap());
        assert_eq!(f.action.order(), 1);
        let f = initial_form(&tp(1, "x^2 + t"), &[rat(1, 2)]).unwrap();
        assert_eq!(f.poly, LaurentPoly::parse(1, "x^2 + 1").unwrap());
        assert_eq!(f.action, MuAction::new(2, vec![1]));
    }

    #[test]
    fn schon_volumes() {
        let g = tp(2, "x + y + 1");
        let v = vol_schon(&g, &ConstructibleSet::universe(2)).unwrap();
        assert_eq!(realize_auto(&v, 5).unwrap(), 3);
        let half = ConstructibleSet::from_constraints(2, vec![Constraint::gt(AffineForm::coordinate(2, 0))]).unwrap();
        assert!(vol_schon(&g, &half).unwrap().is_zero());
        // a closed square inside the sector where x alone is minimal
        let sq = BasicCell::new(
            2,
            vec![
                Constraint::ge(AffineForm::new(rat_vec(&[-1, 0]), int(-1))),
                Constraint::ge(AffineForm::new(rat_vec(&[1, 0]), int(2))),
                Constraint::ge(AffineForm::new(rat_vec(&[0, 1]), int(-1))),
                Constraint::ge(AffineForm::new(rat_vec(&[0, -1]), int(2))),
            ],
        )
        .unwrap();
        assert!(vol_schon(&g, &ConstructibleSet::from_cell(sq)).unwrap().is_zero());
    }

    #[test]
    fn trop_preimage() {
        let square = BasicCell::new(
            2,
            (0..2)
                .flat_map(|i| {
                    let x = AffineForm::coordinate(2, i);
                    [Constraint::ge(x.clone()), Constraint::ge(x.neg().add(&AffineForm::new(vec![int(0); 2], int(1))))]
                })
                .collect(),
        )
        .unwrap();
        let sq = ConstructibleSet::from_cell(square.clone());
        assert_eq!(vol_trop_preimage(2, &sq).unwrap(), torus_class(2));
        let pos = ConstructibleSet::from_constraints(1, vec![Constraint::gt(AffineForm::coordinate(1, 0))]).unwrap();
        assert!(vol_trop_preimage(1, &pos).unwrap().is_zero());
        let half_open = square.with(Constraint::gt(AffineForm::new(rat_vec(&[-1, 0]), int(1))));
        assert!(vol_trop_preimage(2, &ConstructibleSet::from_cell(half_open)).unwrap().is_zero());
    }

    #[test]
    fn integral_weights_act_trivially() {
        let g = tp(2, "x^2 + t^3*y + t");
        for c in build_complex(&g).unwrap().cells.iter().filter(|c| c.is_tropical()) {
            let f = initial_form(&g, c.sample()).unwrap();
            if is_integral(c.sample()) {
                assert!(f.action.is_trivial());
            }
            let again = initial_form(&g, &c.cell.alternate_sample()).unwrap();
            assert_eq!(f.poly.canonical(), again.poly.canonical());
        }
    }

    #[test]
    fn fiber_volume_off_hypersurface() {
        let g = tp(2, "x + y + 1");
        assert!(fiber_volume(&g, &rat_vec(&[3, 5])).unwrap().is_zero());
        assert!(!fiber_volume(&g, &rat_vec(&[0, 5])).unwrap().is_zero());
    }
}
