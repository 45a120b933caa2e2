//! Schön checks over finite fields and the two comparison workflows:
//! weighted homogeneous `f = t` against `f⁻¹(1)`, and the integral identity
//! for weight-zero equivariant `f`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::motring::{
    count_affine_ff, realize_auto, torus_singular_point, LaurentPoly, MotClass, MuAction,
};
use crate::rat::{int, rat, Rat};

use super::stratified::{stratum_reports, StratumKind, StratumReport};
use super::{build_complex, fiber_volume, initial_form, InitialForm, Orthant, StratifiedAffineProblem, TPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSchon {
    pub sample: Vec<Rat>,
    pub initial: LaurentPoly,
    /// Primes with a singular point of the initial form, and that point.
    pub failures: Vec<(u64, Vec<u64>)>,
}

/// Reduction-smoothness of every initial form. A failure proves the
/// reduction is not schön; a pass is evidence only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchonReport {
    pub primes: Vec<u64>,
    pub cells: Vec<CellSchon>,
}

impl SchonReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.failures.is_empty())
    }
}

pub fn check_schon_ff(g: &TPoly, primes: &[u64]) -> Result<SchonReport> {
    let complex = build_complex(g)?;
    let mut cache: BTreeMap<LaurentPoly, Vec<(u64, Vec<u64>)>> = BTreeMap::new();
    let mut cells = Vec::new();
    for c in complex.cells.iter().filter(|c| c.is_tropical()) {
        let h = initial_form(g, c.sample())?.poly;
        let key = h.canonical();
        if !cache.contains_key(&key) {
            let mut failures = Vec::new();
            for &q in primes {
                if let Some(x) = torus_singular_point(&h, q)? {
                    failures.push((q, x));
                }
            }
            cache.insert(key.clone(), failures);
        }
        cells.push(CellSchon { sample: c.sample().to_vec(), initial: h, failures: cache[&key].clone() });
    }
    Ok(SchonReport { primes: primes.to_vec(), cells })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCheck {
    pub q: u64,
    pub lhs_count: i128,
    pub rhs_count: i128,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmReport {
    pub lhs: MotClass,
    pub primes: Vec<PrimeCheck>,
    /// Schön reports of the orbit strata, keyed by the nonzero coordinates.
    pub schon: Vec<(Vec<usize>, SchonReport)>,
    /// Cells whose class differs from the one built with the predicted action.
    pub action_mismatches: Vec<String>,
    pub strata: Vec<StratumReport>,
}

impl DmReport {
    pub fn verified(&self) -> bool {
        self.primes.iter().all(|p| p.equal) && self.action_mismatches.is_empty()
    }
}

fn check_affine(f: &LaurentPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.terms().keys().flatten().any(|e| *e < 0) {
        return Err(Error::Invalid(format!("expected a polynomial, found {f}")));
    }
    Ok(())
}

fn weighted_degrees(f: &LaurentPoly, weights: &[i64]) -> Result<Vec<i64>> {
    if weights.len() != f.nvars() {
        return Err(Error::DimensionMismatch { expected: f.nvars(), found: weights.len() });
    }
    Ok(f.terms().keys().map(|m| m.iter().zip(weights).map(|(a, b)| a * b).sum()).collect())
}

fn schon_strata(strata: &[StratumReport], primes: &[u64]) -> Result<Vec<(Vec<usize>, SchonReport)>> {
    let mut out = Vec::new();
    for s in strata.iter().filter(|s| s.kind == StratumKind::Hypersurface) {
        let r = check_schon_ff(&s.equation, primes)?;
        if !r.passed() {
            let bad = r.cells.iter().find(|c| !c.failures.is_empty()).expect("a failing cell");
            return Err(Error::NotSchoen(format!(
                "stratum {:?}: initial form {} is singular mod {}",
                s.subset, bad.initial, bad.failures[0].0
            )));
        }
        out.push((s.subset.clone(), r));
    }
    Ok(out)
}

fn compare<F>(lhs: &MotClass, primes: &[u64], rhs: F) -> Result<Vec<PrimeCheck>>
where
    F: Fn(u64) -> Result<i128> + Sync,
{
    primes
        .par_iter()
        .map(|&q| {
            let l = realize_auto(lhs, q)?;
            let r = rhs(q)?;
            Ok(PrimeCheck { q, lhs_count: l, rhs_count: r, equal: l == r })
        })
        .collect()
}

/// Compares the volume of `{f = t}` over `val ≥ 0` with `#f⁻¹(1)(𝔽_q)`.
pub fn verify_dm(f: &LaurentPoly, weights: &[i64], d: i64, primes: &[u64]) -> Result<DmReport> {
    check_affine(f)?;
    if d <= 0 || weights.iter().any(|w| *w <= 0) {
        return Err(Error::Invalid("weights and degree must be positive".into()));
    }
    let degs = weighted_degrees(f, weights)?;
    if let Some((m, k)) = f.terms().keys().zip(&degs).find(|(_, k)| **k != d) {
        return Err(Error::NotWeightedHomogeneous(format!("term with exponent {m:?} has weighted degree {k}, not {d}")));
    }
    let problem = StratifiedAffineProblem::level(f, vec![Orthant::Closed; f.nvars()])?;
    let strata = stratum_reports(&problem)?;
    let schon = schon_strata(&strata, primes)?;
    let lhs = strata.iter().fold(MotClass::zero(), |acc, s| &acc + &s.class);

    let mut action_mismatches = Vec::new();
    for s in &strata {
        let wa: Vec<i64> = s.subset.iter().map(|&i| weights[i]).collect();
        let predicted = MuAction::new(d as u64, wa);
        for t in &s.terms {
            let expected = InitialForm { action: predicted.clone(), ..t.initial.clone() }.class()?;
            if expected != t.class {
                action_mismatches.push(format!(
                    "stratum {:?} at {:?}: {} versus predicted {}",
                    s.subset,
                    t.cell.sample().iter().map(crate::rat::fmt_rat).collect::<Vec<_>>(),
                    t.class,
                    expected
                ));
            }
        }
    }
    let one = int(1);
    let primes = compare(&lhs, primes, |q| Ok(count_affine_ff(f, &one, q)?.into()))?;
    Ok(DmReport { lhs, primes, schon, action_mismatches, strata })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsReport {
    pub lhs: MotClass,
    pub rhs: MotClass,
    pub symbolic_equal: bool,
    pub primes: Vec<PrimeCheck>,
    pub schon: Vec<(Vec<usize>, SchonReport)>,
}

impl KsReport {
    pub fn verified(&self) -> bool {
        self.primes.iter().all(|p| p.equal)
    }
}

/// Compares the volume of `{f = t}` with `val(x) ≥ 0, val(y) > 0, val(z) > 0`
/// against `𝕃^{d1}` times the volume of `{f(0,0,z) = t}` with `val(z) > 0`.
/// Variables are ordered `x` (d1), `y` (d2), `z` (dz); `weights` covers all
/// of them and must be positive, negative and zero on the three blocks.
pub fn verify_integral_identity(
    f: &LaurentPoly,
    d1: usize,
    d2: usize,
    dz: usize,
    weights: &[i64],
    primes: &[u64],
) -> Result<KsReport> {
    let n = d1 + d2 + dz;
    if f.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.nvars() });
    }
    check_affine(f)?;
    let ok = weights.len() == n
        && weights[..d1].iter().all(|w| *w > 0)
        && weights[d1..d1 + d2].iter().all(|w| *w < 0)
        && weights[d1 + d2..].iter().all(|w| *w == 0);
    if !ok {
        return Err(Error::Invalid("weights must be positive on x, negative on y and zero on z".into()));
    }
    let degs = weighted_degrees(f, weights)?;
    if let Some(k) = degs.iter().find(|k| **k != 0) {
        return Err(Error::NotEquivariant(format!("{f} has a term of weight {k}")));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::Invalid(format!("{f} does not vanish at the origin")));
    }
    let mut pattern = vec![Orthant::Closed; d1];
    pattern.extend(vec![Orthant::Open; d2 + dz]);
    let lhs_p = StratifiedAffineProblem::level(f, pattern)?;
    let z: Vec<usize> = (d1 + d2..n).collect();
    let rhs_p = StratifiedAffineProblem::level(&f.restrict(&z)?, vec![Orthant::Open; dz])?;
    let lhs_s = stratum_reports(&lhs_p)?;
    let rhs_s = stratum_reports(&rhs_p)?;
    let mut schon = schon_strata(&lhs_s, primes)?;
    schon.extend(schon_strata(&rhs_s, primes)?.into_iter().map(|(a, r)| (a.iter().map(|i| i + d1 + d2).collect(), r)));
    let lhs = lhs_s.iter().fold(MotClass::zero(), |acc, s| &acc + &s.class);
    let rhs = &MotClass::l_pow(d1 as u32) * &rhs_s.iter().fold(MotClass::zero(), |acc, s| &acc + &s.class);
    let primes = compare(&lhs, primes, |q| realize_auto(&rhs, q))?;
    Ok(KsReport { symbolic_equal: lhs == rhs, lhs, rhs, primes, schon })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    /// Number of sample comparisons made.
    pub checked: usize,
    pub failures: Vec<String>,
    /// Checks that were not applicable to the input.
    pub skipped: Vec<String>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples the per-fiber volume of `{g = 0}` at the cells of its complex and
/// compares it along lines `v + s·w` (when `g` is homogeneous for the weight
/// `w`) and along rays `λ·v` (when `g` does not involve `t`).
pub fn invariance_checks(g: &TPoly, direction: &[i64]) -> Result<InvarianceReport> {
    let n = g.nvars();
    if direction.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: direction.len() });
    }
    let complex = build_complex(g)?;
    let mut report = InvarianceReport::default();
    let degs: Vec<i64> = g.terms().keys().map(|m| m.iter().zip(direction).map(|(a, b)| a * b).sum()).collect();
    let torus = degs.windows(2).all(|p| p[0] == p[1]);
    if !torus {
        report.skipped.push(format!("{g} is not homogeneous for the weight {direction:?}; line check skipped"));
    }
    let fan = g.is_t_free();
    if !fan {
        report.skipped.push(format!("{g} involves t; cone check skipped"));
    }
    let w: Vec<Rat> = direction.iter().map(|x| int(*x)).collect();
    let moved = |v: &[Rat], s: &Rat| -> Vec<Rat> { v.iter().zip(&w).map(|(a, b)| a + s * b).collect() };
    let scaled = |v: &[Rat], l: &Rat| -> Vec<Rat> { v.iter().map(|a| a * l).collect() };
    for cell in &complex.cells {
        let v = cell.sample();
        let base = fiber_volume(g, v)?;
        let mut probes: Vec<(String, Vec<Rat>)> = vec![("second sample".into(), cell.cell.alternate_sample())];
        if torus {
            for s in [int(1), rat(-2, 3)] {
                probes.push((format!("shift by {}·w", crate::rat::fmt_rat(&s)), moved(v, &s)));
            }
        }
        if fan {
            for l in [int(2), rat(1, 3)] {
                probes.push((format!("scale by {}", crate::rat::fmt_rat(&l)), scaled(v, &l)));
            }
        }
        for (what, p) in probes {
            report.checked += 1;
            let other = fiber_volume(g, &p)?;
            if other != base {
                let pt: Vec<String> = v.iter().map(crate::rat::fmt_rat).collect();
                report.failures.push(format!("at ({}) {what}: {base} versus {other}", pt.join(", ")));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: usize, s: &str) -> LaurentPoly {
        LaurentPoly::parse(n, s).unwrap()
    }

    fn tp(n: usize, s: &str) -> TPoly {
        TPoly::parse(n, s).unwrap()
    }

    #[test]
    fn schon_examples() {
        assert!(check_schon_ff(&tp(2, "x + y + 1"), &[5, 7, 11]).unwrap().passed());
        let r = check_schon_ff(&tp(1, "x^2 + 2*x + 1"), &[5]).unwrap();
        assert!(!r.passed());
        assert_eq!(r.cells.iter().find(|c| !c.failures.is_empty()).unwrap().failures[0].1, vec![4]);
        let r = check_schon_ff(&tp(2, "x*y"), &[5]).unwrap();
        assert!(r.passed() && r.cells.is_empty());
    }

    #[test]
    fn dm_examples() {
        let r = verify_dm(&lp(2, "x^2 + y^2"), &[1, 1], 2, &[5]).unwrap();
        assert_eq!((r.primes[0].lhs_count, r.primes[0].rhs_count), (4, 4));
        assert!(r.verified());
        let r = verify_dm(&lp(2, "x*y"), &[1, 1], 2, &[7]).unwrap();
        assert_eq!((r.primes[0].lhs_count, r.primes[0].rhs_count), (6, 6));
        assert!(matches!(verify_dm(&lp(2, "x^2*y"), &[1, 1], 2, &[5]), Err(Error::NotWeightedHomogeneous(_))));
        assert!(verify_dm(&lp(2, "x^2*y"), &[1, 1], 3, &[5, 7]).unwrap().verified());
        let r = verify_dm(&lp(2, "x^2 + y^3"), &[3, 2], 6, &[5, 7, 11]).unwrap();
        assert!(r.verified(), "{r:?}");
    }

    #[test]
    fn ks_examples() {
        let r = verify_integral_identity(&lp(3, "x*y + z^2"), 1, 1, 1, &[1, -1, 0], &[5, 7, 11]).unwrap();
        for p in &r.primes {
            assert_eq!(p.lhs_count, 2 * p.q as i128);
            assert!(p.equal);
        }
        let r = verify_integral_identity(&lp(2, "x*y"), 1, 1, 0, &[1, -1], &[5, 7]).unwrap();
        assert!(r.lhs.is_zero() && r.rhs.is_zero());
        assert!(matches!(
            verify_integral_identity(&lp(2, "x^2*y"), 1, 1, 0, &[1, -1], &[5]),
            Err(Error::NotEquivariant(_))
        ));
    }

    #[test]
    fn invariance() {
        let r = invariance_checks(&tp(2, "x*y - t"), &[1, -1]).unwrap();
        assert!(r.passed() && r.checked > 0, "{r:?}");
        let r = invariance_checks(&tp(2, "x^2 + y^2 - 1"), &[1, 1]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.skipped.len(), 1);
        let r = invariance_checks(&tp(2, "x + y^2 - t"), &[1, 1]).unwrap();
        assert_eq!(r.skipped.len(), 2);
    }
}
