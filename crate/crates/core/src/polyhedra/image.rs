use num_traits::{One, Zero};
use rayon::prelude::*;

use super::boolean::{difference, is_empty_set, tidy};
use super::fm::project;
use super::types::{check_dim, AffineForm, AffineMap, BasicCell, Constraint, ConstructibleSet, Fan};
use crate::error::Result;
use crate::rat::Rat;

/// Image of one cell: in coordinates `(y, x)` impose `y = f(x)` and eliminate `x`.
pub(crate) fn image_cell(cell: &BasicCell, f: &AffineMap) -> Option<BasicCell> {
    let (m, n) = (f.target_dim(), f.source_dim());
    let mut cons = Vec::with_capacity(m + cell.constraints.len());
    for (i, comp) in f.components().iter().enumerate() {
        let mut form = comp.neg().embed(m + n, m);
        form.coeffs[i] = Rat::one();
        cons.push(Constraint::eq(form));
    }
    for c in &cell.constraints {
        cons.push(Constraint::new(c.form.embed(m + n, m), c.rel));
    }
    let xs: Vec<usize> = (m..m + n).collect();
    let projected = project(m + n, &cons, &xs)?;
    let constraints = projected
        .into_iter()
        .map(|c| {
            debug_assert!(c.form.coeffs[m..].iter().all(Zero::is_zero));
            let form = AffineForm::new(c.form.coeffs[..m].to_vec(), c.form.constant);
            Constraint::new(form, c.rel)
        })
        .collect();
    tidy(&BasicCell { ambient_dim: m, constraints })
}

pub fn image_affine(s: &ConstructibleSet, f: &AffineMap) -> Result<ConstructibleSet> {
    check_dim(f.source_dim(), s.ambient_dim)?;
    let cells = s.cells.par_iter().filter_map(|c| image_cell(c, f)).collect();
    Ok(ConstructibleSet { ambient_dim: f.target_dim(), cells })
}

pub fn preimage_affine(s: &ConstructibleSet, f: &AffineMap) -> Result<ConstructibleSet> {
    check_dim(f.target_dim(), s.ambient_dim)?;
    let cells = s
        .cells
        .iter()
        .filter_map(|cell| {
            let constraints = cell
                .constraints
                .iter()
                .map(|c| Constraint::new(c.form.pullback(f), c.rel))
                .collect();
            tidy(&BasicCell { ambient_dim: f.source_dim(), constraints })
        })
        .filter(|c| !super::is_empty(c))
        .collect();
    Ok(ConstructibleSet { ambient_dim: f.source_dim(), cells })
}

/// Does the support of `fan` contain its translate by `w`?
pub fn is_circle_compact(fan: &Fan, w: &[Rat]) -> Result<bool> {
    check_dim(fan.ambient_dim, w.len())?;
    let support = fan.support();
    let minus_w: Vec<Rat> = w.iter().map(|x| -x).collect();
    let shifted = preimage_affine(&support, &AffineMap::translation_by(&minus_w))?;
    Ok(is_empty_set(&difference(&shifted, &support)))
}
