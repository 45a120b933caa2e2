use num_traits::Zero;

use super::fm::{find_point, is_feasible, SampleRule};
use super::linalg::rank;
use super::types::{AffineForm, BasicCell, Constraint, Relation};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A nonempty relatively open polyhedron with cached geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelOpenCell {
    /// Only `Eq` and `Gt` constraints.
    pub carrier: BasicCell,
    pub dim: usize,
    pub affine_hull: Vec<AffineForm>,
    pub lineality_dim: usize,
    pub recession_is_linear: bool,
    pub bounded: bool,
    pub sample: Vec<Rat>,
}

impl RelOpenCell {
    /// Builds the cell from a carrier that is known to be nonempty and to
    /// consist of equalities and strict inequalities only.
    pub(crate) fn from_open_carrier(carrier: BasicCell, sample: Vec<Rat>) -> RelOpenCell {
        debug_assert!(carrier.constraints.iter().all(|c| c.rel != Relation::Ge));
        debug_assert!(carrier.contains(&sample));
        let n = carrier.ambient_dim;
        let affine_hull: Vec<AffineForm> = carrier
            .constraints
            .iter()
            .filter(|c| c.rel == Relation::Eq)
            .map(|c| c.form.clone())
            .collect();
        let eq_rows: Vec<Vec<Rat>> = affine_hull.iter().map(|f| f.coeffs.clone()).collect();
        let all_rows: Vec<Vec<Rat>> = carrier.constraints.iter().map(|c| c.form.coeffs.clone()).collect();
        let dim = n - rank(&eq_rows);
        let lineality_dim = n - rank(&all_rows);
        let recession_is_linear = lineality_dim == dim || !has_proper_recession(&carrier);
        RelOpenCell {
            bounded: recession_is_linear && lineality_dim == 0,
            carrier,
            dim,
            affine_hull,
            lineality_dim,
            recession_is_linear,
            sample,
        }
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.carrier.contains(point)
    }

    pub fn ambient_dim(&self) -> usize {
        self.carrier.ambient_dim
    }

    /// Another point of the cell, chosen by a different deterministic rule.
    pub fn alternate_sample(&self) -> Vec<Rat> {
        find_point(self.ambient_dim(), &self.carrier.constraints, SampleRule::Alternate)
            .expect("relatively open cell is nonempty")
    }
}

/// Is there a recession direction `d` of the closure with some strict form
/// increasing, i.e. outside the lineality space?
fn has_proper_recession(carrier: &BasicCell) -> bool {
    let n = carrier.ambient_dim;
    let mut cons = Vec::new();
    let mut total = AffineForm::zero(n);
    for c in &carrier.constraints {
        let dir = AffineForm::new(c.form.coeffs.clone(), Rat::zero());
        match c.rel {
            Relation::Eq => cons.push(Constraint::eq(dir)),
            _ => {
                total = total.add(&dir);
                cons.push(Constraint::ge(dir));
            }
        }
    }
    cons.push(Constraint::gt(total));
    is_feasible(n, &cons)
}

/// Geometry of the relative interior of a nonempty cell.
pub fn cell_geometry(cell: &BasicCell) -> Result<RelOpenCell> {
    let n = cell.ambient_dim;
    if !is_feasible(n, &cell.constraints) {
        return Err(Error::EmptyCell);
    }
    let mut carrier = Vec::with_capacity(cell.constraints.len());
    for (i, c) in cell.constraints.iter().enumerate() {
        let rel = match c.rel {
            Relation::Ge => {
                let mut probe = cell.constraints.clone();
                probe[i] = Constraint::gt(c.form.clone());
                if is_feasible(n, &probe) {
                    Relation::Gt
                } else {
                    Relation::Eq
                }
            }
            r => r,
        };
        if c.form.is_constant() {
            continue;
        }
        carrier.push(Constraint::new(c.form.clone(), rel));
    }
    let carrier = BasicCell { ambient_dim: n, constraints: carrier };
    let sample = find_point(n, &carrier.constraints, SampleRule::Midpoint)
        .expect("relative interior of a nonempty polyhedron is nonempty");
    Ok(RelOpenCell::from_open_carrier(carrier, sample))
}
