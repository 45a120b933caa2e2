use rayon::prelude::*;

use super::fm::is_feasible;
use super::linalg::rank;
use super::types::{check_dim, BasicCell, Constraint, ConstructibleSet, Relation};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
    /// Complement of the first operand; the second is ignored.
    Complement,
}

/// Removes trivially true constant constraints and exact duplicates;
/// `None` when a constant constraint fails.
pub(crate) fn tidy(cell: &BasicCell) -> Option<BasicCell> {
    let mut constraints: Vec<Constraint> = Vec::with_capacity(cell.constraints.len());
    for c in &cell.constraints {
        if c.form.is_constant() {
            if !c.rel.holds(&c.form.constant) {
                return None;
            }
            continue;
        }
        if !constraints.contains(c) {
            constraints.push(c.clone());
        }
    }
    Some(BasicCell { ambient_dim: cell.ambient_dim, constraints })
}

/// Drops constraints implied by the others: dependent equalities and
/// inequalities whose negation contradicts the rest. The cell must be nonempty.
pub fn simplify_cell(cell: &BasicCell) -> BasicCell {
    let n = cell.ambient_dim;
    let Some(cell) = tidy(cell) else {
        return cell.clone();
    };
    let mut eq_rows: Vec<Vec<crate::rat::Rat>> = Vec::new();
    let mut kept: Vec<Constraint> = Vec::new();
    let mut ineqs: Vec<Constraint> = Vec::new();
    for c in cell.constraints {
        if c.rel == Relation::Eq {
            let mut row = c.form.coeffs.clone();
            row.push(c.form.constant.clone());
            eq_rows.push(row);
            if rank(&eq_rows) == eq_rows.len() {
                kept.push(c);
            } else {
                eq_rows.pop();
            }
        } else {
            ineqs.push(c);
        }
    }
    let mut i = 0;
    while i < ineqs.len() {
        let mut probe: Vec<Constraint> = kept.clone();
        probe.extend(ineqs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()));
        let negated = match ineqs[i].rel {
            Relation::Gt => Constraint::ge(ineqs[i].form.neg()),
            _ => Constraint::gt(ineqs[i].form.neg()),
        };
        probe.push(negated);
        if is_feasible(n, &probe) {
            i += 1;
        } else {
            ineqs.remove(i);
        }
    }
    kept.extend(ineqs);
    BasicCell { ambient_dim: n, constraints: kept }
}

fn prune(n: usize, cells: Vec<BasicCell>) -> ConstructibleSet {
    let cells = cells
        .into_par_iter()
        .filter_map(|c| tidy(&c))
        .filter(|c| !super::is_empty(c))
        .collect();
    ConstructibleSet { ambient_dim: n, cells }
}

pub fn boolean_op(a: &ConstructibleSet, b: &ConstructibleSet, op: BoolOp) -> Result<ConstructibleSet> {
    if op != BoolOp::Complement {
        check_dim(a.ambient_dim, b.ambient_dim)?;
    }
    Ok(match op {
        BoolOp::Union => union(a, b),
        BoolOp::Intersect => intersect(a, b),
        BoolOp::Difference => difference(a, b),
        BoolOp::Complement => complement(a),
    })
}

pub fn union(a: &ConstructibleSet, b: &ConstructibleSet) -> ConstructibleSet {
    let cells = a.cells.iter().chain(&b.cells).cloned().collect();
    prune(a.ambient_dim, cells)
}

pub fn intersect(a: &ConstructibleSet, b: &ConstructibleSet) -> ConstructibleSet {
    let mut cells = Vec::with_capacity(a.cells.len() * b.cells.len());
    for x in &a.cells {
        for y in &b.cells {
            cells.push(x.meet(y));
        }
    }
    prune(a.ambient_dim, cells)
}

/// `cell ∖ other` as disjoint cells `cell ∧ c₁ ∧ … ∧ c_{i−1} ∧ ¬c_i`.
fn cell_minus(cell: &BasicCell, other: &BasicCell) -> Vec<BasicCell> {
    let mut out = Vec::new();
    let mut prefix = cell.clone();
    for c in &other.constraints {
        for neg in c.complement() {
            let piece = prefix.with(neg);
            if let Some(piece) = tidy(&piece) {
                if !super::is_empty(&piece) {
                    out.push(piece);
                }
            }
        }
        prefix.constraints.push(c.clone());
        match tidy(&prefix) {
            Some(p) if !super::is_empty(&p) => prefix = p,
            _ => return out,
        }
    }
    out
}

pub fn difference(a: &ConstructibleSet, b: &ConstructibleSet) -> ConstructibleSet {
    let cells = a
        .cells
        .par_iter()
        .flat_map_iter(|cell| {
            let mut pieces = match tidy(cell) {
                Some(c) if !super::is_empty(&c) => vec![c],
                _ => Vec::new(),
            };
            for other in &b.cells {
                if pieces.is_empty() {
                    break;
                }
                pieces = pieces.iter().flat_map(|p| cell_minus(p, other)).collect();
            }
            pieces
        })
        .collect();
    ConstructibleSet { ambient_dim: a.ambient_dim, cells }
}

pub fn complement(a: &ConstructibleSet) -> ConstructibleSet {
    difference(&ConstructibleSet::universe(a.ambient_dim), a)
}

pub fn is_empty_set(s: &ConstructibleSet) -> bool {
    s.cells.par_iter().all(super::is_empty)
}

pub fn is_subset(a: &ConstructibleSet, b: &ConstructibleSet) -> Result<bool> {
    check_dim(a.ambient_dim, b.ambient_dim)?;
    Ok(difference(a, b).cells.is_empty())
}

pub fn equals(a: &ConstructibleSet, b: &ConstructibleSet) -> Result<bool> {
    Ok(is_subset(a, b)? && is_subset(b, a)?)
}
