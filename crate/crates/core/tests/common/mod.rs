#![allow(dead_code, unused_imports)]

use tropmot::polyhedra::{AffineForm, BasicCell, Constraint, ConstructibleSet, Relation};
use tropmot::rat::{int, rat_vec};
use tropmot::Rat;

pub use Relation::{Eq as EQ, Ge as GE, Gt as GT};

/// `coeffs · x + k  rel  0`.
pub fn con(coeffs: &[i64], k: i64, rel: Relation) -> Constraint {
    Constraint::new(AffineForm::new(rat_vec(coeffs), int(k)), rel)
}

pub fn cell(n: usize, cons: &[(&[i64], i64, Relation)]) -> BasicCell {
    BasicCell::new(n, cons.iter().map(|(a, k, r)| con(a, *k, *r)).collect()).unwrap()
}

pub fn set(n: usize, cells: &[&[(&[i64], i64, Relation)]]) -> ConstructibleSet {
    ConstructibleSet::new(n, cells.iter().map(|c| cell(n, c)).collect()).unwrap()
}

pub fn q(num: i64, den: i64) -> Rat {
    tropmot::rat::rat(num, den)
}

pub fn pt(v: &[i64]) -> Vec<Rat> {
    rat_vec(v)
}
