//! Exact rational polyhedral geometry on constructible subsets of ℚⁿ.

mod boolean;
mod decompose;
mod fm;
mod geometry;
mod image;
pub mod json;
pub(crate) mod linalg;
mod types;

pub use boolean::{boolean_op, simplify_cell, complement, difference, equals, intersect, is_empty_set, is_subset, union, BoolOp};
pub use decompose::{arrangement_cells, decompose};
pub(crate) use decompose::decompose_labelled;
pub use fm::{find_point, is_feasible, project, SampleRule};
pub use geometry::{cell_geometry, RelOpenCell};
pub use image::{image_affine, is_circle_compact, preimage_affine};
pub(crate) use image::image_cell;
pub(crate) use types::check_dim as types_check_dim;
pub use types::{AffineForm, AffineMap, BasicCell, Constraint, ConstructibleSet, Fan, Relation};

/// True iff no rational point satisfies every constraint of `cell`.
pub fn is_empty(cell: &BasicCell) -> bool {
    !is_feasible(cell.ambient_dim, &cell.constraints)
}
