use std::fmt::Debug;

use rayon::prelude::*;

use super::chi_prime_cell;
use crate::error::Result;
use crate::polyhedra::{
    cell_geometry, decompose_labelled, image_cell, simplify_cell, AffineMap, BasicCell, Constraint, ConstructibleSet,
    RelOpenCell,
};
use crate::polyhedra::types_check_dim as check_dim;
use crate::rat::Rat;

/// A commutative ring with exact equality, used as the value ring of
/// constructible functions.
pub trait ValueRing: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, k: i64) -> Self;
}

impl ValueRing for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: i64) -> Self {
        self * k
    }
}

/// `Σ value · 1_set` over ℚⁿ; pieces may overlap, values add up.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructibleFunction<V> {
    pub ambient_dim: usize,
    pub pieces: Vec<(ConstructibleSet, V)>,
}

impl<V: ValueRing> ConstructibleFunction<V> {
    pub fn new(ambient_dim: usize, pieces: Vec<(ConstructibleSet, V)>) -> Result<Self> {
        for (s, _) in &pieces {
            check_dim(ambient_dim, s.ambient_dim)?;
        }
        Ok(Self { ambient_dim, pieces })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, pieces: Vec::new() }
    }

    pub fn indicator(s: ConstructibleSet, value: V) -> Self {
        Self { ambient_dim: s.ambient_dim, pieces: vec![(s, value)] }
    }

    pub fn value_at(&self, point: &[Rat]) -> V {
        self.pieces
            .iter()
            .filter(|(s, _)| s.contains(point))
            .fold(V::zero(), |acc, (_, v)| acc.add(v))
    }

    /// Disjoint relatively open cells with the (nonzero) value on each.
    pub fn refine(&self) -> Vec<(RelOpenCell, V)> {
        let mut cells: Vec<BasicCell> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        for (i, (s, _)) in self.pieces.iter().enumerate() {
            for c in &s.cells {
                cells.push(c.clone());
                owner.push(i);
            }
        }
        decompose_labelled(self.ambient_dim, &cells, &[], false)
            .into_iter()
            .filter_map(|(cell, labels)| {
                let mut pieces: Vec<usize> = labels.iter().map(|&l| owner[l]).collect();
                pieces.dedup();
                let value = pieces
                    .iter()
                    .fold(V::zero(), |acc, &p| acc.add(&self.pieces[p].1));
                (!value.is_zero()).then_some((cell, value))
            })
            .collect()
    }

    /// Relatively open cells `σ` with coefficients `a_σ` such that
    /// `φ = Σ a_σ·1_σ`. The cells may overlap: each union is expanded by
    /// inclusion–exclusion and each basic cell is split into its own faces
    /// only, which keeps the list far shorter than a common refinement.
    pub fn signed_cells(&self) -> Vec<(RelOpenCell, V)> {
        const MAX_EXPANDED: usize = 8;
        let mut out = Vec::new();
        for (set, value) in &self.pieces {
            let k = set.cells.len();
            if k > MAX_EXPANDED {
                let single = Self::indicator(set.clone(), value.clone());
                out.extend(single.refine());
                continue;
            }
            let parts: Vec<(BasicCell, V)> = (1u32..1 << k)
                .map(|mask| {
                    let cell = (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .fold(BasicCell::universe(self.ambient_dim), |acc, i| acc.meet(&set.cells[i]));
                    let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
                    (cell, value.scale(sign))
                })
                .collect();
            out.extend(parts.into_par_iter().flat_map_iter(|(cell, v)| {
                decompose_labelled(self.ambient_dim, &[cell], &[], false)
                    .into_iter()
                    .map(move |(c, _)| (c, v.clone()))
            }).collect::<Vec<_>>());
        }
        out
    }

    /// Common refinement with disjoint supports, one piece per distinct
    /// nonzero value.
    pub fn normalize(&self) -> Self {
        Self { ambient_dim: self.ambient_dim, pieces: group(self.ambient_dim, self.refine()) }
    }

    /// `∫ φ dχ′ = Σ value · χ′(piece)`.
    pub fn integrate(&self) -> V {
        integrate_cells(&self.refine())
    }

    /// `w ↦ ∫_{f⁻¹(w)} φ dχ′` as a constructible function on the target.
    pub fn pushforward(&self, f: &AffineMap) -> Result<Self> {
        let (_, target) = self.pushforward_cells(f)?;
        Ok(Self { ambient_dim: f.target_dim(), pieces: group(f.target_dim(), target) })
    }

    /// Target cells with the fiber integral at each cell's sample, together
    /// with the source cells used (see [`Self::signed_cells`]).
    ///
    /// The fiber of a relatively open cell `σ` over `w ∈ f(σ)` has the same
    /// dimension and recession cone for every such `w`, so cells whose fiber
    /// has `χ′ = 0` cannot contribute and are left out of the target
    /// arrangement. [`Self::fubini_check`] re-checks this at second sample
    /// points using every source cell.
    pub fn pushforward_cells(&self, f: &AffineMap) -> Result<(Vec<(RelOpenCell, V)>, Vec<(RelOpenCell, V)>)> {
        let (source, _, target) = self.pushforward_parts(f)?;
        Ok((source, target))
    }

    #[allow(clippy::type_complexity)]
    fn pushforward_parts(
        &self,
        f: &AffineMap,
    ) -> Result<(Vec<(RelOpenCell, V)>, Vec<BasicCell>, Vec<(RelOpenCell, V)>)> {
        check_dim(f.source_dim(), self.ambient_dim)?;
        let source = self.signed_cells();
        let images: Vec<BasicCell> = source.par_iter().map(|(c, _)| image_of(c, f)).collect();
        let contributing: Vec<usize> = (0..source.len())
            .into_par_iter()
            .filter(|&i| {
                let w = f.apply(&source[i].0.sample);
                !fiber_integral(&source, &[i], f, &w).is_zero()
            })
            .collect();
        let contributing_images: Vec<BasicCell> = contributing.iter().map(|&i| images[i].clone()).collect();
        let target: Vec<(RelOpenCell, V)> = decompose_labelled(f.target_dim(), &contributing_images, &[], false)
            .into_par_iter()
            .filter_map(|(cell, labels)| {
                let which: Vec<usize> = labels.iter().map(|&l| contributing[l]).collect();
                let value = fiber_integral(&source, &which, f, &cell.sample);
                (!value.is_zero()).then_some((cell, value))
            })
            .collect();
        Ok((source, images, target))
    }

    /// Both sides of `∫φ = ∫f_*φ`, and whether every value of `f_*φ`
    /// recomputed at a second sample point of its cell, summing over all
    /// source cells whose image contains that point, agrees.
    pub fn fubini_check(&self, f: &AffineMap) -> Result<FubiniCheck<V>> {
        let (source, images, target) = self.pushforward_parts(f)?;
        let stable = target.par_iter().all(|(cell, value)| {
            let w = cell.alternate_sample();
            let over: Vec<usize> = (0..source.len()).filter(|&i| images[i].contains(&w)).collect();
            *value == fiber_integral(&source, &over, f, &w)
        });
        Ok(FubiniCheck { source_integral: self.integrate(), target_integral: integrate_cells(&target), stable })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FubiniCheck<V> {
    pub source_integral: V,
    pub target_integral: V,
    pub stable: bool,
}

fn image_of(cell: &RelOpenCell, f: &AffineMap) -> BasicCell {
    let image = image_cell(&simplify_cell(&cell.carrier), f).expect("image of a nonempty cell is nonempty");
    simplify_cell(&image)
}

fn integrate_cells<V: ValueRing>(cells: &[(RelOpenCell, V)]) -> V {
    cells
        .iter()
        .fold(V::zero(), |acc, (c, v)| acc.add(&v.scale(chi_prime_cell(c))))
}

/// `∫_{f⁻¹(w)} φ dχ′` over the listed source cells.
fn fiber_integral<V: ValueRing>(source: &[(RelOpenCell, V)], which: &[usize], f: &AffineMap, w: &[Rat]) -> V {
    let mut total = V::zero();
    for &i in which {
        let (cell, value) = &source[i];
        let mut fiber = cell.carrier.clone();
        for (comp, wi) in f.components().into_iter().zip(w) {
            let mut form = comp;
            form.constant -= wi;
            fiber.constraints.push(Constraint::eq(form));
        }
        if let Ok(g) = cell_geometry(&fiber) {
            total = total.add(&value.scale(chi_prime_cell(&g)));
        }
    }
    total
}

fn group<V: ValueRing>(n: usize, cells: Vec<(RelOpenCell, V)>) -> Vec<(ConstructibleSet, V)> {
    let mut out: Vec<(ConstructibleSet, V)> = Vec::new();
    for (cell, value) in cells {
        match out.iter_mut().find(|(_, v)| *v == value) {
            Some((s, _)) => s.cells.push(cell.carrier),
            None => out.push((ConstructibleSet { ambient_dim: n, cells: vec![cell.carrier] }, value)),
        }
    }
    out
}
