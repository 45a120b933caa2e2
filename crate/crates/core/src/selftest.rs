//! Seeded random corpora and the randomized χ′ and Fubini suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::euler::{chi_box_oracle, chi_prime, ConstructibleFunction};
use crate::polyhedra::{is_empty, AffineForm, AffineMap, BasicCell, Constraint, ConstructibleSet, Relation};
use crate::rat::{int, Rat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn form<R: Rng>(rng: &mut R, n: usize, bound: i64) -> AffineForm {
    loop {
        let coeffs: Vec<Rat> = (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect();
        let f = AffineForm::new(coeffs, int(rng.gen_range(-bound..=bound)));
        if !f.is_constant() {
            return f;
        }
    }
}

/// A nonempty closed polyhedron: up to `max_cons` constraints `f ≥ 0`
/// (occasionally `f = 0`) with integer data in `[-bound, bound]`.
pub fn closed_polyhedron<R: Rng>(rng: &mut R, n: usize, max_cons: usize, bound: i64) -> BasicCell {
    loop {
        let k = rng.gen_range(1..=max_cons);
        let constraints = (0..k)
            .map(|_| {
                let rel = if rng.gen_bool(0.1) { Relation::Eq } else { Relation::Ge };
                Constraint::new(form(rng, n, bound), rel)
            })
            .collect();
        let cell = BasicCell { ambient_dim: n, constraints };
        if !is_empty(&cell) {
            return cell;
        }
    }
}

/// Up to three cells mixing `=`, `≥` and `>` constraints, at most
/// `max_cons` constraints in total.
pub fn constructible_set<R: Rng>(rng: &mut R, n: usize, max_cons: usize, bound: i64) -> ConstructibleSet {
    let k = rng.gen_range(1..=3usize);
    let mut budget = max_cons;
    let mut cells = Vec::new();
    for i in 0..k {
        let left = k - i;
        let take = rng.gen_range(0..=budget / left).min(budget);
        budget -= take;
        let constraints = (0..take)
            .map(|_| {
                let rel = match rng.gen_range(0..10) {
                    0 => Relation::Eq,
                    1..=5 => Relation::Ge,
                    _ => Relation::Gt,
                };
                Constraint::new(form(rng, n, bound), rel)
            })
            .collect();
        cells.push(BasicCell { ambient_dim: n, constraints });
    }
    ConstructibleSet { ambient_dim: n, cells }
}

pub fn affine_map<R: Rng>(rng: &mut R, source: usize, target: usize, bound: i64) -> AffineMap {
    let matrix = (0..target)
        .map(|_| (0..source).map(|_| int(rng.gen_range(-bound..=bound))).collect())
        .collect();
    let translation = (0..target).map(|_| int(rng.gen_range(-bound..=bound))).collect();
    AffineMap::new(source, matrix, translation).expect("consistent dimensions")
}

pub fn function<R: Rng>(rng: &mut R, n: usize, max_cons: usize) -> ConstructibleFunction<i64> {
    let k = rng.gen_range(1..=2usize);
    let pieces = (0..k)
        .map(|_| {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-3..=3);
            }
            (constructible_set(rng, n, max_cons, 3), v)
        })
        .collect();
    ConstructibleFunction { ambient_dim: n, pieces }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `chi_prime = 1` on random nonempty closed polyhedra and
/// `chi_prime = chi_box_oracle` on random constructible sets.
pub fn chi_suite(seed: u64, polyhedra: usize, sets: usize) -> SuiteReport {
    let mut r = rng(seed);
    let closed: Vec<BasicCell> = (0..polyhedra)
        .map(|_| {
            let n = r.gen_range(1..=4);
            closed_polyhedron(&mut r, n, 10, 5)
        })
        .collect();
    let mixed: Vec<ConstructibleSet> = (0..sets)
        .map(|_| {
            let n = r.gen_range(1..=4);
            constructible_set(&mut r, n, 12, 4)
        })
        .collect();
    let mut failures: Vec<String> = closed
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let v = chi_prime(&ConstructibleSet::from_cell(c.clone())).value;
            (v != 1).then(|| format!("closed polyhedron #{i}: chi' = {v}"))
        })
        .collect();
    failures.extend(mixed.par_iter().enumerate().filter_map(|(i, s)| {
        let v = chi_prime(s).value;
        match chi_box_oracle(s) {
            Ok(o) if o == v => None,
            Ok(o) => Some(format!("set #{i}: chi' = {v}, box oracle = {o}")),
            Err(e) => Some(format!("set #{i}: {e}")),
        }
    }).collect::<Vec<_>>());
    SuiteReport { cases: polyhedra + sets, failures }
}

/// `∫φ = ∫f_*φ` and sample stability of `f_*φ` on random pairs.
pub fn fubini_suite(seed: u64, pairs: usize) -> SuiteReport {
    let mut r = rng(seed);
    let cases: Vec<(ConstructibleFunction<i64>, AffineMap)> = (0..pairs)
        .map(|_| {
            let n = r.gen_range(1..=4);
            let m = r.gen_range(1..=n.min(3));
            (function(&mut r, n, 6), affine_map(&mut r, n, m, 2))
        })
        .collect();
    let failures = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, (phi, f))| match phi.fubini_check(f) {
            Ok(c) if c.source_integral != c.target_integral => Some(format!(
                "pair #{i}: integral {} but pushforward integral {}",
                c.source_integral, c.target_integral
            )),
            Ok(c) if !c.stable => Some(format!("pair #{i}: pushforward depends on the sample point")),
            Ok(_) => None,
            Err(e) => Some(format!("pair #{i}: {e}")),
        })
        .collect();
    SuiteReport { cases: pairs, failures }
}
