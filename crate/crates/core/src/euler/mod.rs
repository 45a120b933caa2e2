//! The bounded Euler characteristic χ′ and integration of constructible functions.

mod function;

pub use function::{ConstructibleFunction, FubiniCheck, ValueRing};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyhedra::{decompose, AffineForm, Constraint, ConstructibleSet, RelOpenCell};
use crate::rat::{lcm_of_denominators, Rat};

/// χ′ of a relatively open cell: `(−1)^(dim − lineality)` when the recession
/// cone of its closure is a linear space, 0 otherwise.
pub fn chi_prime_cell(c: &RelOpenCell) -> i64 {
    if c.recession_is_linear {
        sign_pow(c.dim - c.lineality_dim)
    } else {
        0
    }
}

fn sign_pow(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct ChiReport {
    pub value: i64,
    pub per_cell: Vec<(RelOpenCell, i64)>,
}

pub fn chi_prime(s: &ConstructibleSet) -> ChiReport {
    let per_cell: Vec<(RelOpenCell, i64)> = decompose(s)
        .into_iter()
        .map(|c| {
            let v = chi_prime_cell(&c);
            (c, v)
        })
        .collect();
    ChiReport { value: per_cell.iter().map(|(_, v)| v).sum(), per_cell }
}

/// Radius beyond which the combinatorics of `s ∩ [−r, r]ⁿ` no longer change.
///
/// Critical radii solve `n + 1` linear equations in `(x, r)` taken from the
/// forms of `s` and the box faces, so Hadamard's inequality bounds them by
/// `((n+1)·M)^(n+1)` with `M` the largest integer entry of the scaled forms.
/// The smaller `1 + max |constant / coefficient|` is used when it already
/// exceeds that.
pub fn box_radius(s: &ConstructibleSet) -> BigInt {
    let n = s.ambient_dim;
    let mut ratio = Rat::zero();
    let mut m = BigInt::one();
    for c in s.cells.iter().flat_map(|c| &c.constraints) {
        let f = &c.form;
        for a in f.coeffs.iter().filter(|a| !a.is_zero()) {
            let r = (&f.constant / a).abs();
            if r > ratio {
                ratio = r;
            }
        }
        let l = lcm_of_denominators(f.coeffs.iter().chain(std::iter::once(&f.constant)));
        for v in f.coeffs.iter().chain(std::iter::once(&f.constant)) {
            let x = (v * Rat::from_integer(l.clone())).to_integer().abs();
            if x > m {
                m = x;
            }
        }
    }
    let hadamard = num_traits::pow(BigInt::from(n as u64 + 1) * m, n + 1);
    let simple = ratio.ceil().to_integer();
    BigInt::one() + simple.max(hadamard)
}

/// χ_c of `s ∩ [−r, r]ⁿ`.
pub fn chi_truncated(s: &ConstructibleSet, r: &BigInt) -> i64 {
    let n = s.ambient_dim;
    let r = Rat::from_integer(r.clone());
    let mut bx = Vec::with_capacity(2 * n);
    for i in 0..n {
        bx.push(Constraint::ge(AffineForm::coordinate(n, i).neg().add(&constant(n, &r))));
        bx.push(Constraint::ge(AffineForm::coordinate(n, i).add(&constant(n, &r))));
    }
    let cells = s
        .cells
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.constraints.extend(bx.iter().cloned());
            c
        })
        .collect();
    let truncated = ConstructibleSet { ambient_dim: n, cells };
    decompose(&truncated)
        .par_iter()
        .map(|c| {
            debug_assert!(c.bounded);
            sign_pow(c.dim)
        })
        .sum()
}

fn constant(n: usize, r: &Rat) -> AffineForm {
    AffineForm::new(vec![Rat::zero(); n], r.clone())
}

/// χ′ by its definition: the stabilised compactly supported Euler
/// characteristic of box truncations at radii `r₀`, `2r₀`, `4r₀`.
pub fn chi_box_oracle(s: &ConstructibleSet) -> Result<i64> {
    let r0 = box_radius(s);
    let values: Vec<i64> = [1u32, 2, 4]
        .par_iter()
        .map(|k| chi_truncated(s, &(&r0 * BigInt::from(*k))))
        .collect();
    if values.iter().all(|v| *v == values[0]) {
        Ok(values[0])
    } else {
        Err(Error::NotStabilized(values))
    }
}
