//! The equivariant Grothendieck ring, symbolically.
//!
//! Classes are integer polynomials in `𝕃` and generator symbols. The ring
//! only knows two rewrites, [`torus_class`] and [`split_torus_factor`]; any
//! other identity is checked through [`realize_count`].

mod action;
mod class;
mod count;
mod laurent;
pub(crate) mod lattice;
mod symbol;

use std::collections::BTreeMap;

use num_integer::Integer;

pub use action::MuAction;
pub use class::{Monomial, MotClass};
pub use count::{count_affine_ff, count_hypersurface_ff, is_prime, torus_singular_point};
pub use laurent::LaurentPoly;
pub(crate) use laurent::write_poly;
pub use symbol::{ClassSymbol, SymbolKind};

use crate::error::{Error, Result};

/// `(𝕃 - 1)ⁿ`, the class of an `n`-dimensional torus with any diagonal action.
pub fn torus_class(n: usize) -> MotClass {
    let l_minus_one = &MotClass::lefschetz() - &MotClass::one();
    l_minus_one.pow(n as u32)
}

/// Splits off the torus directions along which a hypersurface is invariant.
///
/// With `r` the rank of the lattice spanned by differences of exponents of
/// `h`, returns `[h' ⊂ 𝔾_mʳ]·(𝕃-1)^{n-r}` where `h'` is `h` in monomial
/// coordinates adapted to the saturation of that lattice.
pub fn split_torus_factor(sym: &ClassSymbol) -> Result<MotClass> {
    let h = sym.poly().ok_or_else(|| Error::Invalid(format!("{sym} is not a hypersurface symbol")))?;
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = h.nvars();
    let exps: Vec<Vec<i128>> = h.terms().keys().map(|e| e.iter().map(|&k| k.into()).collect()).collect();
    let diffs: Vec<Vec<i128>> = exps[1..].iter().map(|e| e.iter().zip(&exps[0]).map(|(a, b)| a - b).collect()).collect();
    let basis = lattice::saturation(&diffs, n);
    let r = basis.len();
    if r == 0 {
        // a single monomial has no zeros on the torus
        return Ok(MotClass::zero());
    }
    if r == n {
        return Ok(MotClass::symbol(ClassSymbol::hypersurface(h, sym.action.clone())?));
    }
    let terms = exps.iter().zip(h.terms().values()).map(|(e, c)| {
        let d: Vec<i128> = e.iter().zip(&exps[0]).map(|(a, b)| a - b).collect();
        let u = lattice::coordinates(&basis, &d).expect("difference lies in the saturation");
        (u.into_iter().map(|k| k as i64).collect(), c.clone())
    });
    let h2 = LaurentPoly::new(r, terms)?;
    let action = if sym.action.is_trivial() {
        MuAction::trivial(r)
    } else {
        let d = sym.action.order() as i128;
        let v = sym.action.weights();
        let w = basis
            .iter()
            .map(|b| (b.iter().zip(v).map(|(x, y)| x * i128::from(*y)).sum::<i128>().rem_euclid(d)) as i64)
            .collect();
        MuAction::new(sym.action.order(), w)
    };
    let s = ClassSymbol::hypersurface(&h2, action)?;
    Ok(&MotClass::symbol(s) * &torus_class(n - r))
}

/// Point counts of symbols over `𝔽_q`, with `𝕃 ↦ q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    pub q: u64,
    pub counts: BTreeMap<ClassSymbol, i128>,
}

impl SymbolTable {
    pub fn new(q: u64) -> Self {
        Self { q, counts: BTreeMap::new() }
    }

    pub fn insert(&mut self, s: ClassSymbol, count: i128) {
        self.counts.insert(s, count);
    }

    /// Fills in every symbol of `c` that has a computable count: hypersurfaces
    /// by enumeration, `mu_N` as `gcd(N, q - 1)`.
    pub fn fill(&mut self, c: &MotClass) -> Result<()> {
        for s in c.symbols() {
            if self.counts.contains_key(s) {
                continue;
            }
            let count = match &s.kind {
                SymbolKind::Hypersurface(h) => i128::from(count_hypersurface_ff(h, self.q)?),
                SymbolKind::Opaque(name) => match name.strip_prefix("mu_").and_then(|k| k.parse::<u64>().ok()) {
                    Some(k) if k > 0 => i128::from(k.gcd(&(self.q - 1))),
                    _ => continue,
                },
            };
            self.counts.insert(s.clone(), count);
        }
        Ok(())
    }

    pub fn filled_for(c: &MotClass, q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let mut t = Self::new(q);
        t.fill(c)?;
        Ok(t)
    }
}

/// Evaluates `c` under `𝕃 ↦ q` and the symbol counts of `table`.
pub fn realize_count(c: &MotClass, q: u64, table: &SymbolTable) -> Result<i128> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if table.q != q {
        return Err(Error::Invalid(format!("symbol table is for q={}, not {q}", table.q)));
    }
    let mut total: i128 = 0;
    for (m, coeff) in c.terms() {
        let mut t = i128::from(*coeff) * i128::from(q).pow(m.lexp);
        for s in &m.symbols {
            if let Some(h) = s.poly() {
                for c in h.terms().values() {
                    count::reduce(c, q)?;
                }
            }
            t *= table.counts.get(s).ok_or_else(|| Error::MissingSymbol(s.to_string()))?;
        }
        total += t;
    }
    Ok(total)
}

/// Realization at `q` with an automatically filled table.
pub fn realize_auto(c: &MotClass, q: u64) -> Result<i128> {
    realize_count(c, q, &SymbolTable::filled_for(c, q)?)
}
