//! Fourier–Motzkin elimination over integer rows with strict/closed bookkeeping.
//!
//! Rows are `a·x + c ≥ 0` (or `> 0` when strict) and `a·x + c = 0`, kept
//! primitive. Arithmetic runs in `i128` and falls back to `BigInt` on overflow.
//! Redundant rows are pruned with Chernikov's history rule.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::types::{AffineForm, Constraint, Relation};
use crate::rat::{lcm_of_denominators, Rat};

/// How a free coordinate is chosen during back-substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleRule {
    /// Midpoint of a bounded interval, one unit beyond a sole bound, 0 when free.
    Midpoint,
    /// A second deterministic choice: one third into an interval, two units
    /// beyond a sole bound, 1 when free.
    Alternate,
}

pub(crate) trait Scalar: Clone + Eq + Hash + Ord + Debug {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn sign(&self) -> i8;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_one(&self) -> bool;
}

impl Scalar for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128().filter(|v| *v != i128::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).filter(|v| *v != i128::MIN)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).filter(|v| *v != i128::MIN)
    }
    fn neg(&self) -> Option<Self> {
        Some(-*self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        *self / *o
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
}

impl Scalar for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

struct Overflow;

type Res<T> = std::result::Result<T, Overflow>;

fn ok<T>(v: Option<T>) -> Res<T> {
    v.ok_or(Overflow)
}

#[derive(Clone, Debug)]
struct Row<S> {
    a: Vec<S>,
    c: S,
    strict: bool,
    hist: Vec<u64>,
}

impl<S: Scalar> Row<S> {
    fn is_constant(&self) -> bool {
        self.a.iter().all(Scalar::is_zero)
    }

    /// For a constant inequality row: does it hold?
    fn constant_holds(&self) -> bool {
        match self.c.sign() {
            1 => true,
            0 => !self.strict,
            _ => false,
        }
    }

    fn normalize(&mut self) {
        let mut g = self.c.gcd(&self.c);
        for x in &self.a {
            if g.is_one() {
                return;
            }
            g = g.gcd(x);
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for x in &mut self.a {
            *x = x.div_exact(&g);
        }
        self.c = self.c.div_exact(&g);
    }

    /// `p·self + q·other`.
    fn lin(&self, p: &S, other: &Row<S>, q: &S) -> Res<Row<S>> {
        let mut a = Vec::with_capacity(self.a.len());
        for (x, y) in self.a.iter().zip(&other.a) {
            a.push(ok(ok(x.mul(p))?.add(&ok(y.mul(q))?))?);
        }
        let c = ok(ok(self.c.mul(p))?.add(&ok(other.c.mul(q))?))?;
        Ok(Row { a, c, strict: false, hist: Vec::new() })
    }

    fn popcount(&self) -> u32 {
        self.hist.iter().map(|w| w.count_ones()).sum()
    }
}

fn hist_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn hist_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Removes variable `var` from `row` using the equality `eq` (nonzero at `var`),
/// multiplying `row` by a positive factor only.
fn substitute<S: Scalar>(row: &Row<S>, eq: &Row<S>, var: usize) -> Res<Row<S>> {
    let rv = &row.a[var];
    if rv.is_zero() {
        return Ok(row.clone());
    }
    let ev = &eq.a[var];
    let g = rv.gcd(ev);
    let mut p = ev.div_exact(&g);
    let mut q = ok(rv.div_exact(&g).neg())?;
    if p.sign() < 0 {
        p = ok(p.neg())?;
        q = ok(q.neg())?;
    }
    let mut out = row.lin(&p, eq, &q)?;
    out.strict = row.strict;
    out.hist = row.hist.clone();
    out.normalize();
    Ok(out)
}

/// Positive combination eliminating `var` from a row with positive and a row
/// with negative coefficient there.
fn combine<S: Scalar>(pos: &Row<S>, neg: &Row<S>, var: usize) -> Res<Row<S>> {
    let a = &pos.a[var];
    let b = ok(neg.a[var].neg())?;
    let g = a.gcd(&b);
    let mut out = pos.lin(&b.div_exact(&g), neg, &a.div_exact(&g))?;
    out.strict = pos.strict || neg.strict;
    out.hist = hist_union(&pos.hist, &neg.hist);
    out.normalize();
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prune {
    /// Keeps only the tightest row per coefficient vector. Fast but can lose
    /// rows Chernikov's rule relies on, so results must be checked.
    Aggressive,
    /// Drops a row only when another with a smaller history implies it.
    Exact,
}

enum Step<S> {
    Pivot { var: usize, row: Row<S> },
    Bound { var: usize, rows: Vec<Row<S>> },
}

struct Elimination<S> {
    steps: Vec<Step<S>>,
    eqs: Vec<Row<S>>,
    ineqs: Vec<Row<S>>,
}

/// `None` inside `Ok` means the system was proven infeasible.
fn eliminate<S: Scalar>(
    eqs: Vec<Row<S>>,
    ineqs: Vec<Row<S>>,
    targets: &[usize],
    prune: Prune,
) -> Res<Option<Elimination<S>>> {
    let mut eqs = eqs;
    let mut ineqs = ineqs;
    let mut todo: Vec<usize> = targets.to_vec();
    let mut steps = Vec::new();

    // Equalities first: each one pinning a target variable removes it everywhere.
    let mut kept_eqs = Vec::new();
    while let Some(eq) = eqs.pop() {
        if eq.is_constant() {
            if !eq.c.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let pivot = todo.iter().copied().filter(|&v| !eq.a[v].is_zero()).max();
        let Some(var) = pivot else {
            kept_eqs.push(eq);
            continue;
        };
        for other in eqs.iter_mut().chain(kept_eqs.iter_mut()) {
            *other = substitute(other, &eq, var)?;
        }
        for row in ineqs.iter_mut() {
            *row = substitute(row, &eq, var)?;
        }
        todo.retain(|&v| v != var);
        steps.push(Step::Pivot { var, row: eq });
    }
    let mut eqs = Vec::new();
    for eq in kept_eqs {
        if eq.is_constant() {
            if !eq.c.is_zero() {
                return Ok(None);
            }
        } else {
            eqs.push(eq);
        }
    }

    let Some(mut rows) = prune_rows(ineqs, prune) else {
        return Ok(None);
    };
    let mut eliminated = 0u32;
    while !todo.is_empty() {
        let var = pick_variable(&rows, &todo);
        todo.retain(|&v| v != var);
        let (involved, rest): (Vec<_>, Vec<_>) =
            rows.into_iter().partition(|r| !r.a[var].is_zero());
        eliminated += 1;
        let mut next = rest;
        {
            let pos: Vec<&Row<S>> = involved.iter().filter(|r| r.a[var].sign() > 0).collect();
            let neg: Vec<&Row<S>> = involved.iter().filter(|r| r.a[var].sign() < 0).collect();
            for p in &pos {
                for q in &neg {
                    let u = hist_union(&p.hist, &q.hist);
                    let count: u32 = u.iter().map(|w| w.count_ones()).sum();
                    if count > eliminated + 1 {
                        continue;
                    }
                    next.push(combine(p, q, var)?);
                }
            }
        }
        steps.push(Step::Bound { var, rows: involved });
        match prune_rows(next, prune) {
            Some(r) => rows = r,
            None => return Ok(None),
        }
    }
    Ok(Some(Elimination { steps, eqs, ineqs: rows }))
}

fn pick_variable<S: Scalar>(rows: &[Row<S>], todo: &[usize]) -> usize {
    let mut best = (i64::MAX, 0usize);
    for &v in todo {
        let pos = rows.iter().filter(|r| r.a[v].sign() > 0).count() as i64;
        let neg = rows.iter().filter(|r| r.a[v].sign() < 0).count() as i64;
        let growth = pos * neg - pos - neg;
        if growth < best.0 || (growth == best.0 && v > best.1) {
            best = (growth, v);
        }
    }
    best.1
}

/// Drops satisfied constant rows and redundant duplicates; `None` on a
/// violated constant row.
fn prune_rows<S: Scalar>(rows: Vec<Row<S>>, prune: Prune) -> Option<Vec<Row<S>>> {
    let mut by_coeffs: HashMap<Vec<S>, Vec<usize>> = HashMap::new();
    let mut out: Vec<Option<Row<S>>> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.is_constant() {
            if !row.constant_holds() {
                return None;
            }
            continue;
        }
        let slot = by_coeffs.entry(row.a.clone()).or_default();
        match prune {
            Prune::Aggressive => {
                if let Some(&i) = slot.first() {
                    let old = out[i].as_mut().unwrap();
                    if implies(&row, old) && (!implies(old, &row) || row.popcount() < old.popcount()) {
                        *old = row;
                    }
                } else {
                    slot.push(out.len());
                    out.push(Some(row));
                }
            }
            Prune::Exact => {
                let dominated = slot.iter().any(|&i| {
                    let old = out[i].as_ref().unwrap();
                    implies(old, &row) && hist_subset(&old.hist, &row.hist)
                });
                if dominated {
                    continue;
                }
                slot.retain(|&i| {
                    let old = out[i].as_ref().unwrap();
                    let gone = implies(&row, old) && hist_subset(&row.hist, &old.hist);
                    if gone {
                        out[i] = None;
                    }
                    !gone
                });
                slot.push(out.len());
                out.push(Some(row));
            }
        }
    }
    Some(out.into_iter().flatten().collect())
}

/// Same coefficients assumed: does `a` imply `b`?
fn implies<S: Scalar>(a: &Row<S>, b: &Row<S>) -> bool {
    a.c < b.c || (a.c == b.c && (a.strict || !b.strict))
}

/// Integer rows from rational constraints; `(equalities, inequalities)`.
fn to_rows(n: usize, cons: &[Constraint]) -> (Vec<Row<BigInt>>, Vec<Row<BigInt>>) {
    let words = cons.len().div_ceil(64).max(1);
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for (i, con) in cons.iter().enumerate() {
        debug_assert_eq!(con.form.dim(), n);
        let values = || con.form.coeffs.iter().chain(std::iter::once(&con.form.constant));
        let integral = values().all(|r| One::is_one(r.denom()));
        let (a, c) = if integral {
            (con.form.coeffs.iter().map(|r| r.numer().clone()).collect(), con.form.constant.numer().clone())
        } else {
            let l = Rat::from_integer(lcm_of_denominators(values()));
            let scale = |r: &Rat| (r * &l).to_integer();
            (con.form.coeffs.iter().map(scale).collect(), scale(&con.form.constant))
        };
        let mut hist = vec![0u64; words];
        hist[i / 64] |= 1 << (i % 64);
        let row = Row { a, c, strict: con.rel == Relation::Gt, hist };
        if con.rel == Relation::Eq {
            eqs.push(row);
        } else {
            ineqs.push(row);
        }
    }
    (eqs, ineqs)
}

fn narrow<S: Scalar>(rows: &[Row<BigInt>]) -> Option<Vec<Row<S>>> {
    rows.iter()
        .map(|r| {
            let mut row = Row {
                a: r.a.iter().map(S::from_big).collect::<Option<Vec<_>>>()?,
                c: S::from_big(&r.c)?,
                strict: r.strict,
                hist: r.hist.clone(),
            };
            row.normalize();
            Some(row)
        })
        .collect()
}

fn eval_rest<S: Scalar>(row: &Row<S>, x: &[Option<Rat>], skip: usize) -> Rat {
    let mut acc = Rat::from_integer(row.c.to_big());
    for (j, a) in row.a.iter().enumerate() {
        if j == skip || a.is_zero() {
            continue;
        }
        let v = x[j].as_ref().expect("variable assigned before use");
        acc += Rat::from_integer(a.to_big()) * v;
    }
    acc
}

/// Back-substitution; `None` if the stored bounds are inconsistent.
fn back_substitute<S: Scalar>(n: usize, steps: &[Step<S>], rule: SampleRule) -> Option<Vec<Rat>> {
    let mut x: Vec<Option<Rat>> = vec![None; n];
    for step in steps.iter().rev() {
        match step {
            Step::Pivot { var, row } => {
                let rest = eval_rest(row, &x, *var);
                let a = Rat::from_integer(row.a[*var].to_big());
                x[*var] = Some(-rest / a);
            }
            Step::Bound { var, rows } => {
                let mut lo: Option<(Rat, bool)> = None;
                let mut hi: Option<(Rat, bool)> = None;
                for row in rows {
                    let rest = eval_rest(row, &x, *var);
                    let a = Rat::from_integer(row.a[*var].to_big());
                    let b = -rest / &a;
                    if a.is_positive() {
                        lo = Some(tighter(lo, b, row.strict, true));
                    } else {
                        hi = Some(tighter(hi, b, row.strict, false));
                    }
                }
                let (near, far) = match rule {
                    SampleRule::Midpoint => (Rat::new(1.into(), 2.into()), Rat::one()),
                    SampleRule::Alternate => (Rat::new(1.into(), 3.into()), Rat::from_integer(2.into())),
                };
                let value = match (lo, hi) {
                    (None, None) => match rule {
                        SampleRule::Midpoint => Rat::zero(),
                        SampleRule::Alternate => Rat::one(),
                    },
                    (Some((l, _)), None) => l + far,
                    (None, Some((h, _))) => h - far,
                    (Some((l, ls)), Some((h, hs))) => {
                        if l < h {
                            &l + (h - &l) * near
                        } else if l == h && !ls && !hs {
                            l
                        } else {
                            return None;
                        }
                    }
                };
                x[*var] = Some(value);
            }
        }
    }
    Some(
        x.into_iter()
            .map(|v| v.unwrap_or_else(|| match rule {
                SampleRule::Midpoint => Rat::zero(),
                SampleRule::Alternate => Rat::one(),
            }))
            .collect(),
    )
}

fn tighter(cur: Option<(Rat, bool)>, b: Rat, strict: bool, lower: bool) -> (Rat, bool) {
    match cur {
        None => (b, strict),
        Some((v, s)) => {
            if v == b {
                (v, s || strict)
            } else if (b > v) == lower {
                (b, strict)
            } else {
                (v, s)
            }
        }
    }
}

enum Attempt {
    Infeasible,
    Point(Vec<Rat>),
    /// Back-substitution hit inconsistent stored bounds.
    Failed,
}

fn attempt<S: Scalar>(
    n: usize,
    eqs: &[Row<BigInt>],
    ineqs: &[Row<BigInt>],
    rule: SampleRule,
    prune: Prune,
) -> Option<Attempt> {
    let eqs = narrow::<S>(eqs)?;
    let ineqs = narrow::<S>(ineqs)?;
    let all: Vec<usize> = (0..n).collect();
    match eliminate(eqs, ineqs, &all, prune) {
        Err(Overflow) => None,
        Ok(None) => Some(Attempt::Infeasible),
        Ok(Some(e)) => Some(match back_substitute(n, &e.steps, rule) {
            Some(p) => Attempt::Point(p),
            None => Attempt::Failed,
        }),
    }
}

/// A rational point satisfying every constraint, or `None` if there is none.
pub fn find_point(n: usize, cons: &[Constraint], rule: SampleRule) -> Option<Vec<Rat>> {
    let (eqs, ineqs) = to_rows(n, cons);
    for prune in [Prune::Aggressive, Prune::Exact] {
        let result = attempt::<i128>(n, &eqs, &ineqs, rule, prune)
            .or_else(|| attempt::<BigInt>(n, &eqs, &ineqs, rule, prune))
            .expect("bigint elimination cannot overflow");
        match result {
            // contradictions are derived from valid consequences only
            Attempt::Infeasible => return None,
            Attempt::Point(p) if cons.iter().all(|c| c.holds(&p)) => return Some(p),
            _ => {}
        }
    }
    debug_assert!(false, "exact elimination produced no valid point");
    None
}

pub fn is_feasible(n: usize, cons: &[Constraint]) -> bool {
    find_point(n, cons, SampleRule::Midpoint).is_some()
}

/// Eliminates the variables in `vars`; the returned constraints (still over ℚⁿ,
/// with zero coefficients on `vars`) describe the projection. `None` if empty.
pub fn project(n: usize, cons: &[Constraint], vars: &[usize]) -> Option<Vec<Constraint>> {
    let (eqs, ineqs) = to_rows(n, cons);
    let fast = narrow::<i128>(&eqs)
        .zip(narrow::<i128>(&ineqs))
        .and_then(|(e, i)| eliminate(e, i, vars, Prune::Exact).ok())
        .map(|r| r.map(|e| export(&e)));
    match fast {
        Some(r) => r,
        None => match eliminate(narrow::<BigInt>(&eqs)?, narrow::<BigInt>(&ineqs)?, vars, Prune::Exact) {
            Ok(r) => r.map(|e| export(&e)),
            Err(_) => unreachable!("bigint elimination cannot overflow"),
        },
    }
}

fn export<S: Scalar>(e: &Elimination<S>) -> Vec<Constraint> {
    let form = |r: &Row<S>| {
        AffineForm::new(
            r.a.iter().map(|v| Rat::from_integer(v.to_big())).collect(),
            Rat::from_integer(r.c.to_big()),
        )
    };
    let mut out: Vec<Constraint> = e.eqs.iter().map(|r| Constraint::eq(form(r))).collect();
    for r in &e.ineqs {
        let rel = if r.strict { Relation::Gt } else { Relation::Ge };
        out.push(Constraint::new(form(r), rel));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat_vec};

    fn c(coeffs: &[i64], k: i64, rel: Relation) -> Constraint {
        Constraint::new(AffineForm::new(rat_vec(coeffs), int(k)), rel)
    }

    #[test]
    fn strict_contradiction() {
        let cons = [c(&[1], 0, Relation::Gt), c(&[-1], 0, Relation::Gt)];
        assert!(!is_feasible(1, &cons));
        let cons = [c(&[1], 0, Relation::Ge), c(&[-1], 0, Relation::Ge)];
        assert_eq!(find_point(1, &cons, SampleRule::Midpoint), Some(vec![int(0)]));
    }

    #[test]
    fn equality_then_bounds() {
        // x + y = 1, x > 1, y > 0
        let cons = [
            c(&[1, 1], -1, Relation::Eq),
            c(&[1, 0], -1, Relation::Gt),
            c(&[0, 1], 0, Relation::Gt),
        ];
        assert!(!is_feasible(2, &cons));
    }

    #[test]
    fn midpoint_and_alternate_samples() {
        let cons = [c(&[1], 0, Relation::Gt), c(&[-1], 3, Relation::Gt)];
        assert_eq!(find_point(1, &cons, SampleRule::Midpoint), Some(vec![Rat::new(3.into(), 2.into())]));
        assert_eq!(find_point(1, &cons, SampleRule::Alternate), Some(vec![int(1)]));
        let ray = [c(&[1], -2, Relation::Ge)];
        assert_eq!(find_point(1, &ray, SampleRule::Midpoint), Some(vec![int(3)]));
    }

    #[test]
    fn projection_of_open_triangle() {
        let cons = [
            c(&[1, 0], 0, Relation::Gt),
            c(&[0, 1], 0, Relation::Gt),
            c(&[-1, -1], 1, Relation::Gt),
        ];
        let proj = project(2, &cons, &[1]).unwrap();
        let mut forms: Vec<String> = proj.iter().map(|c| c.to_string()).collect();
        forms.sort();
        assert_eq!(forms, ["-x1+1 > 0", "x1 > 0"]);
    }

    #[test]
    fn large_coefficients_fall_back_to_bigint() {
        let big = i64::MAX;
        let cons = [
            c(&[big, -big + 1, 0], 7, Relation::Ge),
            c(&[-big, big - 3, 1], 0, Relation::Gt),
            c(&[1, 1, 1], -big, Relation::Ge),
            c(&[-1, -1, -1], big, Relation::Ge),
        ];
        let p = find_point(3, &cons, SampleRule::Midpoint).unwrap();
        assert!(cons.iter().all(|c| c.holds(&p)));
    }
}
