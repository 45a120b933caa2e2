use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

/// Membership predicate of a [`Constraint`]: `form = 0`, `form >= 0` or `form > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "EQ")]
    Eq,
    #[serde(rename = "GE")]
    Ge,
    #[serde(rename = "GT")]
    Gt,
}

impl Relation {
    pub fn holds(self, value: &Rat) -> bool {
        match self {
            Relation::Eq => value.is_zero(),
            Relation::Ge => !value.is_negative(),
            Relation::Gt => value.is_positive(),
        }
    }
}

/// An affine function `coeffs · x + constant` on ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl AffineForm {
    pub fn new(coeffs: Vec<Rat>, constant: Rat) -> Self {
        Self { coeffs, constant }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rat::zero(); n], Rat::zero())
    }

    /// The coordinate function `x_i` on ℚⁿ.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[i] = Rat::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a * x)
    }

    /// Sign of the value at `point`, without intermediate reductions.
    pub fn sign_at(&self, point: &[Rat]) -> Ordering {
        debug_assert_eq!(point.len(), self.coeffs.len());
        let mut num = self.constant.numer().clone();
        let mut den = self.constant.denom().clone();
        for (a, x) in self.coeffs.iter().zip(point) {
            if a.is_zero() || x.is_zero() {
                continue;
            }
            let (tn, td) = (a.numer() * x.numer(), a.denom() * x.denom());
            if td == den {
                num += tn;
            } else {
                num = num * &td + tn * &den;
                den *= td;
            }
        }
        num.sign().cmp(&Sign::NoSign)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), -&self.constant)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| c * k).collect(),
            &self.constant * k,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            &self.constant + &other.constant,
        )
    }

    /// Rescales to coprime integers with a positive first nonzero
    /// coefficient. Returns the canonical form together with the sign of the
    /// factor that was divided out, or `None` for constant forms.
    pub fn canonical(&self) -> Option<(AffineForm, i8)> {
        let lead = self.coeffs.iter().find(|c| !c.is_zero())?;
        let sign = if lead.is_positive() { 1 } else { -1 };
        let values = || self.coeffs.iter().chain(std::iter::once(&self.constant));
        let l = values().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let g = values().fold(BigInt::zero(), |g, v| g.gcd(&(v.numer() * (&l / v.denom()))));
        let factor = Rat::new(l * sign, g);
        Some((self.scale(&factor), sign))
    }

    /// `f ∘ map`, the pullback along an affine map into this form's domain.
    pub fn pullback(&self, map: &AffineMap) -> AffineForm {
        let n = map.source_dim();
        let mut coeffs = vec![Rat::zero(); n];
        let mut constant = self.constant.clone();
        for (a, (row, t)) in self.coeffs.iter().zip(map.matrix.iter().zip(&map.translation)) {
            if a.is_zero() {
                continue;
            }
            for (c, m) in coeffs.iter_mut().zip(row) {
                *c += a * m;
            }
            constant += a * t;
        }
        AffineForm::new(coeffs, constant)
    }

    /// Embeds into a larger ambient space, placing the coordinates at `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> AffineForm {
        let mut coeffs = vec![Rat::zero(); total];
        coeffs[offset..offset + self.dim()].clone_from_slice(&self.coeffs);
        AffineForm::new(coeffs, self.constant.clone())
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}x{}", i + 1)?;
            } else {
                write!(f, "{sign}{}*x{}", fmt_rat(&mag), i + 1)?;
            }
            wrote = true;
        }
        if !self.constant.is_zero() || !wrote {
            let c = &self.constant;
            if wrote {
                let sign = if c.is_negative() { "-" } else { "+" };
                write!(f, "{sign}{}", fmt_rat(&c.abs()))?;
            } else {
                write!(f, "{}", fmt_rat(c))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub form: AffineForm,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(form: AffineForm, rel: Relation) -> Self {
        Self { form, rel }
    }

    pub fn eq(form: AffineForm) -> Self {
        Self::new(form, Relation::Eq)
    }

    pub fn ge(form: AffineForm) -> Self {
        Self::new(form, Relation::Ge)
    }

    pub fn gt(form: AffineForm) -> Self {
        Self::new(form, Relation::Gt)
    }

    pub fn holds(&self, point: &[Rat]) -> bool {
        let s = self.form.sign_at(point);
        match self.rel {
            Relation::Eq => s == Ordering::Equal,
            Relation::Ge => s != Ordering::Less,
            Relation::Gt => s == Ordering::Greater,
        }
    }

    /// The complement as a disjoint union of constraints:
    /// `f = 0` ↦ `{f > 0} ⊔ {-f > 0}`, `f ≥ 0` ↦ `-f > 0`, `f > 0` ↦ `-f ≥ 0`.
    pub fn complement(&self) -> Vec<Constraint> {
        match self.rel {
            Relation::Eq => vec![
                Constraint::gt(self.form.clone()),
                Constraint::gt(self.form.neg()),
            ],
            Relation::Ge => vec![Constraint::gt(self.form.neg())],
            Relation::Gt => vec![Constraint::ge(self.form.neg())],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.rel {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        };
        write!(f, "{} {op} 0", self.form)
    }
}

/// A conjunction of constraints in ℚⁿ; possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicCell {
    pub ambient_dim: usize,
    pub constraints: Vec<Constraint>,
}

impl BasicCell {
    pub fn new(ambient_dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            check_dim(ambient_dim, c.form.dim())?;
        }
        Ok(Self { ambient_dim, constraints })
    }

    pub fn universe(ambient_dim: usize) -> Self {
        Self { ambient_dim, constraints: Vec::new() }
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(point))
    }

    pub fn meet(&self, other: &BasicCell) -> BasicCell {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        BasicCell { ambient_dim: self.ambient_dim, constraints }
    }

    pub fn with(&self, extra: Constraint) -> BasicCell {
        let mut cell = self.clone();
        cell.constraints.push(extra);
        cell
    }

    pub fn is_empty(&self) -> bool {
        super::is_empty(self)
    }
}

/// A finite union of [`BasicCell`]s, i.e. a constructible subset of ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructibleSet {
    pub ambient_dim: usize,
    pub cells: Vec<BasicCell>,
}

impl ConstructibleSet {
    pub fn new(ambient_dim: usize, cells: Vec<BasicCell>) -> Result<Self> {
        for c in &cells {
            check_dim(ambient_dim, c.ambient_dim)?;
        }
        Ok(Self { ambient_dim, cells })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, cells: Vec::new() }
    }

    pub fn universe(ambient_dim: usize) -> Self {
        Self::from_cell(BasicCell::universe(ambient_dim))
    }

    pub fn from_cell(cell: BasicCell) -> Self {
        Self { ambient_dim: cell.ambient_dim, cells: vec![cell] }
    }

    /// Builds a set from a single conjunction of constraints.
    pub fn from_constraints(ambient_dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        Ok(Self::from_cell(BasicCell::new(ambient_dim, constraints)?))
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.cells.iter().any(|c| c.contains(point))
    }

    /// Cartesian product `self × other ⊂ ℚ^{n+m}`.
    pub fn product(&self, other: &ConstructibleSet) -> ConstructibleSet {
        let (n, m) = (self.ambient_dim, other.ambient_dim);
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let mut constraints: Vec<Constraint> = a
                    .constraints
                    .iter()
                    .map(|c| Constraint::new(c.form.embed(n + m, 0), c.rel))
                    .collect();
                constraints.extend(
                    b.constraints
                        .iter()
                        .map(|c| Constraint::new(c.form.embed(n + m, n), c.rel)),
                );
                cells.push(BasicCell { ambient_dim: n + m, constraints });
            }
        }
        ConstructibleSet { ambient_dim: n + m, cells }
    }
}

/// `x ↦ matrix · x + translation` from ℚ^source to ℚ^target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: Vec<Vec<Rat>>,
    pub translation: Vec<Rat>,
    source_dim: usize,
}

impl AffineMap {
    pub fn new(source_dim: usize, matrix: Vec<Vec<Rat>>, translation: Vec<Rat>) -> Result<Self> {
        check_dim(matrix.len(), translation.len())?;
        for row in &matrix {
            check_dim(source_dim, row.len())?;
        }
        Ok(Self { matrix, translation, source_dim })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self { matrix, translation: vec![Rat::zero(); n], source_dim: n }
    }

    pub fn translation_by(w: &[Rat]) -> Self {
        let mut map = Self::identity(w.len());
        map.translation = w.to_vec();
        map
    }

    /// Projection onto the listed coordinates.
    pub fn projection(source_dim: usize, keep: &[usize]) -> Self {
        let matrix = keep
            .iter()
            .map(|&k| (0..source_dim).map(|j| if j == k { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self { matrix, translation: vec![Rat::zero(); keep.len()], source_dim }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| row.iter().zip(x).fold(t.clone(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// The component functions as affine forms on the source.
    pub fn components(&self) -> Vec<AffineForm> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| AffineForm::new(row.clone(), t.clone()))
            .collect()
    }
}

/// A rational polyhedral fan given by its cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub ambient_dim: usize,
    pub cones: Vec<BasicCell>,
}

impl Fan {
    pub fn new(ambient_dim: usize, cones: Vec<BasicCell>) -> Result<Self> {
        for (i, cone) in cones.iter().enumerate() {
            check_dim(ambient_dim, cone.ambient_dim)?;
            for c in &cone.constraints {
                if c.rel == Relation::Gt {
                    return Err(Error::MalformedFan(format!("cone {i} has a strict constraint")));
                }
                if !c.form.constant.is_zero() {
                    return Err(Error::MalformedFan(format!("cone {i} is not through the origin")));
                }
            }
        }
        Ok(Self { ambient_dim, cones })
    }

    /// The support |Σ| as a constructible set.
    pub fn support(&self) -> ConstructibleSet {
        ConstructibleSet { ambient_dim: self.ambient_dim, cells: self.cones.clone() }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
