//! Motivic volumes from strict normal crossings data.
//!
//! A model is combinatorial input: components `E_i` with multiplicities
//! `N_i`, and for each stratum `E_J°` the class of its cyclic cover `Ẽ_J°`,
//! a `μ_{N_J}`-torsor with `N_J = gcd(N_j : j ∈ J)`. The volume is
//! `Σ_{∅≠J} (1-𝕃)^{|J|-1} [Ẽ_J° ∩ h⁻¹(C)]`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motring::{torus_class, ClassSymbol, MotClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub name: String,
    pub mult: u64,
}

/// Components and the cover classes `[Ẽ_J°]` of the nonempty strata. Strata
/// that are not listed are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncModel {
    components: Vec<Component>,
    strata: BTreeMap<Vec<usize>, MotClass>,
}

/// Replacement classes `[Ẽ_J° ∩ h⁻¹(C)]` for a subset `C` of the special
/// fiber. Strata without a replacement keep their full class when
/// `default_full` is set and are dropped otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportSelection {
    pub classes: BTreeMap<Vec<usize>, MotClass>,
    pub default_full: bool,
}

impl SupportSelection {
    /// `C = X_k`.
    pub fn full() -> Self {
        Self { classes: BTreeMap::new(), default_full: true }
    }

    /// Only the listed strata meet `C`.
    pub fn only(classes: impl IntoIterator<Item = (Vec<usize>, MotClass)>) -> Self {
        let classes = classes.into_iter().map(|(j, c)| (sorted(j), c)).collect();
        Self { classes, default_full: false }
    }
}

fn sorted(mut j: Vec<usize>) -> Vec<usize> {
    j.sort_unstable();
    j.dedup();
    j
}

impl SncModel {
    pub fn new(components: Vec<Component>, strata: impl IntoIterator<Item = (Vec<usize>, MotClass)>) -> Result<Self> {
        for c in &components {
            if c.mult == 0 {
                return Err(Error::InvalidStratum(format!("component {} has multiplicity 0", c.name)));
            }
        }
        let mut model = Self { components, strata: BTreeMap::new() };
        for (j, class) in strata {
            let j = model.check_j(j)?;
            if model.strata.insert(j.clone(), class).is_some() {
                return Err(Error::InvalidStratum(format!("stratum {} listed twice", model.j_name(&j))));
            }
        }
        Ok(model)
    }

    fn check_j(&self, j: Vec<usize>) -> Result<Vec<usize>> {
        let j = sorted(j);
        if j.is_empty() {
            return Err(Error::InvalidStratum("empty index set".into()));
        }
        if let Some(bad) = j.iter().find(|&&i| i >= self.components.len()) {
            return Err(Error::InvalidStratum(format!("no component with index {bad}")));
        }
        Ok(j)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn strata(&self) -> &BTreeMap<Vec<usize>, MotClass> {
        &self.strata
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    /// Component names of `J`, e.g. `{E1,E2}`.
    pub fn j_name(&self, j: &[usize]) -> String {
        let names: Vec<&str> = j.iter().map(|&i| self.components[i].name.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// `N_J = gcd(N_j : j ∈ J)`.
    pub fn n_j(&self, j: &[usize]) -> u64 {
        j.iter().fold(0, |g, &i| g.gcd(&self.components[i].mult))
    }

    /// `e = lcm(N_i)`, the ramification needed to reach the model.
    pub fn e(&self) -> u64 {
        self.components.iter().fold(1, |l, c| l.lcm(&c.mult))
    }

    /// Strata whose cover class carries an action of order not dividing `N_J`.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (j, class) in &self.strata {
            let nj = self.n_j(j);
            for s in class.symbols() {
                if nj % s.action.order() != 0 {
                    out.push(format!(
                        "stratum {}: symbol {s} has action order {} not dividing N_J = {nj}",
                        self.j_name(j),
                        s.action.order()
                    ));
                }
            }
        }
        out
    }
}

/// `Σ_{∅≠J} (1-𝕃)^{|J|-1} [Ẽ_J° ∩ h⁻¹(C)]`.
pub fn vol_snc(m: &SncModel, sel: &SupportSelection) -> Result<MotClass> {
    let mut chosen: BTreeMap<Vec<usize>, &MotClass> = BTreeMap::new();
    if sel.default_full {
        chosen.extend(m.strata.iter().map(|(j, c)| (j.clone(), c)));
    }
    for (j, c) in &sel.classes {
        chosen.insert(m.check_j(j.clone())?, c);
    }
    let one_minus_l = &MotClass::one() - &MotClass::lefschetz();
    let mut total = MotClass::zero();
    for (j, c) in chosen {
        total = &total + &(&one_minus_l.pow(j.len() as u32 - 1) * c);
    }
    Ok(total)
}

/// The motivic nearby fiber `ψ_f`: the volume with full support.
pub fn nearby_fiber(m: &SncModel) -> Result<MotClass> {
    vol_snc(m, &SupportSelection::full())
}

/// The motivic Milnor fiber at a point, given the stratum classes over it.
pub fn milnor_fiber(m: &SncModel, sel: &SupportSelection) -> Result<MotClass> {
    vol_snc(m, sel)
}

/// Cover class of a stratum isomorphic to `𝔾_mⁿ` with trivial cover.
pub fn torus_stratum(n: usize) -> MotClass {
    torus_class(n)
}

/// Cover class `[μ_N]` of a point stratum in a component of multiplicity `N`.
pub fn mu_orbit(n: u64) -> MotClass {
    if n == 1 {
        MotClass::one()
    } else {
        MotClass::symbol(ClassSymbol::mu_points(n))
    }
}
