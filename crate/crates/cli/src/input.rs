//! Input schemas and loading. Every schema violation is reported with a
//! JSON-pointer path to the offending value.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_path_to_error::Segment;

use tropmot::motring::{LaurentPoly, MotClass};
use tropmot::polyhedra::json::{CellJson, SetJson};
use tropmot::polyhedra::{BasicCell, ConstructibleSet};
use tropmot::rat::serde_rat;
use tropmot::sncvol::{Component, SncModel, SupportSelection};
use tropmot::trophyp::{Orthant, TPoly};
use tropmot::Rat;

/// Reads `arg` as inline JSON when it starts with `{` or `[`, otherwise as a
/// path, and decodes it into `T`.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if matches!(arg.trim_start().chars().next(), Some('{' | '[')) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))?
    };
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let ptr = pointer(e.path());
        anyhow!("{}: {}", if ptr.is_empty() { "/" } else { &ptr }, e.inner())
    })
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

#[derive(Clone, Debug, Deserialize)]
pub struct R(#[serde(with = "serde_rat")] pub Rat);

pub fn rats(v: &[R]) -> Vec<Rat> {
    v.iter().map(|r| r.0.clone()).collect()
}

/// A value of a constructible function: an integer or a class expression.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RingValue {
    Int(i64),
    Class(String),
}

pub fn set_at(s: &SetJson, base: &str) -> Result<ConstructibleSet> {
    Ok(s.to_set_at(base)?)
}

pub fn cells_at(n: usize, cells: &[CellJson], base: &str) -> Result<Vec<BasicCell>> {
    let raw = SetJson { n, cells: cells.to_vec() };
    let set = raw.to_set_at("").map_err(|e| anyhow!("{}", e.to_string().replacen("/cells/", &format!("{base}/"), 1)))?;
    Ok(set.cells)
}

fn check_n(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        bail!("{what}: expected dimension {expected}, found {found}");
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub set: SetJson,
    pub value: RingValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionIn {
    pub n: usize,
    pub pieces: Vec<Piece>,
}

/// Pieces with their sets validated; values are left for the caller to
/// interpret in the integer or class ring.
pub fn pieces(f: &FunctionIn, base: &str) -> Result<Vec<(ConstructibleSet, RingValue)>> {
    f.pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let at = format!("{base}/pieces/{i}/set");
            check_n(&format!("{at}/n"), f.n, p.set.n)?;
            Ok((set_at(&p.set, &at)?, p.value.clone()))
        })
        .collect()
}

pub fn class_value(v: &RingValue, at: &str) -> Result<MotClass> {
    match v {
        RingValue::Int(k) => Ok(MotClass::int(*k)),
        RingValue::Class(s) => MotClass::parse(s).map_err(|e| anyhow!("{at}: {e}")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapIn {
    pub matrix: Vec<Vec<R>>,
    pub translation: Vec<R>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardIn {
    pub function: FunctionIn,
    pub map: MapIn,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumIn {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SncIn {
    pub components: Vec<Component>,
    pub strata: Vec<StratumIn>,
    #[serde(default)]
    pub support: Option<Vec<StratumIn>>,
}

fn strata(m: &[Component], list: &[StratumIn], base: &str) -> Result<Vec<(Vec<usize>, MotClass)>> {
    list.iter()
        .enumerate()
        .map(|(i, s)| {
            let j = s
                .j
                .iter()
                .enumerate()
                .map(|(k, name)| {
                    m.iter().position(|c| c.name == *name).ok_or_else(|| anyhow!("{base}/{i}/J/{k}: unknown component {name}"))
                })
                .collect::<Result<Vec<_>>>()?;
            let class = MotClass::parse(&s.class).map_err(|e| anyhow!("{base}/{i}/class: {e}"))?;
            Ok((j, class))
        })
        .collect()
}

impl SncIn {
    pub fn model(&self) -> Result<SncModel> {
        let strata = strata(&self.components, &self.strata, "/strata")?;
        Ok(SncModel::new(self.components.clone(), strata)?)
    }

    pub fn selection(&self) -> Result<Option<SupportSelection>> {
        self.support
            .as_ref()
            .map(|s| Ok(SupportSelection::only(strata(&self.components, s, "/support")?)))
            .transpose()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideIn {
    pub subset: Vec<usize>,
    pub gamma: SetJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropVolIn {
    pub n: usize,
    #[serde(default)]
    pub poly: Option<String>,
    #[serde(default)]
    pub gamma: Option<SetJson>,
    #[serde(default)]
    pub pattern: Option<Vec<Orthant>>,
    #[serde(default)]
    pub overrides: Vec<OverrideIn>,
}

impl TropVolIn {
    pub fn gamma(&self) -> Result<Option<ConstructibleSet>> {
        self.gamma
            .as_ref()
            .map(|g| {
                check_n("/gamma/n", self.n, g.n)?;
                set_at(g, "/gamma")
            })
            .transpose()
    }

    pub fn overrides(&self) -> Result<BTreeMap<Vec<usize>, ConstructibleSet>> {
        self.overrides
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let at = format!("/overrides/{i}/gamma");
                let mut subset = o.subset.clone();
                subset.sort_unstable();
                subset.dedup();
                if let Some(bad) = subset.iter().find(|k| **k >= self.n) {
                    bail!("/overrides/{i}/subset: coordinate {bad} out of range");
                }
                check_n(&format!("{at}/n"), subset.len(), o.gamma.n)?;
                Ok((subset, set_at(&o.gamma, &at)?))
            })
            .collect()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyIn {
    pub n: usize,
    pub poly: String,
}

impl PolyIn {
    pub fn tpoly(&self) -> Result<TPoly> {
        TPoly::parse(self.n, &self.poly).map_err(|e| anyhow!("/poly: {e}"))
    }
}

pub fn laurent(n: usize, src: &str) -> Result<LaurentPoly> {
    LaurentPoly::parse(n, src).map_err(|e| anyhow!("/poly: {e}"))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountIn {
    pub n: usize,
    pub poly: String,
    #[serde(default)]
    pub value: Option<R>,
    #[serde(default)]
    pub torus: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmIn {
    pub n: usize,
    pub poly: String,
    pub weights: Vec<i64>,
    pub d: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsIn {
    pub poly: String,
    pub d1: usize,
    pub d2: usize,
    pub dz: usize,
    pub weights: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanIn {
    pub n: usize,
    pub cones: Vec<CellJson>,
    pub w: Vec<R>,
}
