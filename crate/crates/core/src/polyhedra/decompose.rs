use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;

use super::fm::{find_point, SampleRule};
use super::geometry::RelOpenCell;
use super::types::{AffineForm, BasicCell, Constraint, ConstructibleSet, Relation};
use crate::rat::Rat;

const NEG: u8 = 1;
const ZERO: u8 = 2;
const POS: u8 = 4;
const ALL: u8 = NEG | ZERO | POS;

fn sign_bit(s: Ordering) -> u8 {
    match s {
        Ordering::Greater => POS,
        Ordering::Less => NEG,
        Ordering::Equal => ZERO,
    }
}

/// Allowed signs of the canonical form for `rel` applied to `sign · form`.
fn mask(rel: Relation, sign: i8) -> u8 {
    match (rel, sign > 0) {
        (Relation::Eq, _) => ZERO,
        (Relation::Ge, true) => ZERO | POS,
        (Relation::Ge, false) => ZERO | NEG,
        (Relation::Gt, true) => POS,
        (Relation::Gt, false) => NEG,
    }
}

struct Arrangement {
    n: usize,
    forms: Vec<AffineForm>,
    /// `masks[cell][form]`; `None` for cells with a failing constant constraint.
    masks: Vec<Option<Vec<u8>>>,
    split_all: bool,
}

impl Arrangement {
    fn new(n: usize, cells: &[BasicCell], extra: &[AffineForm], split_all: bool) -> Self {
        let mut index: HashMap<AffineForm, usize> = HashMap::new();
        let mut forms = Vec::new();
        let mut register = |f: &AffineForm, forms: &mut Vec<AffineForm>| -> Option<(usize, i8)> {
            let (canon, sign) = f.canonical()?;
            let k = *index.entry(canon.clone()).or_insert_with(|| {
                forms.push(canon);
                forms.len() - 1
            });
            Some((k, sign))
        };
        let mut raw = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut entries = Vec::new();
            let mut dead = false;
            for c in &cell.constraints {
                match register(&c.form, &mut forms) {
                    Some((k, sign)) => entries.push((k, mask(c.rel, sign))),
                    None => dead |= !c.rel.holds(&c.form.constant),
                }
            }
            raw.push(if dead { None } else { Some(entries) });
        }
        for f in extra {
            register(f, &mut forms);
        }
        let masks = raw
            .into_iter()
            .map(|entries| {
                entries.map(|entries| {
                    let mut m = vec![ALL; forms.len()];
                    for (k, bits) in entries {
                        m[k] &= bits;
                    }
                    m
                })
            })
            .collect();
        Arrangement { n, forms, masks, split_all }
    }

    fn constraint(&self, k: usize, bit: u8) -> Constraint {
        let f = &self.forms[k];
        match bit {
            ZERO => Constraint::eq(f.clone()),
            POS => Constraint::gt(f.clone()),
            _ => Constraint::gt(f.neg()),
        }
    }

    fn relevant(&self, k: usize, alive: &[usize]) -> bool {
        self.split_all || alive.iter().any(|&c| self.masks[c].as_ref().unwrap()[k] != ALL)
    }

    /// Depth-first enumeration below a node given by its constraints,
    /// surviving cells and a witness point.
    fn walk(
        &self,
        k: usize,
        cons: &mut Vec<Constraint>,
        alive: Vec<usize>,
        sample: Vec<Rat>,
        out: &mut Vec<(RelOpenCell, Vec<usize>)>,
    ) {
        let mut k = k;
        while k < self.forms.len() && !self.relevant(k, &alive) {
            k += 1;
        }
        if k == self.forms.len() {
            let carrier = BasicCell { ambient_dim: self.n, constraints: cons.clone() };
            out.push((RelOpenCell::from_open_carrier(carrier, sample), alive));
            return;
        }
        let here = sign_bit(self.forms[k].sign_at(&sample));
        for bit in [NEG, ZERO, POS] {
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&c| self.masks[c].as_ref().unwrap()[k] & bit != 0)
                .collect();
            if next.is_empty() {
                continue;
            }
            cons.push(self.constraint(k, bit));
            let point = if bit == here {
                Some(sample.clone())
            } else {
                find_point(self.n, cons, SampleRule::Midpoint)
            };
            if let Some(point) = point {
                self.walk(k + 1, cons, next, point, out);
            }
            cons.pop();
        }
    }
}

/// Decomposes `⋃ cells` into pairwise disjoint relatively open sign cells of
/// the arrangement of their forms (plus `extra`), each labelled with the
/// indices of the input cells containing it.
///
/// With `split_all` unset, a form is only split on where it still decides
/// membership in some input cell; the leaves are then still relatively open
/// but coarser than the full arrangement.
pub(crate) fn decompose_labelled(
    n: usize,
    cells: &[BasicCell],
    extra: &[AffineForm],
    split_all: bool,
) -> Vec<(RelOpenCell, Vec<usize>)> {
    let arr = Arrangement::new(n, cells, extra, split_all);
    let alive: Vec<usize> = (0..cells.len()).filter(|&c| arr.masks[c].is_some()).collect();
    if alive.is_empty() {
        return Vec::new();
    }
    let root = find_point(n, &[], SampleRule::Midpoint).expect("ambient space is nonempty");
    // Split the first relevant form in parallel; the subtrees are independent.
    let first = (0..arr.forms.len()).find(|&k| arr.relevant(k, &alive));
    let Some(k) = first else {
        let mut out = Vec::new();
        arr.walk(0, &mut Vec::new(), alive, root, &mut out);
        return out;
    };
    [NEG, ZERO, POS]
        .into_par_iter()
        .map(|bit| {
            let mut out = Vec::new();
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&c| arr.masks[c].as_ref().unwrap()[k] & bit != 0)
                .collect();
            if next.is_empty() {
                return out;
            }
            let mut cons = vec![arr.constraint(k, bit)];
            if let Some(p) = find_point(n, &cons, SampleRule::Midpoint) {
                arr.walk(k + 1, &mut cons, next, p, &mut out);
            }
            out
        })
        .flatten()
        .collect()
}

/// Pairwise disjoint relatively open cells whose union is `s`.
pub fn decompose(s: &ConstructibleSet) -> Vec<RelOpenCell> {
    decompose_labelled(s.ambient_dim, &s.cells, &[], false)
        .into_iter()
        .map(|(c, _)| c)
        .collect()
}

/// The full sign-cell decomposition of ℚⁿ by the given forms.
pub fn arrangement_cells(n: usize, forms: &[AffineForm]) -> Vec<RelOpenCell> {
    decompose_labelled(n, &[BasicCell::universe(n)], forms, true)
        .into_iter()
        .map(|(c, _)| c)
        .collect()
}
