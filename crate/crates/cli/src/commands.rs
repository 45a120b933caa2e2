use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use tropmot::euler::{chi_prime, ConstructibleFunction, ValueRing};
use tropmot::motring::{count_affine_ff, count_hypersurface_ff, MotClass};
use tropmot::polyhedra::json::SetJson;
use tropmot::polyhedra::{is_circle_compact, AffineMap, ConstructibleSet, Fan};
use tropmot::rat::{fmt_rat, int};
use tropmot::sncvol::{milnor_fiber, nearby_fiber, vol_snc, SncModel, SupportSelection};
use tropmot::trophyp::{
    build_complex, check_schon_ff, schon_terms, stratum_reports, verify_dm, verify_integral_identity, vol_trop_preimage,
    PrimeCheck, SchonReport, SchonTerm, StratifiedAffineProblem, StratumKind,
};
use tropmot::{selftest, Error, Rat};

use crate::input::*;

/// What a subcommand produced. `ok` is false for a failed verification.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Report {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Report { json, text: text.into(), ok: true }
    }
}

fn rat_list(v: &[Rat]) -> Value {
    Value::from(v.iter().map(fmt_rat).collect::<Vec<_>>())
}

fn joined(v: &[Rat]) -> String {
    v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
}

pub fn chi(input: &str) -> Result<Report> {
    let s: SetJson = load(input)?;
    let v = chi_prime(&set_at(&s, "")?).value;
    Ok(Report::ok(json!({ "chi_prime": v }), v.to_string()))
}

fn all_ints(p: &[(ConstructibleSet, RingValue)]) -> Option<Vec<(ConstructibleSet, i64)>> {
    p.iter()
        .map(|(s, v)| match v {
            RingValue::Int(k) => Some((s.clone(), *k)),
            RingValue::Class(_) => None,
        })
        .collect()
}

fn class_pieces(p: &[(ConstructibleSet, RingValue)], base: &str) -> Result<Vec<(ConstructibleSet, MotClass)>> {
    p.iter()
        .enumerate()
        .map(|(i, (s, v))| Ok((s.clone(), class_value(v, &format!("{base}/pieces/{i}/value"))?)))
        .collect()
}

pub fn integrate(input: &str) -> Result<Report> {
    let f: FunctionIn = load(input)?;
    let p = pieces(&f, "")?;
    if let Some(ints) = all_ints(&p) {
        let v = ConstructibleFunction::new(f.n, ints)?.integrate();
        return Ok(Report::ok(json!({ "integral": v }), v.to_string()));
    }
    let v = ConstructibleFunction::new(f.n, class_pieces(&p, "")?)?.integrate();
    Ok(Report::ok(json!({ "integral": v.to_string() }), v.to_string()))
}

fn push<V: ValueRing>(f: ConstructibleFunction<V>, map: &AffineMap, enc: fn(&V) -> Value) -> Result<Report> {
    let total = enc(&f.integrate());
    let g = f.pushforward(map)?;
    let mut text = String::new();
    let pieces: Vec<Value> = g
        .pieces
        .iter()
        .map(|(s, v)| {
            let cells: Vec<String> = s
                .cells
                .iter()
                .map(|c| c.constraints.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            text.push_str(&format!("{} on {{{}}}\n", enc(v), cells.join("} ∪ {")));
            json!({ "set": SetJson::from(s), "value": enc(v) })
        })
        .collect();
    text.push_str(&format!("integral {}", total));
    Ok(Report::ok(json!({ "n": g.ambient_dim, "pieces": pieces, "integral": total }), text))
}

pub fn pushforward(input: &str) -> Result<Report> {
    let p: PushforwardIn = load(input)?;
    let n = p.function.n;
    let matrix: Vec<Vec<Rat>> = p.map.matrix.iter().map(|r| rats(r)).collect();
    let map = AffineMap::new(n, matrix, rats(&p.map.translation)).map_err(|e| anyhow!("/map: {e}"))?;
    let pieces = pieces(&p.function, "/function")?;
    if let Some(ints) = all_ints(&pieces) {
        return push(ConstructibleFunction::new(n, ints)?, &map, |v| json!(v));
    }
    push(ConstructibleFunction::new(n, class_pieces(&pieces, "/function")?)?, &map, |v| json!(v.to_string()))
}

fn snc_report(m: &SncModel, class: MotClass) -> Report {
    let warnings = m.warnings();
    let mut text = class.to_string();
    for w in &warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Report::ok(json!({ "class": class.to_string(), "e": m.e(), "warnings": warnings }), text)
}

pub fn snc_vol(input: &str) -> Result<Report> {
    let s: SncIn = load(input)?;
    let m = s.model()?;
    let sel = s.selection()?.unwrap_or_else(SupportSelection::full);
    let v = vol_snc(&m, &sel)?;
    Ok(snc_report(&m, v))
}

pub fn nearby(input: &str) -> Result<Report> {
    let s: SncIn = load(input)?;
    let m = s.model()?;
    let v = nearby_fiber(&m)?;
    Ok(snc_report(&m, v))
}

pub fn milnor(input: &str) -> Result<Report> {
    let s: SncIn = load(input)?;
    let m = s.model()?;
    let sel = s.selection()?.ok_or_else(|| anyhow!("/support: required for the Milnor fiber"))?;
    let v = milnor_fiber(&m, &sel)?;
    Ok(snc_report(&m, v))
}

fn term_json(t: &SchonTerm) -> Value {
    json!({
        "sample": rat_list(t.cell.sample()),
        "dim": t.cell.dim(),
        "chi": t.chi,
        "initial": t.initial.poly.to_string(),
        "action": t.initial.action.to_string(),
        "class": t.class.to_string(),
    })
}

pub fn trop_vol(input: &str) -> Result<Report> {
    let p: TropVolIn = load(input)?;
    let gamma = p.gamma()?;
    let Some(src) = &p.poly else {
        let g = gamma.ok_or_else(|| anyhow!("/gamma: required when no polynomial is given"))?;
        let v = vol_trop_preimage(p.n, &g)?;
        return Ok(Report::ok(json!({ "class": v.to_string() }), v.to_string()));
    };
    let g = PolyIn { n: p.n, poly: src.clone() }.tpoly()?;
    if let Some(pattern) = &p.pattern {
        if gamma.is_some() {
            bail!("/gamma: not allowed together with a pattern; use overrides");
        }
        let mut problem = StratifiedAffineProblem::new(g, pattern.clone()).map_err(|e| anyhow!("/pattern: {e}"))?;
        problem.overrides = p.overrides()?;
        let strata = stratum_reports(&problem)?;
        let total = strata.iter().fold(MotClass::zero(), |acc, s| &acc + &s.class);
        let list: Vec<Value> = strata
            .iter()
            .map(|s| {
                json!({
                    "subset": s.subset,
                    "equation": s.equation.to_string(),
                    "kind": kind_name(&s.kind),
                    "terms": s.terms.iter().map(term_json).collect::<Vec<_>>(),
                    "class": s.class.to_string(),
                })
            })
            .collect();
        return Ok(Report::ok(json!({ "class": total.to_string(), "strata": list }), total.to_string()));
    }
    if !p.overrides.is_empty() {
        bail!("/overrides: only meaningful with a pattern");
    }
    let gamma = gamma.unwrap_or_else(|| ConstructibleSet::universe(p.n));
    let terms = schon_terms(&build_complex(&g)?, &g, &gamma)?;
    let total = terms.iter().fold(MotClass::zero(), |acc, t| &acc + &t.class.scale(t.chi));
    let list: Vec<Value> = terms.iter().map(term_json).collect();
    Ok(Report::ok(json!({ "class": total.to_string(), "terms": list }), total.to_string()))
}

fn kind_name(k: &StratumKind) -> &'static str {
    match k {
        StratumKind::Whole => "whole",
        StratumKind::NoPoints => "no-points",
        StratumKind::Hypersurface => "hypersurface",
    }
}

fn schon_json(r: &SchonReport) -> Value {
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            let failures: Vec<Value> = c.failures.iter().map(|(q, x)| json!({ "q": q, "point": x })).collect();
            json!({ "sample": rat_list(&c.sample), "initial": c.initial.to_string(), "failures": failures })
        })
        .collect();
    json!({ "primes": r.primes, "reduction_smooth": r.passed(), "cells": cells })
}

pub fn schon_check(input: &str, primes: &[u64]) -> Result<Report> {
    let p: PolyIn = load(input)?;
    let r = check_schon_ff(&p.tpoly()?, primes)?;
    let qs = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    let mut text = if r.passed() { format!("reduction-smooth at q = {qs}") } else { format!("not schön at q = {qs}") };
    for c in &r.cells {
        for (q, x) in &c.failures {
            text.push_str(&format!("\nsingular point {x:?} of {} at q = {q} (cell through {})", c.initial, joined(&c.sample)));
        }
    }
    Ok(Report { json: schon_json(&r), text, ok: r.passed() })
}

pub fn count_points(input: &str, primes: &[u64]) -> Result<Report> {
    let p: CountIn = load(input)?;
    let f = laurent(p.n, &p.poly)?;
    let value = p.value.map(|r| r.0).unwrap_or_else(|| int(0));
    if p.torus && !value.eq(&int(0)) {
        bail!("/value: torus counts are of the zero locus");
    }
    let mut counts = Vec::new();
    let mut text = Vec::new();
    for &q in primes {
        let c = if p.torus { count_hypersurface_ff(&f, q)? } else { count_affine_ff(&f, &value, q)? };
        counts.push(json!({ "q": q, "count": c }));
        text.push(format!("q={q}: {c}"));
    }
    Ok(Report::ok(json!({ "counts": counts }), text.join("\n")))
}

fn big(k: i128) -> Value {
    i64::try_from(k).map(Value::from).unwrap_or_else(|_| Value::from(k.to_string()))
}

fn prime_lines(checks: &[PrimeCheck]) -> (Vec<Value>, String) {
    let json = checks
        .iter()
        .map(|p| json!({ "q": p.q, "lhs_count": big(p.lhs_count), "rhs_count": big(p.rhs_count), "equal": p.equal }))
        .collect();
    let text = checks
        .iter()
        .map(|p| format!("q={}: lhs {}, rhs {}{}", p.q, p.lhs_count, p.rhs_count, if p.equal { "" } else { "  MISMATCH" }))
        .collect::<Vec<_>>()
        .join("\n");
    (json, text)
}

fn strata_schon(list: &[(Vec<usize>, SchonReport)]) -> Vec<Value> {
    list.iter()
        .map(|(a, r)| {
            let mut v = schon_json(r);
            v["subset"] = json!(a);
            v
        })
        .collect()
}

fn refused(e: Error) -> Result<Report> {
    match e {
        Error::NotSchoen(why) => Ok(Report {
            json: json!({ "verified": false, "refused": format!("not schön: {why}") }),
            text: format!("refused: not schön: {why}"),
            ok: false,
        }),
        other => Err(other.into()),
    }
}

pub fn verify_dm_cmd(input: &str, primes: &[u64]) -> Result<Report> {
    let p: DmIn = load(input)?;
    let f = laurent(p.n, &p.poly)?;
    let r = match verify_dm(&f, &p.weights, p.d, primes) {
        Ok(r) => r,
        Err(e) => return refused(e),
    };
    let (checks, lines) = prime_lines(&r.primes);
    let ok = r.verified();
    let strata: Vec<Value> = r
        .strata
        .iter()
        .map(|s| {
            let actions: Vec<String> = s.terms.iter().map(|t| t.initial.action.to_string()).collect();
            json!({ "subset": s.subset, "kind": kind_name(&s.kind), "class": s.class.to_string(), "actions": actions })
        })
        .collect();
    let json = json!({
        "verified": ok,
        "lhs": r.lhs.to_string(),
        "rhs": format!("#{{{} = 1}}(F_q)", f),
        "primes": checks,
        "schon": strata_schon(&r.schon),
        "action_mismatches": r.action_mismatches,
        "strata": strata,
    });
    let mut text = format!("lhs {}\n{lines}", r.lhs);
    for m in &r.action_mismatches {
        text.push_str(&format!("\naction mismatch: {m}"));
    }
    text.push_str(if ok { "\nverified (reduction-smooth at the listed primes)" } else { "\nNOT verified" });
    Ok(Report { json, text, ok })
}

pub fn verify_ks_cmd(input: &str, primes: &[u64]) -> Result<Report> {
    let p: KsIn = load(input)?;
    let f = laurent(p.d1 + p.d2 + p.dz, &p.poly)?;
    let r = match verify_integral_identity(&f, p.d1, p.d2, p.dz, &p.weights, primes) {
        Ok(r) => r,
        Err(e) => return refused(e),
    };
    let (checks, lines) = prime_lines(&r.primes);
    let ok = r.verified();
    let json = json!({
        "verified": ok,
        "lhs": r.lhs.to_string(),
        "rhs": r.rhs.to_string(),
        "symbolic_equal": r.symbolic_equal,
        "primes": checks,
        "schon": strata_schon(&r.schon),
    });
    let mut text = format!("lhs {}\nrhs {}\nsymbolically equal: {}\n{lines}", r.lhs, r.rhs, r.symbolic_equal);
    text.push_str(if ok { "\nverified (reduction-smooth at the listed primes)" } else { "\nNOT verified" });
    Ok(Report { json, text, ok })
}

pub fn circle_compact(input: &str) -> Result<Report> {
    let p: FanIn = load(input)?;
    if p.w.len() != p.n {
        bail!("/w: expected {} entries, found {}", p.n, p.w.len());
    }
    let fan = Fan::new(p.n, cells_at(p.n, &p.cones, "/cones")?).map_err(|e| anyhow!("/cones: {e}"))?;
    let b = is_circle_compact(&fan, &rats(&p.w))?;
    Ok(Report::ok(json!({ "circle_compact": b }), b.to_string()))
}

pub fn fubini_selftest(seed: u64, polyhedra: usize, sets: usize, pairs: usize) -> Result<Report> {
    let chi = selftest::chi_suite(seed, polyhedra, sets);
    let fub = selftest::fubini_suite(seed, pairs);
    let ok = chi.passed() && fub.passed();
    let mut text = format!(
        "chi suite: {} cases, {} failures\nfubini suite: {} pairs, {} failures",
        chi.cases,
        chi.failures.len(),
        fub.cases,
        fub.failures.len()
    );
    for f in chi.failures.iter().chain(&fub.failures) {
        text.push_str(&format!("\n  {f}"));
    }
    Ok(Report { json: json!({ "seed": seed, "chi": chi, "fubini": fub }), text, ok })
}
