use std::fmt;

use crate::error::{Error, Result};

use super::action::MuAction;
use super::laurent::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// `{h = 0} ⊂ 𝔾_mⁿ` with `n = h.nvars()`.
    Hypersurface(LaurentPoly),
    Opaque(String),
}

/// A generator of the ring: a variety together with its `μ̂`-action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSymbol {
    pub kind: SymbolKind,
    pub action: MuAction,
}

impl ClassSymbol {
    /// The hypersurface `{h = 0}` in the torus, with `h` brought to canonical form.
    pub fn hypersurface(h: &LaurentPoly, action: MuAction) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !action.is_trivial() && action.weights().len() != h.nvars() {
            return Err(Error::DimensionMismatch { expected: h.nvars(), found: action.weights().len() });
        }
        let action = if action.is_trivial() { MuAction::trivial(h.nvars()) } else { action };
        Ok(Self { kind: SymbolKind::Hypersurface(h.canonical()), action })
    }

    pub fn opaque(name: &str, action: MuAction) -> Result<Self> {
        if name.is_empty() || name.contains(['[', ']', '|']) {
            return Err(Error::Parse(format!("invalid symbol name {name:?}")));
        }
        let action = if action.is_trivial() { MuAction::torsor(1) } else { action };
        Ok(Self { kind: SymbolKind::Opaque(name.to_string()), action })
    }

    /// The `N` points of `μ_N` with the translation action.
    pub fn mu_points(n: u64) -> Self {
        Self::opaque(&format!("mu_{n}"), MuAction::torsor(n)).expect("valid name")
    }

    pub fn poly(&self) -> Option<&LaurentPoly> {
        match &self.kind {
            SymbolKind::Hypersurface(h) => Some(h),
            SymbolKind::Opaque(_) => None,
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid symbol {src:?}"));
        let body = src.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
        let parts: Vec<&str> = body.split('|').map(str::trim).collect();
        if let Some(poly) = parts[0].strip_prefix("h:") {
            let n: usize = parts
                .get(1)
                .and_then(|p| p.strip_prefix("n="))
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(bad)?;
            let action = match parts.get(2) {
                Some(a) => parse_action(a).ok_or_else(bad)?,
                None => MuAction::trivial(n),
            };
            if parts.len() > 3 {
                return Err(bad());
            }
            Self::hypersurface(&LaurentPoly::parse(n, poly)?, action)
        } else {
            let action = match parts.get(1) {
                Some(a) => parse_action(a).ok_or_else(bad)?,
                None => MuAction::torsor(1),
            };
            if parts.len() > 2 {
                return Err(bad());
            }
            Self::opaque(parts[0], action)
        }
    }
}

fn parse_action(s: &str) -> Option<MuAction> {
    let inner = s.strip_prefix("mu(")?.strip_suffix(')')?;
    let (d, v) = match inner.split_once(';') {
        Some((d, v)) => (d, Some(v)),
        None => (inner, None),
    };
    let d: u64 = d.trim().strip_prefix("d=")?.parse().ok()?;
    if d == 0 {
        return None;
    }
    match v {
        None => Some(MuAction::torsor(d)),
        Some(v) => {
            let w = v.trim().strip_prefix("v=")?;
            let w: Option<Vec<i64>> = w.split(',').map(|x| x.trim().parse().ok()).collect();
            Some(MuAction::new(d, w?))
        }
    }
}

impl fmt::Display for ClassSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Hypersurface(h) => {
                write!(f, "[h: {h} | n={}", h.nvars())?;
                if !self.action.is_trivial() {
                    write!(f, " | {}", self.action)?;
                }
            }
            SymbolKind::Opaque(name) => {
                write!(f, "[{name}")?;
                if !self.action.is_trivial() {
                    write!(f, " | {}", self.action)?;
                }
            }
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_and_parse() {
        let h = LaurentPoly::parse(2, "x+y+1").unwrap();
        let s = ClassSymbol::hypersurface(&h, MuAction::new(3, vec![1, 2])).unwrap();
        assert_eq!(s.to_string(), "[h: x+y+1 | n=2 | mu(d=3; v=1,2)]");
        assert_eq!(ClassSymbol::parse(&s.to_string()).unwrap(), s);
        let t = ClassSymbol::hypersurface(&h, MuAction::new(3, vec![3, 0])).unwrap();
        assert_eq!(t.to_string(), "[h: x+y+1 | n=2]");
        assert_eq!(ClassSymbol::parse(&t.to_string()).unwrap(), t);
        let m = ClassSymbol::mu_points(2);
        assert_eq!(m.to_string(), "[mu_2 | mu(d=2)]");
        assert_eq!(ClassSymbol::parse("[mu_2 | mu(d=2)]").unwrap(), m);
        assert!(ClassSymbol::parse("[h: 0 | n=1]").is_err());
        assert!(ClassSymbol::parse("h: x").is_err());
    }
}
