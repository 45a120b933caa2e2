//! Shared text grammar for polynomials: terms such as `3/2*t^2*x1^-1*x2^3`
//! joined by `+` and `-`. Variables are `t`, `x1, x2, …` and the aliases
//! `x, y, z` for `x1, x2, x3`.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

/// One parsed term: coefficient, power of `t`, exponent per variable (0-based).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Term {
    pub coeff: Rat,
    pub t_exp: i64,
    pub exps: BTreeMap<usize, i64>,
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.peek();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d: i64 = self.digits()?.parse().map_err(|_| self.err("exponent too large"))?;
        Ok(if neg { -d } else { d })
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: Rat = Rat::from_integer(self.digits()?.parse().unwrap());
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den: num_bigint::BigInt = self.digits()?.parse().unwrap();
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    num / Rat::from_integer(den)
                } else {
                    num
                };
                term.coeff *= value;
            }
            Some(b't') => {
                self.pos += 1;
                term.t_exp += self.exponent()?;
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                let var = if c == b'x' && self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    let k: usize = self.digits()?.parse().map_err(|_| self.err("bad variable"))?;
                    if k == 0 {
                        return Err(self.err("variables are numbered from 1"));
                    }
                    k - 1
                } else {
                    (c - b'x') as usize
                };
                *term.exps.entry(var).or_insert(0) += self.exponent()?;
            }
            _ => return Err(self.err("expected a number or a variable")),
        }
        Ok(())
    }
}

pub(crate) fn parse_terms(src: &str) -> Result<Vec<Term>> {
    let mut lx = Lexer { s: src.as_bytes(), pos: 0, src };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Rat::one();
        match lx.peek() {
            None if !first => break,
            None => return Err(lx.err("empty polynomial")),
            Some(b'+') => lx.pos += 1,
            Some(b'-') => {
                lx.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(_) => return Err(lx.err("expected + or -")),
        }
        first = false;
        let mut term = Term { coeff: sign, t_exp: 0, exps: BTreeMap::new() };
        lx.factor(&mut term)?;
        while lx.peek() == Some(b'*') {
            lx.pos += 1;
            lx.factor(&mut term)?;
        }
        term.exps.retain(|_, e| *e != 0);
        terms.push(term);
    }
    Ok(terms)
}

pub(crate) fn var_name(i: usize, n: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// Writes `coeff · monomial` with a leading sign (`+`/`-`) unless `first`.
pub(crate) fn write_term(out: &mut String, coeff: &Rat, factors: &[(String, i64)], first: bool) {
    let neg = coeff.is_negative();
    if neg {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    let mag = coeff.abs();
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || factors.is_empty() {
        parts.push(fmt_rat(&mag));
    }
    for (name, e) in factors {
        if *e == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    let _ = write!(out, "{}", parts.join("*"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn grammar() {
        let t = parse_terms("3/2*t^2*x1^-1*x2^3 - y + 1").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].coeff, rat(3, 2));
        assert_eq!(t[0].t_exp, 2);
        assert_eq!(t[0].exps, BTreeMap::from([(0, -1), (1, 3)]));
        assert_eq!(t[1].coeff, rat(-1, 1));
        assert_eq!(t[1].exps, BTreeMap::from([(1, 1)]));
        assert!(t[2].exps.is_empty());
        assert!(parse_terms("x +").is_err());
        assert!(parse_terms("x y").is_err());
        assert!(parse_terms("1/0").is_err());
        assert!(parse_terms("").is_err());
    }
}
