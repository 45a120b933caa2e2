use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::euler::ValueRing;

use super::symbol::ClassSymbol;

/// A product of generator symbols (sorted, with repetition) times `𝕃^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub symbols: Vec<ClassSymbol>,
    pub lexp: u32,
}

impl Monomial {
    fn one() -> Self {
        Self { symbols: Vec::new(), lexp: 0 }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        symbols.sort();
        Self { symbols, lexp: self.lexp + other.lexp }
    }
}

/// An element of the Grothendieck ring: an integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotClass {
    terms: BTreeMap<Monomial, i64>,
}

impl MotClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(k: i64) -> Self {
        Self::from_terms([(Monomial::one(), k)])
    }

    /// The Lefschetz class `𝕃 = [𝔸¹]`.
    pub fn lefschetz() -> Self {
        Self::l_pow(1)
    }

    pub fn l_pow(k: u32) -> Self {
        Self::from_terms([(Monomial { symbols: Vec::new(), lexp: k }, 1)])
    }

    pub fn symbol(s: ClassSymbol) -> Self {
        Self::from_terms([(Monomial { symbols: vec![s], lexp: 0 }, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut out = Self::zero();
        for (mut m, c) in terms {
            m.symbols.sort();
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        let e = self.terms.entry(m).or_insert(0);
        *e = e.checked_add(c).expect("coefficient overflow");
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Every symbol occurring in the class.
    pub fn symbols(&self) -> Vec<&ClassSymbol> {
        let mut out: Vec<&ClassSymbol> = self.terms.keys().flat_map(|m| &m.symbols).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn parse(src: &str) -> Result<Self> {
        Parser { src, pos: 0 }.class()
    }
}

impl Add for &MotClass {
    type Output = MotClass;
    fn add(self, rhs: &MotClass) -> MotClass {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &MotClass {
    type Output = MotClass;
    fn sub(self, rhs: &MotClass) -> MotClass {
        self + &rhs.scale(-1)
    }
}

impl Mul for &MotClass {
    type Output = MotClass;
    fn mul(self, rhs: &MotClass) -> MotClass {
        let mut out = MotClass::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x.checked_mul(*y).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Neg for &MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        self.scale(-1)
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for MotClass {
            type Output = MotClass;
            fn $f(self, rhs: MotClass) -> MotClass {
                <&MotClass as $tr>::$f(&self, &rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl ValueRing for MotClass {
    fn zero() -> Self {
        MotClass::zero()
    }
    fn is_zero(&self) -> bool {
        MotClass::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, k: i64) -> Self {
        MotClass::scale(self, k)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, mag: i64) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    if mag != 1 || (m.symbols.is_empty() && m.lexp == 0) {
        parts.push(mag.to_string());
    }
    let mut i = 0;
    while i < m.symbols.len() {
        let mut j = i;
        while j < m.symbols.len() && m.symbols[j] == m.symbols[i] {
            j += 1;
        }
        match j - i {
            1 => parts.push(m.symbols[i].to_string()),
            k => parts.push(format!("{}^{k}", m.symbols[i])),
        }
        i = j;
    }
    match m.lexp {
        0 => {}
        1 => parts.push("L".into()),
        k => parts.push(format!("L^{k}")),
    }
    f.write_str(&parts.join("*"))
}

impl fmt::Display for MotClass {
    /// Monomials in decreasing order, or increasing when that order would
    /// start with a negative coefficient (`1 - L` rather than `-L + 1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &i64)> = self.terms.iter().rev().collect();
        if *terms[0].1 < 0 {
            terms.reverse();
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_monomial(f, m, c.abs())?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("number too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn power(&mut self) -> Result<u32> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        u32::try_from(self.number()?).map_err(|_| self.err("exponent too large"))
    }

    fn factor(&mut self, coeff: &mut i64, m: &mut Monomial) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = i64::try_from(self.number()?).map_err(|_| self.err("coefficient too large"))?;
                *coeff = coeff.checked_mul(k).ok_or_else(|| self.err("coefficient too large"))?;
            }
            Some('L') => {
                self.pos += 1;
                m.lexp += self.power()?;
            }
            Some('[') => {
                let mut depth = 0;
                let mut end = None;
                for (i, ch) in self.rest().char_indices() {
                    match ch {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(i + 1);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| self.err("unterminated symbol"))?;
                let sym = ClassSymbol::parse(&self.rest()[..end])?;
                self.pos += end;
                for _ in 0..self.power()? {
                    m.symbols.push(sym.clone());
                }
            }
            _ => return Err(self.err("expected a number, L or a symbol")),
        }
        Ok(())
    }

    fn class(&mut self) -> Result<MotClass> {
        let mut out = MotClass::zero();
        let mut first = true;
        loop {
            let mut coeff = 1i64;
            match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty class")),
                Some('+') => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    coeff = -1;
                }
                Some(_) if first => {}
                Some(_) => return Err(self.err("expected + or -")),
            }
            first = false;
            let mut m = Monomial::one();
            self.factor(&mut coeff, &mut m)?;
            while self.peek() == Some('*') {
                self.pos += 1;
                self.factor(&mut coeff, &mut m)?;
            }
            m.symbols.sort();
            out.add_term(m, coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_printing() {
        let l = MotClass::lefschetz();
        let lm1 = &l - &MotClass::one();
        assert_eq!((&lm1 + &MotClass::one()), l);
        assert_eq!((&lm1 * &lm1).to_string(), "L^2 - 2*L + 1");
        assert_eq!(lm1.to_string(), "L - 1");
        assert_eq!((-&lm1).to_string(), "1 - L");
        assert_eq!(MotClass::zero().to_string(), "0");
        let s = MotClass::symbol(ClassSymbol::mu_points(2));
        assert!((&s * &MotClass::zero()).is_zero());
        let c = &(&s * &s).scale(2) * &MotClass::l_pow(2);
        assert_eq!(c.to_string(), "2*[mu_2 | mu(d=2)]^2*L^2");
        for x in [c, lm1.pow(3), -&lm1, MotClass::zero(), &s - &l] {
            assert_eq!(MotClass::parse(&x.to_string()).unwrap(), x, "{x}");
        }
    }
}
