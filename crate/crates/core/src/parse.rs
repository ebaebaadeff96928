//! Text grammar for polynomials.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := number | 'i' | variable | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals and are read exactly. `i` is the
//! imaginary unit. Variables are `x`, `y`, `x1..xn` or `Y0..YN`; a single
//! letter followed by digits is one variable, so `x2y` means `x2*y`.
//! Division is only allowed by nonzero constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::poly::{BinaryForm, MultiForm};
use crate::scalar::{Field, GaussRational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Imag,
    Var(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let int_part = &s[i..j];
                let mut frac_part = "";
                if j < b.len() && b[j] == b'.' {
                    let k = j + 1;
                    let mut e = k;
                    while e < b.len() && b[e].is_ascii_digit() {
                        e += 1;
                    }
                    frac_part = &s[k..e];
                    j = e;
                }
                if int_part.is_empty() && frac_part.is_empty() {
                    return Err(perr(start, "malformed number"));
                }
                let digits = format!("{int_part}{frac_part}");
                let num: BigInt = digits.parse().map_err(|_| perr(start, "malformed number"))?;
                let den = num_traits::pow(BigInt::from(10), frac_part.len());
                out.push((start, Tok::Num(BigRational::new(num, den))));
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let name = &s[i..j];
                if name == "i" {
                    out.push((start, Tok::Imag));
                } else {
                    out.push((start, Tok::Var(name.to_string())));
                }
                i = j;
                continue;
            }
            _ => return Err(perr(start, format!("unexpected character '{}'", s[i..].chars().next().unwrap()))),
        }
        i += 1;
    }
    Ok(out)
}

/// A possibly inhomogeneous polynomial over named variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawPoly {
    /// Keyed by sorted `(variable, exponent)` pairs.
    terms: BTreeMap<Vec<(String, u32)>, GaussRational>,
}

impl RawPoly {
    fn constant(c: GaussRational) -> Self {
        let mut p = Self::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    fn var(name: &str) -> Self {
        let mut p = Self::default();
        p.terms.insert(vec![(name.to_string(), 1)], GaussRational::one());
        p
    }

    fn add(mut self, other: Self, sign: i64) -> Self {
        for (k, v) in other.terms {
            let v = if sign < 0 { -v } else { v };
            let e = self.terms.entry(k.clone()).or_insert_with(GaussRational::zero);
            *e = e.clone() + v;
            if e.is_zero() {
                self.terms.remove(&k);
            }
        }
        self
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let mut m: BTreeMap<String, u32> = k1.iter().cloned().collect();
                for (n, e) in k2 {
                    *m.entry(n.clone()).or_insert(0) += e;
                }
                let key: Vec<(String, u32)> = m.into_iter().collect();
                out = out.add(Self { terms: [(key, v1.clone() * v2.clone())].into_iter().collect() }, 1);
            }
        }
        out
    }

    fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Names of the variables that occur.
    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flat_map(|k| k.iter().map(|(n, _)| n.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Total degrees of the terms present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|k| k.iter().map(|(_, e)| e).sum()).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous form over the given ordered variable names.
    pub fn to_form(&self, names: &[String], degree: Option<u32>) -> Result<MultiForm<GaussRational>> {
        let degs = self.degrees();
        let deg = match (degs.as_slice(), degree) {
            ([], Some(d)) => d,
            ([], None) => return Err(perr(0, "the zero polynomial needs an explicit degree")),
            ([d], None) => *d,
            ([d], Some(e)) if *d == e => e,
            ([d], Some(e)) => return Err(Error::DegreeMismatch { left: *d, right: e }),
            _ => return Err(perr(0, format!("polynomial is not homogeneous (degrees {degs:?})"))),
        };
        let mut terms = Vec::new();
        for (k, v) in &self.terms {
            let mut e = vec![0u32; names.len()];
            for (n, p) in k {
                let idx = names.iter().position(|m| m == n).ok_or_else(|| perr(0, format!("unknown variable {n}")))?;
                e[idx] = *p;
            }
            terms.push((e, v.clone()));
        }
        MultiForm::from_terms(names.len(), deg, terms)
    }

    /// Ascending coefficients in the single variable `var`.
    pub fn to_univariate(&self, var: &str) -> Result<Vec<GaussRational>> {
        let mut out: Vec<GaussRational> = Vec::new();
        for (k, v) in &self.terms {
            let mut e = 0usize;
            for (n, p) in k {
                if n != var {
                    return Err(perr(0, format!("unexpected variable {n} in a univariate polynomial")));
                }
                e = *p as usize;
            }
            if out.len() <= e {
                out.resize(e + 1, GaussRational::zero());
            }
            out[e] = v.clone();
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<RawPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?, 1);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?, -1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RawPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let c = d.as_constant().ok_or_else(|| perr(at, "division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(perr(at, "division by zero"));
                    }
                    acc = acc.mul(&RawPoly::constant(GaussRational::one() / c));
                }
                Some(Tok::Num(_)) | Some(Tok::Imag) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RawPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(RawPoly::default().add(self.unary()?, -1))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RawPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.here();
            let e = match self.peek() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    let e: u32 = n.to_integer().try_into().map_err(|_| perr(at, "exponent too large"))?;
                    self.pos += 1;
                    e
                }
                _ => return Err(perr(at, "expected a non-negative integer exponent")),
            };
            let mut acc = RawPoly::constant(GaussRational::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RawPoly> {
        let at = self.here();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RawPoly::constant(GaussRational::real(n)))
            }
            Some(Tok::Imag) => {
                self.pos += 1;
                Ok(RawPoly::constant(GaussRational::imaginary_unit()))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(RawPoly::var(&v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(perr(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => Err(perr(at, "unexpected token")),
            None => Err(perr(at, "unexpected end of input")),
        }
    }
}

/// Parses an arbitrary (possibly inhomogeneous) polynomial expression.
pub fn parse_expression(s: &str) -> Result<RawPoly> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(p.here(), "trailing input"));
    }
    Ok(e)
}

/// Parses a constant expression such as `3/7`, `-0.25` or `(1+2i)/3`.
pub fn parse_constant(s: &str) -> Result<GaussRational> {
    parse_expression(s)?.as_constant().ok_or_else(|| perr(0, "expected a constant"))
}

fn family_index(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() {
        return None;
    }
    rest.parse().ok()
}

/// Infers the ordered variable list from the names that occur.
pub fn infer_variables(used: &[String]) -> Result<Vec<String>> {
    if used.iter().all(|v| v == "x" || v == "y") {
        return Ok(vec!["x".into(), "y".into()]);
    }
    if let Some(idx) = used.iter().map(|v| family_index(v, 'x')).collect::<Option<Vec<_>>>() {
        let n = idx.iter().copied().max().unwrap_or(0).max(2);
        if idx.contains(&0) {
            return Err(perr(0, "x-variables are numbered from 1"));
        }
        return Ok((1..=n).map(|i| format!("x{i}")).collect());
    }
    if let Some(idx) = used.iter().map(|v| family_index(v, 'Y')).collect::<Option<Vec<_>>>() {
        let n = idx.iter().copied().max().unwrap_or(0).max(1);
        return Ok((0..=n).map(|i| format!("Y{i}")).collect());
    }
    Err(perr(0, format!("cannot mix variable families {used:?}; use x,y or x1..xn or Y0..YN")))
}

/// A parsed homogeneous form together with its variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedForm {
    pub names: Vec<String>,
    pub form: MultiForm<GaussRational>,
}

/// Parses a homogeneous form; `degree` is required for the zero polynomial.
pub fn parse_form(s: &str, degree: Option<u32>) -> Result<ParsedForm> {
    let raw = parse_expression(s)?;
    let names = infer_variables(&raw.variables())?;
    let form = raw.to_form(&names, degree)?;
    Ok(ParsedForm { names, form })
}

/// Parses a binary form in `x` and `y`.
pub fn parse_binary(s: &str) -> Result<BinaryForm<GaussRational>> {
    parse_binary_with_degree(s, None)
}

pub fn parse_binary_with_degree(s: &str, degree: Option<u32>) -> Result<BinaryForm<GaussRational>> {
    let raw = parse_expression(s)?;
    let names = vec!["x".to_string(), "y".to_string()];
    if let Some(v) = raw.variables().into_iter().find(|v| v != "x" && v != "y") {
        return Err(perr(0, format!("binary forms use x and y, found {v}")));
    }
    BinaryForm::from_multi(&raw.to_form(&names, degree)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn parses_sextic() {
        let p = parse_binary("x^6 + 3*x^5*y - 3x^4y^2 - 11*x^3*y^3 + 9*x^2*y^4 + 21*x*y^5 - y^6").unwrap();
        assert_eq!(p, BinaryForm::from_i64s(&[1, 3, -3, -11, 9, 21, -1]));
    }

    #[test]
    fn parses_products_and_powers() {
        let p = parse_binary("(x^2+x*y-2*y^2)^3 + y^3*(x+2*y)^3 - (y*(x+y))^3").unwrap();
        assert_eq!(p, BinaryForm::from_i64s(&[1, 3, -3, -11, 9, 21, -1]));
    }

    #[test]
    fn exact_decimals_rationals_and_imaginary() {
        assert_eq!(parse_constant("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_constant("3/7").unwrap(), q(3, 7));
        let z = parse_constant("(1+2i)").unwrap();
        assert_eq!(z.to_string(), "1+2i");
        assert_eq!(parse_constant("3/7i").unwrap().to_string(), "3/7i");
        assert_eq!(parse_constant("-i").unwrap().to_string(), "-i");
    }

    #[test]
    fn rejects_inhomogeneous_and_garbage() {
        assert!(matches!(parse_binary("x^2 + y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_binary("x^2 + $"), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_binary("x/y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_binary("0"), Err(Error::Parse { .. })));
        assert_eq!(parse_binary_with_degree("0", Some(3)).unwrap(), BinaryForm::zero(3));
    }

    #[test]
    fn variable_families() {
        let f = parse_form("x1^3*x2^10*x3^11", None).unwrap();
        assert_eq!(f.names, vec!["x1", "x2", "x3"]);
        let g = parse_form("Y0*Y1 + Y0^2 + Y1^2 - Y2^2", None).unwrap();
        assert_eq!(g.names, vec!["Y0", "Y1", "Y2"]);
        assert_eq!(g.form.coeff(&[0, 0, 2]), q(-1, 1));
        assert!(parse_form("x*Y1", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        let f = parse_binary("1/2*x^3 - (1+2i)*x^2*y + i*x*y^2 - 7*y^3").unwrap();
        let g = parse_binary(&f.to_string()).unwrap();
        assert_eq!(f, g);
    }
}
