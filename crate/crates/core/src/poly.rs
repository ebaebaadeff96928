//! Dense binary forms, sparse multivariate forms and linear substitutions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_c64, Field, GaussRational, C64};

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_in<F: Field>(n: u64, k: u64) -> F {
    F::from_rational(&BigRational::from_integer(binomial(n, k)))
}

/// Number of monomials of the given degree in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    let n = binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1);
    n.try_into().expect("monomial count overflow")
}

/// Exponent vectors of the given degree, lexicographically decreasing
/// (the first variable carries the largest exponent first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Variable names used when none are supplied.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

fn coeff_parts<F: Field>(c: &F) -> (bool, String, bool) {
    // (negative, magnitude text, magnitude is one)
    if F::EXACT {
        let z = c.to_string();
        let q = c.to_c64();
        if q.im == 0.0 {
            let neg = z.starts_with('-');
            let mag = z.trim_start_matches('-').to_string();
            let one = mag == "1";
            return (neg, mag, one);
        }
        return (false, format!("({z})"), false);
    }
    let z = c.to_c64();
    if z.im == 0.0 {
        let neg = z.re < 0.0;
        let mag = format_c64(&C64::new(z.re.abs(), 0.0));
        let one = z.re.abs() == 1.0;
        (neg, mag, one)
    } else {
        (false, format!("({})", format_c64(&z)), false)
    }
}

fn write_terms<'a, F: Field + 'a>(
    f: &mut impl fmt::Write,
    terms: impl Iterator<Item = (&'a Vec<u32>, &'a F)>,
    names: &[String],
) -> fmt::Result {
    let mut first = true;
    for (exps, c) in terms {
        let mono: Vec<String> = exps
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        let (neg, mag, one) = coeff_parts(c);
        let body = match (mono.is_empty(), one) {
            (true, _) => mag,
            (false, true) => mono.join("*"),
            (false, false) => format!("{mag}*{}", mono.join("*")),
        };
        match (first, neg) {
            (true, true) => write!(f, "-{body}")?,
            (true, false) => write!(f, "{body}")?,
            (false, true) => write!(f, " - {body}")?,
            (false, false) => write!(f, " + {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Homogeneous polynomial in `x, y`; `coeffs[j]` multiplies `x^(D-j) y^j`.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryForm<F> {
    coeffs: Vec<F>,
}

impl<F: Field> BinaryForm<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        Self { coeffs: vec![F::zero(); degree as usize + 1] }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| F::from_i64(v)).collect())
    }

    /// `c * x^(degree-j) * y^j`.
    pub fn monomial(degree: u32, j: u32, c: F) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[j as usize] = c;
        f
    }

    /// `a*x + b*y`.
    pub fn linear(a: F, b: F) -> Self {
        Self { coeffs: vec![a, b] }
    }

    /// Builds a form from its binomial-scaled coefficients `a_k`.
    pub fn from_binomial(a: &[F]) -> Self {
        let d = a.len() as u64 - 1;
        Self::new(a.iter().enumerate().map(|(k, ak)| ak.clone() * binomial_in::<F>(d, k as u64)).collect())
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &F {
        &self.coeffs[j]
    }

    /// `a_k = coeffs[k] / C(D, k)`.
    pub fn binomial_coeff(&self, k: usize) -> F {
        self.coeffs[k].clone() / binomial_in::<F>(self.degree() as u64, k as u64)
    }

    pub fn binomial_view(&self) -> Vec<F> {
        (0..self.coeffs.len()).map(|k| self.binomial_coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Field::is_zero)
    }

    /// Largest coefficient modulus.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    /// Max coefficient difference relative to the larger of the two norms.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        let diff = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max);
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { coeffs: upoly::mul(&self.coeffs, &other.coeffs) }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::new(vec![F::one()]);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `y^m`.
    pub fn mul_y_pow(&self, m: u32) -> Self {
        let mut c = vec![F::zero(); m as usize];
        c.extend(self.coeffs.iter().cloned());
        Self { coeffs: c }
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        let d = self.degree();
        let mut acc = F::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = acc + c.clone() * x.pow(d - j as u32) * y.pow(j as u32);
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new((0..d as usize).map(|j| self.coeffs[j].clone() * F::from_i64((d as usize - j) as i64)).collect())
    }

    pub fn derivative_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::new((1..=d as usize).map(|j| self.coeffs[j].clone() * F::from_i64(j as i64)).collect())
    }

    /// `f(a*x + b*y, c*x + e*y)` for the substitution rows `(a, b)` and `(c, e)`.
    pub fn substitute(&self, s: &LinearSubstitution<F>) -> Result<Self> {
        if s.nvars() != 2 {
            return Err(Error::DimensionMismatch(format!("binary form under a {}-variable substitution", s.nvars())));
        }
        let lx = Self::linear(s.entry(0, 0).clone(), s.entry(0, 1).clone());
        let ly = Self::linear(s.entry(1, 0).clone(), s.entry(1, 1).clone());
        let d = self.degree();
        let px = powers(&lx, d);
        let py = powers(&ly, d);
        let mut out = Self::zero(d);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = px[d as usize - j].mul(&py[j]).scale(c);
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// `f(x, t*x + y)`.
    pub fn shear(&self, t: &F) -> Self {
        self.substitute(&LinearSubstitution::shear(t.clone())).expect("shear is binary")
    }

    /// `f(y, x)`.
    pub fn swap(&self) -> Self {
        Self { coeffs: self.coeffs.iter().rev().cloned().collect() }
    }

    /// Largest `m` with `y^m | f`; the degree plus one for the zero form.
    pub fn y_order(&self) -> u32 {
        self.coeffs.iter().take_while(|c| c.is_zero()).count() as u32
    }

    /// Largest `m` with `x^m | f`.
    pub fn x_order(&self) -> u32 {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count() as u32
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide.
    /// Float forms accept a remainder below `1e-8` relative.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() || other.degree() > self.degree() {
            return None;
        }
        let s = other.y_order() as usize;
        let lead = other.coeffs[s].clone();
        let qd = (self.degree() - other.degree()) as usize;
        let mut q = vec![F::zero(); qd + 1];
        for j in 0..=qd {
            let mut acc = self.coeffs[j + s].clone();
            for i in 1..=j.min(other.coeffs.len() - 1 - s) {
                acc = acc - other.coeffs[s + i].clone() * q[j - i].clone();
            }
            q[j] = acc / lead.clone();
        }
        let q = Self::new(q);
        let back = q.mul(other);
        let ok = if F::EXACT { back == *self } else { back.relative_distance(self) <= 1e-8 };
        ok.then_some(q)
    }

    /// `f(t, 1)` as ascending univariate coefficients in `t = x/y`.
    pub fn dehomogenize(&self) -> Vec<F> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Homogenizes ascending univariate coefficients to the given degree.
    pub fn homogenize(u: &[F], degree: u32) -> Self {
        let mut c = vec![F::zero(); degree as usize + 1];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            assert!(i <= degree as usize, "univariate degree exceeds target degree");
            c[degree as usize - i] = a.clone();
        }
        Self::new(c)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BinaryForm<G> {
        BinaryForm { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> BinaryForm<C64> {
        self.map(Field::to_c64)
    }

    pub fn to_multi(&self) -> MultiForm<F> {
        let d = self.degree();
        MultiForm::from_terms(
            2,
            d,
            self.coeffs.iter().enumerate().map(|(j, c)| (vec![d - j as u32, j as u32], c.clone())),
        )
        .expect("binary terms are homogeneous")
    }

    pub fn from_multi(m: &MultiForm<F>) -> Result<Self> {
        if m.nvars() != 2 {
            return Err(Error::VariableMismatch { left: m.nvars(), right: 2 });
        }
        let d = m.degree();
        let mut f = Self::zero(d);
        for (e, c) in m.terms() {
            f.coeffs[e[1] as usize] = c.clone();
        }
        Ok(f)
    }
}

impl BinaryForm<GaussRational> {
    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        Self::new(c.iter().map(|&(n, d)| GaussRational::ratio(n, d)).collect())
    }
}

impl<F: Field> fmt::Display for BinaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi())
    }
}

fn powers<F: Field>(l: &BinaryForm<F>, d: u32) -> Vec<BinaryForm<F>> {
    let mut out = vec![BinaryForm::new(vec![F::one()])];
    for _ in 0..d {
        let next = out.last().unwrap().mul(l);
        out.push(next);
    }
    out
}

/// Sparse homogeneous polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiForm<F> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> MultiForm<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut f = Self::zero(nvars, 0);
        if !c.is_zero() {
            f.terms.insert(vec![0; nvars], c);
        }
        f
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, F::one())
    }

    pub fn monomial(exps: Vec<u32>, c: F) -> Self {
        let mut f = Self::zero(exps.len(), exps.iter().sum());
        if !c.is_zero() {
            f.terms.insert(exps, c);
        }
        f
    }

    /// `Σ coeffs[i] * v_i`.
    pub fn linear(coeffs: &[F]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            1,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
        .expect("linear terms are homogeneous")
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VariableMismatch { left: e.len(), right: nvars });
            }
            let s: u32 = e.iter().sum();
            if s != degree {
                return Err(Error::DegreeMismatch { left: s, right: degree });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn relative_distance(&self, other: &Self) -> f64 {
        let diff = match self.try_sub(other) {
            Ok(d) => d.norm(),
            Err(_) => return f64::INFINITY,
        };
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        let mut f = Self::zero(self.nvars, self.degree);
        for (e, v) in &self.terms {
            f.add_term(e.clone(), v.clone() * c.clone());
        }
        f
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut f = self.clone();
        for (e, c) in &other.terms {
            f.add_term(e.clone(), c.clone());
        }
        Ok(f)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut f = Self::zero(self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                f.add_term(e, c1.clone() * c2.clone());
            }
        }
        Ok(f)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, F::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                if *k > 0 {
                    t = t * x.pow(*k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut f = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            f.add_term(e2, c.clone() * F::from_i64(e[i] as i64));
        }
        f
    }

    /// Applies the differential operator `∂^α`.
    pub fn differentiate(&self, alpha: &[u32]) -> Self {
        let mut f = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                f = f.partial(i);
            }
        }
        f
    }

    /// Replaces variable `i` by `Σ_j s[i][j] v_j`.
    pub fn substitute(&self, s: &LinearSubstitution<F>) -> Result<Self> {
        if s.nvars() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{}-variable form under a {}-variable substitution",
                self.nvars,
                s.nvars()
            )));
        }
        let images: Vec<Self> = (0..self.nvars).map(|i| Self::linear(s.row(i))).collect();
        let mut cache: Vec<Vec<Self>> = images.iter().map(|l| vec![Self::constant(self.nvars, F::one()), l.clone()]).collect();
        let mut out = Self::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().try_mul(&images[i])?;
                    cache[i].push(next);
                }
                if k > 0 {
                    t = t.try_mul(&cache[i][k as usize])?;
                }
            }
            out = out.try_add(&t)?;
        }
        out.degree = self.degree;
        Ok(out)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiForm<G> {
        let mut out = MultiForm::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn to_c64(&self) -> MultiForm<C64> {
        self.map(Field::to_c64)
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut s = String::new();
        write_terms(&mut s, self.terms.iter().rev(), names).expect("writing to a String");
        s
    }
}

impl<F: Field> fmt::Display for MultiForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev(), &default_names(self.nvars))
    }
}

/// A linear change of variables; row `i` is the image of variable `i`.
#[derive(Clone, PartialEq, Debug)]
pub struct LinearSubstitution<F> {
    rows: Vec<Vec<F>>,
}

impl<F: Field> LinearSubstitution<F> {
    pub fn new(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("substitution matrix must be square".into()));
        }
        Ok(Self { rows })
    }

    /// Like [`new`](Self::new) but rejects a singular matrix.
    pub fn new_invertible(rows: Vec<Vec<F>>) -> Result<Self> {
        let s = Self::new(rows)?;
        if s.det().is_negligible(1.0, 1e-12) {
            return Err(Error::NotInvertible);
        }
        Ok(s)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect(),
        }
    }

    /// `(x, y) -> (x, t*x + y)`.
    pub fn shear(t: F) -> Self {
        Self { rows: vec![vec![F::one(), F::zero()], vec![t, F::one()]] }
    }

    /// `(x, y) -> (y, x)`.
    pub fn swap() -> Self {
        Self { rows: vec![vec![F::zero(), F::one()], vec![F::one(), F::zero()]] }
    }

    pub fn diagonal(d: &[F]) -> Self {
        let n = d.len();
        Self {
            rows: (0..n).map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { F::zero() }).collect()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn det(&self) -> F {
        let n = self.nvars();
        let mut a = self.rows.clone();
        let mut det = F::one();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude())).unwrap();
            if a[piv][col].is_zero() {
                return F::zero();
            }
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det = det * a[col][col].clone();
            for r in col + 1..n {
                let f = a[r][col].clone() / a[col][col].clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a[col][c].clone();
                    a[r][c] = a[r][c].clone() - f.clone() * v;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_negligible(1.0, 1e-12)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.nvars();
        let mut a: Vec<Vec<F>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i][col].magnitude().total_cmp(&a[j][col].magnitude())).unwrap();
            if a[piv][col].is_negligible(1.0, 1e-12) {
                return Err(Error::NotInvertible);
            }
            a.swap(piv, col);
            let p = a[col][col].clone();
            for c in 0..2 * n {
                a[col][c] = a[col][c].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = a[col][c].clone();
                    a[r][c] = a[r][c].clone() - f.clone() * v;
                }
            }
        }
        Ok(Self { rows: a.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// Matrix product `self * other`: substituting by `self` then by
    /// `other` equals substituting by the product.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let n = self.nvars();
        if other.nvars() != n {
            return Err(Error::DimensionMismatch("composing substitutions of different sizes".into()));
        }
        Ok(Self {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(F::zero(), |acc, k| acc + self.rows[i][k].clone() * other.rows[k][j].clone()))
                        .collect()
                })
                .collect(),
        })
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LinearSubstitution<G> {
        LinearSubstitution { rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }
}

/// Dense univariate polynomials stored as ascending coefficient vectors.
pub mod upoly {
    use crate::scalar::Field;

    pub fn trim<F: Field>(mut a: Vec<F>) -> Vec<F> {
        while a.last().is_some_and(Field::is_zero) {
            a.pop();
        }
        a
    }

    pub fn degree<F: Field>(a: &[F]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    pub fn mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![F::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }

    pub fn derivative<F: Field>(a: &[F]) -> Vec<F> {
        a.iter().enumerate().skip(1).map(|(i, c)| c.clone() * F::from_i64(i as i64)).collect()
    }

    pub fn eval<F: Field>(a: &[F], x: &F) -> F {
        a.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
        let db = degree(b).expect("division by the zero polynomial");
        let mut r = trim(a.to_vec());
        let lead = b[db].clone();
        let mut q = vec![F::zero(); r.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let f = r[dr].clone() / lead.clone();
            let shift = dr - db;
            for i in 0..=db {
                r[shift + i] = r[shift + i].clone() - f.clone() * b[i].clone();
            }
            r[dr] = F::zero();
            q[shift] = f;
            r = trim(r);
        }
        (trim(q), r)
    }

    /// Monic gcd; exact fields only.
    pub fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = r;
        }
        match x.last().cloned() {
            Some(l) => x.into_iter().map(|c| c / l.clone()).collect(),
            None => x,
        }
    }
}

/// Rational `p/q` as a Gaussian rational; shorthand for tests and examples.
pub fn q(num: i64, den: i64) -> GaussRational {
    GaussRational::ratio(num, den)
}

impl MultiForm<GaussRational> {
    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, &c.denominator_lcm()))
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn has_negative_lead(&self) -> bool {
        self.terms.values().next_back().is_some_and(|c| c.re.is_negative())
    }
}
