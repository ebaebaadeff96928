//! Scalars: exact Gaussian rationals and complex doubles.
//!
//! Every algebraic routine in the crate is generic over [`Field`], which has
//! exactly two implementations: [`GaussRational`] (elements of Q(i), exact)
//! and [`C64`] (complex floating point). Generic code can never mix the two;
//! the dynamically-typed [`Scalar`] wrapper used at the I/O boundary refuses
//! mixed arithmetic unless one side is explicitly promoted.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::BinaryForm;
use crate::roots::ProjRoot;
use crate::tolerance::Tolerances;

pub type C64 = num_complex::Complex64;

/// A field the polynomial machinery can work over.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact arithmetic, where `is_zero` is a decision procedure.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// Lossless import of a float; `None` for exact fields.
    fn from_c64(z: C64) -> Option<Self>;
    fn imaginary_unit() -> Self;

    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> C64;
    fn conj(&self) -> Self;

    /// Principal `n`-th root, when it is representable in the field.
    fn nth_root(&self, n: u32) -> Option<Self>;

    /// Splits a binary form into linear factors over this field. Returns the
    /// projective zeros with multiplicity, or `None` when some factor is not
    /// defined over the field.
    fn linear_roots(f: &BinaryForm<Self>, tol: &Tolerances) -> Option<Vec<ProjRoot<Self>>>;

    /// The value as a Gaussian rational, for exact fields.
    fn as_gauss(&self) -> Option<GaussRational> {
        None
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Exact fields: `is_zero`. Floats: `|self| <= tol * scale`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale.max(f64::MIN_POSITIVE)
        }
    }
}

/// An element `re + im*i` of Q(i), always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn int(v: i64) -> Self {
        Self::real(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Lcm of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }

    fn exact_real_root(r: &BigRational, n: u32) -> Option<BigRational> {
        if r.is_negative() {
            return None;
        }
        let num = r.numer().nth_root(n);
        let den = r.denom().nth_root(n);
        if num.pow(n) == *r.numer() && den.pow(n) == *r.denom() {
            Some(BigRational::new(num, den))
        } else {
            None
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_imag(f: &mut fmt::Formatter<'_>, im: &BigRational, leading: bool) -> fmt::Result {
    let sign = if im.is_negative() { "-" } else if leading { "" } else { "+" };
    let mag = im.abs();
    if mag.is_one() {
        write!(f, "{sign}i")
    } else {
        write!(f, "{sign}{mag}i")
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => fmt_imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                fmt_imag(f, &self.im, false)
            }
        }
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(self.re * o.re);
        }
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for GaussRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!Field::is_zero(&o), "division by zero in Q(i)");
        if self.im.is_zero() && o.im.is_zero() {
            return Self::real(self.re / o.re);
        }
        let n = o.norm_sqr();
        let conj = Self { re: o.re, im: -o.im };
        let p = self * conj;
        Self { re: p.re / &n, im: p.im / n }
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // very large or very small: fall back to log-space
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Field for GaussRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn from_i64(v: i64) -> Self {
        Self::int(v)
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::real(r.clone())
    }
    fn from_c64(_: C64) -> Option<Self> {
        None
    }
    fn imaginary_unit() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if n == 1 || Field::is_zero(self) {
            return Some(self.clone());
        }
        if !self.is_real() {
            return None;
        }
        if let Some(r) = Self::exact_real_root(&self.re, n) {
            return Some(Self::real(r));
        }
        // principal square root of a negative rational is purely imaginary
        if n == 2 {
            if let Some(r) = Self::exact_real_root(&(-self.re.clone()), 2) {
                return Some(Self { re: BigRational::zero(), im: r });
            }
        }
        None
    }
    fn linear_roots(f: &BinaryForm<Self>, tol: &Tolerances) -> Option<Vec<ProjRoot<Self>>> {
        crate::roots::exact_roots(f, tol)
    }
    fn as_gauss(&self) -> Option<GaussRational> {
        Some(self.clone())
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        C64::new(rat_to_f64(r), 0.0)
    }
    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }
    fn imaginary_unit() -> Self {
        C64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if Field::is_zero(self) {
            return Some(*self);
        }
        Some(self.powf(1.0 / n as f64))
    }
    fn linear_roots(f: &BinaryForm<Self>, tol: &Tolerances) -> Option<Vec<ProjRoot<Self>>> {
        crate::roots::float_roots(f, tol).ok()
    }
}

/// Formats a complex double the way certificates and the CLI print it.
pub fn format_c64(z: &C64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Exactness mode of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float,
}

/// A scalar whose mode is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(C64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    /// Explicit exact-to-float promotion.
    pub fn promote(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(q) => q.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    fn zip(
        &self,
        other: &Scalar,
        exact: impl FnOnce(GaussRational, GaussRational) -> Result<GaussRational>,
        float: impl FnOnce(C64, C64) -> C64,
    ) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a.clone(), b.clone())?)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a + b), |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a - b), |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a * b), |a, b| a * b)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(
            other,
            |a, b| {
                if Field::is_zero(&b) {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(a / b)
                }
            },
            |a, b| a / b,
        )
    }

    /// Parses `3/7`, `-2`, `0.25`, `1+2i`, `(1-i)` and similar.
    pub fn parse_exact(s: &str) -> Result<GaussRational> {
        crate::parse::parse_constant(s)
    }

    /// Parses a scalar in the given mode; float mode accepts the same grammar.
    pub fn parse(s: &str, mode: Mode) -> Result<Scalar> {
        let q = Self::parse_exact(s)?;
        Ok(match mode {
            Mode::Exact => Scalar::Exact(q),
            Mode::Float => Scalar::Float(q.to_c64()),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(z) => f.write_str(&format_c64(z)),
        }
    }
}

/// Converts a scalar of any field to its certificate string form.
pub fn scalar_string<F: Field>(x: &F) -> String {
    if F::EXACT {
        x.to_string()
    } else {
        format_c64(&x.to_c64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let q = GaussRational::ratio(6, -4);
        assert_eq!(q.re.numer(), &BigInt::from(-3));
        assert_eq!(q.re.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussRational::imaginary_unit();
        assert_eq!(i.clone() * i.clone(), GaussRational::int(-1));
        let z = GaussRational::int(1) + i.clone() * GaussRational::int(2);
        assert_eq!(z.to_string(), "1+2i");
        let w = z.clone() / z.clone();
        assert_eq!(w, GaussRational::one());
        assert_eq!((GaussRational::int(3) - i.clone()).to_string(), "3-i");
        assert_eq!((-i).to_string(), "-i");
    }

    #[test]
    fn mixing_modes_is_an_error() {
        let a = Scalar::Exact(GaussRational::int(2));
        let b = Scalar::Float(C64::new(2.0, 0.0));
        assert_eq!(a.try_add(&b), Err(Error::ModeMismatch));
        let c = a.promote().try_add(&b).unwrap();
        assert_eq!(c, Scalar::Float(C64::new(4.0, 0.0)));
    }

    #[test]
    fn exact_roots_only_when_representable() {
        assert_eq!(GaussRational::ratio(8, 27).nth_root(3), Some(GaussRational::ratio(2, 3)));
        assert_eq!(GaussRational::int(2).nth_root(2), None);
        let r = GaussRational::int(-4).nth_root(2).unwrap();
        assert_eq!(r.to_string(), "2i");
        assert_eq!(GaussRational::int(-8).nth_root(3), None);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_c64(&C64::new(1.5, -2.0)), "1.5-2i");
        assert_eq!(format_c64(&C64::new(0.0, 0.25)), "0.25i");
        assert_eq!(format_c64(&C64::new(-0.0, 0.0)), "0");
    }
}
