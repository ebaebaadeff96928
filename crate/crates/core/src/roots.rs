//! Projective roots of binary forms.
//!
//! Floating roots come from Aberth iteration on the dehomogenized
//! polynomial, seeded deterministically. Exact roots over Q(i) are
//! recovered from the float roots of the square-free part by rounding
//! `lead * r` to a Gaussian integer (Gauss's lemma makes that exact) and
//! checking each candidate exactly.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{is_prime_u64, mul_mod, pow_mod};
use crate::poly::{upoly, BinaryForm};
use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

/// The point `(x : y)` of the projective line; `f(x, y) = 0` for a root of `f`.
#[derive(Clone, PartialEq, Debug)]
pub struct ProjRoot<F> {
    pub x: F,
    pub y: F,
}

impl<F: Field> ProjRoot<F> {
    pub fn finite(t: F) -> Self {
        Self { x: t, y: F::one() }
    }

    pub fn infinity() -> Self {
        Self { x: F::one(), y: F::zero() }
    }

    pub fn is_infinite(&self) -> bool {
        self.y.is_zero()
    }

    /// The linear form `y0*x - x0*y` vanishing at this point.
    pub fn vanishing_form(&self) -> BinaryForm<F> {
        BinaryForm::linear(self.y.clone(), -self.x.clone())
    }

    /// The linear form `x0*x + y0*y` this point stands for in apolarity.
    pub fn linear_form(&self) -> BinaryForm<F> {
        BinaryForm::linear(self.x.clone(), self.y.clone())
    }

    pub fn to_c64(&self) -> ProjRoot<C64> {
        ProjRoot { x: self.x.to_c64(), y: self.y.to_c64() }
    }
}

/// Chordal distance between two points of the projective line.
pub fn chordal_distance(a: &ProjRoot<C64>, b: &ProjRoot<C64>) -> f64 {
    let num = (a.x * b.y - a.y * b.x).norm();
    let na = (a.x.norm_sqr() + a.y.norm_sqr()).sqrt();
    let nb = (b.x.norm_sqr() + b.y.norm_sqr()).sqrt();
    num / (na * nb)
}

/// `lead * Π (y_i x - x_i y)`.
pub fn expand_roots<F: Field>(lead: &F, roots: &[ProjRoot<F>]) -> BinaryForm<F> {
    roots.iter().fold(BinaryForm::new(vec![lead.clone()]), |acc, r| acc.mul(&r.vanishing_form()))
}

fn horner_with_derivative(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots of an ascending univariate polynomial with nonzero
/// leading coefficient.
pub fn aberth(c: &[C64], max_iter: usize, seed: u64) -> Vec<C64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<C64> = c.iter().map(|a| a / lead).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = (0..n)
        .filter(|&i| c[i].norm() > 0.0)
        .map(|i| c[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let phase: f64 = rng.random_range(0.0..TAU);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let r = radius * rng.random_range(0.5..1.0);
            C64::from_polar(r, phase + TAU * k as f64 / n as f64)
        })
        .collect();
    for _ in 0..max_iter {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_with_derivative(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() == 0.0 || !denom.is_finite() { ratio } else { ratio / denom };
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if moved <= 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_with_derivative(&c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zk - p / dp;
            let (pc, _) = horner_with_derivative(&c, cand);
            if pc.norm() < p.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    z
}

fn residual(f: &BinaryForm<C64>, r: &ProjRoot<C64>) -> f64 {
    // evaluate at a representative with max(|x|, |y|) = 1
    let s = r.x.norm().max(r.y.norm());
    let v = f.eval(&(r.x / s), &(r.y / s));
    v.norm() / f.norm()
}

/// Projective roots with multiplicity, as complex doubles.
pub fn float_roots<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<Vec<ProjRoot<C64>>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let f = f.to_c64();
    let m = f.y_order() as usize;
    let mut out: Vec<ProjRoot<C64>> = (0..m).map(|_| ProjRoot::infinity()).collect();
    let rest = BinaryForm::new(f.coeffs()[m..].to_vec());
    let u = rest.dehomogenize();
    for t in aberth(&u, tol.aberth_max_iter, tol.seed) {
        let r = ProjRoot::finite(t);
        let res = residual(&rest, &r);
        if !(res <= tol.root_residual) {
            return Err(Error::internal(format!("root {t} has residual {res:e}")));
        }
        out.push(r);
    }
    Ok(out)
}

/// The roots as complex doubles; alias of [`float_roots`].
pub fn roots<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<Vec<ProjRoot<C64>>> {
    float_roots(f, tol)
}

fn integer_content(u: &[GaussRational]) -> Vec<GaussRational> {
    let l = u.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    let lq = GaussRational::real(BigRational::from_integer(l));
    let scaled: Vec<GaussRational> = u.iter().map(|c| c.clone() * lq.clone()).collect();
    let g = scaled
        .iter()
        .flat_map(|c| [c.re.to_integer(), c.im.to_integer()])
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
    if g.is_zero() {
        return scaled;
    }
    let gq = GaussRational::real(BigRational::from_integer(g));
    scaled.into_iter().map(|c| c / gq.clone()).collect()
}

fn round_big(v: f64) -> Option<BigRational> {
    if !v.is_finite() || v.abs() > 2f64.powi(60) {
        return None;
    }
    Some(BigRational::from_integer(BigInt::from(v.round() as i64)))
}

/// A prime `p = 1 mod 4` below `start` with a square root of `-1` mod `p`.
fn gaussian_prime_below(start: u64) -> (u64, u64) {
    let mut p = start - (start % 4) + 1;
    loop {
        p -= 4;
        if !is_prime_u64(p) {
            continue;
        }
        for c in 2..64 {
            let s = pow_mod(c, (p - 1) / 4, p);
            if mul_mod(s, s, p) == p - 1 {
                return (p, s);
            }
        }
    }
}

fn trim_mod(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    while !b.is_empty() {
        let inv = pow_mod(*b.last().expect("nonempty"), p - 2, p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mul_mod(*a.last().expect("nonempty"), inv, p);
            for (j, bj) in b.iter().enumerate() {
                let sub = mul_mod(f, *bj, p);
                let x = &mut a[shift + j];
                *x = if *x >= sub { *x - sub } else { *x + p - sub };
            }
            a = trim_mod(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Certifies that a univariate polynomial over Q(i) is square-free by
/// checking `gcd(g, g') = 1` modulo primes of Z[i] that keep its degree.
/// `false` means undecided.
fn square_free_mod_p(g: &[GaussRational]) -> bool {
    let ints = integer_content(g);
    let mut start = 1u64 << 62;
    for _ in 0..2 {
        let (p, s) = gaussian_prime_below(start);
        start = p;
        let pb = BigInt::from(p);
        let red = |c: &GaussRational| {
            let v = c.re.to_integer() + c.im.to_integer() * BigInt::from(s);
            v.mod_floor(&pb).to_u64().expect("residue fits")
        };
        let a: Vec<u64> = ints.iter().map(red).collect();
        if a.last() == Some(&0) {
            continue;
        }
        let da: Vec<u64> = a.iter().enumerate().skip(1).map(|(j, c)| mul_mod(*c, j as u64 % p, p)).collect();
        if gcd_degree_mod(a, trim_mod(da), p) == 0 {
            return true;
        }
    }
    false
}

/// Splits a form over Q(i) into linear factors, or returns `None` when some
/// root is not a Gaussian rational.
pub fn exact_roots(f: &BinaryForm<GaussRational>, tol: &Tolerances) -> Option<Vec<ProjRoot<GaussRational>>> {
    if f.is_zero() {
        return None;
    }
    let m = f.y_order() as usize;
    let mut out: Vec<ProjRoot<GaussRational>> = (0..m).map(|_| ProjRoot::infinity()).collect();
    let g = upoly::trim(BinaryForm::new(f.coeffs()[m..].to_vec()).dehomogenize());
    if g.len() <= 1 {
        return Some(out);
    }
    let sqfree = if square_free_mod_p(&g) {
        integer_content(&g)
    } else {
        let common = upoly::gcd(&g, &upoly::derivative(&g));
        integer_content(&upoly::divrem(&g, &common).0)
    };
    let lead = sqfree.last().unwrap().clone();
    let lead_c = lead.to_c64();
    let approx = float_roots(&BinaryForm::homogenize(&sqfree, (sqfree.len() - 1) as u32), tol).ok()?;
    let mut distinct = Vec::new();
    for r in approx {
        let w = lead_c * r.x;
        let cand = GaussRational::new(round_big(w.re)?, round_big(w.im)?) / lead.clone();
        if !upoly::eval(&sqfree, &cand).is_zero() || distinct.contains(&cand) {
            return None;
        }
        distinct.push(cand);
    }
    let mut rest = g;
    for r in distinct {
        let lin = vec![-r.clone(), GaussRational::one()];
        loop {
            let (q, rem) = upoly::divrem(&rest, &lin);
            if !rem.is_empty() {
                break;
            }
            rest = q;
            out.push(ProjRoot::finite(r.clone()));
        }
    }
    (rest.len() == 1).then_some(out)
}

/// Whether `f` has no repeated linear factor. Exact fields decide this by a
/// gcd; floats compare the minimum chordal distance between roots against
/// the two thresholds in `tol` and report the band between them as ambiguous.
pub fn is_square_free<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if F::EXACT {
        let m = f.y_order();
        if m >= 2 {
            return Ok(false);
        }
        let g = upoly::trim(BinaryForm::new(f.coeffs()[m as usize..].to_vec()).dehomogenize());
        if g.len() <= 2 {
            return Ok(true);
        }
        if let Some(gq) = g.iter().map(Field::as_gauss).collect::<Option<Vec<_>>>() {
            if square_free_mod_p(&gq) {
                return Ok(true);
            }
        }
        let common = upoly::gcd(&g, &upoly::derivative(&g));
        return Ok(common.len() <= 1);
    }
    let r = float_roots(f, tol)?;
    let mut delta = f64::INFINITY;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            delta = delta.min(chordal_distance(&r[i], &r[j]));
        }
    }
    if delta <= tol.square_factor {
        Ok(false)
    } else if delta >= tol.square_free {
        Ok(true)
    } else {
        Err(Error::Ambiguous(format!("closest roots are {delta:e} apart")))
    }
}

/// Smallest chordal distance between distinct-index roots (infinite for fewer than two).
pub fn min_separation(r: &[ProjRoot<C64>]) -> f64 {
    let mut delta = f64::INFINITY;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            delta = delta.min(chordal_distance(&r[i], &r[j]));
        }
    }
    delta
}

/// Numerical sanity for callers that want a plain `f64` root list.
pub fn finite_roots_f64(f: &BinaryForm<C64>, tol: &Tolerances) -> Result<Vec<C64>> {
    Ok(float_roots(f, tol)?.into_iter().filter(|r| !r.is_infinite()).map(|r| r.x / r.y).collect())
}
