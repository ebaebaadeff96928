//! Integer power series, Fröberg truncation and generic k-rank formulas.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::integer_rank;
use crate::poly::{binomial, monomial_count, monomials, MultiForm};
use crate::scalar::GaussRational;

/// Power series with integer coefficients known up to `t^cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series keeps at least the constant term");
        Self { coeffs }
    }

    pub fn one(cutoff: usize) -> Self {
        let mut c = vec![BigInt::zero(); cutoff + 1];
        c[0] = BigInt::one();
        Self { coeffs: c }
    }

    /// `1 / (1-t)^n`.
    pub fn free_ring(n: usize, cutoff: usize) -> Self {
        Self {
            coeffs: (0..=cutoff)
                .map(|j| if n == 0 { BigInt::from(u8::from(j == 0)) } else { binomial((j + n - 1) as u64, (n - 1) as u64) })
                .collect(),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cut = self.cutoff().min(other.cutoff());
        let mut c = vec![BigInt::zero(); cut + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cut + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cut + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self { coeffs: c }
    }

    /// Multiplies by `1 - t^g`.
    pub fn mul_one_minus(&self, g: usize) -> Self {
        let mut c = self.coeffs.clone();
        for j in (g..c.len()).rev() {
            let v = c[j - g].clone();
            c[j] -= v;
        }
        Self { coeffs: c }
    }

    /// Zeroes everything from the first non-positive coefficient on.
    pub fn truncate_nonpositive(&self) -> Self {
        let mut c = self.coeffs.clone();
        if let Some(k) = c.iter().position(|v| !v.is_positive()) {
            for v in c.iter_mut().skip(k) {
                *v = BigInt::zero();
            }
        }
        Self { coeffs: c }
    }
}

/// `prod (1 - t^{d_i}) / (1-t)^n` before truncation.
pub fn hilbert_numerator_series(n: usize, gen_degrees: &[u32], cutoff: usize) -> TruncatedSeries {
    gen_degrees.iter().fold(TruncatedSeries::free_ring(n, cutoff), |acc, &d| acc.mul_one_minus(d as usize))
}

/// The Fröberg series `⌈prod (1 - t^{d_i}) / (1-t)^n⌉` up to `cutoff`.
pub fn froeberg_series(n: usize, gen_degrees: &[u32], cutoff: usize) -> TruncatedSeries {
    hilbert_numerator_series(n, gen_degrees, cutoff).truncate_nonpositive()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankStatus {
    Proven,
    Conjectural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaPath {
    ClosedForm,
    Series,
}

/// A generic k-rank together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankAnswer {
    pub value: u64,
    pub status: RankStatus,
    /// The value exceeds the parameter count `⌈dim S_kd / dim S_d⌉`.
    pub exceptional: bool,
    pub path: FormulaPath,
    /// The series path was evaluated and agreed with the closed form.
    pub cross_checked: bool,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn to_u64(v: &BigInt) -> u64 {
    v.to_u64().expect("rank value fits in u64")
}

/// `⌈C(kd+n-1, n-1) / C(d+n-1, n-1)⌉`, the naive parameter count.
pub fn parameter_count_bound(n: u32, k: u32, d: u32) -> u64 {
    let (n, k, d) = (n as u64, k as u64, d as u64);
    to_u64(&ceil_div(&binomial(k * d + n - 1, n - 1), &binomial(d + n - 1, n - 1)))
}

/// The displayed two-branch formula for the generic k-rank.
pub fn conjectured_k_rank(n: u32, k: u32, d: u32) -> u64 {
    let (n64, d64) = (n as u64, d as u64);
    if k == 2 {
        let a = binomial(2 * d64 + n64 - 1, n64 - 1);
        let b = binomial(d64 + n64 - 1, n64 - 1);
        let mut s = 1u64;
        loop {
            let lhs = BigInt::from(s) * &b - binomial(s, 2);
            if lhs >= a {
                return s;
            }
            s += 1;
        }
    }
    parameter_count_bound(n, k, d)
}

/// Minimal `s` for which the Fröberg series of `s` generators of degree
/// `d(k-1)` vanishes in degree `kd`.
pub fn series_k_rank(n: u32, k: u32, d: u32) -> u64 {
    let g = (d * (k - 1)) as usize;
    let top = (k * d) as usize;
    let mut acc = TruncatedSeries::free_ring(n as usize, top);
    let mut s = 0u64;
    loop {
        s += 1;
        acc = acc.mul_one_minus(g);
        if acc.truncate_nonpositive().coeff(top).is_zero() {
            return s;
        }
    }
}

fn is_ah_exception(n: u32, k: u32) -> bool {
    matches!((n, k), (3, 4) | (4, 4) | (5, 3) | (5, 4))
}

/// Generic k-rank `rk°_k(n, kd)`.
///
/// Binary forms, `d = 1`, and sums of squares in three or four variables are
/// proven results; every other triple uses the conjectured formula. Where the
/// Fröberg-series path is meaningful it is evaluated as a cross-check and a
/// disagreement is reported as an internal error.
pub fn generic_k_rank(n: u32, k: u32, d: u32) -> Result<RankAnswer> {
    if n < 2 || k < 2 || d < 1 {
        return Err(Error::precondition("generic_k_rank needs n >= 2, k >= 2, d >= 1"));
    }
    let naive = parameter_count_bound(n, k, d);
    let (value, status) = if n == 2 {
        let v = (k as u64 * d as u64 + 1).div_ceil(d as u64 + 1);
        (v, RankStatus::Proven)
    } else if d == 1 {
        let v = if k == 2 {
            n as u64
        } else {
            naive + u64::from(is_ah_exception(n, k))
        };
        (v, RankStatus::Proven)
    } else if k == 2 && n == 3 {
        (naive + u64::from(matches!(d, 3 | 4)), RankStatus::Proven)
    } else if k == 2 && n == 4 {
        (naive + u64::from(d == 2), RankStatus::Proven)
    } else {
        (conjectured_k_rank(n, k, d), RankStatus::Conjectural)
    };
    // powers of linear forms are not Hilbert generic outside n = 2
    let series_applies = n == 2 || d >= 2;
    if series_applies {
        let s = series_k_rank(n, k, d);
        if s != value {
            return Err(Error::internal(format!(
                "closed form gives {value} but the series path gives {s} for (n,k,d)=({n},{k},{d})"
            )));
        }
    }
    Ok(RankAnswer { value, status, exceptional: value > naive, path: FormulaPath::ClosedForm, cross_checked: series_applies })
}

/// Degree-`kd` Hilbert function value of `s` generic generators of degree
/// `d(k-1)` under Fröberg truncation.
pub fn froeberg_value(n: u32, k: u32, d: u32, s: u64) -> BigInt {
    let g = d * (k - 1);
    let degs = vec![g; s as usize];
    froeberg_series(n as usize, &degs, (k * d) as usize).coeff((k * d) as usize).clone()
}

/// `max(0, HF(kd) - 1)`, the Terracini codimension count for `σ_s`.
pub fn secant_codim(n: u32, k: u32, d: u32, s: u64) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::precondition("s must be at least 1"));
    }
    let hf = froeberg_value(n, k, d, s);
    Ok((hf - BigInt::one()).max(BigInt::zero()))
}

/// `H_i(s)` for `d(k-1) <= i <= kd`: at most quadratic in `s`, quadratic only at `i = 2d` when `k = 2`.
fn h_window(n: u64, k: u64, d: u64, i: u64, s: &BigInt) -> BigInt {
    let g = d * (k - 1);
    let mut h = binomial(i + n - 1, n - 1) - s * binomial(i - g + n - 1, n - 1);
    if 2 * g <= i {
        h += s * (s - 1) / 2;
    }
    h
}

/// `s_i = min{s : H_i <= 0}` for `i = d(k-1), ..., kd`, returned as `(i, s_i)`.
/// Fails with an internal error if the list is not non-increasing.
pub fn si_thresholds(n: u32, k: u32, d: u32) -> Result<Vec<(u32, BigInt)>> {
    if n < 2 || k < 2 || d < 2 {
        return Err(Error::precondition("si_thresholds needs n, k, d >= 2"));
    }
    let (n64, k64, d64) = (n as u64, k as u64, d as u64);
    let g = d64 * (k64 - 1);
    let mut out = Vec::new();
    for i in g..=k64 * d64 {
        let lin = binomial(i - g + n64 - 1, n64 - 1);
        let a = binomial(i + n64 - 1, n64 - 1);
        let s = if 2 * g > i {
            ceil_div(&a, &lin)
        } else {
            // convex in s; decreasing up to the vertex near lin + 1/2
            let vertex = &lin + BigInt::one();
            if h_window(n64, k64, d64, i, &vertex).is_positive() {
                return Err(Error::internal(format!("H_{i} never becomes non-positive")));
            }
            let (mut lo, mut hi) = (BigInt::zero(), vertex);
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi) / 2;
                if h_window(n64, k64, d64, i, &mid).is_positive() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        };
        out.push((i as u32, s));
    }
    for w in out.windows(2) {
        if w[1].1 > w[0].1 {
            return Err(Error::internal(format!(
                "s_{} = {} exceeds s_{} = {} for (n,k,d)=({n},{k},{d})",
                w[1].0, w[1].1, w[0].0, w[0].1
            )));
        }
    }
    Ok(out)
}

/// How the oracle draws one generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// A random form of this degree.
    Random(u32),
    /// A random form of degree `base` raised to `exponent`.
    Power { base: u32, exponent: u32 },
}

impl GeneratorSpec {
    pub fn degree(&self) -> u32 {
        match *self {
            GeneratorSpec::Random(d) => d,
            GeneratorSpec::Power { base, exponent } => base * exponent,
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, d: u32) -> MultiForm<GaussRational> {
    let terms: Vec<(Vec<u32>, GaussRational)> =
        monomials(n, d).into_iter().map(|e| (e, GaussRational::int(rng.random_range(-50..=50)))).collect();
    MultiForm::from_terms(n, d, terms).expect("homogeneous by construction")
}

/// Rank of the degree-`j` Macaulay matrix of integer-coefficient generators.
pub fn macaulay_rank(n: usize, gens: &[MultiForm<GaussRational>], j: u32) -> usize {
    let cols = monomials(n, j);
    let index = |e: &[u32]| cols.iter().position(|c| c.as_slice() == e).expect("monomial of degree j");
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for g in gens {
        if g.degree() > j {
            continue;
        }
        let lcm = g.denominator_lcm();
        for m in monomials(n, j - g.degree()) {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (e, c) in g.terms() {
                let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                row[index(&prod)] = (c.re.clone() * BigRational::from_integer(lcm.clone())).to_integer();
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return 0;
    }
    integer_rank(&rows)
}

/// `dim [S/I]_j` for the given generators (real integer or rational coefficients).
pub fn macaulay_hilbert_value(n: usize, gens: &[MultiForm<GaussRational>], j: u32) -> u64 {
    (monomial_count(n, j) - macaulay_rank(n, gens, j)) as u64
}

fn draw(n: usize, specs: &[GeneratorSpec], rng: &mut ChaCha8Rng) -> Vec<MultiForm<GaussRational>> {
    specs
        .iter()
        .map(|s| match *s {
            GeneratorSpec::Random(d) => random_form(rng, n, d),
            GeneratorSpec::Power { base, exponent } => random_form(rng, n, base).pow(exponent),
        })
        .collect()
}

/// `dim [S/I]_j` for pseudo-random generators with coefficients in
/// `[-50, 50]`, computed from the exact rank of the Macaulay matrix.
///
/// A non-maximal rank triggers a second independent draw; if the two
/// disagree the pair is drawn once more, and a second disagreement is an error.
pub fn macaulay_hilbert_oracle(n: usize, specs: &[GeneratorSpec], j: u32, seed: u64) -> Result<u64> {
    let total = monomial_count(n, j);
    let rows: usize = specs.iter().filter(|s| s.degree() <= j).map(|s| monomial_count(n, j - s.degree())).sum();
    let full = total.min(rows);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..2 {
        let r1 = macaulay_rank(n, &draw(n, specs, &mut rng), j);
        if r1 == full {
            return Ok((total - r1) as u64);
        }
        let r2 = macaulay_rank(n, &draw(n, specs, &mut rng), j);
        if r1 == r2 {
            return Ok((total - r1) as u64);
        }
    }
    Err(Error::internal(format!("random draws disagree on the degree-{j} Macaulay rank")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|v| v.to_i64().unwrap()).collect()
    }

    #[test]
    fn free_ring_in_two_variables() {
        assert_eq!(ints(&froeberg_series(2, &[], 4)), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn principal_ideal_plateaus() {
        assert_eq!(ints(&froeberg_series(2, &[3], 6)), vec![1, 2, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn five_quadrics_in_three_variables() {
        // (1-t^2)^5/(1-t)^3 = 1 + 3t + t^2 - 5t^3 ...; truncated after degree 2
        let s = froeberg_series(3, &[2; 5], 4);
        assert_eq!(ints(&s), vec![1, 3, 1, 0, 0]);
        // direct expansion by binomials
        let direct = |j: i64| -> i64 {
            (0..=5)
                .filter(|&m| 2 * m <= j)
                .map(|m| {
                    let sign = if m % 2 == 0 { 1 } else { -1 };
                    sign * binomial(5, m as u64).to_i64().unwrap() * binomial((j - 2 * m + 2) as u64, 2).to_i64().unwrap()
                })
                .sum()
        };
        let raw = hilbert_numerator_series(3, &[2; 5], 4);
        for j in 0..=4 {
            assert_eq!(raw.coeff(j).to_i64().unwrap(), direct(j as i64));
        }
    }

    #[test]
    fn binary_generic_ranks() {
        let a = generic_k_rank(2, 3, 2).unwrap();
        assert_eq!(a.value, 3);
        assert_eq!(a.status, RankStatus::Proven);
        assert!(a.cross_checked);
        for k in 2..8 {
            assert_eq!(generic_k_rank(2, k, 1).unwrap().value, (k as u64 + 1).div_ceil(2));
        }
    }

    #[test]
    fn ternary_squares_exceptions() {
        let a = generic_k_rank(3, 2, 3).unwrap();
        assert_eq!((a.value, a.exceptional), (4, true));
        assert!(!generic_k_rank(3, 2, 2).unwrap().exceptional);
        assert_eq!(generic_k_rank(3, 4, 1).unwrap().value, 6);
        assert_eq!(generic_k_rank(4, 2, 1).unwrap().value, 4);
    }

    #[test]
    fn codimension_counts() {
        assert_eq!(secant_codim(2, 3, 2, 1).unwrap(), BigInt::from(3));
        assert_eq!(secant_codim(2, 3, 2, 3).unwrap(), BigInt::zero());
        // (1-t^2)^2/(1-t)^3 at degree 4: 15 - 2*6 + 1 = 4
        assert_eq!(secant_codim(3, 2, 2, 2).unwrap(), BigInt::from(3));
    }

    #[test]
    fn thresholds_for_binary_cubes_of_quadrics() {
        let s = si_thresholds(2, 3, 2).unwrap();
        // H_i = (i+1) - s(i-3)
        let expect: Vec<(u32, BigInt)> = (4..=6u32).map(|i| (i, BigInt::from((i as i64 + 1 + i as i64 - 4) / (i as i64 - 3)))).collect();
        assert_eq!(s, expect);
    }

    #[test]
    fn thresholds_ternary_squares() {
        let s = si_thresholds(3, 2, 2).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[2].1 <= s[1].1);
    }

    #[test]
    fn oracle_trivial_and_binary_powers() {
        assert_eq!(macaulay_hilbert_oracle(3, &[], 4, 1).unwrap(), 15);
        // squares of 2 random binary cubics in degree 6
        let specs = [GeneratorSpec::Power { base: 3, exponent: 2 }; 2];
        let v = macaulay_hilbert_oracle(2, &specs, 9, 3).unwrap();
        let f = froeberg_series(2, &[6, 6], 9);
        assert_eq!(v, f.coeff(9).to_u64().unwrap());
    }
}
