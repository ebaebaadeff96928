//! Monomials as `u v^(k-1)` and the nested-power normal form
//! `p = Σ_j y^(jd) p_j^(k-j)` of a binary form of degree `kd`.

use serde::Serialize;

use crate::decomposition::{Decomposition, PowerSum};
use crate::error::{Error, Result};
use crate::poly::{BinaryForm, MultiForm};
use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

type Q = GaussRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialFactorization {
    pub a: Vec<u32>,
    pub k: u32,
    pub d: u32,
    pub m1: Vec<u32>,
    pub m2: Vec<u32>,
    pub q: Vec<u32>,
    pub r: Vec<u32>,
    pub b_parts: Vec<u32>,
    pub b: u32,
}

impl MonomialFactorization {
    /// `a == m1 + (k-1) m2` with both halves of degree `d`.
    pub fn check(&self) -> bool {
        self.m1.iter().sum::<u32>() == self.d
            && self.m2.iter().sum::<u32>() == self.d
            && self.a.iter().zip(self.m1.iter().zip(&self.m2)).all(|(&a, (&x, &y))| a == x + (self.k - 1) * y)
    }
}

/// The exponent vector of a single-term form.
pub fn monomial_exponents_of<F: Field>(f: &MultiForm<F>) -> Option<Vec<u32>> {
    let mut t = f.terms();
    let (e, _) = t.next()?;
    t.next().is_none().then(|| e.clone())
}

/// Writes `x^a = m1 * m2^(k-1)` with `|m1| = |m2| = d`, assuming
/// `(k-2) n <= d`.
pub fn monomial_k_factor(a: &[u32], k: u32) -> Result<MonomialFactorization> {
    let total: u32 = a.iter().sum();
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    if a.is_empty() || !total.is_multiple_of(k) {
        return Err(Error::precondition(format!("degree {total} is not a multiple of {k}")));
    }
    let d = total / k;
    let n = a.len() as u32;
    if (k - 2) * n > d {
        return Err(Error::precondition(format!("(k-2)n = {} exceeds d = {d}", (k - 2) * n)));
    }
    let q: Vec<u32> = a.iter().map(|&x| x / (k - 1)).collect();
    let r: Vec<u32> = a.iter().map(|&x| x % (k - 1)).collect();
    let rsum: u32 = r.iter().sum();
    let b = (d - rsum) / (k - 1);
    let mut order: Vec<usize> = (0..a.len()).collect();
    // stable: ties keep the lower index first
    order.sort_by(|&i, &j| q[j].cmp(&q[i]));
    let mut b_parts = vec![0; a.len()];
    let mut left = b;
    for i in order {
        let take = left.min(q[i]);
        b_parts[i] = take;
        left -= take;
    }
    debug_assert_eq!(left, 0);
    let m1 = (0..a.len()).map(|i| r[i] + b_parts[i] * (k - 1)).collect();
    let m2 = (0..a.len()).map(|i| q[i] - b_parts[i]).collect();
    let out = MonomialFactorization { a: a.to_vec(), k, d, m1, m2, q, r, b_parts, b };
    debug_assert!(out.check());
    Ok(out)
}

fn root_of_unity_sum<F: Field>(u: &MultiForm<F>, v: &MultiForm<F>, k: u32, zeta: F) -> PowerSum<F> {
    let n = u.nvars();
    let kk = F::from_i64((k * k) as i64);
    let mut out = PowerSum::new(n, u.degree(), k);
    let mut z = F::one();
    for _ in 0..k {
        let base = u.scale(&z).try_add(v).expect("same degree");
        out.push(z.inv() / kk.clone(), base);
        z = z * zeta.clone();
    }
    out
}

/// `x^a` as at most `k` k-th powers of degree-`d` forms, from
/// `Σ_j ζ^(-j) (ζ^j u + v)^k = k^2 u v^(k-1)`.
pub fn monomial_krank_upper(a: &[u32], k: u32, tol: &Tolerances) -> Result<Decomposition> {
    let f = monomial_k_factor(a, k)?;
    let n = a.len();
    let target = MultiForm::monomial(a.to_vec(), Q::one());
    if f.m1 == f.m2 {
        let mut p = PowerSum::new(n, f.d, k);
        p.push(Q::one(), MultiForm::monomial(f.m2.clone(), Q::one()));
        return Ok(Decomposition::Exact(p));
    }
    let u = MultiForm::monomial(f.m1.clone(), Q::one());
    let v = MultiForm::monomial(f.m2.clone(), Q::one());
    let dec = match k {
        2 => Decomposition::Exact(root_of_unity_sum(&u, &v, 2, Q::int(-1))),
        4 => Decomposition::Exact(root_of_unity_sum(&u, &v, 4, Q::imaginary_unit())),
        _ => {
            let zeta = C64::from_polar(1.0, std::f64::consts::TAU / k as f64);
            Decomposition::Float(root_of_unity_sum(&u.to_c64(), &v.to_c64(), k, zeta))
        }
    };
    if !dec.verify(&target, tol) {
        return Err(Error::internal(format!("monomial certificate residual {:e}", dec.residual(&target))));
    }
    Ok(dec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CanonicalVariant {
    /// Every `p_j` but the last has no `y^d` term.
    Unique,
    /// Only the `x^(kd)` coefficient is required to be nonzero.
    Relaxed,
}

/// `p_j = scale^(1/(k-j)) * base`, so that `p_j^(k-j) = scale * base^(k-j)`.
/// `base` has `x^d` coefficient one, except for the last part where
/// `scale = 1` and `base = p_(k-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPart<F> {
    pub power: u32,
    pub scale: F,
    pub base: BinaryForm<F>,
}

impl<F: Field> CanonicalPart<F> {
    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.base.is_zero()
    }

    pub fn power_form(&self) -> BinaryForm<F> {
        self.base.pow(self.power).scale(&self.scale)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm<F> {
    pub k: u32,
    pub d: u32,
    pub variant: CanonicalVariant,
    pub parts: Vec<CanonicalPart<F>>,
}

impl<F: Field> CanonicalForm<F> {
    /// `Σ_j y^(jd) p_j^(k-j)`.
    pub fn reconstruct(&self) -> BinaryForm<F> {
        let mut acc = BinaryForm::zero(self.k * self.d);
        for (j, part) in self.parts.iter().enumerate() {
            let t = part.power_form().mul_y_pow(j as u32 * self.d);
            acc = acc.try_add(&t).expect("degree kd");
        }
        acc
    }

    /// Whether the `y^d` coefficient of `p_0..p_(k-2)` is zero.
    pub fn meets_unique_constraints(&self) -> bool {
        let d = self.d as usize;
        self.parts[..self.parts.len() - 1].iter().all(|p| p.base.coeff(d).is_zero())
    }

    /// The forms `p_j`, with principal roots of the scales.
    pub fn parts_c64(&self) -> Vec<BinaryForm<C64>> {
        self.parts
            .iter()
            .map(|p| {
                let s = p.scale.to_c64().powf(1.0 / p.power as f64);
                p.base.to_c64().scale(&s)
            })
            .collect()
    }

    /// The forms `p_j` when every scale has a root in the field.
    pub fn parts_exact(&self) -> Option<Vec<BinaryForm<F>>> {
        self.parts.iter().map(|p| Some(p.base.scale(&p.scale.nth_root(p.power)?))).collect()
    }
}

/// Free coefficients on the right-hand side of the unique normal form.
pub fn canonical_parameter_count(k: u32, d: u32) -> u32 {
    (k - 1) * d + (d + 1)
}

/// `g^(1/k)` modulo `t^len` for a power series with `g_0 = 1`.
fn series_root<F: Field>(g: &[F], k: u32, len: usize) -> Vec<F> {
    let alpha = F::from_ratio(1, k as i64);
    let mut f = vec![F::zero(); len];
    if len == 0 {
        return f;
    }
    f[0] = F::one();
    for n in 1..len {
        let mut acc = F::zero();
        for j in 1..=n.min(g.len() - 1) {
            let w = (alpha.clone() + F::one()) * F::from_i64(j as i64) - F::from_i64(n as i64);
            acc = acc + w * g[j].clone() * f[n - j].clone();
        }
        f[n] = acc / F::from_i64(n as i64);
    }
    f
}

/// Normal form `p = Σ_j y^(jd) p_j^(k-j)` of a binary form of degree `kd`.
pub fn canonical_form<F: Field>(p: &BinaryForm<F>, k: u32, d: u32, variant: CanonicalVariant) -> Result<CanonicalForm<F>> {
    if k == 0 || d == 0 {
        return Err(Error::precondition("k and d must be positive"));
    }
    if p.degree() != k * d {
        return Err(Error::DegreeMismatch { left: p.degree(), right: k * d });
    }
    let du = d as usize;
    let mut rem = p.clone();
    let mut parts = Vec::with_capacity(k as usize);
    for level in 0..k {
        let power = k - level;
        if power == 1 {
            parts.push(CanonicalPart { power, scale: F::one(), base: rem.clone() });
            break;
        }
        if rem.is_zero() {
            parts.push(CanonicalPart { power, scale: F::zero(), base: BinaryForm::zero(d) });
            rem = BinaryForm::zero((power - 1) * d);
            continue;
        }
        let a0 = rem.coeff(0).clone();
        if a0.is_zero() {
            return Err(Error::precondition(format!(
                "leading coefficient vanishes at level {level} of the {} normal form",
                match variant {
                    CanonicalVariant::Unique => "unique",
                    CanonicalVariant::Relaxed => "relaxed",
                }
            )));
        }
        let g: Vec<F> = rem.coeffs()[..du].iter().map(|c| c.clone() / a0.clone()).collect();
        let mut b = series_root(&g, power, du);
        b.push(F::zero());
        let mut base = BinaryForm::new(b.clone());
        let mut next = rem.try_sub(&base.pow(power).scale(&a0))?;
        // the relaxed form rescues a vanishing leading term with a y^d term
        if variant == CanonicalVariant::Relaxed && power > 2 && next.coeff(du).is_zero() && !next.is_zero() {
            b[du] = -(F::from_i64(power as i64) * a0.clone()).inv();
            base = BinaryForm::new(b);
            next = rem.try_sub(&base.pow(power).scale(&a0))?;
        }
        let shifted = BinaryForm::new(next.coeffs()[du..].to_vec());
        debug_assert!(next.coeffs()[..du].iter().all(|c| c.is_negligible(rem.norm(), 1e-9)));
        parts.push(CanonicalPart { power, scale: a0, base });
        rem = shifted;
    }
    Ok(CanonicalForm { k, d, variant, parts })
}

/// `p(x) = λ x^(kd) + Σ_j p_j(x)^(k-j)` for `deg p <= kd`, with `p` given by
/// ascending coefficients. The parts are returned homogenized.
pub fn univariate_canonical<F: Field>(p: &[F], k: u32, d: u32) -> Result<(F, CanonicalForm<F>)> {
    let kd = (k * d) as usize;
    if k == 0 || d == 0 {
        return Err(Error::precondition("k and d must be positive"));
    }
    let deg = p.iter().rposition(|c| !c.is_zero());
    if deg.is_some_and(|n| n > kd) {
        return Err(Error::DegreeMismatch { left: deg.unwrap() as u32, right: kd as u32 });
    }
    let coeff = |i: usize| p.get(i).cloned().unwrap_or_else(F::zero);
    let homog = |lam: &F| BinaryForm::new((0..=kd).map(|j| coeff(kd - j) + if j == 0 { lam.clone() } else { F::zero() }).collect());
    let zero_parts = |last: BinaryForm<F>| CanonicalForm {
        k,
        d,
        variant: CanonicalVariant::Relaxed,
        parts: (0..k)
            .map(|j| {
                let power = k - j;
                if power == 1 {
                    CanonicalPart { power, scale: F::one(), base: last.clone() }
                } else {
                    CanonicalPart { power, scale: F::zero(), base: BinaryForm::zero(d) }
                }
            })
            .collect(),
    };
    match deg {
        None => Ok((F::zero(), zero_parts(BinaryForm::zero(d)))),
        Some(n) if n == kd && (0..kd).all(|i| coeff(i).is_zero()) => Ok((coeff(kd), zero_parts(BinaryForm::zero(d)))),
        Some(n) if n <= d as usize && k > 1 => {
            let last = BinaryForm::new((0..=d as usize).map(|j| coeff(d as usize - j)).collect());
            Ok((F::zero(), zero_parts(last)))
        }
        Some(n) if n == kd => Ok((F::zero(), canonical_form(&homog(&F::zero()), k, d, CanonicalVariant::Relaxed)?)),
        Some(_) => {
            let lam = -F::one();
            Ok((lam.clone(), canonical_form(&homog(&(-lam)), k, d, CanonicalVariant::Relaxed)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_example() {
        let f = monomial_k_factor(&[3, 10, 11], 4).unwrap();
        assert_eq!((f.m1.clone(), f.m2.clone()), (vec![0, 4, 2], vec![1, 2, 3]));
        assert_eq!((f.r.clone(), f.q.clone(), f.b), (vec![0, 1, 2], vec![1, 3, 3], 1));
        assert!(f.check());
    }

    #[test]
    fn factor_refuses_outside_scope() {
        assert!(monomial_k_factor(&[1, 7], 4).is_err());
        assert!(monomial_k_factor(&[1, 6], 4).is_err());
    }

    #[test]
    fn pure_power_is_one_term() {
        let d = monomial_krank_upper(&[12, 0, 0], 3, &Tolerances::default()).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn exact_root_of_unity_certificates() {
        let tol = Tolerances::default();
        let d = monomial_krank_upper(&[3, 10, 11], 4, &tol).unwrap();
        assert!(d.is_exact());
        assert_eq!(d.len(), 4);
        let d = monomial_krank_upper(&[1, 5], 3, &tol).unwrap();
        assert!(!d.is_exact());
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn series_root_squares_back() {
        let g = vec![Q::one(), Q::int(3), Q::ratio(-1, 2), Q::int(7)];
        let r = series_root(&g, 3, 4);
        let cube = BinaryForm::new(r.clone()).pow(3);
        for i in 0..4 {
            assert_eq!(cube.coeff(i), &g[i], "{i}");
        }
    }

    #[test]
    fn canonical_exact_power() {
        let q = BinaryForm::<Q>::from_i64s(&[1, 1, 0]);
        let c = canonical_form(&q.pow(3), 3, 2, CanonicalVariant::Unique).unwrap();
        assert_eq!(c.parts_exact().unwrap()[0], q);
        assert!(c.parts[1].is_zero() && c.parts[2].is_zero());
        assert_eq!(c.reconstruct(), q.pow(3));
    }

    #[test]
    fn canonical_reconstructs() {
        let p = BinaryForm::<Q>::from_i64s(&[2, -1, 3, 5, 0, 7, -4, 1, 9]);
        for (k, d) in [(2, 4), (4, 2), (1, 8)] {
            let c = canonical_form(&p, k, d, CanonicalVariant::Unique).unwrap();
            assert_eq!(c.reconstruct(), p, "k={k} d={d}");
            assert!(c.meets_unique_constraints());
            let f = c.parts_c64();
            let mut acc = BinaryForm::<C64>::zero(8);
            for (j, pj) in f.iter().enumerate() {
                acc = acc.try_add(&pj.pow(k - j as u32).mul_y_pow(j as u32 * d)).unwrap();
            }
            assert!(acc.relative_distance(&p.to_c64()) < 1e-10);
        }
        assert_eq!(canonical_parameter_count(4, 2), 9);
    }

    #[test]
    fn relaxed_rescues_vanishing_level() {
        // x^6 + y^6: the first remainder has no x^4 term
        let p = BinaryForm::<Q>::from_i64s(&[1, 0, 0, 0, 0, 0, 1]);
        assert!(canonical_form(&p, 3, 2, CanonicalVariant::Unique).is_err());
        let c = canonical_form(&p, 3, 2, CanonicalVariant::Relaxed).unwrap();
        assert_eq!(c.reconstruct(), p);
        assert!(!c.meets_unique_constraints());
    }

    #[test]
    fn univariate_cases() {
        let (lam, c) = univariate_canonical(&[Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::int(5)], 2, 2).unwrap();
        assert_eq!(lam, Q::int(5));
        assert!(c.parts.iter().all(|p| p.is_zero()));
        let (lam, c) = univariate_canonical(&[Q::int(3)], 3, 2).unwrap();
        assert_eq!(lam, Q::zero());
        assert_eq!(c.parts[2].base, BinaryForm::from_i64s(&[0, 0, 3]));
        let p = [Q::int(1), Q::int(2), Q::int(-1), Q::int(4)];
        let (lam, c) = univariate_canonical(&p, 2, 2).unwrap();
        assert_eq!(lam, Q::int(-1));
        let mut h = c.reconstruct();
        h = h.try_add(&BinaryForm::monomial(4, 0, lam)).unwrap();
        assert_eq!(h, BinaryForm::from_i64s(&[0, 4, -1, 2, 1]));
    }
}
