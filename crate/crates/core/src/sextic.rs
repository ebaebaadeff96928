//! Binary sextics as sums of at most three cubes of quadratic forms.

use std::ops::{Add, Div, Mul, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use serde::{Deserialize, Serialize};

use crate::apolarity::cubic_three_cubes;
use crate::decomposition::{Decomposition, PowerSum};
use crate::error::{Error, Result};
use crate::poly::{BinaryForm, LinearSubstitution, MultiForm};
use crate::roots::exact_roots;
use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

type Q = GaussRational;

/// Largest shear parameter index tried before giving up.
const T_SEARCH_CAP: usize = 200;

/// Binomial coefficients `a_0..a_6` of `p = Σ C(6,k) a_k x^(6-k) y^k`.
#[derive(Clone, PartialEq, Debug)]
pub struct SexticView<F> {
    pub a: Vec<F>,
}

impl<F: Field> SexticView<F> {
    pub fn from_form(p: &BinaryForm<F>) -> Result<Self> {
        if p.degree() != 6 {
            return Err(Error::DegreeMismatch { left: p.degree(), right: 6 });
        }
        Ok(Self { a: p.binomial_view() })
    }

    pub fn to_form(&self) -> BinaryForm<F> {
        BinaryForm::from_binomial(&self.a)
    }
}

/// The quadratic `q` and cubic `c` with `p = a0 q^3 + y^3 c / a0^5`.
pub fn residual_cubic<F: Field>(p: &SexticView<F>) -> Result<(BinaryForm<F>, BinaryForm<F>)> {
    let a = &p.a;
    let a0 = a[0].clone();
    if a0.is_zero() {
        return Err(Error::precondition("a0 must be nonzero"));
    }
    let n = |v: i64| F::from_i64(v);
    let (a1, a2, a3, a4, a5, a6) = (&a[1], &a[2], &a[3], &a[4], &a[5], &a[6]);
    let p_ = |x: &F, e: u32| x.pow(e);
    let q = BinaryForm::new(vec![
        F::one(),
        n(2) * a1.clone() / a0.clone(),
        (n(5) * a0.clone() * a2.clone() - n(4) * p_(a1, 2)) / p_(&a0, 2),
    ]);
    let c0 = n(20)
        * p_(&a0, 3)
        * (n(2) * p_(a1, 3) - n(3) * a0.clone() * a1.clone() * a2.clone() + p_(&a0, 2) * a3.clone());
    let c1 = n(5)
        * p_(&a0, 3)
        * (n(4) * p_(a1, 2) * a2.clone() - n(5) * a0.clone() * p_(a2, 2) + p_(&a0, 2) * a4.clone());
    let c2 = n(2)
        * a0.clone()
        * (n(-16) * p_(a1, 5) + n(40) * a0.clone() * p_(a1, 3) * a2.clone()
            - n(25) * p_(&a0, 2) * a1.clone() * p_(a2, 2)
            + p_(&a0, 4) * a5.clone());
    let c3 = n(64) * p_(a1, 6) - n(240) * a0.clone() * p_(a1, 4) * a2.clone()
        + n(300) * p_(&a0, 2) * p_(a1, 2) * p_(a2, 2)
        - n(125) * p_(&a0, 3) * p_(a2, 3)
        + p_(&a0, 5) * a6.clone();
    let c = BinaryForm::new(vec![c0, n(3) * c1, n(3) * c2, c3]);
    Ok((q, c))
}

/// `B²C² − 4AC³ − 4B³D + 18ABCD − 27A²D²` for `c = Ax³ + Bx²y + Cxy² + Dy³`.
pub fn cubic_discriminant<F: Field>(c: &BinaryForm<F>) -> Result<F> {
    if c.degree() != 3 {
        return Err(Error::DegreeMismatch { left: c.degree(), right: 3 });
    }
    let (a, b, cc, d) = (c.coeff(0).clone(), c.coeff(1).clone(), c.coeff(2).clone(), c.coeff(3).clone());
    let n = |v: i64| F::from_i64(v);
    Ok(b.pow(2) * cc.pow(2) - n(4) * a.clone() * cc.pow(3) - n(4) * b.pow(3) * d.clone()
        + n(18) * a.clone() * b.clone() * cc * d.clone()
        - n(27) * a.pow(2) * d.pow(2))
}

/// `D(p) = Δ(c) / (−540 a0^6)`.
pub fn discriminant_d<F: Field>(p: &SexticView<F>) -> Result<F> {
    let (_, c) = residual_cubic(p)?;
    let delta = cubic_discriminant(&c)?;
    Ok(delta / (F::from_i64(-540) * p.a[0].pow(6)))
}

/// Binomial coefficients of `p(x, Tx + y)`.
pub fn shear_coefficients<F: Field>(p: &SexticView<F>, t: &F) -> SexticView<F> {
    SexticView { a: p.to_form().shear(t).binomial_view() }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Zero,
    Generic,
    CubeResidual,
    #[serde(rename = "p1-branch")]
    P1Branch,
    #[serde(rename = "p2-branch")]
    P2Branch,
    YDivisible,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Generic => "generic",
            Self::CubeResidual => "cube-residual",
            Self::P1Branch => "p1-branch",
            Self::P2Branch => "p2-branch",
            Self::YDivisible => "y-divisible",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::Zero, Self::Generic, Self::CubeResidual, Self::P1Branch, Self::P2Branch, Self::YDivisible]
            .into_iter()
            .find(|b| b.name() == s)
    }
}

/// `Σ μ_j q_j^3` in the input coordinates, with the coordinate changes
/// that produced it: the sum was found for `p ∘ S_1 ∘ … ∘ S_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubesCertificate {
    pub branch: Branch,
    pub substitutions: Vec<LinearSubstitution<Q>>,
    pub shear: Option<Q>,
    pub terms: Decomposition,
}

impl CubesCertificate {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn verify(&self, p: &BinaryForm<Q>, tol: &Tolerances) -> bool {
        self.terms.verify(&p.to_multi(), tol)
    }

    pub fn residual(&self, p: &BinaryForm<Q>) -> f64 {
        self.terms.residual(&p.to_multi())
    }

    /// Moves each multiplier into its quadratic with a cube root (real for
    /// real rationals, principal otherwise).
    pub fn folded(&self) -> Decomposition {
        fold_cubes(&self.terms)
    }
}

/// `μ q^3 -> (μ^(1/3) q)^3`, exact when every cube root lies in Q(i).
pub fn fold_cubes(d: &Decomposition) -> Decomposition {
    fn fold<F: Field>(p: &PowerSum<F>, root: impl Fn(&F) -> Option<F>) -> Option<PowerSum<F>> {
        let mut out = PowerSum::new(p.nvars, p.base_degree, p.exponent);
        for t in &p.terms {
            out.push(F::one(), t.base.scale(&root(&t.coef)?));
        }
        Some(out)
    }
    let k = d.exponent();
    match d {
        // odd roots of negative rationals are taken real
        Decomposition::Exact(p) => match fold(p, |c| {
            c.nth_root(k).or_else(|| if k % 2 == 1 { (-c.clone()).nth_root(k).map(|r| -r) } else { None })
        }) {
            Some(f) => Decomposition::Exact(f),
            None => Decomposition::Float(fold(&p.to_c64(), |c| c.nth_root(k)).expect("float roots exist")),
        },
        Decomposition::Float(p) => Decomposition::Float(fold(p, |c| c.nth_root(k)).expect("float roots exist")),
    }
}

enum Residual {
    Zero,
    SquareFree,
    Cube,
    SquareFactor,
}

fn classify(p: &SexticView<Q>) -> Result<(BinaryForm<Q>, BinaryForm<Q>, Residual)> {
    let (q, c) = residual_cubic(p)?;
    let kind = if c.is_zero() {
        Residual::Zero
    } else if !cubic_discriminant(&c)?.is_zero() {
        Residual::SquareFree
    } else {
        let r = exact_roots(&c, &Tolerances::default())
            .ok_or_else(|| Error::internal("repeated root of a rational cubic is not rational"))?;
        if r.iter().all(|x| x.vanishing_form() == r[0].vanishing_form()) {
            Residual::Cube
        } else {
            Residual::SquareFactor
        }
    };
    Ok((q, c, kind))
}

/// Terms `a0 q^3 + Σ (λ/a0^5) (y ℓ)^3` for a sextic with `a0 != 0` whose
/// residual cubic is not degenerate.
fn from_residual(p: &SexticView<Q>, q: &BinaryForm<Q>, c: &BinaryForm<Q>, tol: &Tolerances) -> Result<Decomposition> {
    let a0 = p.a[0].clone();
    let mut exact = PowerSum::new(2, 2, 3);
    exact.push(a0.clone(), q.to_multi());
    if c.is_zero() {
        return Ok(Decomposition::Exact(exact));
    }
    let scale = a0.pow(5).inv();
    let y = BinaryForm::linear(Q::zero(), Q::one());
    match cubic_three_cubes(c, tol)? {
        Decomposition::Exact(s) => {
            for t in s.terms {
                let l = BinaryForm::from_multi(&t.base)?;
                exact.push(t.coef * scale.clone(), y.mul(&l).to_multi());
            }
            Ok(Decomposition::Exact(exact))
        }
        Decomposition::Float(s) => {
            let mut out = exact.to_c64();
            let yc = y.to_c64();
            for t in s.terms {
                let l = BinaryForm::from_multi(&t.base)?;
                out.push(t.coef * scale.to_c64(), yc.mul(&l).to_multi());
            }
            Ok(Decomposition::Float(out))
        }
    }
}

/// Rewrites a decomposition of `p ∘ W` as one of `p`.
fn pull_back(d: Decomposition, w: &LinearSubstitution<Q>) -> Result<Decomposition> {
    let inv = w.inverse()?;
    Ok(match d {
        Decomposition::Exact(mut s) => {
            for t in &mut s.terms {
                t.base = t.base.substitute(&inv)?;
            }
            Decomposition::Exact(s)
        }
        Decomposition::Float(mut s) => {
            let inv = inv.map(Field::to_c64);
            for t in &mut s.terms {
                t.base = t.base.substitute(&inv)?;
            }
            Decomposition::Float(s)
        }
    })
}

fn total(subs: &[LinearSubstitution<Q>]) -> Result<LinearSubstitution<Q>> {
    subs.iter().try_fold(LinearSubstitution::identity(2), |acc, s| acc.compose(s))
}

fn finish(
    p: &BinaryForm<Q>,
    branch: Branch,
    substitutions: Vec<LinearSubstitution<Q>>,
    shear: Option<Q>,
    local: Decomposition,
    tol: &Tolerances,
) -> Result<CubesCertificate> {
    let terms = pull_back(local, &total(&substitutions)?)?;
    let cert = CubesCertificate { branch, substitutions, shear, terms };
    if !cert.verify(p, tol) {
        return Err(Error::internal(format!(
            "three-cubes certificate ({}) has residual {:e}",
            branch.name(),
            cert.residual(p)
        )));
    }
    Ok(cert)
}

fn int(j: i64) -> Q {
    Q::int(j)
}

/// 0, 1, -1, 2, -2, ...
fn signed_sequence() -> impl Iterator<Item = i64> {
    (0..).map(|i: i64| if i % 2 == 1 { (i + 1) / 2 } else { -i / 2 })
}

/// A first change of variables making the `x^6` coefficient nonzero:
/// identity, swap, then the shears `y -> y + j x`.
fn normalize(p: &BinaryForm<Q>) -> Result<LinearSubstitution<Q>> {
    let candidates = [LinearSubstitution::identity(2), LinearSubstitution::swap()]
        .into_iter()
        .chain(signed_sequence().skip(1).take(20).map(|j| LinearSubstitution::shear(int(j))));
    for s in candidates {
        if !p.substitute(&s)?.coeff(0).is_zero() {
            return Ok(s);
        }
    }
    Err(Error::internal("no normalizing substitution for a nonzero sextic"))
}

/// Every binary sextic as `Σ μ_j q_j^3` with at most three terms.
pub fn three_cubes(p: &BinaryForm<Q>, tol: &Tolerances) -> Result<CubesCertificate> {
    if p.degree() != 6 {
        return Err(Error::DegreeMismatch { left: p.degree(), right: 6 });
    }
    if p.is_zero() {
        return Ok(CubesCertificate {
            branch: Branch::Zero,
            substitutions: Vec::new(),
            shear: None,
            terms: Decomposition::Exact(PowerSum::new(2, 2, 3)),
        });
    }
    for flip in [false, true] {
        let (f, subs) = if flip {
            (p.swap(), vec![LinearSubstitution::swap()])
        } else {
            (p.clone(), Vec::new())
        };
        if f.y_order() >= 3 {
            return y_divisible(p, &f, subs, tol);
        }
    }
    let s0 = normalize(p)?;
    let p1 = p.substitute(&s0)?;
    let view = SexticView::from_form(&p1)?;
    let (q, c, kind) = classify(&view)?;
    let branch = match kind {
        Residual::Zero | Residual::Cube => Branch::CubeResidual,
        Residual::SquareFree => Branch::Generic,
        Residual::SquareFactor => return degenerate(p, s0, &view, &c, tol),
    };
    let local = from_residual(&view, &q, &c, tol)?;
    let first = finish(p, branch, vec![s0], None, local, tol);
    if first.is_ok() || branch != Branch::Generic {
        return first;
    }
    // a badly conditioned float certificate retries on sheared coordinates
    for t in signed_sequence().skip(1).take(T_SEARCH_CAP) {
        if let Ok(cert) = three_cubes_sheared(p, &int(t), tol) {
            return Ok(cert);
        }
    }
    first
}

fn y_divisible(
    p: &BinaryForm<Q>,
    f: &BinaryForm<Q>,
    subs: Vec<LinearSubstitution<Q>>,
    tol: &Tolerances,
) -> Result<CubesCertificate> {
    let h = BinaryForm::new(f.coeffs()[3..].to_vec());
    let y = BinaryForm::linear(Q::zero(), Q::one());
    let lift = |s: PowerSum<Q>| -> Result<PowerSum<Q>> {
        let mut out = PowerSum::new(2, 2, 3);
        for t in s.terms {
            out.push(t.coef, y.mul(&BinaryForm::from_multi(&t.base)?).to_multi());
        }
        Ok(out)
    };
    let local = match cubic_three_cubes(&h, tol)? {
        Decomposition::Exact(s) => Decomposition::Exact(lift(s)?),
        Decomposition::Float(s) => {
            let yc = y.to_c64();
            let mut out = PowerSum::new(2, 2, 3);
            for t in s.terms {
                out.push(t.coef, yc.mul(&BinaryForm::from_multi(&t.base)?).to_multi());
            }
            Decomposition::Float(out)
        }
    };
    finish(p, Branch::YDivisible, subs, None, local, tol)
}

/// The square-factor case: move to coordinates where the residual reads
/// `x y^5` or `x^2 y^3 (t x + y)` up to scalars, then shear.
fn degenerate(
    p: &BinaryForm<Q>,
    s0: LinearSubstitution<Q>,
    view: &SexticView<Q>,
    c: &BinaryForm<Q>,
    tol: &Tolerances,
) -> Result<CubesCertificate> {
    let roots = exact_roots(c, tol).ok_or_else(|| Error::internal("degenerate residual cubic is not split"))?;
    let forms: Vec<BinaryForm<Q>> = roots.iter().map(|r| r.vanishing_form()).collect();
    let (l1, l2) = if forms[0] == forms[1] {
        (&forms[0], &forms[2])
    } else if forms[0] == forms[2] {
        (&forms[0], &forms[1])
    } else {
        (&forms[1], &forms[0])
    };
    // c = kappa * l1^2 * l2
    let prod = l1.pow(2).mul(l2);
    let j = (0..=3).find(|&j| !prod.coeff(j).is_zero()).expect("nonzero product");
    let kappa = c.coeff(j).clone() / prod.coeff(j).clone();
    let (r, s) = (l1.coeff(0).clone(), l1.coeff(1).clone());
    let (branch, m) = if r.is_zero() {
        // y^3 c / a0^5 = kappa s^2 / a0^5 * y^5 * l2
        let k = kappa * s.pow(2) / view.a[0].pow(5);
        let row = vec![k.clone() * l2.coeff(0).clone(), k * l2.coeff(1).clone()];
        (Branch::P1Branch, vec![row, vec![Q::zero(), Q::one()]])
    } else {
        (Branch::P2Branch, vec![vec![r, s], vec![Q::zero(), Q::one()]])
    };
    let m_inv = LinearSubstitution::new_invertible(m)?.inverse()?;
    let normal = p.substitute(&s0)?.substitute(&m_inv)?;
    let mut last = None;
    for t in signed_sequence().skip(1).take(T_SEARCH_CAP) {
        let t = int(t);
        let pt = normal.shear(&t);
        if pt.coeff(0).is_zero() {
            continue;
        }
        let v = SexticView::from_form(&pt)?;
        if discriminant_d(&v)?.is_zero() {
            continue;
        }
        let (q, c, _) = classify(&v)?;
        let local = from_residual(&v, &q, &c, tol)?;
        let subs = vec![s0.clone(), m_inv.clone(), LinearSubstitution::shear(t.clone())];
        // a badly conditioned float certificate moves on to the next shear
        match finish(p, branch, subs, Some(t), local, tol) {
            Ok(cert) => return Ok(cert),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::internal("no admissible shear within the search cap")))
}

/// Decomposes `p(x, Tx + y)` by the generic route and undoes the shear.
pub fn three_cubes_sheared(p: &BinaryForm<Q>, t: &Q, tol: &Tolerances) -> Result<CubesCertificate> {
    if p.degree() != 6 {
        return Err(Error::DegreeMismatch { left: p.degree(), right: 6 });
    }
    let pt = p.shear(t);
    if pt.coeff(0).is_zero() {
        return Err(Error::precondition("a0(T) vanishes"));
    }
    let v = SexticView::from_form(&pt)?;
    if discriminant_d(&v)?.is_zero() {
        return Err(Error::precondition("D(p_T) vanishes"));
    }
    let (q, c, _) = classify(&v)?;
    let local = from_residual(&v, &q, &c, tol)?;
    finish(p, Branch::Generic, vec![LinearSubstitution::shear(t.clone())], Some(t.clone()), local, tol)
}

/// Complex-float view of the certificate terms with the multipliers kept.
pub fn certificate_terms_c64(cert: &CubesCertificate) -> PowerSum<C64> {
    cert.terms.to_c64()
}

/// `Σ coef * Π a_i^e_i` over the seven binomial coefficients.
fn a_poly(terms: &[(i64, [u32; 7])]) -> MultiForm<Q> {
    let deg = terms[0].1.iter().sum();
    MultiForm::from_terms(7, deg, terms.iter().map(|(c, e)| (e.to_vec(), Q::int(*c)))).expect("homogeneous")
}

/// `D(p)` as a polynomial in `a_0..a_6`, obtained by dividing the symbolic
/// discriminant of the residual cubic by `-540 a0^6`.
pub fn d_polynomial() -> &'static MultiForm<Q> {
    static D: OnceLock<MultiForm<Q>> = OnceLock::new();
    D.get_or_init(|| {
        let c0 = a_poly(&[(40, [3, 3, 0, 0, 0, 0, 0]), (-60, [4, 1, 1, 0, 0, 0, 0]), (20, [5, 0, 0, 1, 0, 0, 0])]);
        let c1 = a_poly(&[(20, [3, 2, 1, 0, 0, 0, 0]), (-25, [4, 0, 2, 0, 0, 0, 0]), (5, [5, 0, 0, 0, 1, 0, 0])]);
        let c2 = a_poly(&[
            (-32, [1, 5, 0, 0, 0, 0, 0]),
            (80, [2, 3, 1, 0, 0, 0, 0]),
            (-50, [3, 1, 2, 0, 0, 0, 0]),
            (2, [5, 0, 0, 0, 0, 1, 0]),
        ]);
        let c3 = a_poly(&[
            (64, [0, 6, 0, 0, 0, 0, 0]),
            (-240, [1, 4, 1, 0, 0, 0, 0]),
            (300, [2, 2, 2, 0, 0, 0, 0]),
            (-125, [3, 0, 3, 0, 0, 0, 0]),
            (1, [5, 0, 0, 0, 0, 0, 1]),
        ]);
        let three = Q::int(3);
        let (a, b, c, d) = (c0, c1.scale(&three), c2.scale(&three), c3);
        let m = |x: &MultiForm<Q>, y: &MultiForm<Q>| x.try_mul(y).expect("same ring");
        let k = |v: i64, x: MultiForm<Q>| x.scale(&Q::int(v));
        let terms = [
            m(&m(&b, &b), &m(&c, &c)),
            k(-4, m(&a, &m(&c, &m(&c, &c)))),
            k(-4, m(&m(&b, &b), &m(&b, &d))),
            k(18, m(&m(&a, &b), &m(&c, &d))),
            k(-27, m(&m(&a, &a), &m(&d, &d))),
        ];
        let delta = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| acc.try_add(t).expect("same ring"));
        let scale = Q::ratio(-1, 540);
        MultiForm::from_terms(
            7,
            delta.degree() - 6,
            delta.terms().map(|(e, v)| {
                assert!(e[0] >= 6, "discriminant not divisible by a0^6");
                let mut e = e.clone();
                e[0] -= 6;
                (e, v.clone() * scale.clone())
            }),
        )
        .expect("homogeneous")
    })
}

/// `D(p)` evaluated through [`d_polynomial`].
pub fn d_value(p: &SexticView<Q>) -> Q {
    d_polynomial().eval(&p.a)
}

/// [`d_polynomial`] with integer coefficients, and the denominator cleared.
fn d_terms_integer() -> &'static (Vec<(BigInt, [usize; 7])>, BigInt) {
    static T: OnceLock<(Vec<(BigInt, [usize; 7])>, BigInt)> = OnceLock::new();
    T.get_or_init(|| {
        let d = d_polynomial();
        let m = d.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.re.denom()));
        let terms = d
            .terms()
            .map(|(e, c)| {
                let mut ex = [0usize; 7];
                for (slot, v) in ex.iter_mut().zip(e) {
                    *slot = *v as usize;
                }
                ((&c.re * BigRational::from_integer(m.clone())).to_integer(), ex)
            })
            .collect();
        (terms, m)
    })
}

fn d_value_integer(a: &[BigInt]) -> BigInt {
    let terms = &d_terms_integer().0;
    let powers: Vec<Vec<BigInt>> = (0..7)
        .map(|i| {
            let top = terms.iter().map(|(_, e)| e[i]).max().unwrap_or(0);
            let mut v = vec![BigInt::one()];
            for k in 0..top {
                let next = &v[k] * &a[i];
                v.push(next);
            }
            v
        })
        .collect();
    terms.iter().fold(BigInt::zero(), |acc, (c, e)| {
        acc + (0..7).fold(c.clone(), |t, i| if e[i] == 0 { t } else { t * &powers[i][e[i]] })
    })
}

/// Newton divided differences, then expansion to the monomial basis.
fn interpolate<T>(ts: &[T], ys: Vec<T>, zero: T) -> Vec<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = ts.len();
    let mut dd = ys;
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (ts[i].clone() - ts[i - j].clone());
        }
    }
    let mut poly = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let mut next = vec![zero.clone(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * ts[i].clone();
        }
        next[0] = next[0].clone() + dd[i].clone();
        poly = next;
    }
    poly
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n! P(T)` for the polynomial `P` of degree at most `n` taking the values
/// `ys` at `T = 0..=n`, through forward differences and Horner's rule on
/// the falling factorials.
fn forward_interpolate(mut ys: Vec<BigInt>) -> Vec<BigInt> {
    let n = ys.len() - 1;
    for j in 1..=n {
        for i in (j..=n).rev() {
            ys[i] = &ys[i] - &ys[i - 1];
        }
    }
    // ys[k] is now the k-th forward difference at 0
    let mut weight = BigInt::one();
    let mut h = vec![ys[n].clone()];
    for k in (0..n).rev() {
        weight *= BigInt::from(k + 1);
        let mut next = vec![BigInt::zero(); h.len() + 1];
        for (j, c) in h.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(k);
        }
        next[0] += &ys[k] * &weight;
        h = next;
    }
    h
}

/// Coefficients of `T ↦ D(p(x, Tx + y))`, lowest order first, from exact
/// interpolation at `T = 0, 1, ..., 79`. The degree is at most 72.
pub fn sheared_d_coefficients(p: &BinaryForm<Q>) -> Result<Vec<Q>> {
    let v = SexticView::from_form(p)?;
    let nodes: Vec<i64> = (0..80).collect();
    let mut poly = if p.coeffs().iter().all(|c| c.im.is_zero()) {
        // scale so that every binomial coefficient a_k of every shear is an integer;
        // D is homogeneous of degree 18
        let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom())) * BigInt::from(60);
        let lq = Q::real(BigRational::from_integer(l.clone()));
        let scaled = SexticView::from_form(&p.scale(&lq))?;
        let ys: Vec<BigInt> = nodes
            .iter()
            .map(|&t| {
                let a = shear_coefficients(&scaled, &Q::int(t)).a;
                if a.iter().any(|x| !x.re.is_integer()) {
                    return Err(Error::internal("scaled sextic has a fractional coefficient"));
                }
                Ok(d_value_integer(&a.iter().map(|x| x.re.to_integer()).collect::<Vec<_>>()))
            })
            .collect::<Result<_>>()?;
        let n = ys.len() - 1;
        let denom = factorial(n) * &d_terms_integer().1 * num_traits::pow(l, 18);
        forward_interpolate(ys).into_iter().map(|c| Q::real(BigRational::new(c, denom.clone()))).collect()
    } else {
        let ts: Vec<Q> = nodes.iter().map(|&t| Q::int(t)).collect();
        let ys = ts.iter().map(|t| d_value(&shear_coefficients(&v, t))).collect();
        interpolate(&ts, ys, Q::zero())
    };
    while poly.len() > 1 && poly.last().is_some_and(Field::is_zero) {
        poly.pop();
    }
    if poly.len() > 73 {
        return Err(Error::internal(format!("D(p_T) interpolates to degree {}", poly.len() - 1)));
    }
    Ok(poly)
}
