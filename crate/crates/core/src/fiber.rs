//! k-ranks of binary forms through the fibers of the power projection
//! `Y_j ↦ x^(d-j) y^j` from forms of degree `k` in `d+1` variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::apolarity::{catalecticant, sylvester_decompose, two_squares};
use crate::decomposition::{Decomposition, PowerSum};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{monomial_count, monomials, BinaryForm, LinearSubstitution, MultiForm};
use crate::roots::{exact_roots, float_roots, is_square_free, ProjRoot};
use crate::scalar::{Field, GaussRational, C64};
use crate::sextic::three_cubes;
use crate::structured::{monomial_exponents_of, monomial_krank_upper};
use crate::tolerance::Tolerances;

type Q = GaussRational;

/// Default number of fiber points tried by [`krank_upper`].
pub const DEFAULT_BUDGET: usize = 500;

/// `Y_j ↦ x^(d-j) y^j`.
pub fn project<F: Field>(g: &MultiForm<F>, d: u32) -> Result<BinaryForm<F>> {
    if g.nvars() != d as usize + 1 {
        return Err(Error::VariableMismatch { left: g.nvars(), right: d as usize + 1 });
    }
    let mut coeffs = vec![F::zero(); (g.degree() * d) as usize + 1];
    for (e, c) in g.terms() {
        let yexp: u32 = e.iter().enumerate().map(|(j, &a)| j as u32 * a).sum();
        coeffs[yexp as usize] = coeffs[yexp as usize].clone() + c.clone();
    }
    Ok(BinaryForm::new(coeffs))
}

/// Factors `x^(kd-i) y^i` into `k` degree-`d` monomials, taking the largest
/// available power of `x` first. Returns the exponent vector over `Y_0..Y_d`.
fn greedy_factor(xexp: u32, k: u32, d: u32) -> Vec<u32> {
    let mut e = vec![0; d as usize + 1];
    let mut left = xexp;
    for _ in 0..k {
        let a = left.min(d);
        left -= a;
        e[(d - a) as usize] += 1;
    }
    e
}

/// A preimage of `f` under the projection, built monomial by monomial.
pub fn lift<F: Field>(f: &BinaryForm<F>, k: u32) -> Result<MultiForm<F>> {
    let deg = f.degree();
    if k == 0 || !deg.is_multiple_of(k) {
        return Err(Error::precondition(format!("{k} does not divide the degree {deg}")));
    }
    let d = deg / k;
    MultiForm::from_terms(
        d as usize + 1,
        k,
        f.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (greedy_factor(deg - i as u32, k, d), c.clone())),
    )
}

/// The linear form `l_g = Σ g_j Y_j` of a degree-`d` binary form.
pub fn lift_linear<F: Field>(g: &BinaryForm<F>) -> MultiForm<F> {
    MultiForm::linear(g.coeffs())
}

/// A basis of the degree-`k` part of the ideal of the rational normal curve
/// of degree `d`: 2x2 minors of the catalecticants of the symbol matrix
/// times monomials, kept when independent of the earlier ones.
pub fn veronese_center(d: u32, k: u32) -> Vec<MultiForm<Q>> {
    let n = d as usize + 1;
    let y = |j: u32| MultiForm::<Q>::var(n, j as usize);
    let mut minors = Vec::new();
    for i in 1..d {
        for a in 0..=i {
            for a2 in a + 1..=i {
                for b in 0..=d - i {
                    for b2 in b + 1..=d - i {
                        let m = y(a + b)
                            .try_mul(&y(a2 + b2))
                            .and_then(|p| p.try_sub(&y(a + b2).try_mul(&y(a2 + b)).unwrap()))
                            .unwrap();
                        if !m.is_zero() && !minors.contains(&m) {
                            minors.push(m);
                        }
                    }
                }
            }
        }
    }
    if k < 2 {
        return Vec::new();
    }
    let cols = monomials(n, k);
    let mut basis: Vec<MultiForm<Q>> = Vec::new();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rank = 0;
    for m in &minors {
        for mono in monomials(n, k - 2) {
            let cand = m.try_mul(&MultiForm::monomial(mono, Q::one())).unwrap();
            let v: Vec<Q> = cols.iter().map(|e| cand.coeff(e)).collect();
            rows.push(v);
            let r = Matrix::from_rows(rows.clone()).rank(&Tolerances::default());
            if r > rank {
                rank = r;
                basis.push(cand);
            } else {
                rows.pop();
            }
        }
    }
    basis
}

/// The fiber `{ f0 - Σ c_j E_j }` over a binary form of degree `kd`.
#[derive(Clone, Debug)]
pub struct PowerFiber {
    pub f: BinaryForm<Q>,
    pub k: u32,
    pub d: u32,
    pub lift: MultiForm<Q>,
    pub center: Vec<MultiForm<Q>>,
}

/// `F_c = f0 - Σ c_j E_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPoint {
    pub c: Vec<Q>,
    pub form: MultiForm<Q>,
}

impl PowerFiber {
    pub fn new(f: &BinaryForm<Q>, k: u32) -> Result<Self> {
        let lift = lift(f, k)?;
        let d = f.degree() / k;
        if d == 0 {
            return Err(Error::precondition("degree-0 bases have no fiber"));
        }
        Ok(Self { f: f.clone(), k, d, lift, center: veronese_center(d, k) })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn point(&self, c: &[Q]) -> Result<FiberPoint> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} fiber coordinates for a {}-dimensional center", c.len(), self.dim())));
        }
        let mut form = self.lift.clone();
        for (cj, e) in c.iter().zip(&self.center) {
            if !cj.is_zero() {
                form = form.try_sub(&e.scale(cj))?;
            }
        }
        Ok(FiberPoint { c: c.to_vec(), form })
    }
}

pub fn fiber_cat_rank(fiber: &PowerFiber, c: &[Q], i: u32) -> Result<usize> {
    let p = fiber.point(c)?;
    Ok(catalecticant(&p.form, i)?.rank(&Tolerances::default()))
}

/// Pushes a decomposition in the `Y` variables down to `x, y`.
pub fn push_down(dec: &Decomposition, d: u32) -> Result<Decomposition> {
    fn go<F: Field>(p: &PowerSum<F>, d: u32) -> Result<PowerSum<F>> {
        let mut out = PowerSum::new(2, d, p.exponent);
        for t in &p.terms {
            out.push(t.coef.clone(), project(&t.base, d)?.to_multi());
        }
        Ok(out)
    }
    Ok(match dec {
        Decomposition::Exact(p) => Decomposition::Exact(go(p, d)?),
        Decomposition::Float(p) => Decomposition::Float(go(p, d)?),
    })
}

/// Pulls a decomposition of `f` into `k`-th powers of degree-`d` forms up to
/// the fiber element `Σ λ l_g^k`.
pub fn pull_up(dec: &Decomposition) -> Result<Decomposition> {
    fn go<F: Field>(p: &PowerSum<F>) -> Result<PowerSum<F>> {
        let n = p.base_degree as usize + 1;
        let mut out = PowerSum::new(n, 1, p.exponent);
        for t in &p.terms {
            out.push(t.coef.clone(), lift_linear(&BinaryForm::from_multi(&t.base)?));
        }
        Ok(out)
    }
    Ok(match dec {
        Decomposition::Exact(p) => Decomposition::Exact(go(p)?),
        Decomposition::Float(p) => Decomposition::Float(go(p)?),
    })
}

/// Best rational approximation with denominator at most `max_den`.
fn approx_rational(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    ((r.to_f64()? - x).abs() <= 1e-9 * x.abs().max(1.0)).then_some(r)
}

fn rationalize(z: C64) -> Option<Q> {
    Some(Q::new(approx_rational(z.re, 10_000)?, approx_rational(z.im, 10_000)?))
}

/// Solves `F = Σ λ_j (p_j · Y)^k` for given points, exactly or in floats.
fn solve_weights<F: Field>(form: &MultiForm<F>, points: &[Vec<F>], tol: &Tolerances) -> Option<PowerSum<F>> {
    let n = form.nvars();
    let k = form.degree();
    let cols = monomials(n, k);
    let lins: Vec<MultiForm<F>> = points.iter().map(|p| MultiForm::linear(p)).collect();
    let mut a = Matrix::zeros(cols.len(), lins.len());
    for (j, l) in lins.iter().enumerate() {
        let p = l.pow(k);
        for (i, e) in cols.iter().enumerate() {
            a.set(i, j, p.coeff(e));
        }
    }
    let b: Vec<F> = cols.iter().map(|e| form.coeff(e)).collect();
    let lambda = a.solve(&b, tol)?;
    let mut out = PowerSum::new(n, 1, k);
    for (l, c) in lins.into_iter().zip(lambda) {
        out.push(c, l);
    }
    let out = out.prune();
    out.verify(form, tol).then_some(out)
}

fn quad_parts(q: &MultiForm<Q>) -> (Q, [Q; 2], [Q; 3]) {
    (
        q.coeff(&[0, 0, 2]),
        [q.coeff(&[1, 0, 1]), q.coeff(&[0, 1, 1])],
        [q.coeff(&[2, 0, 0]), q.coeff(&[1, 1, 0]), q.coeff(&[0, 2, 0])],
    )
}

fn lin_form<F: Field>(b: &[F; 2]) -> BinaryForm<F> {
    BinaryForm::new(b.to_vec())
}

/// The four intersection points of two conics, or `None` when they do
/// not meet in four distinct points in general position for `g`.
fn conic_points(q1: &MultiForm<Q>, q2: &MultiForm<Q>, g: &LinearSubstitution<Q>, tol: &Tolerances) -> Option<PointSet> {
    let t1 = q1.substitute(g).ok()?;
    let t2 = q2.substitute(g).ok()?;
    let (a1, b1, c1) = quad_parts(&t1);
    let (a2, b2, c2) = quad_parts(&t2);
    let (b1, b2) = (lin_form(&b1), lin_form(&b2));
    let (c1, c2) = (BinaryForm::new(c1.to_vec()), BinaryForm::new(c2.to_vec()));
    // resultant in the last variable of A t^2 + B t + C
    let ac = c2.scale(&a1).try_sub(&c1.scale(&a2)).ok()?;
    let ab = b2.scale(&a1).try_sub(&b1.scale(&a2)).ok()?;
    let bc = b1.mul(&c2).try_sub(&b2.mul(&c1)).ok()?;
    let res = ac.mul(&ac).try_sub(&ab.mul(&bc)).ok()?;
    if res.is_zero() || !is_square_free(&res, tol).ok()? {
        return None;
    }
    // t = (A1 C2 - A2 C1) / (A2 B1 - A1 B2) at each root
    let point = |u: &Q, v: &Q| -> Option<Vec<Q>> {
        let den = -ab.eval(u, v);
        if den.is_zero() {
            return None;
        }
        let t = ac.eval(u, v) / den;
        Some(apply(g, &[u.clone(), v.clone(), t]))
    };
    if let Some(roots) = exact_roots(&res, tol) {
        let pts: Option<Vec<Vec<Q>>> = roots.iter().map(|r| point(&r.x, &r.y)).collect();
        return pts.map(PointSet::Exact);
    }
    let (ac, ab) = (ac.to_c64(), ab.to_c64());
    let gc = g.map(Field::to_c64);
    let mut pts = Vec::new();
    for r in float_roots(&res, tol).ok()? {
        let ProjRoot { x: u, y: v } = r;
        let den = -ab.eval(&u, &v);
        if den.norm() <= 1e-9 * ab.norm().max(1e-300) {
            return None;
        }
        let t = ac.eval(&u, &v) / den;
        pts.push(apply(&gc, &[u, v, t]));
    }
    Some(PointSet::Float(pts))
}

fn apply<F: Field>(g: &LinearSubstitution<F>, z: &[F]) -> Vec<F> {
    (0..3).map(|i| (0..3).fold(F::zero(), |acc, j| acc + g.entry(i, j).clone() * z[j].clone())).collect()
}

enum PointSet {
    Exact(Vec<Vec<Q>>),
    Float(Vec<Vec<C64>>),
}

fn general_position_changes() -> Vec<LinearSubstitution<Q>> {
    let m = |r: [[i64; 3]; 3]| {
        LinearSubstitution::new_invertible(r.iter().map(|row| row.iter().map(|&v| Q::int(v)).collect()).collect())
            .expect("invertible")
    };
    vec![
        m([[1, 0, 2], [0, 1, 3], [5, 7, 1]]),
        m([[1, 0, -3], [0, 1, 5], [2, -7, 1]]),
        m([[2, 1, 1], [-1, 3, 2], [1, 1, 5]]),
    ]
}

/// Waring decomposition of a ternary form whose second catalecticant has
/// a pencil of conics in its kernel meeting in reduced points.
pub fn ternary_conic_decomposition(form: &MultiForm<Q>, tol: &Tolerances) -> Option<Decomposition> {
    if form.nvars() != 3 || form.degree() < 2 {
        return None;
    }
    let kernel = catalecticant(form, 2).ok()?.apolar_slice(tol);
    if kernel.len() < 2 {
        return None;
    }
    let mut pairs = vec![(0usize, 1usize)];
    if kernel.len() > 2 {
        pairs.extend([(0, 2), (1, 2)]);
    }
    for (i, j) in pairs {
        for g in general_position_changes() {
            match conic_points(&kernel[i], &kernel[j], &g, tol) {
                Some(PointSet::Exact(p)) => {
                    if let Some(s) = solve_weights(form, &p, tol) {
                        return Some(Decomposition::Exact(s));
                    }
                }
                Some(PointSet::Float(p)) => {
                    let normed: Vec<Vec<C64>> = p
                        .iter()
                        .map(|v| {
                            let m = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
                            v.iter().map(|z| z / m).collect()
                        })
                        .collect();
                    let exact: Option<Vec<Vec<Q>>> =
                        normed.iter().map(|v| v.iter().map(|z| rationalize(*z)).collect()).collect();
                    if let Some(pts) = exact {
                        if let Some(s) = solve_weights(form, &pts, tol) {
                            return Some(Decomposition::Exact(s));
                        }
                    }
                    if let Some(s) = solve_weights(&form.to_c64(), &normed, tol) {
                        return Some(Decomposition::Float(s));
                    }
                }
                None => {}
            }
        }
    }
    None
}

/// Waring decomposition of a fiber element when it involves at most two of
/// the variables, by the binary algorithm.
fn few_variable_decomposition(form: &MultiForm<Q>, tol: &Tolerances) -> Option<Decomposition> {
    let vars = form.support_vars();
    let n = form.nvars();
    let k = form.degree();
    match vars.len() {
        0 => None,
        1 => {
            let v = vars[0];
            let mut e = vec![0; n];
            e[v] = k;
            let mut out = PowerSum::new(n, 1, k);
            out.push(form.coeff(&e), MultiForm::var(n, v));
            Some(Decomposition::Exact(out))
        }
        2 => {
            let (a, b) = (vars[0], vars[1]);
            let coeffs: Vec<Q> = (0..=k)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[a] = k - j;
                    e[b] = j;
                    form.coeff(&e)
                })
                .collect();
            let dec = sylvester_decompose(&BinaryForm::new(coeffs), tol).ok()?;
            fn embed<F: Field>(p: &PowerSum<F>, n: usize, a: usize, b: usize) -> PowerSum<F> {
                let mut out = PowerSum::new(n, 1, p.exponent);
                for t in &p.terms {
                    let mut c = vec![F::zero(); n];
                    c[a] = t.base.coeff(&[1, 0]);
                    c[b] = t.base.coeff(&[0, 1]);
                    out.push(t.coef.clone(), MultiForm::linear(&c));
                }
                out
            }
            Some(match dec {
                Decomposition::Exact(p) => Decomposition::Exact(embed(&p, n, a, b)),
                Decomposition::Float(p) => Decomposition::Float(embed(&p, n, a, b)),
            })
        }
        _ => None,
    }
}

/// A Waring decomposition of a fiber element, when one of the supported
/// methods applies.
pub fn waring_in_fiber(form: &MultiForm<Q>, tol: &Tolerances) -> Option<Decomposition> {
    few_variable_decomposition(form, tol).or_else(|| ternary_conic_decomposition(form, tol))
}

/// Fiber coordinates in search order: zero, one nonzero entry, two nonzero
/// entries (entries from ±1, ±2, ±1/2), then dense random integer vectors.
pub fn search_points(dim: usize, budget: usize, seed: u64) -> Vec<Vec<Q>> {
    let vals = [Q::int(1), Q::int(-1), Q::int(2), Q::int(-2), Q::ratio(1, 2), Q::ratio(-1, 2)];
    let mut out = vec![vec![Q::zero(); dim]];
    for p in 0..dim {
        for v in &vals {
            let mut c = vec![Q::zero(); dim];
            c[p] = v.clone();
            out.push(c);
        }
    }
    'pairs: for p in 0..dim {
        for p2 in p + 1..dim {
            for v in &vals {
                for v2 in &vals {
                    if out.len() >= budget {
                        break 'pairs;
                    }
                    let mut c = vec![Q::zero(); dim];
                    c[p] = v.clone();
                    c[p2] = v2.clone();
                    out.push(c);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < budget {
        out.push((0..dim).map(|_| Q::int(rng.random_range(-9..=9))).collect());
    }
    out.truncate(budget.max(1));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperSource {
    Zero,
    Linear,
    TwoSquares,
    ThreeCubes,
    Monomial,
    Fiber,
    /// The Waring decomposition of `f` itself, read as `k`-th powers of `ℓ^d`.
    WaringFallback,
}

#[derive(Clone, Debug)]
pub struct KRankUpper {
    pub bound: usize,
    pub certificate: Decomposition,
    pub source: UpperSource,
    /// Set when no fiber method succeeded within the budget.
    pub heuristic: bool,
    pub fiber_point: Option<Vec<Q>>,
}

fn as_kth_powers(dec: Decomposition, k: u32, d: u32) -> Decomposition {
    fn go<F: Field>(p: PowerSum<F>, k: u32, d: u32) -> PowerSum<F> {
        let mut out = PowerSum::new(2, d, k);
        for t in p.terms {
            out.push(t.coef, t.base.pow(p.exponent / k));
        }
        out
    }
    match dec {
        Decomposition::Exact(p) => Decomposition::Exact(go(p, k, d)),
        Decomposition::Float(p) => Decomposition::Float(go(p, k, d)),
    }
}

/// Whether `f = lead * h^2`; returns `h` scaled so that `f = lead h^2`.
fn square_root_form(f: &BinaryForm<Q>, tol: &Tolerances) -> Option<(Q, BinaryForm<Q>)> {
    let roots = exact_roots(f, tol)?;
    let mut half = Vec::new();
    let mut rest = roots;
    while let Some(r) = rest.pop() {
        let pos = rest.iter().position(|s| s.vanishing_form() == r.vanishing_form())?;
        rest.remove(pos);
        half.push(r);
    }
    let h = crate::roots::expand_roots(&Q::one(), &half);
    let h2 = h.mul(&h);
    let j = (0..h2.coeffs().len()).find(|&j| !h2.coeff(j).is_zero())?;
    Some((f.coeff(j).clone() / h2.coeff(j).clone(), h))
}

fn prune(dec: Decomposition) -> Decomposition {
    match dec {
        Decomposition::Exact(p) => Decomposition::Exact(p.prune()),
        Decomposition::Float(p) => Decomposition::Float(p.prune()),
    }
}

/// Upper bound for the `k`-rank of a binary form, with a certificate
/// `f = Σ λ_j g_j^k`, `deg g_j = deg f / k`.
pub fn krank_upper(f: &BinaryForm<Q>, k: u32, budget: usize, seed: u64, tol: &Tolerances) -> Result<KRankUpper> {
    let deg = f.degree();
    if k == 0 || !deg.is_multiple_of(k) {
        return Err(Error::precondition(format!("{k} does not divide the degree {deg}")));
    }
    let d = deg / k;
    let target = f.to_multi();
    let done = |certificate: Decomposition, source, heuristic, fiber_point| -> Result<KRankUpper> {
        let certificate = prune(certificate);
        if !certificate.verify(&target, tol) {
            return Err(Error::internal(format!("k-rank certificate residual {:e}", certificate.residual(&target))));
        }
        Ok(KRankUpper { bound: certificate.len(), certificate, source, heuristic, fiber_point })
    };
    if f.is_zero() {
        return done(Decomposition::Exact(PowerSum::new(2, d, k)), UpperSource::Zero, false, None);
    }
    if k == 1 || d == 0 {
        let mut p = PowerSum::new(2, d, k);
        let (coef, base) = if k == 1 { (Q::one(), target.clone()) } else { (f.coeff(0).clone(), MultiForm::constant(2, Q::one())) };
        p.push(coef, base);
        return done(Decomposition::Exact(p), UpperSource::Linear, false, None);
    }
    if d == 1 {
        return done(sylvester_decompose(f, tol)?, UpperSource::Linear, false, None);
    }
    if k == 2 {
        if let Some((lead, h)) = square_root_form(f, tol) {
            let mut p = PowerSum::new(2, d, 2);
            p.push(lead, h.to_multi());
            return done(Decomposition::Exact(p), UpperSource::TwoSquares, false, None);
        }
        return done(two_squares(f, tol)?, UpperSource::TwoSquares, false, None);
    }
    let mut best: Option<(Decomposition, UpperSource, Option<Vec<Q>>)> = None;
    let consider = |best: &mut Option<(Decomposition, UpperSource, Option<Vec<Q>>)>, dec: Decomposition, src, pt| {
        let dec = prune(dec);
        if dec.verify(&target, tol) && best.as_ref().is_none_or(|b| dec.len() < b.0.len()) {
            *best = Some((dec, src, pt));
        }
    };
    if k == 3 && d == 2 {
        if let Ok(c) = three_cubes(f, tol) {
            consider(&mut best, c.terms, UpperSource::ThreeCubes, None);
        }
    }
    if let Some(a) = monomial_exponents_of(&target) {
        if let Ok(dec) = monomial_krank_upper(&a, k, tol) {
            let coef = target.terms().next().map(|(_, c)| c.clone()).expect("monomial");
            let scaled = match dec {
                Decomposition::Exact(mut p) => {
                    p.terms.iter_mut().for_each(|t| t.coef = t.coef.clone() * coef.clone());
                    Decomposition::Exact(p)
                }
                Decomposition::Float(mut p) => {
                    p.terms.iter_mut().for_each(|t| t.coef *= coef.to_c64());
                    Decomposition::Float(p)
                }
            };
            consider(&mut best, scaled, UpperSource::Monomial, None);
        }
    }
    let fiber = PowerFiber::new(f, k)?;
    for c in search_points(fiber.dim(), budget, seed) {
        if best.as_ref().is_some_and(|b| b.0.len() <= 1) {
            break;
        }
        let p = fiber.point(&c)?;
        if let Some(dec) = waring_in_fiber(&p.form, tol) {
            consider(&mut best, push_down(&dec, d)?, UpperSource::Fiber, Some(c));
        }
    }
    match best {
        Some((dec, src, pt)) => done(dec, src, false, pt),
        None => done(as_kth_powers(sylvester_decompose(f, tol)?, k, d), UpperSource::WaringFallback, true, None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Certified,
    Sampled,
}

/// Evidence gathered on the fiber over a multiple of `x y^7` with `k = 4`.
#[derive(Clone, Debug)]
pub struct StratifiedProbe {
    /// Smallest second-catalecticant rank over samples with some of
    /// `c_0..c_4` nonzero.
    pub generic_min_rank: usize,
    pub generic_samples: usize,
    /// Rank and kernel of the second catalecticant when only `c_5` is nonzero.
    pub c5_rank: usize,
    pub c5_kernel: Vec<MultiForm<Q>>,
    /// Waring rank of the fiber element for `c_5` alone, quoted from the
    /// length-3 curvilinear scheme argument.
    pub c5_waring_rank: usize,
    /// Waring rank of the greedy lift `Y_1 Y_2^3` (`c = 0`).
    pub zero_point_rank: usize,
}

#[derive(Clone, Debug)]
pub struct LowerProbe {
    pub bound: usize,
    pub confidence: Confidence,
    pub samples: usize,
    pub strata: Option<StratifiedProbe>,
}

fn is_xy7_family(f: &BinaryForm<Q>, k: u32) -> bool {
    k == 4 && f.degree() == 8 && (0..=8).all(|j| (j == 7) != f.coeff(j).is_zero())
}

fn sample_c(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| Q::int(rng.random_range(-50..=50))).collect()
}

fn stratified_xy7(fiber: &PowerFiber, samples: usize, seed: u64, tol: &Tolerances) -> Result<StratifiedProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_rank = usize::MAX;
    let mut taken = 0;
    while taken < samples {
        let c = sample_c(&mut rng, fiber.dim());
        if c[..5].iter().all(Field::is_zero) {
            continue;
        }
        min_rank = min_rank.min(fiber_cat_rank(fiber, &c, 2)?);
        taken += 1;
    }
    let mut c5 = Q::zero();
    while c5.is_zero() {
        c5 = Q::int(rng.random_range(-50..=50));
    }
    let mut c = vec![Q::zero(); fiber.dim()];
    c[5] = c5;
    let p = fiber.point(&c)?;
    let cat = catalecticant(&p.form, 2)?;
    let zero = fiber.point(&vec![Q::zero(); fiber.dim()])?;
    let zero_rank = waring_in_fiber(&zero.form, tol).map(|d| d.len()).unwrap_or(usize::MAX);
    Ok(StratifiedProbe {
        generic_min_rank: min_rank,
        generic_samples: taken,
        c5_rank: cat.rank(tol),
        c5_kernel: cat.apolar_slice(tol),
        c5_waring_rank: 7,
        zero_point_rank: zero_rank,
    })
}

/// Lower evidence for the `k`-rank from ranks of `cat_i` over the fiber.
/// Certified only for pure powers and for the `x y^7`, `k = 4` family; any
/// other answer is the smallest rank met on the sampled fiber points.
pub fn krank_lower_probe(f: &BinaryForm<Q>, k: u32, i: u32, samples: usize, seed: u64, tol: &Tolerances) -> Result<LowerProbe> {
    krank_lower_probe_with(f, k, i, samples, seed, &[], tol)
}

/// As [`krank_lower_probe`], also evaluating the fiber elements that the
/// given `k`-th power decompositions of `f` lift to.
pub fn krank_lower_probe_with(
    f: &BinaryForm<Q>,
    k: u32,
    i: u32,
    samples: usize,
    seed: u64,
    witnesses: &[Decomposition],
    tol: &Tolerances,
) -> Result<LowerProbe> {
    let deg = f.degree();
    if k == 0 || !deg.is_multiple_of(k) {
        return Err(Error::precondition(format!("{k} does not divide the degree {deg}")));
    }
    if f.is_zero() {
        return Ok(LowerProbe { bound: 0, confidence: Confidence::Certified, samples: 0, strata: None });
    }
    let fiber = PowerFiber::new(f, k)?;
    if is_xy7_family(f, k) {
        let s = stratified_xy7(&fiber, samples, seed, tol)?;
        let bound = s.generic_min_rank.min(s.c5_waring_rank).min(s.zero_point_rank);
        return Ok(LowerProbe { bound, confidence: Confidence::Certified, samples: s.generic_samples, strata: Some(s) });
    }
    if i > k {
        return Err(Error::precondition(format!("catalecticant order {i} exceeds {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound = usize::MAX;
    let points = search_points(fiber.dim(), samples.min(DEFAULT_BUDGET), seed);
    let mut count = 0;
    for c in points.iter().cloned().chain(std::iter::repeat_with(|| sample_c(&mut rng, fiber.dim()))).take(samples.max(1)) {
        bound = bound.min(fiber_cat_rank(&fiber, &c, i)?);
        count += 1;
    }
    for w in witnesses {
        let r = match pull_up(w)? {
            Decomposition::Exact(p) => catalecticant(&p.expand(), i)?.rank(tol),
            Decomposition::Float(p) => catalecticant(&p.expand(), i)?.rank(tol),
        };
        bound = bound.min(r);
        count += 1;
    }
    // every nonzero form needs at least one term
    let confidence = if bound <= 1 { Confidence::Certified } else { Confidence::Sampled };
    Ok(LowerProbe { bound: bound.max(1), confidence, samples: count, strata: None })
}

/// `dim T_k - dim S_{kd}`, the expected dimension of the center.
pub fn expected_center_dim(d: u32, k: u32) -> usize {
    monomial_count(d as usize + 1, k) - (k * d + 1) as usize
}

/// Whether a linear form's coefficient vector is (up to scale) a point.
pub fn same_point(a: &[Q], b: &[Q]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i].clone() * b[j].clone() == a[j].clone() * b[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn bf(c: &[i64]) -> BinaryForm<Q> {
        BinaryForm::from_i64s(c)
    }

    fn octic() -> BinaryForm<Q> {
        // x^6y^2 - x^3y^5 + x^2y^6 - xy^7
        bf(&[0, 0, 1, 0, 0, -1, 1, -1, 0])
    }

    #[test]
    fn lift_and_project() {
        let f = octic();
        let f0 = lift(&f, 4).unwrap();
        assert_eq!(project(&f0, 2).unwrap(), f);
        let want = MultiForm::from_terms(
            3,
            4,
            [(vec![3, 0, 1], Q::one()), (vec![1, 1, 2], Q::int(-1)), (vec![1, 0, 3], Q::one()), (vec![0, 1, 3], Q::int(-1))],
        )
        .unwrap();
        assert_eq!(f0, want);
        let m = lift(&BinaryForm::monomial(8, 7, Q::one()), 4).unwrap();
        assert_eq!(m, MultiForm::monomial(vec![0, 1, 3], Q::one()));
        let p = lift(&BinaryForm::monomial(8, 0, Q::one()), 4).unwrap();
        assert_eq!(p, MultiForm::monomial(vec![4, 0, 0], Q::one()));
    }

    #[test]
    fn center_dimensions() {
        let e = veronese_center(2, 2);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0], MultiForm::from_terms(3, 2, [(vec![1, 0, 1], Q::one()), (vec![0, 2, 0], Q::int(-1))]).unwrap());
        for d in 2..=4 {
            for k in 2..=4 {
                let e = veronese_center(d, k);
                assert_eq!(e.len(), expected_center_dim(d, k), "d={d} k={k}");
                for b in &e {
                    assert!(project(b, d).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn octic_upper_bound() {
        let f = octic();
        let r = krank_upper(&f, 4, DEFAULT_BUDGET, 7, &tol()).unwrap();
        assert_eq!(r.bound, 4);
        assert!(r.certificate.is_exact());
        assert!(!r.heuristic);
    }

    #[test]
    fn pure_powers() {
        let f = BinaryForm::monomial(8, 0, Q::one());
        assert_eq!(krank_upper(&f, 4, 50, 1, &tol()).unwrap().bound, 1);
        let lp = krank_lower_probe(&f, 4, 2, 20, 1, &tol()).unwrap();
        assert_eq!((lp.bound, lp.confidence), (1, Confidence::Certified));
    }

    #[test]
    fn xy7() {
        let f = BinaryForm::monomial(8, 7, Q::one());
        let up = krank_upper(&f, 4, DEFAULT_BUDGET, 1, &tol()).unwrap();
        assert_eq!(up.bound, 4);
        let lp = krank_lower_probe(&f, 4, 2, 200, 1, &tol()).unwrap();
        assert_eq!((lp.bound, lp.confidence), (4, Confidence::Certified));
        let s = lp.strata.unwrap();
        assert_eq!(s.c5_rank, 3);
        assert_eq!(s.zero_point_rank, 4);
    }

    #[test]
    fn rationalizer() {
        assert_eq!(approx_rational(0.75, 100), Some(BigRational::new(3.into(), 4.into())));
        assert_eq!(approx_rational(-2.0 / 3.0, 100), Some(BigRational::new((-2).into(), 3.into())));
        assert_eq!(approx_rational(std::f64::consts::PI, 100), None);
    }
}
