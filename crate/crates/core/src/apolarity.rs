//! Catalecticants, apolar slices and decompositions of binary forms into
//! powers of linear forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decomposition::{Decomposition, PowerSum};
use crate::error::{Error, Result};
use crate::linalg::{integer_rank, Matrix};
use crate::poly::{monomials, BinaryForm, LinearSubstitution, MultiForm};
use crate::roots::{chordal_distance, exact_roots, expand_roots, float_roots, is_square_free, ProjRoot};
use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

/// The map `R_i -> S_{D-i}`, `y^α ↦ ∂^α f`, with raw derivative coefficients.
#[derive(Clone, Debug)]
pub struct Catalecticant<F> {
    pub order: u32,
    pub nvars: usize,
    /// Operators `y^α`, one per row.
    pub row_monomials: Vec<Vec<u32>>,
    /// Monomials of `S_{D-i}`, one per column.
    pub col_monomials: Vec<Vec<u32>>,
    pub matrix: Matrix<F>,
}

pub fn catalecticant<F: Field>(f: &MultiForm<F>, i: u32) -> Result<Catalecticant<F>> {
    let d = f.degree();
    if i > d {
        return Err(Error::precondition(format!("order {i} exceeds degree {d}")));
    }
    let n = f.nvars();
    let rows = monomials(n, i);
    let cols = monomials(n, d - i);
    let index: HashMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(j, m)| (m, j)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (r, alpha) in rows.iter().enumerate() {
        for (e, c) in f.differentiate(alpha).terms() {
            m.set(r, index[e], c.clone());
        }
    }
    Ok(Catalecticant { order: i, nvars: n, row_monomials: rows, col_monomials: cols, matrix: m })
}

impl<F: Field> Catalecticant<F> {
    pub fn rank(&self, tol: &Tolerances) -> usize {
        self.matrix.rank(tol)
    }

    /// Basis of `(f^⊥)_i`: operators of degree `i` killing `f`.
    pub fn apolar_slice(&self, tol: &Tolerances) -> Vec<MultiForm<F>> {
        self.matrix
            .transpose()
            .kernel(tol)
            .into_iter()
            .map(|v| {
                MultiForm::from_terms(self.nvars, self.order, self.row_monomials.iter().cloned().zip(v))
                    .expect("row monomials are homogeneous")
            })
            .collect()
    }
}

/// The contraction `g ∘ f = Σ g_α ∂^α f`.
pub fn contract<F: Field>(g: &MultiForm<F>, f: &MultiForm<F>) -> Result<MultiForm<F>> {
    if g.nvars() != f.nvars() {
        return Err(Error::VariableMismatch { left: g.nvars(), right: f.nvars() });
    }
    if g.degree() > f.degree() {
        return Ok(MultiForm::zero(f.nvars(), 0));
    }
    let mut acc = MultiForm::zero(f.nvars(), f.degree() - g.degree());
    for (alpha, c) in g.terms() {
        acc = acc.try_add(&f.differentiate(alpha).scale(c))?;
    }
    Ok(acc)
}

fn falling<F: Field>(n: u32, m: u32) -> F {
    (0..m).fold(F::one(), |acc, j| acc * F::from_i64((n - j) as i64))
}

/// `cat_r` of a binary form: row `a` is `∂x^(r-a) ∂y^a f`.
pub fn binary_catalecticant<F: Field>(f: &BinaryForm<F>, r: u32) -> Matrix<F> {
    let d = f.degree();
    assert!(r <= d);
    let mut m = Matrix::zeros(r as usize + 1, (d - r) as usize + 1);
    for a in 0..=r {
        for b in 0..=d - r {
            let j = a + b;
            let c = f.coeff(j as usize);
            if !c.is_zero() {
                m.set(a as usize, b as usize, c.clone() * falling::<F>(d - j, r - a) * falling::<F>(j, a));
            }
        }
    }
    m
}

/// Basis of the degree-`r` apolar slice of a binary form. The operator
/// `Σ v_a y1^(r-a) y2^a` is returned as the binary form with coefficients `v`.
pub fn binary_apolar_slice<F: Field>(f: &BinaryForm<F>, r: u32, tol: &Tolerances) -> Vec<BinaryForm<F>> {
    if r > f.degree() {
        // everything of degree > D annihilates f
        return (0..=r).map(|j| BinaryForm::monomial(r, j, F::one())).collect();
    }
    binary_catalecticant(f, r).transpose().kernel(tol).into_iter().map(BinaryForm::new).collect()
}

/// Rank of the middle catalecticant of a form with rational coefficients,
/// computed modularly. It is the lowest degree carrying an apolar operator.
fn rational_border_rank<F: Field>(f: &BinaryForm<F>) -> Option<u32> {
    let c: Vec<GaussRational> = f.coeffs().iter().map(Field::as_gauss).collect::<Option<_>>()?;
    if c.iter().any(|v| !v.im.is_zero()) {
        return None;
    }
    let l = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.re.denom()));
    let ints = BinaryForm::new(c.iter().map(|v| GaussRational::real(&v.re * BigRational::from_integer(l.clone()))).collect());
    let m = binary_catalecticant(&ints, f.degree() / 2);
    let rows: Vec<Vec<BigInt>> = m.to_rows().iter().map(|r| r.iter().map(|v| v.re.to_integer()).collect()).collect();
    Some(integer_rank(&rows) as u32)
}

/// Lowest degree `r` with a nonzero apolar operator, and that slice.
pub fn first_apolar_slice<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> (u32, Vec<BinaryForm<F>>) {
    let mut r = 1;
    if let Some(b) = rational_border_rank(f) {
        r = b.max(1);
    }
    loop {
        let k = binary_apolar_slice(f, r, tol);
        if !k.is_empty() {
            return (r, k);
        }
        r += 1;
    }
}

fn multiply_coeffs<F: Field>(g: &BinaryForm<F>, m: &BinaryForm<F>) -> Vec<F> {
    g.mul(m).into_coeffs()
}

/// Coefficient vectors tried, in order, for the multiplier in `g1*m + g2`:
/// zero, the unit vectors, then everything in `{-2..2}^len`.
fn multiplier_sequence(len: usize, cap: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; len]];
    for i in 0..len {
        let mut e = vec![0; len];
        e[i] = 1;
        out.push(e);
    }
    let mut cur = vec![-2i64; len];
    'outer: while out.len() < cap {
        if !out.contains(&cur) {
            out.push(cur.clone());
        }
        for v in cur.iter_mut() {
            if *v < 2 {
                *v += 1;
                continue 'outer;
            }
            *v = -2;
        }
        break;
    }
    out
}

/// A square-free apolar operator of least possible degree.
pub fn square_free_apolar<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<BinaryForm<F>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let (r, slice) = first_apolar_slice(f, tol);
    if slice.len() == 1 && is_square_free(&slice[0], tol)? {
        return Ok(slice[0].clone());
    }
    let g1 = slice[0].clone();
    let r2 = d + 2 - r;
    let big = if r2 == r { slice } else { binary_apolar_slice(f, r2, tol) };
    // the multiples of g1 span a hyperplane of the slice; g2 completes it
    let multiples: Vec<BinaryForm<F>> =
        (0..=r2 - r).map(|j| BinaryForm::new(multiply_coeffs(&g1, &BinaryForm::monomial(r2 - r, j, F::one())))).collect();
    let base_rank = Matrix::from_rows(multiples.iter().map(|m| m.coeffs().to_vec()).collect()).rank(tol);
    let g2 = big
        .iter()
        .find(|v| {
            let mut rows: Vec<Vec<F>> = multiples.iter().map(|m| m.coeffs().to_vec()).collect();
            rows.push(v.coeffs().to_vec());
            Matrix::from_rows(rows).rank(tol) > base_rank
        })
        .cloned()
        .ok_or_else(|| Error::internal("apolar slice has no second generator"))?;
    let mut ambiguous = None;
    for w in multiplier_sequence(multiples.len(), 4096) {
        let mut h = g2.clone();
        for (c, m) in w.iter().zip(&multiples) {
            if *c != 0 {
                h = h.try_add(&m.scale(&F::from_i64(*c)))?;
            }
        }
        if h.is_zero() {
            continue;
        }
        match is_square_free(&h, tol) {
            Ok(true) => return Ok(h),
            Ok(false) => {}
            Err(e @ Error::Ambiguous(_)) => ambiguous = ambiguous.or(Some(e)),
            Err(e) => return Err(e),
        }
    }
    Err(ambiguous.unwrap_or_else(|| Error::internal("no square-free apolar operator found")))
}

/// Solves `Σ λ_j ℓ_j^D = f` for the linear forms `ℓ_j` attached to `roots`.
pub fn powers_from_roots<F: Field>(
    f: &BinaryForm<F>,
    roots: &[ProjRoot<F>],
    tol: &Tolerances,
) -> Result<WaringOf<F>> {
    let d = f.degree();
    let lins: Vec<BinaryForm<F>> = roots
        .iter()
        .map(|r| {
            if F::EXACT {
                r.linear_form()
            } else {
                let s = F::from_c64(C64::new(r.x.magnitude().max(r.y.magnitude()), 0.0)).expect("float");
                BinaryForm::linear(r.x.clone() / s.clone(), r.y.clone() / s)
            }
        })
        .collect();
    let pows: Vec<BinaryForm<F>> = lins.iter().map(|l| l.pow(d)).collect();
    let mut a = Matrix::zeros(d as usize + 1, pows.len());
    for (j, p) in pows.iter().enumerate() {
        for (i, c) in p.coeffs().iter().enumerate() {
            a.set(i, j, c.clone());
        }
    }
    let lambda = a
        .solve(f.coeffs(), tol)
        .ok_or_else(|| Error::internal("power-sum linear system has no solution"))?;
    let mut out = PowerSum::new(2, 1, d);
    for (l, c) in lins.into_iter().zip(lambda) {
        out.push(c, l.to_multi());
    }
    Ok(out)
}

/// Shorthand for a binary Waring decomposition over `F`.
pub type WaringOf<F> = PowerSum<F>;

fn constant_sum<F: Field>(f: &BinaryForm<F>) -> PowerSum<F> {
    let mut out = PowerSum::new(2, 0, 0);
    out.push(f.coeff(0).clone(), MultiForm::constant(2, F::one()));
    out
}

/// Sylvester's algorithm over a single field; `None` when the roots of
/// the chosen operator do not lie in `F`.
pub fn sylvester_in<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<Option<PowerSum<F>>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() == 0 {
        return Ok(Some(constant_sum(f)));
    }
    let g = square_free_apolar(f, tol)?;
    match F::linear_roots(&g, tol) {
        Some(r) => powers_from_roots(f, &r, tol).map(Some),
        None => Ok(None),
    }
}

/// Even degree `2s`: `f = λ x^(2s) + Σ_{j<=s} c_j ℓ_j^(2s)`. The value of `λ`
/// makes the square middle catalecticant of `f - λ x^(2s)` singular.
pub fn even_degree_decomposition(f: &BinaryForm<GaussRational>, tol: &Tolerances) -> Result<(GaussRational, Decomposition)> {
    let d = f.degree();
    if d == 0 || d % 2 == 1 {
        return Err(Error::precondition(format!("degree {d} is not a positive even number")));
    }
    let det_at = |c0: GaussRational| {
        let mut c = f.coeffs().to_vec();
        c[0] = c0;
        let m = binary_catalecticant(&BinaryForm::new(c), d / 2);
        LinearSubstitution::new(m.to_rows()).map(|s| s.det())
    };
    let (z, o) = (det_at(GaussRational::zero())?, det_at(GaussRational::one())?);
    let slope = o - z.clone();
    if slope.is_zero() {
        return Err(Error::precondition("the leading catalecticant minor vanishes"));
    }
    let lambda = f.coeff(0).clone() + z / slope;
    let g = f.try_sub(&BinaryForm::monomial(d, 0, lambda.clone()))?;
    let dec = if g.is_zero() { Decomposition::Exact(PowerSum::new(2, 1, d)) } else { sylvester_decompose(&g, tol)? };
    Ok((lambda, dec))
}

/// Minimal-length decomposition of a binary form into powers of linear
/// forms. Stays exact when the operator's roots are Gaussian rationals.
pub fn sylvester_decompose(f: &BinaryForm<GaussRational>, tol: &Tolerances) -> Result<Decomposition> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() == 0 {
        return Ok(Decomposition::Exact(constant_sum(f)));
    }
    let g = square_free_apolar(f, tol)?;
    if let Some(r) = exact_roots(&g, tol) {
        return Ok(Decomposition::Exact(powers_from_roots(f, &r, tol)?));
    }
    let roots = float_roots(&g, tol)?;
    let ps = powers_from_roots(&f.to_c64(), &roots, tol)?;
    let res = ps.residual(&f.to_c64().to_multi());
    if res > tol.verify {
        return Err(Error::internal(format!("Sylvester decomposition residual {res:e}")));
    }
    Ok(Decomposition::Float(ps))
}

/// Sylvester's algorithm on floating input.
pub fn sylvester_decompose_float(f: &BinaryForm<C64>, tol: &Tolerances) -> Result<PowerSum<C64>> {
    sylvester_in(f, tol)?.ok_or_else(|| Error::internal("float roots unavailable"))
}

/// Waring rank of a binary form, read off the degree of the square-free operator.
pub fn binary_waring_rank<F: Field>(f: &BinaryForm<F>, tol: &Tolerances) -> Result<usize> {
    if f.degree() == 0 {
        return if f.is_zero() { Err(Error::ZeroForm) } else { Ok(1) };
    }
    Ok(square_free_apolar(f, tol)?.degree() as usize)
}

/// A binary cubic as a sum of at most three cubes of linear forms.
pub fn cubic_three_cubes(h: &BinaryForm<GaussRational>, tol: &Tolerances) -> Result<Decomposition> {
    if h.degree() != 3 {
        return Err(Error::precondition(format!("expected a cubic, got degree {}", h.degree())));
    }
    if h.is_zero() {
        return Err(Error::ZeroForm);
    }
    if is_square_free(h, tol)? {
        return sylvester_decompose(h, tol);
    }
    // a repeated factor of a cubic over Q(i) is defined over Q(i), and so is the rest
    let roots = exact_roots(h, tol).ok_or_else(|| Error::internal("repeated root of a cubic is not rational"))?;
    let lead = leading_scalar(h, &roots);
    let v: Vec<BinaryForm<GaussRational>> = roots.iter().map(ProjRoot::vanishing_form).collect();
    let mut out = PowerSum::new(2, 1, 3);
    if v[0] == v[1] && v[1] == v[2] {
        out.push(lead, v[0].to_multi());
        return Ok(Decomposition::Exact(out));
    }
    let (dbl, single) = if v[0] == v[1] {
        (&v[0], &v[2])
    } else if v[0] == v[2] {
        (&v[0], &v[1])
    } else {
        (&v[1], &v[0])
    };
    // h = lead * X^2 Y with X = dbl, Y = single, and 6 X^2 Y = (-X+Y)^3 - 2Y^3 + (X+Y)^3
    let sixth = lead / GaussRational::int(6);
    out.push(sixth.clone(), single.try_sub(dbl)?.to_multi());
    out.push(sixth.clone() * GaussRational::int(-2), single.to_multi());
    out.push(sixth, single.try_add(dbl)?.to_multi());
    Ok(Decomposition::Exact(out))
}

/// The scalar `c` with `f = c * Π vanishing_form(r)`.
fn leading_scalar<F: Field>(f: &BinaryForm<F>, roots: &[ProjRoot<F>]) -> F {
    let p = expand_roots(&F::one(), roots);
    let j = (0..p.coeffs().len())
        .max_by(|&a, &b| p.coeff(a).magnitude().total_cmp(&p.coeff(b).magnitude()))
        .expect("nonempty");
    f.coeff(j).clone() / p.coeff(j).clone()
}

fn split_squares<F: Field>(
    f: &BinaryForm<F>,
    roots: Vec<ProjRoot<F>>,
    same: impl Fn(&ProjRoot<F>, &ProjRoot<F>) -> bool,
) -> PowerSum<F> {
    let m = f.degree() / 2;
    let lead = leading_scalar(f, &roots);
    let mut clusters: Vec<Vec<ProjRoot<F>>> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|c| same(&c[0], &r)) {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }
    let ordered: Vec<ProjRoot<F>> = clusters.into_iter().flatten().collect();
    let mut a = BinaryForm::new(vec![lead]);
    let mut b = BinaryForm::new(vec![F::one()]);
    for (i, r) in ordered.iter().enumerate() {
        if i % 2 == 0 {
            a = a.mul(&r.vanishing_form());
        } else {
            b = b.mul(&r.vanishing_form());
        }
    }
    let half = F::from_ratio(1, 2);
    let g1 = a.try_add(&b).expect("equal degrees").scale(&half);
    let g2 = a.try_sub(&b).expect("equal degrees").scale(&(half * F::imaginary_unit()));
    let mut out = PowerSum::new(2, m, 2);
    out.push(F::one(), g1.to_multi());
    out.push(F::one(), g2.to_multi());
    out
}

/// `f = g1^2 + g2^2` from a balanced split of the linear factors of `f`.
pub fn two_squares(f: &BinaryForm<GaussRational>, tol: &Tolerances) -> Result<Decomposition> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() % 2 == 1 {
        return Err(Error::precondition("two squares need an even degree"));
    }
    if let Some(r) = exact_roots(f, tol) {
        return Ok(Decomposition::Exact(split_squares(f, r, |a, b| a == b)));
    }
    Ok(Decomposition::Float(two_squares_float(&f.to_c64(), tol)?))
}

pub fn two_squares_float(f: &BinaryForm<C64>, tol: &Tolerances) -> Result<PowerSum<C64>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() % 2 == 1 {
        return Err(Error::precondition("two squares need an even degree"));
    }
    let r = float_roots(f, tol)?;
    let out = split_squares(f, r, |a, b| chordal_distance(a, b) < tol.square_factor);
    let res = out.residual(&f.to_multi());
    if res > tol.verify {
        return Err(Error::internal(format!("two-squares residual {res:e}")));
    }
    Ok(out)
}
