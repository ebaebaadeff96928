//! Named checks of the worked examples, runnable as one suite.

use crate::apolarity::{catalecticant, sylvester_decompose};
use crate::decomposition::Decomposition;
use crate::fiber::{krank_lower_probe, krank_upper, Confidence, PowerFiber, DEFAULT_BUDGET};
use crate::linalg::Matrix;
use crate::poly::{monomials, q, BinaryForm, MultiForm};
use crate::scalar::{Field, GaussRational, C64};
use crate::series::{generic_k_rank, parameter_count_bound};
use crate::sextic::{residual_cubic, shear_coefficients, three_cubes, three_cubes_sheared, Branch, SexticView};
use crate::structured::{canonical_form, canonical_parameter_count, monomial_k_factor, monomial_krank_upper, CanonicalVariant};
use crate::tolerance::Tolerances;

type Q = GaussRational;
type Outcome = std::result::Result<String, String>;

#[derive(Clone, Copy)]
pub struct Case {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bf(c: &[i64]) -> BinaryForm<Q> {
    BinaryForm::from_i64s(c)
}

fn cf(c: &[f64]) -> BinaryForm<C64> {
    BinaryForm::new(c.iter().map(|&x| C64::new(x, 0.0)).collect())
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn es<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn generic_binary() -> Outcome {
    for k in 2..=6 {
        for d in 1..=10 {
            let r = generic_k_rank(2, k, d).map_err(es)?;
            ensure(r.value == u64::from((k * d + 1).div_ceil(d + 1)), format!("(k,d)=({k},{d})"))?;
        }
    }
    let r = generic_k_rank(2, 3, 2).map_err(es)?;
    ensure(r.value == 3, "rk_3(2,6) should be 3")?;
    Ok("rk(2,k,d) = ceil((kd+1)/(d+1)) for k<=6, d<=10".into())
}

fn ternary_squares_table() -> Outcome {
    for d in 1..=8u32 {
        let r = generic_k_rank(3, 2, d).map_err(es)?;
        let base = parameter_count_bound(3, 2, d);
        let extra = u64::from(matches!(d, 1 | 3 | 4));
        ensure(r.value == base + extra, format!("n=3 d={d}: {} vs {}", r.value, base + extra))?;
    }
    for d in 1..=8u32 {
        let r = generic_k_rank(4, 2, d).map_err(es)?;
        let extra = u64::from(matches!(d, 1 | 2));
        ensure(r.value == parameter_count_bound(4, 2, d) + extra, format!("n=4 d={d}"))?;
    }
    Ok("exceptions at d in {1,3,4} (n=3) and {1,2} (n=4)".into())
}

fn example_three_cubes() -> Outcome {
    let p = bf(&[1, 3, -3, -11, 9, 21, -1]);
    let (qq, c) = residual_cubic(&SexticView::from_form(&p).map_err(es)?).map_err(es)?;
    ensure(qq == bf(&[1, 1, -2]), format!("q = {qq}"))?;
    ensure(c == bf(&[0, 3, 9, 7]), format!("c = {c}"))?;
    let h = sylvester_decompose(&c, &tol()).map_err(es)?;
    let mut pieces: Vec<BinaryForm<Q>> = h
        .exact()
        .ok_or("Sylvester left Q(i)")?
        .terms
        .iter()
        .map(|t| BinaryForm::from_multi(&t.base).unwrap().pow(3).scale(&t.coef))
        .collect();
    let want = [bf(&[1, 3, 3, 1]).scale(&q(-1, 1)), bf(&[1, 6, 12, 8])];
    pieces.sort_by_key(|f| f.to_string());
    let mut want = want.to_vec();
    want.sort_by_key(|f| f.to_string());
    ensure(pieces == want, "h != -(x+y)^3 + (x+2y)^3")?;
    let rhs = bf(&[1, 1, -2])
        .pow(3)
        .try_add(&bf(&[1, 2]).pow(3).mul_y_pow(3))
        .and_then(|s| s.try_sub(&bf(&[1, 1]).pow(3).mul_y_pow(3)))
        .map_err(es)?;
    ensure(rhs == p, "displayed identity fails")?;
    let cert = three_cubes(&p, &tol()).map_err(es)?;
    ensure(cert.branch == Branch::Generic && cert.len() == 3 && cert.terms.is_exact(), "certificate shape")?;
    ensure(cert.verify(&p, &tol()), "certificate does not expand to p")?;
    Ok("p = (x^2+xy-2y^2)^3 + y^3(x+2y)^3 - y^3(x+y)^3, exact".into())
}

fn example_all_ones() -> Outcome {
    let p = bf(&[1, 1, 1, 1, 1, 1, 1]);
    let (qq, c) = residual_cubic(&SexticView::from_form(&p).map_err(es)?).map_err(es)?;
    ensure(qq == BinaryForm::from_ratios(&[(1, 1), (1, 3), (2, 9)]), format!("q = {qq}"))?;
    ensure(c == bf(&[54, 81, 99, 103]).scale(&q(7, 729)), format!("c = {c}"))?;
    let cert = three_cubes(&p, &tol()).map_err(es)?;
    let res = cert.residual(&p);
    ensure(res <= 1e-8, format!("certificate residual {res:e}"))?;
    // the two displayed identities, evaluated in floating point
    let s = 20153f64.sqrt();
    let m1 = (20153.0 + 134.0 * s) / 354209128.0;
    let m2 = (20153.0 - 134.0 * s) / 354209128.0;
    let lin = |b: f64| cf(&[78.0, b]).pow(3);
    let sum = lin(173.0 - s).scale(&C64::new(m1, 0.0)).try_add(&lin(173.0 + s).scale(&C64::new(m2, 0.0))).map_err(es)?;
    let r1 = sum.relative_distance(&cf(&[54.0, 81.0, 99.0, 103.0]));
    ensure(r1 <= 1e-8, format!("sqrt(20153) identity residual {r1:e}"))?;
    let w = C64::new(0.0, 3f64.sqrt());
    let mut acc = BinaryForm::<C64>::zero(6);
    for sg in [1.0, -1.0] {
        let coef = (C64::new(9.0, 0.0) + w * sg) / 18.0;
        let base = BinaryForm::new(vec![C64::new(1.0, 0.0), (C64::new(1.0, 0.0) + w * sg) / 2.0, C64::new(1.0, 0.0)]);
        acc = acc.try_add(&base.pow(3).scale(&coef)).map_err(es)?;
    }
    let r2 = acc.relative_distance(&p.to_c64());
    ensure(r2 <= 1e-8, format!("sqrt(-3) identity residual {r2:e}"))?;
    Ok(format!("residual 7/729 y^3(54x^3+81x^2y+99xy^2+103y^3) exact; certificate {res:.1e}"))
}

fn example_sheared() -> Outcome {
    let p = bf(&[1, 3, 0, 0, 0, 0, 1]);
    let (qq, c) = residual_cubic(&SexticView::from_form(&p).map_err(es)?).map_err(es)?;
    ensure(qq == bf(&[1, 1, -1]) && c == bf(&[5, 0, -3, 2]), "x^6+3x^5y+y^6 residual")?;
    let s5 = 5f64.sqrt();
    let t1 = cf(&[-5.0 - 2.0 * s5, 1.0]).pow(3).scale(&C64::new((20.0 - 9.0 * s5) / 20.0, 0.0));
    let t2 = cf(&[-5.0 + 2.0 * s5, 1.0]).pow(3).scale(&C64::new((20.0 + 9.0 * s5) / 20.0, 0.0));
    let r = t1.try_add(&t2).map_err(es)?.relative_distance(&c.to_c64());
    ensure(r <= 1e-8, format!("sqrt(5) identity residual {r:e}"))?;

    let p = bf(&[1, 0, 0, 0, 0, 3, 1]);
    let (_, c) = residual_cubic(&SexticView::from_form(&p).map_err(es)?).map_err(es)?;
    ensure(c == bf(&[0, 0, 3, 1]), "c = y^2(3x+y)")?;
    let pm1 = shear_coefficients(&SexticView::from_form(&p).map_err(es)?, &q(-1, 1)).to_form();
    ensure(pm1 == bf(&[-1, 9, -15, 10, 0, -3, 1]), format!("p_-1 = {pm1}"))?;
    let cert = three_cubes_sheared(&p, &q(-1, 1), &tol()).map_err(es)?;
    let res = cert.residual(&p);
    ensure(res <= 1e-8, format!("T=-1 certificate residual {res:e}"))?;
    let terms = cert.terms.to_c64();
    let first = BinaryForm::from_multi(&terms.terms[0].base).map_err(es)?.pow(3).scale(&terms.terms[0].coef);
    let r = first.relative_distance(&cf(&[6.0, 11.0, 4.0]).pow(3));
    ensure(r <= 1e-12, "first cube is not (6x^2+11xy+4y^2)^3")?;
    let default = three_cubes(&p, &tol()).map_err(es)?;
    ensure(default.verify(&p, &tol()) && default.len() <= 3, "default path certificate")?;
    Ok(format!("p_-1 exact, first cube (6x^2+11xy+4y^2)^3, residual {res:.1e}"))
}

fn span_rank(a: &[MultiForm<Q>], b: &[MultiForm<Q>]) -> (usize, usize, usize) {
    let cols = monomials(3, 2);
    let rows = |v: &[MultiForm<Q>]| v.iter().map(|f| cols.iter().map(|e| f.coeff(e)).collect()).collect::<Vec<Vec<Q>>>();
    let r = |m: Vec<Vec<Q>>| Matrix::from_rows(m).rank(&tol());
    let mut both = rows(a);
    both.extend(rows(b));
    (r(rows(a)), r(rows(b)), r(both))
}

fn quad(terms: &[([u32; 3], i64)]) -> MultiForm<Q> {
    MultiForm::from_terms(3, 2, terms.iter().map(|(e, c)| (e.to_vec(), Q::int(*c)))).unwrap()
}

fn example_octic() -> Outcome {
    let f = bf(&[0, 0, 1, 0, 0, -1, 1, -1, 0]);
    let up = krank_upper(&f, 4, DEFAULT_BUDGET, tol().seed, &tol()).map_err(es)?;
    ensure(up.bound == 4 && up.certificate.is_exact() && up.certificate.verify(&f.to_multi(), &tol()), "krank_upper certificate")?;
    let eight = bf(&[0, 1, -1])
        .pow(4)
        .try_sub(&bf(&[1, 0, -1]).pow(4))
        .and_then(|s| s.try_add(&bf(&[1, 0, 1]).pow(4)))
        .and_then(|s| s.try_sub(&bf(&[0, 1, 1]).pow(4)))
        .map_err(es)?;
    ensure(eight == f.scale(&Q::int(8)), "8f identity")?;
    let fiber = PowerFiber::new(&f, 4).map_err(es)?;
    let mut c = vec![Q::zero(); fiber.dim()];
    c[4] = Q::int(-1);
    let pt = fiber.point(&c).map_err(es)?;
    let want = MultiForm::from_terms(
        3,
        4,
        [(vec![3, 0, 1], Q::one()), (vec![1, 0, 3], Q::one()), (vec![0, 3, 1], Q::int(-1)), (vec![0, 1, 3], Q::int(-1))],
    )
    .map_err(es)?;
    ensure(pt.form == want, "F at c4 = -1")?;
    let ker = catalecticant(&pt.form, 2).map_err(es)?.apolar_slice(&tol());
    let expected = [quad(&[([1, 1, 0], 1)]), quad(&[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)])];
    ensure(span_rank(&ker, &expected) == (2, 2, 2), "kernel conics")?;
    Ok(format!("k-rank bound 4 ({:?}), 8f identity exact", up.source))
}

fn example_xy7() -> Outcome {
    let f = BinaryForm::monomial(8, 7, Q::one());
    let lp = krank_lower_probe(&f, 4, 2, 10_000, tol().seed, &tol()).map_err(es)?;
    ensure(lp.confidence == Confidence::Certified && lp.bound == 4, format!("lower probe {} {:?}", lp.bound, lp.confidence))?;
    let s = lp.strata.ok_or("no strata")?;
    ensure(s.generic_min_rank >= 4 && s.generic_samples == 10_000, "generic stratum")?;
    ensure(s.c5_rank == 3, format!("c5 stratum rank {}", s.c5_rank))?;
    let want = [quad(&[([2, 0, 0], 1)]), quad(&[([1, 1, 0], 1)]), quad(&[([1, 0, 1], 2), ([0, 2, 0], 3)])];
    ensure(span_rank(&s.c5_kernel, &want) == (3, 3, 3), "c5 kernel span")?;
    let up = krank_upper(&f, 4, DEFAULT_BUDGET, tol().seed, &tol()).map_err(es)?;
    ensure(up.bound == 4, format!("upper bound {}", up.bound))?;
    Ok("rk_4(xy^7) = 4".into())
}

fn appendix_monomial() -> Outcome {
    let m = monomial_k_factor(&[3, 10, 11], 4).map_err(es)?;
    ensure(m.m1 == [0, 4, 2] && m.m2 == [1, 2, 3], format!("m1 {:?} m2 {:?}", m.m1, m.m2))?;
    let d = monomial_krank_upper(&[3, 10, 11], 4, &tol()).map_err(es)?;
    let target = MultiForm::monomial(vec![3, 10, 11], Q::one());
    ensure(matches!(d, Decomposition::Exact(_)) && d.len() == 4 && d.verify(&target, &tol()), "four fourth powers")?;
    Ok("x1^3 x2^10 x3^11 = (x2^4 x3^2)(x1 x2^2 x3^3)^3, 4 exact terms".into())
}

fn appendix_canonical() -> Outcome {
    let p = bf(&[2, -1, 3, 5, 0, 7, -4, 1, 9]);
    for (k, d) in [(2, 4), (4, 2)] {
        let c = canonical_form(&p, k, d, CanonicalVariant::Unique).map_err(es)?;
        ensure(c.reconstruct() == p && c.meets_unique_constraints(), format!("k={k} d={d}"))?;
        ensure(canonical_parameter_count(k, d) == k * d + 1, "parameter count")?;
    }
    let base = bf(&[1, 1, 0]);
    let c = canonical_form(&base.pow(3), 3, 2, CanonicalVariant::Unique).map_err(es)?;
    ensure(c.parts_exact().ok_or("roots")?[0] == base, "(x^2+xy)^3")?;
    Ok("normal form reconstructs exactly with kd+1 parameters".into())
}

/// Every case, sorted by name.
pub fn paper_examples() -> Vec<Case> {
    let mut v = vec![
        Case { name: "appendix-canonical-form", run: appendix_canonical },
        Case { name: "appendix-monomial-3-10-11", run: appendix_monomial },
        Case { name: "generic-rank-binary", run: generic_binary },
        Case { name: "generic-rank-ternary-squares", run: ternary_squares_table },
        Case { name: "krank-octic-four", run: example_octic },
        Case { name: "krank-xy7-four", run: example_xy7 },
        Case { name: "sextic-all-ones", run: example_all_ones },
        Case { name: "sextic-sheared", run: example_sheared },
        Case { name: "sextic-three-cubes", run: example_three_cubes },
    ];
    v.sort_by_key(|c| c.name);
    v
}

pub fn run_case(c: &Case) -> CaseReport {
    match (c.run)() {
        Ok(detail) => CaseReport { name: c.name, passed: true, detail },
        Err(detail) => CaseReport { name: c.name, passed: false, detail },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_sorted_and_unique() {
        let names: Vec<_> = paper_examples().iter().map(|c| c.name).collect();
        let mut s = names.clone();
        s.sort();
        s.dedup();
        assert_eq!(names, s);
    }

    #[test]
    fn sextic_cases_pass() {
        for c in paper_examples().iter().filter(|c| c.name.starts_with("sextic") || c.name.starts_with("appendix")) {
            let r = run_case(c);
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
