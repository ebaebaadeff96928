use proptest::prelude::*;

use waring_core::apolarity::{binary_catalecticant, binary_waring_rank, sylvester_decompose};
use waring_core::certificate::Certificate;
use waring_core::fiber::{lift, lift_linear, project, veronese_center, PowerFiber};
use waring_core::linalg::Matrix;
use waring_core::poly::{BinaryForm, LinearSubstitution, MultiForm};
use waring_core::scalar::{Field, GaussRational as Q, Scalar, C64};
use waring_core::series::{froeberg_series, generic_k_rank};
use waring_core::sextic::{three_cubes, SexticView};
use waring_core::structured::{canonical_form, monomial_k_factor, CanonicalVariant};
use waring_core::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| Q::ratio(n, d))
}

fn gaussian() -> impl Strategy<Value = Q> {
    (rational(), rational()).prop_map(|(re, im)| re + im * Q::imaginary_unit())
}

fn form(degree: u32) -> impl Strategy<Value = BinaryForm<Q>> {
    prop::collection::vec(rational(), degree as usize + 1).prop_map(BinaryForm::new)
}

fn nonzero_form(max_degree: u32) -> impl Strategy<Value = BinaryForm<Q>> {
    (1..=max_degree).prop_flat_map(form).prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_are_reduced(n in -1000i64..1000, d in 1i64..1000, g in 1i64..50) {
        let q = Q::ratio(n * g, -d * g);
        prop_assert_eq!(q.clone(), Q::ratio(-n, d));
        prop_assert!(q.re.denom() > &0.into());
    }

    #[test]
    fn mixed_modes_need_promotion(a in rational(), b in -5.0f64..5.0) {
        let exact = Scalar::Exact(a);
        let float = Scalar::Float(C64::new(b, 0.0));
        prop_assert!(exact.try_add(&float).is_err());
        prop_assert!(exact.promote().try_add(&float).is_ok());
    }

    #[test]
    fn binomial_view_round_trips(f in (0u32..9).prop_flat_map(form)) {
        prop_assert_eq!(BinaryForm::from_binomial(&f.binomial_view()), f);
    }

    #[test]
    fn sparse_forms_store_no_zeros(f in (0u32..7).prop_flat_map(form), g in (0u32..7).prop_flat_map(form)) {
        let m = f.to_multi().try_mul(&g.to_multi()).unwrap();
        let deg = f.degree() + g.degree();
        for (e, c) in m.terms() {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(e.iter().sum::<u32>(), deg);
        }
    }

    #[test]
    fn singular_substitutions_are_rejected(a in rational(), b in rational(), t in rational()) {
        let rows = vec![vec![a.clone(), b.clone()], vec![a * t.clone(), b * t]];
        prop_assert!(LinearSubstitution::new_invertible(rows).is_err());
    }

    #[test]
    fn exact_and_float_rank_agree(rows in 1usize..6, cols in 1usize..6, inner in 1usize..5, seed in prop::collection::vec(-9i64..=9, 60)) {
        let a = Matrix::<Q>::from_i64s(&(0..rows).map(|i| (0..inner).map(|j| seed[i * 5 + j]).collect()).collect::<Vec<_>>());
        let b = Matrix::<Q>::from_i64s(&(0..inner).map(|i| (0..cols).map(|j| seed[30 + i * 6 + j]).collect()).collect::<Vec<_>>());
        let m = a.mul(&b);
        prop_assert_eq!(m.rank(&tol()), m.to_c64().rank(&tol()));
    }

    #[test]
    fn froeberg_series_stops_at_first_nonpositive(n in 2usize..5, s in 1usize..6, deg in 1u32..5) {
        let series = froeberg_series(n, &vec![deg; s], 20);
        let c = series.coeffs();
        if let Some(first) = c.iter().position(|v| v <= &0.into()) {
            prop_assert!(c[first + 1..].iter().all(|v| v == &0.into()));
        }
    }

    #[test]
    fn both_rank_paths_agree(k in 2u32..7, d in 1u32..11) {
        let r = generic_k_rank(2, k, d).unwrap();
        prop_assert!(r.cross_checked);
        prop_assert_eq!(r.value, u64::from((k * d + 1).div_ceil(d + 1)));
    }

    #[test]
    fn catalecticant_ranks_are_symmetric(f in nonzero_form(9), i in 0u32..10) {
        let deg = f.degree();
        let i = i % (deg + 1);
        let a = binary_catalecticant(&f, i).rank(&tol());
        let b = binary_catalecticant(&f, deg - i).rank(&tol());
        prop_assert_eq!(a, b);
        prop_assert!(a as u32 <= (i + 1).min(deg - i + 1));
    }

    #[test]
    fn sylvester_reconstructs(f in nonzero_form(7)) {
        let dec = sylvester_decompose(&f, &tol()).unwrap();
        prop_assert!(dec.verify(&f.to_multi(), &tol()));
        prop_assert_eq!(dec.len(), binary_waring_rank(&f, &tol()).unwrap());
    }

    #[test]
    fn gaussian_sylvester_reconstructs(c in prop::collection::vec(gaussian(), 4..6)) {
        let f = BinaryForm::new(c);
        prop_assume!(!f.is_zero());
        let dec = sylvester_decompose(&f, &tol()).unwrap();
        prop_assert!(dec.verify(&f.to_multi(), &tol()));
    }

    #[test]
    fn sextic_view_round_trips(p in form(6)) {
        let v = SexticView::from_form(&p).unwrap();
        prop_assert_eq!(v.to_form(), p);
    }

    #[test]
    fn sextics_take_three_cubes(p in form(6)) {
        prop_assume!(!p.is_zero());
        let cert = three_cubes(&p, &tol()).unwrap();
        prop_assert!(cert.len() <= 3);
        prop_assert!(cert.verify(&p, &tol()));
    }

    #[test]
    fn lift_projects_back(k in 2u32..5, d in 1u32..4, seed in prop::collection::vec(rational(), 13)) {
        let f = BinaryForm::new(seed[..(k * d + 1) as usize].to_vec());
        prop_assert_eq!(project(&lift(&f, k).unwrap(), d).unwrap(), f.clone());
        let g = BinaryForm::new(seed[..(d + 1) as usize].to_vec());
        prop_assert_eq!(project(&lift_linear(&g).pow(k), d).unwrap(), g.pow(k));
    }

    #[test]
    fn fiber_points_project_to_the_input(c in prop::collection::vec(rational(), 6)) {
        let f = BinaryForm::from_i64s(&[0, 0, 1, 0, 0, -1, 1, -1, 0]);
        let fiber = PowerFiber::new(&f, 4).unwrap();
        prop_assert_eq!(fiber.dim(), 6);
        let pt = fiber.point(&c).unwrap();
        prop_assert_eq!(project(&pt.form, 2).unwrap(), f);
    }

    #[test]
    fn monomial_factors_multiply_back(a in prop::collection::vec(0u32..9, 1..4), k in 2u32..6) {
        let total: u32 = a.iter().sum();
        prop_assume!(total > 0 && total.is_multiple_of(k) && (k - 2) * a.len() as u32 <= total / k);
        let m = monomial_k_factor(&a, k).unwrap();
        prop_assert!(m.check());
        for i in 0..a.len() {
            prop_assert_eq!(a[i], m.m1[i] + (k - 1) * m.m2[i]);
        }
    }

    #[test]
    fn canonical_forms_reconstruct(k in 2u32..5, d in 1u32..4, seed in prop::collection::vec(rational(), 13)) {
        let p = BinaryForm::new(seed[..(k * d + 1) as usize].to_vec());
        if let Ok(c) = canonical_form(&p, k, d, CanonicalVariant::Unique) {
            prop_assert_eq!(c.reconstruct(), p);
            prop_assert!(c.meets_unique_constraints());
        }
    }

    #[test]
    fn certificates_round_trip(f in nonzero_form(6)) {
        let dec = sylvester_decompose(&f, &tol()).unwrap();
        let cert = Certificate::power_sum(&f.to_multi(), &dec, None);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(back.verify(&tol()).unwrap().ok);
    }
}

#[test]
fn center_projects_to_zero() {
    for d in 1..=3 {
        for k in 2..=4 {
            for e in veronese_center(d, k) {
                assert!(project(&e, d).unwrap().is_zero(), "d={d} k={k}");
            }
        }
    }
}

#[test]
fn multiform_zero_is_representable() {
    let z = MultiForm::<Q>::zero(3, 4);
    assert!(z.is_zero() && z.terms().next().is_none());
    assert_eq!(BinaryForm::<Q>::zero(5).coeffs().len(), 6);
}
