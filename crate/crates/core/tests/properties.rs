use hypq::frobenius::join_even_odd;
use hypq::transforms::{check_domain, rhs_parts, GridSpec};
use hypq::{
    check_identity, closed_form_coeffs, indicial_roots, lhs_eval, map_x_to_z, map_z_to_x, ode_from_case, ode_residual,
    recurrence_coeffs, rhs_eval, series_eval, split_even_odd, Branch, ClosedFormCase, GridPoint, Rational, Scalar,
    SeriesControl, TransformCase,
};
use proptest::prelude::*;

fn case_strategy() -> impl Strategy<Value = TransformCase> {
    prop_oneof![Just(TransformCase::Gauss), Just(TransformCase::PlusOne), Just(TransformCase::MinusOne)]
}

/// b = p/q with q odd and ≥ 3, so neither 2b nor b ± k/2 is an integer.
fn half_safe_rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, prop::sample::select(vec![3i64, 5, 7, 9, 11]))
        .prop_filter_map("integer", |(p, q)| {
            let r = Rational::ratio(p, q);
            (!r.is_integer()).then_some(r)
        })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=10).prop_map(|(p, q)| Rational::ratio(p, q))
}

fn far_from_poles(case: TransformCase, b: f64) -> bool {
    case.pole_distance(b) >= GridSpec::default().pole_margin
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn map_roundtrip(z in -10.0f64..0.999) {
        let x = map_z_to_x(z).unwrap();
        prop_assert!(x.abs() < 1.0);
        let back = map_x_to_z(&x).unwrap();
        prop_assert!((back - z).abs() <= 1e-14 * z.abs().max(1e-300), "z = {z}, back = {back}");
    }

    #[test]
    fn identity_on_random_points(
        case in case_strategy(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        x in -0.6f64..0.6,
    ) {
        prop_assume!(far_from_poles(case, b));
        let rep = check_identity(case, &[GridPoint { a, b, x }], 1e-10, &SeriesControl::default());
        prop_assume!(rep.skipped.is_empty());
        prop_assert!(rep.max_scaled_err() <= 1e-10, "{:?}", rep.samples);
    }

    #[test]
    fn gauss_rhs_is_even(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.0f64..0.6) {
        prop_assume!(far_from_poles(TransformCase::Gauss, b));
        let ctl = SeriesControl::default();
        let p = rhs_eval(TransformCase::Gauss, a, b, x, &ctl).unwrap();
        let m = rhs_eval(TransformCase::Gauss, a, b, -x, &ctl).unwrap();
        prop_assert_eq!(p, m);
    }

    #[test]
    fn reflection_relation(
        case in prop_oneof![Just(TransformCase::PlusOne), Just(TransformCase::MinusOne)],
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        x in 0.0f64..0.6,
    ) {
        prop_assume!(far_from_poles(case, b));
        let ctl = SeriesControl::default();
        let (even, odd) = rhs_parts(case, a, b, x, &ctl).unwrap();
        let reflected = rhs_eval(case, a, b, -x, &ctl).unwrap();
        let expect = even - x * odd;
        let scale = expect.abs().max(1.0);
        prop_assert!((reflected - expect).abs() <= 1e-13 * scale);
        if check_domain(-x).is_ok() {
            let lhs = lhs_eval(case, a, b, -x, &ctl).unwrap();
            prop_assert!((lhs - reflected).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn series_matches_rhs(
        case in case_strategy(),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        xs in prop::collection::vec(-0.6f64..0.6, 20),
    ) {
        prop_assume!(far_from_poles(case, b));
        let ode = ode_from_case(case, &a, &b);
        let cs = recurrence_coeffs(&ode, &0.0, 400, &1.0).unwrap();
        let ctl = SeriesControl::default();
        for x in xs {
            let s = series_eval(&cs, x).unwrap();
            let r = rhs_eval(case, a, b, x, &ctl).unwrap();
            prop_assert!((s - r).abs() <= 1e-9 * r.abs().max(1.0), "x = {x}: {s} vs {r}");
        }
    }

    #[test]
    fn exact_recurrence_matches_closed_form(case in case_strategy(), a in rational(), b in half_safe_rational()) {
        let ode = ode_from_case(case, &a, &b);
        let roots = indicial_roots(&ode);
        for branch in [Branch::Analytic, Branch::Singular] {
            let rec = recurrence_coeffs(&ode, roots.root(branch), 40, &Rational::from_i64(1)).unwrap();
            let cf = closed_form_coeffs(ClosedFormCase::new(case, branch), &a, &b, 40).unwrap();
            prop_assert_eq!(rec, cf);
        }
    }

    #[test]
    fn indicial_roots_annihilate(case in case_strategy(), a in rational(), b in rational()) {
        let ode = ode_from_case(case, &a, &b);
        let r = indicial_roots(&ode);
        prop_assert_eq!(r.lambda1.clone(), Rational::from_i64(0));
        prop_assert_eq!(ode.indicial_poly(&r.lambda1), Rational::from_i64(0));
        prop_assert_eq!(ode.indicial_poly(&r.lambda2), Rational::from_i64(0));
    }

    #[test]
    fn split_join_roundtrip(case in case_strategy(), a in rational(), b in half_safe_rational(), n in 0usize..30) {
        let ode = ode_from_case(case, &a, &b);
        let cs = recurrence_coeffs(&ode, &Rational::from_i64(0), n, &Rational::from_i64(1)).unwrap();
        let (even, odd) = split_even_odd(&cs);
        prop_assert_eq!(join_even_odd(&even, &odd), cs);
    }

    #[test]
    fn gauss_odd_coefficients_vanish(a in rational(), b in half_safe_rational()) {
        let ode = ode_from_case(TransformCase::Gauss, &a, &b);
        prop_assert!(ode.p1 == Rational::from_i64(0) && ode.q0 == Rational::from_i64(0));
        let cs = recurrence_coeffs(&ode, &Rational::from_i64(0), 30, &Rational::from_i64(1)).unwrap();
        prop_assert!(cs.coeffs.iter().skip(1).step_by(2).all(|c| *c == Rational::from_i64(0)));
    }

    #[test]
    fn residual_small_for_moderate_parameters(
        case in case_strategy(),
        branch in prop_oneof![Just(Branch::Analytic), Just(Branch::Singular)],
        a in -9i64..=9,
        b in half_safe_rational(),
        x in 0.05f64..0.5,
    ) {
        // truncation at N = 60 only stays below 1e-10 while 2a - 2b stays small
        let a = Rational::ratio(a, 10);
        let b = b / Rational::from_i64(10);
        let ode = ode_from_case(case, &a, &b);
        let roots = indicial_roots(&ode);
        let cs = recurrence_coeffs(&ode, roots.root(branch), 60, &Rational::from_i64(1)).unwrap();
        let r = ode_residual(&ode, &cs, x).unwrap();
        prop_assert!(r.relative() <= 1e-10, "{}", r.relative());
    }
}
