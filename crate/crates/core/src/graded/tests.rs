use super::*;
use crate::bracket::SkewParamMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

fn xyz(s: &str) -> LaurentPoly {
    VarContext::named(&["x", "y", "z"]).parse(s).unwrap()
}

fn fermat(d: u32) -> LaurentPoly {
    xyz(&format!("x^{d} + y^{d} + z^{d}"))
}

fn rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn cfg(bound: u32, trials: usize) -> TrialConfig {
    TrialConfig {
        degree_bound: bound,
        trials,
        seed: 3,
    }
}

fn all_ones(n: usize) -> SkewParamMatrix {
    SkewParamMatrix::from_upper(n, |_, _| Scalar::one())
}

fn zeta_example(d: i32) -> LaurentPoly {
    xyz(&format!(
        "x^{a} + y^{a} + y^{b} + z^{b} + z^{c} + x^{c} + x^{e} + y^{e}",
        a = d - 1,
        b = d - 2,
        c = d - 3,
        e = d - 4
    ))
}

#[test]
fn degree_shifts() {
    let fermat5 = PoissonStructure::potential(fermat(5)).unwrap();
    let r = bracket_degree_shift(&fermat5, 2, Exec::Sequential).unwrap();
    assert_eq!(r.max_shift, Some(2));
    assert!(r.homogeneous);
    let torus = PoissonStructure::torus(all_ones(3)).unwrap();
    let r = bracket_degree_shift(&torus, 3, Exec::Parallel).unwrap();
    assert_eq!((r.max_shift, r.homogeneous), (Some(0), true));
    let weyl = PoissonStructure::weyl(1).unwrap();
    let r = bracket_degree_shift(&weyl, 3, Exec::Sequential).unwrap();
    assert_eq!((r.max_shift, r.homogeneous), (Some(-2), true));
    let quotient =
        PoissonStructure::potential_quotient(fermat(3), rat(1), MonomialOrder::grevlex()).unwrap();
    assert!(matches!(
        bracket_degree_shift(&quotient, 2, Exec::Sequential),
        Err(Error::NotGraded(_))
    ));
}

#[test]
fn mixed_tensor_shift_is_not_homogeneous() {
    let s = PoissonStructure::tensor(vec![
        PoissonStructure::weyl(1).unwrap(),
        PoissonStructure::skew_poly(all_ones(2)).unwrap(),
    ])
    .unwrap();
    let r = bracket_degree_shift(&s, 2, Exec::Sequential).unwrap();
    assert_eq!(r.max_shift, Some(0));
    assert!(!r.homogeneous);
}

#[test]
fn negative_adams_valuation_on_fermat_quintic() {
    let s = PoissonStructure::potential(fermat(5)).unwrap();
    let nu = WeightValuation::negative_adams(3);
    assert!(check_w_valuation(&nu, &s, 2, &cfg(3, 40), Exec::Sequential)
        .unwrap()
        .passed());
    let r = check_w_valuation(&nu, &s, 1, &cfg(3, 40), Exec::Parallel).unwrap();
    let f = r.failure.unwrap();
    assert_eq!(f.axiom, 5);
    assert_eq!(f.operands, vec![xyz("x"), xyz("y")]);
    assert_eq!((f.left, f.right), (Some(-4), Some(-3)));
}

#[test]
fn trivial_valuation_passes_on_polynomial_structures() {
    for s in [
        PoissonStructure::potential(fermat(4)).unwrap(),
        PoissonStructure::weyl(1).unwrap(),
        PoissonStructure::skew_poly(all_ones(3)).unwrap(),
    ] {
        let nu = WeightValuation::trivial(s.arity());
        assert!(check_w_valuation(&nu, &s, 0, &cfg(3, 30), Exec::Sequential)
            .unwrap()
            .passed());
    }
}

#[test]
fn valuation_values() {
    let nu = WeightValuation::new(vec![1, 2, -1]);
    assert_eq!(nu.value(&xyz("x*y + z^3")), Some(-3));
    assert_eq!(nu.value(&xyz("0")), None);
    assert_eq!(nu.value(&xyz("5")), Some(0));
}

#[test]
fn graded_check_on_fermat_quotients() {
    for xi in [1, 0] {
        let r = associated_graded_bracket_check(
            &fermat(5),
            &rat(xi),
            &MonomialOrder::grevlex(),
            &cfg(6, 30),
            Exec::Parallel,
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.counterexample);
    }
}

#[test]
fn graded_check_examples() {
    let order = MonomialOrder::grevlex();
    let quotient = PotentialQuotient::new(fermat(5), rat(1), order.clone()).unwrap();
    let graded = PotentialQuotient::new(fermat(5), rat(0), order).unwrap();
    let (ok, drop, top, gr) =
        compare_graded_bracket(&quotient, &graded, &xyz("x"), &xyz("y")).unwrap();
    assert!(ok && !drop);
    assert_eq!(top, xyz("5*z^4"));
    assert_eq!(gr, xyz("5*z^4"));
    let f = quotient.normal_form(&xyz("x^5")).unwrap();
    assert_eq!(f, xyz("1 - y^5 - z^5"));
    let (ok, _, top, gr) = compare_graded_bracket(&quotient, &graded, &f, &xyz("x")).unwrap();
    assert!(ok);
    assert_eq!(top, gr);
}

#[test]
fn graded_check_rejects_lex() {
    assert!(associated_graded_bracket_check(
        &fermat(3),
        &rat(1),
        &MonomialOrder::lex(),
        &cfg(3, 2),
        Exec::Sequential
    )
    .is_err());
}

#[test]
fn zeta_square_threshold() {
    let s = PoissonStructure::potential(fermat(5)).unwrap();
    for d in [6, 7] {
        match construct_adzeta(&s, d, Some(&zeta_example(d as i32))) {
            Err(Error::ZetaSquareEscapes { degree, .. }) => assert_eq!(degree, 2 * d - 8),
            other => panic!("d = {d}: {other:?}"),
        }
    }
    for d in [8, 9] {
        let sub = construct_adzeta(&s, d, Some(&zeta_example(d as i32))).unwrap();
        assert!(sub.contains(&zeta_example(d as i32)).unwrap());
    }
    let Err(Error::ZetaSquareEscapes { degree, witness }) =
        construct_adzeta(&s, 7, Some(&zeta_example(7)))
    else {
        panic!()
    };
    assert_eq!((degree, witness.as_str()), (6, "x^6"));
}

#[test]
fn zeta_shape_errors() {
    let s = PoissonStructure::potential(fermat(5)).unwrap();
    assert!(matches!(
        construct_adzeta(&s, 8, Some(&xyz("x"))),
        Err(Error::DegreeViolation(_))
    ));
    assert!(matches!(
        construct_adzeta(&s, 5, Some(&xyz("x^5"))),
        Err(Error::DegreeViolation(_))
    ));
    assert_eq!(
        construct_adzeta(&s, 3, Some(&xyz("x^2"))),
        Err(Error::DegreeTooSmall(3))
    );
    assert_eq!(construct_adzeta(&s, 1, None), Err(Error::DegreeTooSmall(1)));
}

#[test]
fn membership_in_a_d_zeta() {
    let s = PoissonStructure::potential(fermat(5)).unwrap();
    let zeta = zeta_example(8);
    let sub = construct_adzeta(&s, 8, Some(&zeta)).unwrap();
    let f = xyz("3")
        .add(&zeta.scale_rational(&rat(-2)))
        .unwrap()
        .add(&xyz("x^8 - x*y^3*z^5"))
        .unwrap();
    assert_eq!(
        sub.decompose(&f).unwrap(),
        Some((Scalar::from(3), Scalar::from(-2)))
    );
    assert!(!sub.contains(&xyz("x^7")).unwrap());
    assert!(!sub.contains(&xyz("x^4")).unwrap());
    let plain = construct_adzeta(&s, 3, None).unwrap();
    assert!(plain.contains(&xyz("2 + x^3")).unwrap());
    assert!(!plain.contains(&xyz("x^2")).unwrap());
}

#[test]
fn ad_closure_examples() {
    let w = PoissonStructure::weyl(1).unwrap();
    let ctx = w.var_context();
    let b = w
        .bracket(&ctx.parse("x^3").unwrap(), &ctx.parse("y^3").unwrap())
        .unwrap();
    assert_eq!(ctx.render(&b), "9*x^2*y^2");
    for s in [w, PoissonStructure::skew_poly(all_ones(3)).unwrap()] {
        for d in 2..=4 {
            assert!(check_ad_closure(&s, d, &cfg(6, 30), Exec::Parallel)
                .unwrap()
                .passed());
        }
    }
    // the potential bracket raises degree by two, well inside A_{>=2d-2}
    let p = PoissonStructure::potential(fermat(5)).unwrap();
    assert!(check_ad_closure(&p, 5, &cfg(6, 10), Exec::Sequential)
        .unwrap()
        .passed());
}

#[test]
fn ad_closure_on_weyl_tensor() {
    let t = PoissonStructure::tensor(vec![
        PoissonStructure::weyl(1).unwrap(),
        PoissonStructure::weyl(1).unwrap(),
    ])
    .unwrap();
    assert!(check_ad_closure(&t, 2, &cfg(4, 20), Exec::Sequential)
        .unwrap()
        .passed());
}

#[test]
fn closure_picks_up_bracket_terms() {
    let s = PoissonStructure::torus(SkewParamMatrix::from_upper(2, |_, _| Scalar::one())).unwrap();
    let seeds = vec![
        LaurentPoly::from_exponent(ExponentVector::new(vec![0, 2])),
        LaurentPoly::from_exponent(ExponentVector::new(vec![1, -2])),
    ];
    let bounds = ExponentBox::new(vec![-2, -2], vec![2, 2]).unwrap();
    let r = bounded_poisson_closure(&s, &seeds, &bounds, 4, Exec::Sequential).unwrap();
    assert!(r.contains(&LaurentPoly::from_exponent(ExponentVector::new(vec![1, 0]))));
    let par = bounded_poisson_closure(&s, &seeds, &bounds, 4, Exec::Parallel).unwrap();
    assert_eq!(r, par);
}

#[test]
fn closure_of_constants() {
    let s = PoissonStructure::weyl(1).unwrap();
    let r = bounded_poisson_closure(
        &s,
        &[LaurentPoly::one(2)],
        &ExponentBox::cube(2, 3),
        5,
        Exec::Sequential,
    )
    .unwrap();
    assert_eq!(r.basis, vec![LaurentPoly::one(2)]);
    assert!(r.fixpoint);
}

#[test]
fn closure_of_high_degree_part_stays_high() {
    let s = PoissonStructure::weyl(1).unwrap();
    let d = 3;
    let seeds: Vec<LaurentPoly> = crate::poly::monomials_up_to_degree(2, 5)
        .into_iter()
        .filter(|e| e.degree() >= d)
        .map(LaurentPoly::from_exponent)
        .collect();
    let bounds = ExponentBox::cube(2, 5).with_max_degree(5);
    let r = bounded_poisson_closure(&s, &seeds, &bounds, 6, Exec::Parallel).unwrap();
    assert!(r.fixpoint);
    for b in &r.basis {
        assert!(b.min_degree().unwrap() >= d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn potential_shift_is_degree_minus_three(
        d in 3i32..7,
        coeffs in prop::collection::vec(-3i64..4, 4),
    ) {
        let omega = LaurentPoly::from_terms(3, [
            (ExponentVector::new(vec![d, 0, 0]), Scalar::from(coeffs[0])),
            (ExponentVector::new(vec![0, d, 0]), Scalar::from(coeffs[1])),
            (ExponentVector::new(vec![0, 0, d]), Scalar::from(coeffs[2])),
            (ExponentVector::new(vec![1, d - 2, 1]), Scalar::from(coeffs[3])),
        ]).unwrap();
        prop_assume!(coeffs[..3].iter().all(|&c| c != 0));
        let s = PoissonStructure::potential(omega).unwrap();
        let r = bracket_degree_shift(&s, 2, Exec::Sequential).unwrap();
        prop_assert_eq!(r.max_shift, Some(d as i64 - 3));
        prop_assert!(r.homogeneous);
        let nu = WeightValuation::negative_adams(3);
        let small = cfg(2, 10);
        prop_assert!(check_w_valuation(&nu, &s, d as i64 - 3, &small, Exec::Sequential).unwrap().passed());
        prop_assert!(!check_w_valuation(&nu, &s, d as i64 - 4, &small, Exec::Sequential).unwrap().passed());
    }

    #[test]
    fn membership_is_linear(a in -3i64..4, b in -3i64..4, ta in -2i64..3, tb in -2i64..3) {
        let s = PoissonStructure::potential(fermat(5)).unwrap();
        let zeta = zeta_example(9);
        let sub = construct_adzeta(&s, 9, Some(&zeta)).unwrap();
        let f = xyz("1 + x^9").add(&zeta.scale_rational(&rat(ta))).unwrap();
        let g = xyz("x^3*y^7 - 2").add(&zeta.scale_rational(&rat(tb))).unwrap();
        prop_assert!(sub.contains(&f).unwrap() && sub.contains(&g).unwrap());
        let combo = f.scale_rational(&rat(a)).add(&g.scale_rational(&rat(b))).unwrap();
        prop_assert!(sub.contains(&combo).unwrap());
    }

    #[test]
    fn closure_is_monotone_and_idempotent(extra in prop::collection::vec((0i32..3, 0i32..3), 1..3)) {
        let s = PoissonStructure::skew_poly(all_ones(2)).unwrap();
        let bounds = ExponentBox::cube(2, 3);
        let seeds = vec![LaurentPoly::from_exponent(ExponentVector::new(vec![1, 1]))];
        let more: Vec<LaurentPoly> = seeds.iter().cloned().chain(extra.iter().map(|&(a, b)| {
            LaurentPoly::from_exponent(ExponentVector::new(vec![a, b]))
        })).collect();
        let small = bounded_poisson_closure(&s, &seeds, &bounds, 8, Exec::Sequential).unwrap();
        let big = bounded_poisson_closure(&s, &more, &bounds, 8, Exec::Sequential).unwrap();
        for b in &small.basis {
            prop_assert!(big.contains(b));
        }
        let again = bounded_poisson_closure(&s, &big.basis, &bounds, 8, Exec::Sequential).unwrap();
        prop_assert_eq!(again.basis, big.basis);
    }
}
