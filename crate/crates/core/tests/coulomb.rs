use coulsum::coulomb::*;
use coulsum::exactalg::{Poly, RatFun, Var};
use coulsum::hyperterm::{parse_poly, parse_ratfun, parse_term};
use coulsum::numeric::integral_by_series;
use coulsum::scalar::{BigFloat, Scalar};
use coulsum::telescope::verify_certificate;
use num_traits::Zero;

type F = BigFloat<128>;

fn alpha() -> coulsum::Rational {
    rational_from_decimal(DEFAULT_ALPHA).unwrap()
}

fn ratfun(s: &str) -> RatFun {
    parse_ratfun(s).unwrap()
}

#[test]
fn ground_state_parameters() {
    let st: CoulombState<f64> = make_state(92, 0, -1, &alpha()).unwrap();
    assert!((st.eps - st.nu).abs() < 1e-12);
    assert!((st.mu - 92.0 * 7.2973525693e-3).abs() < 1e-15);
    assert!(st.identity_residual() < 1e-14);
    assert_eq!(st.j, coulsum::Rational::new(1.into(), 2.into()));
    assert_eq!(st.beta, 1.0);
    assert!(st.gamma.abs() > 0.0);
}

#[test]
fn unphysical_states() {
    for (z, n, k) in [(200, 0, -1), (0, 1, -1), (92, -1, -1), (92, 1, 0), (92, 0, 2)] {
        assert!(
            matches!(make_state::<f64>(z, n, k, &alpha()), Err(CoulombError::UnphysicalState(_))),
            "{z} {n} {k}"
        );
    }
}

#[test]
fn physical_constraints_reduce_to_zero() {
    for (name, p) in physical_constraints() {
        assert!(physics_reduce(&p).is_zero(), "{name}");
    }
    let e = parse_poly("eps^2 + a^2 - 1").unwrap();
    assert!(physics_reduce(&e).is_zero());
    let nonzero = parse_poly("eps + a - 1").unwrap();
    assert!(!physics_reduce(&nonzero).is_zero());
    assert!(is_physically_zero(&ratfun("(eps^2*kappa^2 - nu^2 - a^2*n*(n+2*nu))/(p+1)")));
    assert!(is_physically_zero(&ratfun("mu^2 - a^2*kappa^2 - eps^2*kappa^2 + nu^2")));
    assert!(!is_physically_zero(&ratfun("mu - a*kappa")));
}

#[test]
fn reduction_is_canonical() {
    // Two representatives of the same class differ by a multiple of the
    // constraints.
    let x = parse_poly("eps*mu*kappa^2 + nu").unwrap();
    let y = parse_poly("a*(nu+n)*(nu^2+mu^2) + nu").unwrap();
    assert!(physics_reduce(&(&x - &y)).is_zero());
    assert!(!physics_reduce(&(&x + &y)).is_zero());
    let r = physics_reduce(&x);
    assert_eq!(physics_reduce(&r), r);
}

#[test]
fn series_representation_structure() {
    let c = build_integral(Integral::C);
    assert_eq!(c.scale, 4);
    assert_eq!(c.coeffs.len(), 2);
    assert_eq!(c.coeffs[0], (Series::X, ratfun("a*(mu+a*kappa)")));
    assert_eq!(c.coeffs[1], (Series::Y, ratfun("-a*(mu-a*kappa)")));
    let a = build_integral(Integral::A);
    assert_eq!(a.scale, 2);
    assert_eq!(a.coeffs[0].0, Series::Z);
    let shifted = a.shifted(1);
    assert_eq!(shifted.coeffs[1].0, Series::U);
    assert_eq!(shifted.coeffs[0].1, ratfun("2*(p+1)*eps*a*n"));
    let basis = SeriesBasis::new();
    assert_eq!(basis.series, vec![Series::Z, Series::X, Series::Y, Series::U, Series::V]);
    let names: Vec<String> = basis.series.iter().map(|s| s.to_string()).collect();
    assert_eq!(names, ["Z", "X", "Y", "U", "V"]);
}

#[test]
fn prefactor_ratio_shifts() {
    assert_eq!(IntegralExpr::prefactor_ratio(0), RatFun::one());
    assert_eq!(IntegralExpr::prefactor_ratio(1), ratfun("(2*nu+p+1)/(2*a*beta)"));
    assert_eq!(IntegralExpr::prefactor_ratio(-1), ratfun("2*a*beta/(2*nu+p)"));
    let round = &IntegralExpr::prefactor_ratio(2) * &IntegralExpr::prefactor_ratio(-2).shift_int(Var::P, 2);
    assert_eq!(round, RatFun::one());
}

/// The folded single term equals the prefactor times the sum of the
/// individual series terms, termwise and exactly, at generic values. For
/// integer `n` the folded term hides the `k = n` contribution behind a
/// `0 * inf`, so `n` is taken non-integer here.
#[test]
fn summand_matches_series_terms() {
    let q = |a: i64, b: i64| coulsum::Rational::new(a.into(), b.into());
    let generic = move |v: Var| match v {
        Var::N => q(37, 10),
        Var::NU => q(7, 9),
        Var::EPS => q(3, 5),
        Var::A => q(4, 5),
        Var::KAPPA => q(-2, 1),
        Var::MU => q(5, 11),
        Var::BETA => q(3, 2),
        _ => q(0, 1),
    };
    for which in Integral::ALL {
        let expr = build_integral(which);
        let folded = expr.summand();
        let pre = parse_term(&format!("pow(2*a*beta,-p)*Poch(2*nu+1,p)/({}*mu)", expr.scale)).unwrap();
        for p in 0..=3 {
            for k in 0..=6 {
                let ints = move |v: Var| match v {
                    Var::K => Some(k),
                    Var::P => Some(p),
                    _ => None,
                };
                let lhs = folded.eval(&ints, &generic).unwrap();
                let mut rhs = coulsum::Rational::zero();
                for (s, c) in &expr.coeffs {
                    let cv = c.eval(&|v| ints(v).map(|i| q(i, 1)).unwrap_or_else(|| generic(v)));
                    rhs += cv * s.term().eval(&ints, &generic).unwrap();
                }
                rhs *= pre.eval(&ints, &generic).unwrap();
                assert_eq!(lhs, rhs, "{which:?} p = {p} k = {k}");
            }
        }
    }
}

/// The 3F2 evaluation route at a physical state against the same sums
/// assembled from `HyperTerm` values.
#[test]
fn series_route_matches_term_evaluation() {
    let st: CoulombState<F> = make_state(92, 2, -1, &alpha()).unwrap();
    let vals = |v: Var| st.value(v).unwrap_or_else(F::zero);
    for which in Integral::ALL {
        let expr = build_integral(which);
        let pre = parse_term(&format!("pow(2*a*beta,-p)*Poch(2*nu+1,p)/({}*mu)", expr.scale)).unwrap();
        for p in 0..=3 {
            let ints = |k: i64| {
                move |v: Var| match v {
                    Var::K => Some(k),
                    Var::N => Some(2),
                    Var::P => Some(p),
                    Var::KAPPA => Some(-1),
                    _ => None,
                }
            };
            let mut total = F::zero();
            for (s, c) in &expr.coeffs {
                let cv = c.eval(&|v| ints(0)(v).map(F::from_i64).unwrap_or_else(|| vals(v)));
                let mut sum = F::zero();
                for k in 0..=(p + 3) {
                    sum = sum + s.term().eval(&ints(k), &vals).unwrap();
                }
                total = total + cv * sum;
            }
            total = total * pre.eval(&ints(0), &vals).unwrap();
            let direct = integral_by_series(&st, which, p).unwrap();
            assert!((total - direct.clone()).abs_f64() / direct.abs_f64() < 1e-30, "{which:?}_{p}");
        }
    }
}

#[test]
fn every_relation_is_proved() {
    for name in RELATION_NAMES {
        let rep = verify_relation(name).unwrap();
        assert!(rep.passed, "{name}");
        assert!(rep.reduced.iter().all(Poly::is_zero));
        assert!(rep.transcript.ends_with("QED\n") || rep.transcript.trim_end().ends_with("QED"));
        assert!(rep.transcript.contains(&format!("{{{}}}", vec!["0"; rep.reduced.len()].join(", "))));
    }
}

#[test]
fn rr2_transcript_ends_in_zero_pair() {
    let rep = verify_relation("rr2").unwrap();
    assert_eq!(rep.reduced.len(), 2);
    assert!(rep.transcript.contains("{0, 0}"));
}

#[test]
fn tampered_relation_is_not_proved() {
    let mut rel = relation("rr3").unwrap();
    rel.terms[0].0 = &rel.terms[0].0 + &RatFun::one();
    let rep = prove_relation(&rel).unwrap();
    assert!(!rep.passed);
    assert!(rep.transcript.contains("NOT PROVED"));
    assert!(rep.reduced.iter().any(|r| !r.is_zero()));
}

#[test]
fn unknown_relation() {
    assert!(matches!(relation("rr9"), Err(CoulombError::UnknownRelation(_))));
    assert!(matches!(verify_relation("rr9"), Err(CoulombError::UnknownRelation(_))));
    assert_eq!(relation_catalogue().len(), RELATION_NAMES.len());
    let mut sorted = RELATION_NAMES;
    sorted.sort();
    assert_eq!(sorted, RELATION_NAMES);
}

#[test]
fn two_param_specialises_to_rr2() {
    let (c, d) = two_param_symbols();
    let two = relation("two_param").unwrap();
    let rr2 = relation("rr2").unwrap();
    let special: Vec<(RatFun, Integral, i64)> = two
        .terms
        .iter()
        .map(|(k, w, s)| (k.subst(c, &RatFun::zero()).subst(d, &RatFun::one()), *w, *s))
        .filter(|(k, _, _)| !k.is_zero())
        .collect();
    let mut expected: Vec<(RatFun, Integral, i64)> = rr2.terms.iter().map(|(k, w, s)| (-k, *w, *s)).collect();
    let key = |t: &(RatFun, Integral, i64)| (t.1, t.2);
    let mut got = special;
    got.sort_by_key(key);
    expected.sort_by_key(key);
    assert_eq!(got, expected);
}

#[test]
fn rr1_is_a_combination_of_indint1_and_rr2() {
    let (x, y) = rr1_from_indint1_and_rr2().unwrap().expect("consistent");
    assert_eq!(x, RatFun::one());
    assert_eq!(y, ratfun("eps"));
}

#[test]
fn unmixed_recurrences_match_closed_forms() {
    for which in Integral::ALL {
        let d = derive_unmixed(which).unwrap();
        assert!(d.matches_closed_form, "{which:?}");
        assert_eq!(d.recurrence.order, 2);
        verify_certificate(&d.certificate).unwrap();
        assert_eq!(d.closed_form, closed_form_recurrence(which));
    }
}

#[test]
fn dependency_space_contains_known_relations() {
    let d = derive_dependencies().unwrap();
    assert_eq!(d.dimension, d.certificates.len());
    assert!(d.dimension >= 3);
    assert!(d.known_span);
    let names: Vec<&str> = d.known.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, ["lin1", "lin2", "lin3"]);
    for c in &d.certificates {
        assert!(verify_certificate(c).unwrap().boundary.start_vanishes);
    }
}

#[test]
fn contiguous_relations_are_derived() {
    let rels = derive_contiguous().unwrap();
    let names: Vec<&str> = rels.iter().map(|r| r.name).collect();
    assert_eq!(names, ["L1", "L2", "L3", "Chebyshev"]);
    for r in &rels {
        assert!(r.matches_closed_form, "{}", r.name);
        assert!(proportional(&r.certificate.sigma, &r.closed_form));
    }
}

/// The closed-form contiguous relations summed numerically, including
/// `p = 0` where the first coefficient of L3 and Chebyshev vanishes.
#[test]
fn contiguous_relations_hold_numerically() {
    let st: CoulombState<F> = make_state(92, 2, -1, &alpha()).unwrap();
    for r in derive_contiguous().unwrap() {
        for p in 0..=3 {
            let ints = |k: i64| {
                move |v: Var| match v {
                    Var::K => Some(k),
                    Var::N => Some(2),
                    Var::P => Some(p),
                    Var::KAPPA => Some(-1),
                    _ => None,
                }
            };
            let vals = |v: Var| st.value(v).unwrap_or_else(F::zero);
            let mut total = F::zero();
            let mut size = 0.0f64;
            for (coef, t) in r.closed_form.iter().zip(&r.terms) {
                let c = coef.eval(&|v| ints(0)(v).map(F::from_i64).unwrap_or_else(|| vals(v)));
                let mut s = F::zero();
                for k in 0..=(p + 4) {
                    s = s + t.eval(&ints(k), &vals).unwrap();
                }
                let term = c * s;
                size = size.max(term.abs_f64());
                total = total + term;
            }
            assert!(total.abs_f64() <= 1e-30 * size.max(1.0), "{} at p = {p}", r.name);
        }
    }
}

#[test]
fn series_terms_parse_consistently() {
    let x = Series::X.term();
    let expected = parse_term("Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))").unwrap();
    assert_eq!(x.ratio(), expected.ratio());
    let u = Series::U.term();
    assert_eq!(u.ratio(), expected.shift_param(Var::P, 1).ratio());
}
