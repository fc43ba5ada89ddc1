use std::time::Instant;

use coulsum::exactalg::{rref, Poly, RatFun, Var};
use coulsum::hyperterm::{parse_poly, parse_ratfun, parse_term, HyperTerm};
use coulsum::telescope::{
    gosper, gp_decompose, parameterized_gosper, parse_certificate, serialize_certificate,
    verify_certificate, zeilberger, Recurrence, TelescopeError,
};
use coulsum::Rational;
use proptest::prelude::*;

const F1: &str = "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))";

fn q(i: i64) -> Rational {
    Rational::from_integer(i.into())
}

/// Exact value of `t` with `k` and `n` integers.
fn eval_kn(t: &HyperTerm, k: i64, n: i64) -> Option<Rational> {
    let ints = move |v: Var| {
        if v == Var::K {
            Some(k)
        } else if v == Var::N {
            Some(n)
        } else {
            None
        }
    };
    let vals = move |v: Var| if v == Var::K { q(k) } else if v == Var::N { q(n) } else { q(0) };
    t.eval(&ints, &vals)
}

#[test]
fn gp_examples() {
    let k = Var::K;
    let g = gp_decompose(&parse_ratfun("k+1").unwrap(), k);
    assert_eq!((g.a.clone(), g.b.clone(), g.c.clone()), (parse_poly("k+1").unwrap(), Poly::one(), Poly::one()));
    let g = gp_decompose(&parse_ratfun("k/(k+1)").unwrap(), k);
    assert_eq!(g.reconstruct(), parse_ratfun("k/(k+1)").unwrap());
    assert_eq!(g.c, Poly::one());
    // (k+3)/k has dispersion 3.
    let r = parse_ratfun("(k+3)/k").unwrap();
    let g = gp_decompose(&r, k);
    assert_eq!(g.reconstruct(), r);
    assert!(g.a.is_constant() && g.b.is_constant());
    assert_eq!(g.c.deg(k), 3);
    let f1 = parse_term(F1).unwrap();
    let g = gp_decompose(&f1.ratio(), k);
    assert_eq!(g.reconstruct(), f1.ratio());
}

#[test]
fn parameter_dependent_dispersion_is_recorded() {
    let r = parse_ratfun("(k-n)/(k+1)").unwrap();
    let g = gp_decompose(&r, Var::K);
    assert_eq!(g.reconstruct(), r);
    assert!(g.side_conditions.iter().any(|s| s.contains("= -n - 1") || s.contains("n")), "{:?}", g.side_conditions);
}

#[test]
fn gosper_k_factorial() {
    let t = parse_term("k*fact(k)").unwrap();
    let c = gosper(&t).unwrap();
    assert_eq!(c.certificate, parse_ratfun("1/k").unwrap());
    let rep = verify_certificate(&c).unwrap();
    assert!(rep.residual.is_zero());
    assert!(rep.transcript.contains("QED"));
}

#[test]
fn gosper_partial_fractions() {
    let t = parse_term("1/(k*(k+1))").unwrap();
    let c = gosper(&t).unwrap();
    // G = R t = -1/k.
    let g = &c.certificate * t.factor();
    assert_eq!(g, parse_ratfun("-1/k").unwrap());
    verify_certificate(&c).unwrap();
}

#[test]
fn gosper_rejects_factorial_inverse() {
    let t = parse_term("1/fact(k)").unwrap();
    assert!(matches!(gosper(&t), Err(TelescopeError::NotSummable { .. })));
}

#[test]
fn plain_binomial_row_is_not_gosper_summable() {
    // pow(-1,k) cancels the sign carried by (-n)_k, leaving C(n,k).
    let t = parse_term("pow(-1,k)*Poch(-n,k)*Poch(1,k)/(Poch(1,k)*fact(k))").unwrap();
    assert!(matches!(gosper(&t), Err(TelescopeError::NotSummable { .. })));
}

#[test]
fn gosper_alternating_binomial_brute_force() {
    // (-n)_k / k! = (-1)^k C(n,k).
    let t = parse_term("Poch(-n,k)*Poch(1,k)/(Poch(1,k)*fact(k))").unwrap();
    let c = gosper(&t).unwrap();
    verify_certificate(&c).unwrap();
    let g_term = t.scale(&c.certificate);
    for n in 1..=8 {
        let g0 = eval_kn(&g_term, 0, n).unwrap();
        let mut partial = q(0);
        for big_n in 0..=n + 2 {
            partial += eval_kn(&t, big_n, n).unwrap();
            let g_end = eval_kn(&g_term, big_n + 1, n).unwrap_or_else(|| q(0));
            assert_eq!(partial, &g_end - &g0, "n = {n}, N = {big_n}");
        }
    }
}

fn brute_sum(t: &HyperTerm, n: i64) -> Rational {
    (0..=n).map(|k| eval_kn(t, k, n).unwrap()).sum()
}

fn check_recurrence(rec: &Recurrence, t: &HyperTerm, range: std::ops::RangeInclusive<i64>) {
    for n in range {
        let mut acc = q(0);
        for (j, c) in rec.coeffs.iter().enumerate() {
            let cv = c.eval_at(Var::N, &q(n)).as_constant().unwrap();
            acc += cv * brute_sum(t, n + j as i64);
        }
        assert_eq!(acc, q(0), "n = {n}");
    }
}

#[test]
fn zeilberger_binomial_row_sum() {
    let t = parse_term("pow(-1,k)*Poch(-n,k)/fact(k)").unwrap();
    let c = zeilberger(&t, Var::N, 4).unwrap();
    assert_eq!(c.order, 1);
    verify_certificate(&c).unwrap();
    let rec = Recurrence::from_certificate(&c).unwrap();
    assert_eq!(rec.coeffs, vec![Poly::int(-2), Poly::one()]);
    check_recurrence(&rec, &t, 0..=10);
}

#[test]
fn zeilberger_central_binomial() {
    let t = parse_term("Poch(-n,k)^2/fact(k)^2").unwrap();
    let c = zeilberger(&t, Var::N, 4).unwrap();
    assert_eq!(c.order, 1);
    verify_certificate(&c).unwrap();
    let rec = Recurrence::from_certificate(&c).unwrap();
    assert_eq!(rec.coeffs, vec![parse_poly("-4*n-2").unwrap(), parse_poly("n+1").unwrap()]);
    check_recurrence(&rec, &t, 0..=12);
}

#[test]
fn zeilberger_reproduces_three_term_relation_for_c() {
    let f = parse_term(&format!(
        "pow(2*a*beta,-p)*Poch(2*nu+1,p)/(4*mu)*{F1}*(a*(mu+a*kappa) - a*(mu-a*kappa)*n/(n-k))"
    ))
    .unwrap();
    let start = Instant::now();
    let c = zeilberger(&f, Var::P, 2).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(c.order, 2);
    let rep = verify_certificate(&c).unwrap();
    assert!(rep.boundary.start_vanishes, "{:?}", rep.boundary);
    let rec = Recurrence::from_certificate(&c).unwrap();
    // The printed leading factor 4*a*beta multiplies both shifted sums.
    let c2 = parse_ratfun("4*a*beta*a*(2+p)*beta*(-(1+p)^2*mu^2 + a^2*kappa^2*(4*n^2 + (1+p)^2 + 8*n*nu))").unwrap();
    let c1 = parse_ratfun(
        "4*a*beta*(-(3+2*p)*(-(2+3*p+p^2)*mu^2*(n+nu) - 2*a*n*kappa*mu*(n+2*nu) + a^2*kappa^2*(n+nu)*(2+4*n^2+3*p+p^2+8*n*nu)))",
    )
    .unwrap();
    let c0 = parse_ratfun("-(1+p)*(1+2*p+p^2-4*nu^2)*(-(2+p)^2*mu^2 + a^2*kappa^2*(4*n^2+(2+p)^2+8*n*nu))").unwrap();
    let expected = Recurrence::new(Var::P, &[c0, c1, c2], "printed");
    assert!(rec.proportional(&expected), "{:?}", rec.coeffs);
    assert!(elapsed.as_secs_f64() < 10.0, "{elapsed:?}");
}

#[test]
fn pgosper_contiguous_triple() {
    let f0 = parse_term(F1).unwrap();
    let f1 = parse_term("Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))").unwrap();
    let f2 = parse_term("Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))").unwrap();
    let certs = parameterized_gosper(&[f0, f1, f2]).unwrap();
    assert_eq!(certs.len(), 1);
    let c = &certs[0];
    verify_certificate(c).unwrap();
    let expected = [
        "4*(1+p)*nu*(n+nu)*(1+2*nu)",
        "-(1+2*n+p)*(n+2*nu)*(1+p+2*nu)*(2+p+2*nu)",
        "2*n*nu*(1+2*nu)*(1+2*n+p+4*nu)",
    ];
    let ratio = &c.sigma[0] / &parse_ratfun(expected[0]).unwrap();
    for (s, e) in c.sigma.iter().zip(expected) {
        assert_eq!(s, &(&parse_ratfun(e).unwrap() * &ratio));
    }
    assert!(c.boundary.start_vanishes);
    assert!(c.boundary.support.is_some());
}

#[test]
fn pgosper_identity_case() {
    let f = parse_term(F1).unwrap();
    let certs = parameterized_gosper(&[f.clone(), f]).unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0].sigma, vec![RatFun::one(), RatFun::int(-1)]);
    assert!(certs[0].certificate.is_zero());
}

#[test]
fn tampered_certificate_fails() {
    let t = parse_term("pow(-1,k)*Poch(-n,k)/fact(k)").unwrap();
    let mut c = zeilberger(&t, Var::N, 4).unwrap();
    c.sigma[0] = &c.sigma[0] + &RatFun::one();
    match verify_certificate(&c) {
        Err(TelescopeError::VerificationFailed { residual }) => assert_ne!(residual, "0"),
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn certificate_round_trip() {
    let t = parse_term("Poch(-n,k)^2/fact(k)^2").unwrap();
    let c = zeilberger(&t, Var::N, 4).unwrap();
    let text = serialize_certificate(&c);
    let back = parse_certificate(&text).unwrap();
    assert_eq!(back, c);
    verify_certificate(&back).unwrap();
}

#[test]
fn pgosper_five_series_dependencies() {
    let terms = [
        "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(2,k)*fact(k))",
        F1,
        "Poch(-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
        "Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
        "Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
    ]
    .map(|s| parse_term(s).unwrap());
    let certs = parameterized_gosper(&terms).unwrap();
    assert_eq!(certs.len(), 3);
    for c in &certs {
        let rep = verify_certificate(c).unwrap();
        assert!(rep.boundary.start_vanishes);
    }
    let space: Vec<Vec<RatFun>> = certs.iter().map(|c| c.sigma.clone()).collect();
    let known = [
        ["0", "n", "-(1+n+p)", "n", "1-n+p"],
        ["2*n*p", "0", "1+2*n+p+2*nu", "0", "-(1+p+2*nu)"],
        ["0", "2*n*(n+2*nu)", "-((n+1)^2+2*p+(n+p)^2+2*(2*n+p+1)*nu)", "0", "(1+p)*(1+p+2*nu)"],
    ];
    for rel in known {
        let mut rows = space.clone();
        rows.push(rel.iter().map(|s| parse_ratfun(s).unwrap()).collect());
        let (_, pivots) = rref(&rows, 5);
        assert_eq!(pivots.len(), 3, "{rel:?} is outside the dependency space");
    }
}

/// `T(k)` as a random product of Pochhammer symbols with positive rational
/// arguments, a geometric factor and a linear factor, none of which vanish
/// for `k >= 0`.
fn arb_antidifference() -> impl Strategy<Value = String> {
    let arg = (1i64..=9, 1i64..=4).prop_map(|(a, b)| format!("{a}/{b}"));
    (
        prop::collection::vec((arg.clone(), any::<bool>()), 1..=3),
        (1i64..=5, 1i64..=5, any::<bool>()),
        prop::option::of(1i64..=6),
    )
        .prop_map(|(pochs, (gn, gd, neg), lin)| {
            let mut s = format!("pow({}{gn}/{gd},k)", if neg { "-" } else { "" });
            for (a, up) in pochs {
                if up {
                    s.push_str(&format!("*Poch({a},k)"));
                } else {
                    s.push_str(&format!("/Poch({a},k)"));
                }
            }
            if let Some(b) = lin {
                s.push_str(&format!("*(k+{b})"));
            }
            s
        })
}

fn eval_k(t: &HyperTerm, k: i64) -> Option<Rational> {
    t.eval(&move |v: Var| if v == Var::K { Some(k) } else { None }, &move |_| q(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gosper_certificates_are_sound(s in arb_antidifference()) {
        let big_t = parse_term(&s).unwrap();
        let step = &big_t.ratio() - &RatFun::one();
        prop_assume!(!step.is_zero());
        let t = big_t.scale(&step);
        let values: Vec<Option<Rational>> = (0..=31).map(|k| eval_k(&t, k)).collect();
        // A zero of t inside the range makes G = R t a 0 * inf there.
        prop_assume!(values.iter().all(|v| v.as_ref().is_some_and(|x| *x != q(0))));
        let c = gosper(&t).unwrap();
        verify_certificate(&c).unwrap();
        let back = parse_certificate(&serialize_certificate(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        let g = |k: i64| -> Rational {
            let r = c.certificate.eval_exact(&|_| q(k)).unwrap();
            r * eval_k(&c.inputs[0], k).unwrap()
        };
        let g0 = g(0);
        let mut partial = q(0);
        for big_n in 0..=30 {
            partial += values[big_n as usize].clone().unwrap();
            prop_assert_eq!(&partial, &(g(big_n + 1) - g0.clone()), "N = {}", big_n);
        }
    }
}
