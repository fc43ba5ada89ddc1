//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use coulsum::coulomb::*;
use coulsum::exactalg::{rref, RatFun, Var};
use coulsum::hyperterm::{parse_ratfun, parse_term, HyperTerm};
use coulsum::numeric::*;
use coulsum::telescope::{gosper, parameterized_gosper, verify_certificate, Recurrence};
use coulsum::scalar::{BigFloat, Scalar};
use coulsum::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const F1: &str = "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))";

/// Outcome of one criterion: pass flag and a one-line detail.
type Outcome = Result<(bool, String), String>;

type Criterion = (&'static str, fn() -> Outcome);

fn ratfun(s: &str) -> RatFun {
    parse_ratfun(s).expect("fixed expression")
}

fn c1_zeilberger_c() -> Outcome {
    let start = Instant::now();
    let d = derive_unmixed(Integral::C).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    verify_certificate(&d.certificate).map_err(|e| e.to_string())?;
    let printed = Recurrence::new(
        Var::P,
        &[
            ratfun("-(1+p)*(1+2*p+p^2-4*nu^2)*(-(2+p)^2*mu^2 + a^2*kappa^2*(4*n^2+(2+p)^2+8*n*nu))"),
            ratfun(
                "4*a*beta*(-(3+2*p)*(-(2+3*p+p^2)*mu^2*(n+nu) - 2*a*n*kappa*mu*(n+2*nu) \
                 + a^2*kappa^2*(n+nu)*(2+4*n^2+3*p+p^2+8*n*nu)))",
            ),
            ratfun("4*a*beta*a*(2+p)*beta*(-(1+p)^2*mu^2 + a^2*kappa^2*(4*n^2 + (1+p)^2 + 8*n*nu))"),
        ],
        "printed",
    );
    let raw = d.recurrence.proportional(&printed);
    let ok = raw && d.matches_closed_form && secs < 10.0;
    Ok((
        ok,
        format!(
            "order {}, printed form up to unit: {raw}, closed form after reduction: {}, {secs:.2} s (limit 10 s)",
            d.recurrence.order, d.matches_closed_form
        ),
    ))
}

fn c2_unmixed_ab() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for which in [Integral::A, Integral::B] {
        let d = derive_unmixed(which).map_err(|e| e.to_string())?;
        verify_certificate(&d.certificate).map_err(|e| e.to_string())?;
        ok &= d.matches_closed_form;
        parts.push(format!("{which:?}: exact match {}", d.matches_closed_form));
    }
    Ok((ok, parts.join(", ")))
}

fn c3_parameterized_gosper() -> Outcome {
    let terms: Vec<HyperTerm> = [
        F1,
        "Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))",
        "Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))",
    ]
    .iter()
    .map(|s| parse_term(s).expect("fixed term"))
    .collect();
    let certs = parameterized_gosper(&terms).map_err(|e| e.to_string())?;
    let expected: Vec<RatFun> = [
        "4*(1+p)*nu*(n+nu)*(1+2*nu)",
        "-(1+2*n+p)*(n+2*nu)*(1+p+2*nu)*(2+p+2*nu)",
        "2*n*nu*(1+2*nu)*(1+2*n+p+4*nu)",
    ]
    .iter()
    .map(|s| ratfun(s))
    .collect();
    let found = certs.len() == 1 && proportional(&certs[0].sigma, &expected);
    let verified = certs.iter().all(|c| verify_certificate(c).is_ok());
    let contiguous = derive_contiguous().map_err(|e| e.to_string())?;
    let names: Vec<String> = contiguous
        .iter()
        .map(|r| format!("{} {}", r.name, if r.matches_closed_form { "ok" } else { "mismatch" }))
        .collect();
    let all = contiguous.iter().all(|r| r.matches_closed_form) && contiguous.len() == 4;
    Ok((found && verified && all, format!("triple dependency found: {found}, {}", names.join(", "))))
}

fn c4_dependencies() -> Outcome {
    let d = derive_dependencies().map_err(|e| e.to_string())?;
    // Independent membership check: each known vector appended to the
    // certificate rows leaves the rank unchanged.
    let space: Vec<Vec<RatFun>> = d.certificates.iter().map(|c| c.sigma.clone()).collect();
    let ncols = d.basis.series.len();
    let rank = |rows: &[Vec<RatFun>]| rref(rows, ncols).1.len();
    let base = rank(&space);
    let mut members = Vec::new();
    for (name, v) in &d.known {
        let mut rows = space.clone();
        rows.push(v.clone());
        members.push((name, rank(&rows) == base));
    }
    let ok = d.known_span && members.iter().all(|(_, m)| *m);
    let shown: Vec<String> = members.iter().map(|(n, m)| format!("{n} {}", if *m { "in" } else { "out" })).collect();
    Ok((ok, format!("dimension {} (reported), {}", d.dimension, shown.join(", "))))
}

fn c5_virial_proofs() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    for name in RELATION_NAMES {
        match verify_relation(name) {
            Ok(rep) if rep.passed => {}
            Ok(_) => failed.push(name.to_string()),
            Err(e) => failed.push(format!("{name} ({e})")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failed.is_empty() && secs < 60.0;
    let detail = if failed.is_empty() {
        format!("{} relations reduced to exact zero, {secs:.2} s (limit 60 s)", RELATION_NAMES.len())
    } else {
        format!("not proved: {}", failed.join(", "))
    };
    Ok((ok, detail))
}

fn c6_numeric_shadow() -> Outcome {
    let cfg = NumericConfig::default();
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    let mut excluded = 0;
    for id in standard_identities() {
        let r = check_identity_numeric(&id, &DEFAULT_STATES, &[0, 1, 2, 3], &cfg, 0).map_err(|e| e.to_string())?;
        worst = worst.max(r.max_residual);
        excluded += r.excluded.len();
        if !(r.passed && r.max_residual < 1e-10) {
            failed.push(r.identity.clone());
        }
    }
    Ok((
        failed.is_empty(),
        format!(
            "max relative residual {worst:.1e} (tol 1e-10), {excluded} grid points outside the domain{}",
            if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join(", ")) }
        ),
    ))
}

fn c7_initial_data() -> Outcome {
    let cfg = NumericConfig::default();
    let alpha = cfg.alpha().map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for &(z, n, k) in &DEFAULT_STATES {
        let st: CoulombState<BigFloat<128>> = make_state(z, n, k, &alpha).map_err(|e| e.to_string())?;
        let a0 = integral_by_series(&st, Integral::A, 0).map_err(|e| e.to_string())?.approx_f64();
        let bm1 = integral_by_series(&st, Integral::B, -1).map_err(|e| e.to_string())?.approx_f64();
        let (a, mu) = (st.a.approx_f64(), st.mu.approx_f64());
        let expected = a * a / mu;
        worst = worst.max((a0 - 1.0).abs()).max((bm1 - expected).abs() / expected);
    }
    Ok((worst < 1e-12, format!("max relative error {worst:.1e} (tol 1e-12)")))
}

/// Random `T(k)` built from Pochhammer symbols with positive rational
/// arguments and a geometric factor; `t = T(k+1) - T(k)` is then
/// Gosper-summable.
fn random_antidifference(rng: &mut ChaCha8Rng) -> String {
    let (gn, gd) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
    let sign = if rng.gen_bool(0.5) { "-" } else { "" };
    let mut s = format!("pow({sign}{gn}/{gd},k)");
    for _ in 0..rng.gen_range(1..=3) {
        let (a, b) = (rng.gen_range(1..=9), rng.gen_range(1..=4));
        s.push_str(&format!("{}Poch({a}/{b},k)", if rng.gen_bool(0.5) { "*" } else { "/" }));
    }
    if rng.gen_bool(0.5) {
        s.push_str(&format!("*(k+{})", rng.gen_range(1..=6)));
    }
    s
}

fn c8_certificate_soundness() -> Outcome {
    let q = |k: i64| Rational::from_integer(k.into());
    let eval = |t: &HyperTerm, k: i64| t.eval(&move |v: Var| (v == Var::K).then_some(k), &move |_| q(k));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    let mut failures = Vec::new();
    while checked < 60 {
        let text = random_antidifference(&mut rng);
        let big_t = parse_term(&text).map_err(|e| e.to_string())?;
        let step = &big_t.ratio() - &RatFun::one();
        if step.is_zero() {
            continue;
        }
        let t = big_t.scale(&step);
        let values: Vec<Option<Rational>> = (0..=31).map(|k| eval(&t, k)).collect();
        if !values.iter().all(|v| v.as_ref().is_some_and(|x| *x != q(0))) {
            continue;
        }
        checked += 1;
        let sound = gosper(&t).ok().and_then(|c| {
            verify_certificate(&c).ok()?;
            let g = |k: i64| Some(c.certificate.eval_exact(&|_| q(k))? * eval(&c.inputs[0], k)?);
            let g0 = g(0)?;
            let mut partial = q(0);
            for big_n in 0..=30i64 {
                partial += values[big_n as usize].clone()?;
                if partial != g(big_n + 1)? - g0.clone() {
                    return None;
                }
            }
            Some(())
        });
        if sound.is_none() {
            failures.push(text);
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{checked} random terms, certificates verified and partial sums exact for N <= 30{}",
            if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join("; ")) }
        ),
    ))
}

fn c9_quadrature() -> Outcome {
    let cfg = NumericConfig::default();
    let mut worst = 0.0f64;
    for &(z, n, k) in &DEFAULT_STATES {
        let wf = resolve_wavefunction(z, n, k, &cfg).map_err(|e| e.to_string())?;
        for p in -1..=4 {
            for which in Integral::ALL {
                let quad = integral_by_quadrature(Some(&wf), which, p, cfg.quadrature_nodes, 1e-8)
                    .map_err(|e| e.to_string())?;
                let series = integral_value(z, n, k, which, p, &cfg).map_err(|e| e.to_string())?;
                worst = worst.max((quad - series).abs() / series.abs().max(1e-300));
            }
        }
    }
    Ok((
        worst < 1e-8,
        format!("coefficients fixed by the radial Dirac system, max relative error {worst:.1e} (tol 1e-8)"),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Zeilberger recurrence for C_p", c1_zeilberger_c),
        ("unmixed recurrences for A_p, B_p", c2_unmixed_ab),
        ("parameterized Gosper and contiguous relations", c3_parameterized_gosper),
        ("linear dependencies among five series", c4_dependencies),
        ("symbolic proofs of the virial relations", c5_virial_proofs),
        ("numeric shadow of every relation", c6_numeric_shadow),
        ("initial data A_0 and B_-1", c7_initial_data),
        ("certificate soundness on a random corpus", c8_certificate_soundness),
        ("quadrature against series", c9_quadrature),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!("criterion {}: {} ... {} ({detail})", i + 1, name, if pass { "PASS" } else { "FAIL" });
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
