//! Series values of the integrals and numeric checks of identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coulomb::{
    build_integral, closed_form_recurrence, make_state, relation_catalogue, two_param_symbols, CoulombState,
    Integral, Relation, Series,
};
use crate::exactalg::{Poly, RatFun, Var};
use crate::scalar::Real;
use crate::Rational;

use super::hyper::eval_3f2_terminating;
use super::{NumericConfig, NumericError};

/// Assignment of the symbols of a coefficient at one grid point.
#[derive(Clone, Debug)]
pub struct Point<'a, S> {
    pub state: &'a CoulombState<S>,
    pub p: i64,
    /// Values of free constants such as `C`, `D`.
    pub free: &'a [(Var, Rational)],
}

impl<S: Real> Point<'_, S> {
    fn value(&self, v: Var) -> Result<S, NumericError> {
        if v == Var::P {
            return Ok(S::from_i64(self.p));
        }
        if let Some(x) = self.state.value(v) {
            return Ok(x);
        }
        self.free
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, q)| S::from_rational(q))
            .ok_or_else(|| NumericError::UnboundSymbol(v.name().to_string()))
    }

    fn poly(&self, p: &Poly) -> Result<S, NumericError> {
        for v in p.vars() {
            self.value(v)?;
        }
        Ok(p.eval(&|v| self.value(v).expect("checked above")))
    }

    /// `None` when the denominator vanishes at this point.
    pub fn ratfun(&self, r: &RatFun) -> Result<Option<S>, NumericError> {
        let num = self.poly(r.numer())?;
        let den = self.poly(r.denom())?;
        let scale = r.denom().max_abs_coeff();
        let floor = S::from_rational(&scale).abs_f64() * S::epsilon() * 1e3;
        if den.abs_f64() <= floor {
            return Ok(None);
        }
        Ok(Some(num / den))
    }
}

/// A 3F2 series evaluated at a point.
pub fn series_value<S: Real>(upper: &[Poly; 3], lower: &[Poly; 2], at: &Point<'_, S>) -> Result<S, NumericError> {
    let u = [at.poly(&upper[0])?, at.poly(&upper[1])?, at.poly(&upper[2])?];
    let l = [at.poly(&lower[0])?, at.poly(&lower[1])?];
    eval_3f2_terminating(&u, &l)
}

/// `Gamma(x + m) / Gamma(x)` for an integer `m`.
fn poch<S: Real>(x: &S, m: i64) -> S {
    let mut acc = S::one();
    if m >= 0 {
        for i in 0..m {
            acc = acc * (x.clone() + S::from_i64(i));
        }
    } else {
        for i in 1..=(-m) {
            acc = acc / (x.clone() - S::from_i64(i));
        }
    }
    acc
}

/// `I_p` from its series representation.
pub fn integral_by_series<S: Real>(state: &CoulombState<S>, which: Integral, p: i64) -> Result<S, NumericError> {
    let two_nu = S::from_i64(2) * state.nu.clone();
    if (two_nu.clone() + S::from_i64(p + 2)).approx_f64() <= 0.0 {
        return Err(NumericError::DomainViolation(vec![format!("p = {p} below the integrable range")]));
    }
    let expr = build_integral(which);
    let at = Point { state, p, free: &[] };
    let mut sum = S::zero();
    for (s, c) in &expr.coeffs {
        let (up, low) = s.params();
        let coeff = at.ratfun(c)?.expect("polynomial coefficient");
        sum = sum + coeff * series_value(&up, &low, &at)?;
    }
    let two_a_beta = S::from_i64(2) * state.a.clone() * state.beta.clone();
    let pre = S::from_i64(expr.scale) * state.mu.clone() * two_a_beta.ipow(p as i32)
        / poch(&(two_nu + S::one()), p);
    Ok(sum / pre)
}

/// What a term of an identity refers to.
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    /// `I_{p+shift}`.
    Integral(Integral, i64),
    /// A 3F2 series with polynomial parameters.
    Series { upper: [Poly; 3], lower: [Poly; 2] },
}

/// `sum_i coeff_i * operand_i = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: String,
    pub terms: Vec<(RatFun, Operand)>,
}

impl Identity {
    pub fn from_relation(rel: &Relation) -> Identity {
        Identity {
            name: rel.name.to_string(),
            terms: rel
                .terms
                .iter()
                .map(|(c, w, s)| (c.clone(), Operand::Integral(*w, *s)))
                .collect(),
        }
    }

    /// The closed-form three-term recurrence of `which`.
    pub fn recurrence(which: Integral) -> Identity {
        Identity {
            name: format!("3term{which:?}{which:?}"),
            terms: closed_form_recurrence(which)
                .into_iter()
                .enumerate()
                .map(|(j, c)| (c, Operand::Integral(which, j as i64)))
                .collect(),
        }
    }

    /// A linear relation among series.
    pub fn among_series(name: &str, terms: Vec<(RatFun, Series)>) -> Identity {
        Identity {
            name: name.to_string(),
            terms: terms
                .into_iter()
                .map(|(c, s)| {
                    let (upper, lower) = s.params();
                    (c, Operand::Series { upper, lower })
                })
                .collect(),
        }
    }
}

/// Every relation of the catalogue plus the three unmixed recurrences.
pub fn standard_identities() -> Vec<Identity> {
    let mut v: Vec<Identity> = relation_catalogue().iter().map(Identity::from_relation).collect();
    v.extend(Integral::ALL.iter().map(|w| Identity::recurrence(*w)));
    v
}

/// Values for the free constants of `two_param`, drawn from `seed`.
pub fn free_constants(seed: u64) -> Vec<(Var, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, d) = two_param_symbols();
    let mut draw = || loop {
        let num: i64 = rng.gen_range(-20..=20);
        let den: i64 = rng.gen_range(1..=20);
        if num != 0 {
            return Rational::new(num.into(), den.into());
        }
    };
    vec![(c, draw()), (d, draw())]
}

#[derive(Clone, Debug, Serialize)]
pub struct GridRow {
    pub state: String,
    pub p: i64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub precision: u32,
    pub rel_tol: f64,
    pub rows: Vec<GridRow>,
    /// Grid points outside the identity's domain, with the reason.
    pub excluded: Vec<String>,
    pub max_residual: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "identity {} (precision {} bits, rel_tol {:e})\n{:<16} {:>3} {:>24} {:>24} {:>10}  result\n",
            self.identity, self.precision, self.rel_tol, "state", "p", "lhs", "rhs", "residual"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<16} {:>3} {:>24.16e} {:>24.16e} {:>10.2e}  {}\n",
                r.state,
                r.p,
                r.lhs,
                r.rhs,
                r.residual,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        for e in &self.excluded {
            out.push_str(&format!("excluded: {e}\n"));
        }
        out.push_str(&format!(
            "max residual {:.3e}: {}\n",
            self.max_residual,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

enum Outcome<S> {
    Value { lhs: S, rhs: S, scale: f64 },
    Excluded(String),
}

fn evaluate<S: Real>(id: &Identity, at: &Point<'_, S>) -> Result<Outcome<S>, NumericError> {
    let mut parts = Vec::with_capacity(id.terms.len());
    for (c, op) in &id.terms {
        let Some(cv) = at.ratfun(c)? else {
            return Ok(Outcome::Excluded(format!("coefficient {c} has a pole")));
        };
        let v = match op {
            Operand::Integral(w, s) => match integral_by_series(at.state, *w, at.p + s) {
                Ok(v) => v,
                Err(NumericError::DomainViolation(why)) => return Ok(Outcome::Excluded(why.join("; "))),
                Err(e) => return Err(e),
            },
            Operand::Series { upper, lower } => match series_value(upper, lower, at) {
                Ok(v) => v,
                Err(NumericError::DomainViolation(why)) => return Ok(Outcome::Excluded(why.join("; "))),
                Err(e) => return Err(e),
            },
        };
        parts.push(cv * v);
    }
    let scale = parts.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    let lhs = parts[0].clone();
    let rhs = parts[1..].iter().fold(S::zero(), |acc, x| acc - x.clone());
    Ok(Outcome::Value { lhs, rhs, scale })
}

fn state_label(z: i64, n: i64, kappa: i64) -> String {
    format!("Z={z},n={n},k={kappa}")
}

/// Check `id` at every state and `p`; points where a coefficient has a
/// pole or an integral leaves its domain are listed as excluded. It is an
/// error if no point remains.
pub fn check_identity_in<S: Real>(
    id: &Identity,
    states: &[(i64, i64, i64)],
    ps: &[i64],
    cfg: &NumericConfig,
    seed: u64,
) -> Result<IdentityReport, NumericError> {
    let alpha = cfg.alpha()?;
    let free = free_constants(seed);
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for &(z, n, kappa) in states {
        let state: CoulombState<S> = make_state(z, n, kappa, &alpha)?;
        for &p in ps {
            let at = Point { state: &state, p, free: &free };
            match evaluate(id, &at)? {
                Outcome::Excluded(why) => excluded.push(format!("{} p={p}: {why}", state_label(z, n, kappa))),
                Outcome::Value { lhs, rhs, scale } => {
                    let diff = (lhs.clone() - rhs.clone()).abs_f64();
                    let residual = diff / scale.max(lhs.abs_f64()).max(rhs.abs_f64()).max(1e-300);
                    rows.push(GridRow {
                        state: state_label(z, n, kappa),
                        p,
                        lhs: lhs.approx_f64(),
                        rhs: rhs.approx_f64(),
                        residual,
                        pass: residual < cfg.rel_tol,
                    });
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(NumericError::DomainViolation(excluded));
    }
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        identity: id.name.clone(),
        precision: cfg.effective_precision(),
        rel_tol: cfg.rel_tol,
        passed: rows.iter().all(|r| r.pass),
        rows,
        excluded,
        max_residual,
    })
}

/// Agreement of the recurrences in `p` with direct series evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub state: String,
    /// Largest relative error of upward recursion from `(A_0, B_0)`.
    pub forward: f64,
    /// Largest relative error of downward recursion from `(A_pmax, B_pmax)`.
    pub backward: f64,
    pub passed: bool,
}

/// Run the two-term recursions for `(A_p, B_p)` upward to `pmax` and
/// downward to 0, comparing each step with the series values.
pub fn recursion_check_in<S: Real>(
    z: i64,
    n: i64,
    kappa: i64,
    pmax: i64,
    cfg: &NumericConfig,
) -> Result<RecursionReport, NumericError> {
    let state: CoulombState<S> = make_state(z, n, kappa, &cfg.alpha()?)?;
    let series = |w: Integral, p: i64| integral_by_series(&state, w, p);
    let coeffs = |name: &str, p: i64| -> Result<(S, S), NumericError> {
        let rel = crate::coulomb::relation(name).map_err(NumericError::Coulomb)?;
        let at = Point { state: &state, p, free: &[] };
        // terms: the target with coefficient 1, then A_p, B_p.
        let ca = at.ratfun(&rel.terms[1].0)?.ok_or_else(|| NumericError::DomainViolation(vec![format!("{name} at p={p}")]))?;
        let cb = at.ratfun(&rel.terms[2].0)?.ok_or_else(|| NumericError::DomainViolation(vec![format!("{name} at p={p}")]))?;
        Ok((-ca, -cb))
    };
    let rel_err = |x: &S, y: &S| (x.clone() - y.clone()).abs_f64() / y.abs_f64().max(1e-300);
    let (mut a, mut b) = (series(Integral::A, 0)?, series(Integral::B, 0)?);
    let mut forward: f64 = 0.0;
    for p in 0..pmax {
        let (aa, ab) = coeffs("rra", p)?;
        let (ba, bb) = coeffs("rrb", p)?;
        let na = aa * a.clone() + ab * b.clone();
        let nb = ba * a + bb * b;
        forward = forward.max(rel_err(&na, &series(Integral::A, p + 1)?));
        forward = forward.max(rel_err(&nb, &series(Integral::B, p + 1)?));
        a = na;
        b = nb;
    }
    let (mut a, mut b) = (series(Integral::A, pmax)?, series(Integral::B, pmax)?);
    let mut backward: f64 = 0.0;
    for p in (1..=pmax).rev() {
        let (aa, ab) = coeffs("rrab", p)?;
        let (ba, bb) = coeffs("rrba", p)?;
        let na = aa * a.clone() + ab * b.clone();
        let nb = ba * a + bb * b;
        backward = backward.max(rel_err(&na, &series(Integral::A, p - 1)?));
        backward = backward.max(rel_err(&nb, &series(Integral::B, p - 1)?));
        a = na;
        b = nb;
    }
    Ok(RecursionReport {
        state: state_label(z, n, kappa),
        forward,
        backward,
        passed: forward < cfg.rel_tol && backward < cfg.rel_tol,
    })
}
