//! Linear relations among `A_p`, `B_p`, `C_p` at neighbouring `p`, and
//! their proofs by elimination.
//!
//! A relation `sum_i w_i I_{p+s_i} = 0` is multiplied by `K_p` and
//! expanded over the series it involves. Parameterized Gosper gives every
//! linear dependency among those series; solving the dependencies for the
//! `X` and `Z` families leaves the relation as a combination of the `Y`
//! family alone, and the relation holds iff each remaining coefficient
//! vanishes modulo the physical identities.

use std::fmt::Write;

use crate::exactalg::{rref, solve_linear, Poly, RatFun, Var};
use crate::hyperterm::{parse_ratfun, HyperTerm};
use crate::telescope::{parameterized_gosper, verify_certificate};

use super::reduce::physics_reduce;
use super::series::{build_integral, Family, IntegralExpr, Series};
use super::{CoulombError, Integral};

/// Identifiers accepted by [`relation`], in sorted order.
pub const RELATION_NAMES: [&str; 10] = [
    "extra", "indint1", "rr1", "rr2", "rr3", "rra", "rrab", "rrb", "rrba", "two_param",
];

/// `sum coeff * I_{p+shift} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: &'static str,
    pub display: &'static str,
    pub terms: Vec<(RatFun, Integral, i64)>,
}

/// The free constants of `two_param`.
pub fn two_param_symbols() -> (Var, Var) {
    (Var::new("C"), Var::new("D"))
}

pub fn relation(name: &str) -> Result<Relation, CoulombError> {
    use Integral::{A, B, C};
    let r = |s: &str| parse_ratfun(s).expect("fixed coefficient");
    let rra_den = "(4*(1-eps^2)*(p+2)*beta*mu)";
    let rrab_den = "(mu*(4*nu^2-p^2)*p)";
    let rrba_den = "(mu*(4*nu^2-p^2))";
    let (name, display, terms) = match name {
        "indint1" => (
            "indint1",
            "(2*kappa+eps*(p+1))*A_p - (2*eps*kappa+p+1)*B_p = 4*mu*C_p",
            vec![
                (r("2*kappa+eps*(p+1)"), A, 0),
                (r("-(2*eps*kappa+p+1)"), B, 0),
                (r("-4*mu"), C, 0),
            ],
        ),
        "rr1" => (
            "rr1",
            "2*kappa*A_p - (p+1)*B_p = 4*mu*C_p + 4*beta*eps*C_{p+1}",
            vec![
                (r("2*kappa"), A, 0),
                (r("-(p+1)"), B, 0),
                (r("-4*mu"), C, 0),
                (r("-4*beta*eps"), C, 1),
            ],
        ),
        "rr2" => (
            "rr2",
            "2*kappa*B_p - (p+1)*A_p = 4*beta*C_{p+1}",
            vec![(r("2*kappa"), B, 0), (r("-(p+1)"), A, 0), (r("-4*beta"), C, 1)],
        ),
        "rr3" => (
            "rr3",
            "mu*B_p - (p+1)*C_p = beta*(A_{p+1} - eps*B_{p+1})",
            vec![
                (r("mu"), B, 0),
                (r("-(p+1)"), C, 0),
                (r("-beta"), A, 1),
                (r("beta*eps"), B, 1),
            ],
        ),
        "rra" => (
            "rra",
            "A_{p+1} = -(p+1)*(4*nu^2*eps+2*kappa*(p+2)+eps*(p+1)*(2*kappa*eps+p+2))/(4*(1-eps^2)*(p+2)*beta*mu)*A_p \
             + (4*mu^2*(p+2)+(p+1)*(2*kappa*eps+p+1)*(2*kappa*eps+p+2))/(4*(1-eps^2)*(p+2)*beta*mu)*B_p",
            vec![
                (RatFun::one(), A, 1),
                (
                    r(&format!("(p+1)*(4*nu^2*eps+2*kappa*(p+2)+eps*(p+1)*(2*kappa*eps+p+2))/{rra_den}")),
                    A,
                    0,
                ),
                (
                    r(&format!("-(4*mu^2*(p+2)+(p+1)*(2*kappa*eps+p+1)*(2*kappa*eps+p+2))/{rra_den}")),
                    B,
                    0,
                ),
            ],
        ),
        "rrb" => (
            "rrb",
            "B_{p+1} = -(p+1)*(4*nu^2+2*kappa*eps*(2*p+3)+eps^2*(p+1)*(p+2))/(4*(1-eps^2)*(p+2)*beta*mu)*A_p \
             + (4*mu^2*eps*(p+2)+(p+1)*(2*kappa*eps+p+1)*(2*kappa+eps*(p+2)))/(4*(1-eps^2)*(p+2)*beta*mu)*B_p",
            vec![
                (RatFun::one(), B, 1),
                (
                    r(&format!("(p+1)*(4*nu^2+2*kappa*eps*(2*p+3)+eps^2*(p+1)*(p+2))/{rra_den}")),
                    A,
                    0,
                ),
                (
                    r(&format!("-(4*mu^2*eps*(p+2)+(p+1)*(2*kappa*eps+p+1)*(2*kappa+eps*(p+2)))/{rra_den}")),
                    B,
                    0,
                ),
            ],
        ),
        "rrab" => (
            "rrab",
            "A_{p-1} = beta*(4*mu^2*eps*(p+1)+p*(2*kappa*eps+p)*(2*kappa+eps*(p+1)))/(mu*(4*nu^2-p^2)*p)*A_p \
             - beta*(4*mu^2*(p+1)+p*(2*kappa*eps+p)*(2*kappa*eps+p+1))/(mu*(4*nu^2-p^2)*p)*B_p",
            vec![
                (RatFun::one(), A, -1),
                (
                    r(&format!("-beta*(4*mu^2*eps*(p+1)+p*(2*kappa*eps+p)*(2*kappa+eps*(p+1)))/{rrab_den}")),
                    A,
                    0,
                ),
                (
                    r(&format!("beta*(4*mu^2*(p+1)+p*(2*kappa*eps+p)*(2*kappa*eps+p+1))/{rrab_den}")),
                    B,
                    0,
                ),
            ],
        ),
        "rrba" => (
            "rrba",
            "B_{p-1} = beta*(4*nu^2+2*kappa*eps*(2*p+1)+eps^2*p*(p+1))/(mu*(4*nu^2-p^2))*A_p \
             - beta*(4*nu^2*eps+2*kappa*(p+1)+eps*p*(2*kappa*eps+p+1))/(mu*(4*nu^2-p^2))*B_p",
            vec![
                (RatFun::one(), B, -1),
                (
                    r(&format!("-beta*(4*nu^2+2*kappa*eps*(2*p+1)+eps^2*p*(p+1))/{rrba_den}")),
                    A,
                    0,
                ),
                (
                    r(&format!("beta*(4*nu^2*eps+2*kappa*(p+1)+eps*p*(2*kappa*eps+p+1))/{rrba_den}")),
                    B,
                    0,
                ),
            ],
        ),
        "two_param" => {
            two_param_symbols();
            (
                "two_param",
                "(D*(p+1) - C*(2*kappa+eps*(p+1)))*A_p - (2*D*kappa - C*(2*eps*kappa+p+1))*B_p \
                 + 4*mu*C*C_p + 4*beta*D*C_{p+1} = 0",
                vec![
                    (r("D*(p+1) - C*(2*kappa+eps*(p+1))"), A, 0),
                    (r("-(2*D*kappa - C*(2*eps*kappa+p+1))"), B, 0),
                    (r("4*mu*C"), C, 0),
                    (r("4*beta*D"), C, 1),
                ],
            )
        }
        "extra" => (
            "extra",
            "(p+1)*(2*kappa*C_p - mu*A_p) = beta*(p+2)*(eps*A_{p+1} - B_{p+1})",
            vec![
                (r("2*kappa*(p+1)"), C, 0),
                (r("-mu*(p+1)"), A, 0),
                (r("-beta*(p+2)*eps"), A, 1),
                (r("beta*(p+2)"), B, 1),
            ],
        ),
        other => return Err(CoulombError::UnknownRelation(other.to_string())),
    };
    Ok(Relation { name, display, terms })
}

pub fn relation_catalogue() -> Vec<Relation> {
    RELATION_NAMES.iter().map(|n| relation(n).expect("listed")).collect()
}

/// The relation multiplied by `K_p`, as a combination of series.
pub fn expand_over_series(rel: &Relation) -> Vec<(Series, RatFun)> {
    let mut out: Vec<(Series, RatFun)> = Vec::new();
    for (w, which, shift) in &rel.terms {
        let expr = build_integral(*which).shifted(*shift);
        // K_p I_{p+s} = (K_p / K_{p+s}) (2 / scale) (K_{p+s} scale/2) I_{p+s}.
        let f = &(w * &IntegralExpr::prefactor_ratio(*shift)) * &RatFun::from(crate::Rational::new(
            2.into(),
            expr.scale.into(),
        ));
        for (s, c) in &expr.coeffs {
            let add = &f * c;
            match out.iter_mut().find(|(t, _)| t == s) {
                Some((_, acc)) => *acc = &*acc + &add,
                None => out.push((*s, add)),
            }
        }
    }
    // Eliminated families first, the Y family last.
    out.sort_by_key(|(s, _)| (s.family == Family::Y, s.family, s.shift));
    out
}

/// Outcome of [`prove_relation`].
#[derive(Clone, Debug)]
pub struct ProofReport {
    pub name: &'static str,
    pub series: Vec<Series>,
    /// Coefficients of the relation over `series`.
    pub combination: Vec<RatFun>,
    /// Dimension of the dependency space of `series`.
    pub dimension: usize,
    /// The series left after elimination.
    pub free: Vec<Series>,
    /// Their coefficients before and after reduction.
    pub residuals: Vec<RatFun>,
    pub reduced: Vec<Poly>,
    pub passed: bool,
    pub transcript: String,
}

/// Run the elimination pipeline; a failed proof is reported, not raised.
pub fn prove_relation(rel: &Relation) -> Result<ProofReport, CoulombError> {
    let expanded = expand_over_series(rel);
    let series: Vec<Series> = expanded.iter().map(|(s, _)| *s).collect();
    let combination: Vec<RatFun> = expanded.iter().map(|(_, c)| c.clone()).collect();
    let terms: Vec<HyperTerm> = series.iter().map(Series::term).collect();
    let mut tr = String::new();
    let _ = writeln!(tr, "relation {}: {}", rel.name, rel.display);
    let _ = writeln!(tr, "multiplied by 2*mu*(2*a*beta)^p*Gamma(2*nu+1)/Gamma(2*nu+p+1):");
    for (s, c) in series.iter().zip(&combination) {
        let (up, low) = s.params();
        let _ = writeln!(
            tr,
            "  {s} = 3F2({}, {}, {}; {}, {}) with coefficient {c}",
            up[0], up[1], up[2], low[0], low[1]
        );
    }
    let certs = parameterized_gosper(&terms)?;
    for c in &certs {
        verify_certificate(c)?;
    }
    let space: Vec<Vec<RatFun>> = certs.iter().map(|c| c.sigma.clone()).collect();
    let (m, pivots) = rref(&space, series.len());
    let _ = writeln!(tr, "dependencies found by parameterized Gosper: {} (certificates verified)", m.len());
    for (row, &pc) in m.iter().zip(&pivots) {
        let rhs: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(j, c)| *j != pc && !c.is_zero())
            .map(|(j, c)| format!("({})*{}", -c, series[j]))
            .collect();
        let _ = writeln!(tr, "  {} = {}", series[pc], if rhs.is_empty() { "0".into() } else { rhs.join(" + ") });
    }
    let free_cols: Vec<usize> = (0..series.len()).filter(|c| !pivots.contains(c)).collect();
    let mut residuals = Vec::new();
    for &f in &free_cols {
        let mut r = combination[f].clone();
        for (row, &pc) in m.iter().zip(&pivots) {
            if !row[f].is_zero() && !combination[pc].is_zero() {
                r = &r - &(&combination[pc] * &row[f]);
            }
        }
        residuals.push(r);
    }
    let reduced: Vec<Poly> = residuals.iter().map(|r| physics_reduce(r.numer())).collect();
    let free: Vec<Series> = free_cols.iter().map(|&c| series[c]).collect();
    let names: Vec<String> = free.iter().map(Series::to_string).collect();
    let _ = writeln!(tr, "coefficients of {{{}}} after elimination:", names.join(", "));
    for (s, r) in free.iter().zip(&residuals) {
        let _ = writeln!(tr, "  {s}: {r}");
    }
    let _ = writeln!(
        tr,
        "after n -> (eps*mu - a*nu)/a, eps^2 -> 1 - a^2, kappa^2 -> nu^2 + mu^2:"
    );
    let shown: Vec<String> = reduced.iter().map(Poly::to_string).collect();
    let _ = writeln!(tr, "  {{{}}}", shown.join(", "));
    let passed = reduced.iter().all(Poly::is_zero);
    let _ = writeln!(tr, "{}", if passed { "QED" } else { "NOT PROVED" });
    Ok(ProofReport {
        name: rel.name,
        series,
        combination,
        dimension: pivots.len(),
        free,
        residuals,
        reduced,
        passed,
        transcript: tr,
    })
}

/// Prove the named relation; a nonzero residual is an error.
pub fn verify_relation(name: &str) -> Result<ProofReport, CoulombError> {
    let rep = prove_relation(&relation(name)?)?;
    if !rep.passed {
        let shown: Vec<String> = rep.reduced.iter().map(Poly::to_string).collect();
        return Err(CoulombError::ProofFailed {
            relation: rep.name.to_string(),
            residual: format!("{{{}}}", shown.join(", ")),
        });
    }
    Ok(rep)
}

/// Coefficients `(x, y)` with `rr1 = x * indint1 + y * rr2`, found by
/// exact linear algebra on the coefficient vectors over
/// `A_p, B_p, C_p, C_{p+1}`.
pub fn rr1_from_indint1_and_rr2() -> Result<Option<(RatFun, RatFun)>, CoulombError> {
    let slots = [(Integral::A, 0), (Integral::B, 0), (Integral::C, 0), (Integral::C, 1)];
    let vector = |name: &str| -> Result<Vec<RatFun>, CoulombError> {
        let rel = relation(name)?;
        Ok(slots
            .iter()
            .map(|slot| {
                rel.terms
                    .iter()
                    .filter(|(_, w, s)| (*w, *s) == *slot)
                    .fold(RatFun::zero(), |acc, (c, _, _)| &acc + c)
            })
            .collect())
    };
    let i1 = vector("indint1")?;
    let r2 = vector("rr2")?;
    let r1 = vector("rr1")?;
    let a: Vec<Vec<RatFun>> = (0..4).map(|i| vec![i1[i].clone(), r2[i].clone()]).collect();
    let sol = solve_linear(&a, &r1);
    Ok(sol.particular.map(|x| (x[0].clone(), x[1].clone())))
}
