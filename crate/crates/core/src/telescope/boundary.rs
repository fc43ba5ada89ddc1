//! What the telescoping identity says about definite sums.

use serde::{Deserialize, Serialize};

use crate::exactalg::{Poly, RatFun, Var};
use crate::hyperterm::HyperTerm;

/// How far past the vanishing point of `t` poles of `R` are looked for.
const POLE_SEARCH: i64 = 16;

/// `G(k) = R(k) t(k)` at the ends of a summation range `0..=N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    /// `G(0)` rendered, or a note on a pole.
    pub g_at_start: String,
    pub start_vanishes: bool,
    /// `G(N+1)` rendered.
    pub g_at_end: String,
    /// Why `G(N+1)` vanishes for large `N`, when it does.
    pub support: Option<String>,
    pub conclusion: String,
}

fn bare(t: &HyperTerm) -> HyperTerm {
    HyperTerm::new(t.atoms().to_vec(), RatFun::one(), t.sumvar()).expect("atoms already valid")
}

/// `G` evaluated at `k = value`, or `None` at a pole of the rational part.
fn g_at(bare_t: &HyperTerm, gf: &RatFun, k: Var, value: &Poly) -> Option<HyperTerm> {
    if gf.denom().subst(k, value).is_zero() {
        return None;
    }
    let f = gf.subst_poly(k, value);
    Some(bare_t.subst(k, value).scale(&f))
}

/// Boundary analysis of `G = cert * t`; `nonneg` lists the parameters known
/// to be nonnegative integers.
pub fn boundary_report(t: &HyperTerm, cert: &RatFun, nonneg: &[Var]) -> Boundary {
    let k = t.sumvar();
    let bt = bare(t);
    let gf = cert * t.factor();
    let (g_at_start, start_vanishes) = if gf.is_zero() {
        ("0".to_string(), true)
    } else {
        match g_at(&bt, &gf, k, &Poly::zero()) {
            None => (format!("pole of G at {k} = 0"), false),
            Some(g) if g.factor().is_zero() => ("0".to_string(), true),
            Some(g) => (g.render(), false),
        }
    };
    let n = Var::new("N");
    let upper = &Poly::var(n) + &Poly::one();
    let g_at_end = if gf.is_zero() {
        "0".to_string()
    } else {
        match g_at(&bt, &gf, k, &upper) {
            Some(g) => g.render(),
            None => format!("pole of G at {k} = N+1"),
        }
    };
    let support = if gf.is_zero() {
        Some("G vanishes identically".to_string())
    } else {
        t.vanishing_bound(nonneg).map(|(bound, why)| {
            // A pole of the rational part can cancel one zero of t.
            let last_pole = (1..=POLE_SEARCH)
                .filter(|&s| gf.denom().subst(k, &(&bound + &Poly::int(s))).is_zero())
                .max()
                .unwrap_or(0);
            let end = &bound + &Poly::int(last_pole);
            format!("{why}, so G({k}) = 0 for {k} > {end}")
        })
    };
    let conclusion = match (&support, start_vanishes) {
        (Some(_), true) => "the sum over all k >= 0 terminates and equals 0".to_string(),
        (Some(_), false) => format!("the sum over all k >= 0 terminates and equals -({g_at_start})"),
        (None, _) => format!("sum_{{k=0}}^{{N}} = ({g_at_end}) - ({g_at_start})"),
    };
    Boundary {
        g_at_start,
        start_vanishes,
        g_at_end,
        support,
        conclusion,
    }
}
