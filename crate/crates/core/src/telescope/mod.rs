//! Gosper, Zeilberger and parameterized Gosper summation with checkable
//! certificates.
//!
//! All three algorithms share one solver. Given a base term `t` and similar
//! terms `T_0..T_m`, it looks for k-free `sigma_i`, not all zero, and a
//! rational `R(k)` with
//!
//! ```text
//! sum_i sigma_i T_i(k) = G(k+1) - G(k),   G(k) = R(k) t(k).
//! ```
//!
//! Gosper is the case `m = 0`, Zeilberger takes `T_j = t(recvar + j, k)`, and
//! the parameterized variant takes arbitrary similar terms.

mod boundary;
mod gp;
mod serial;
mod verify;

use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::error::{ParseError, TermError};
use crate::exactalg::{gcd, lcm, nullspace_poly, pp_in, Poly, RatFun, Var};
use crate::hyperterm::{cross_ratio, HyperTerm};

pub use boundary::{boundary_report, Boundary};
pub use gp::{dispersion_set, gp_decompose, nonneg_integer_roots, GPForm};
pub use serial::{parse_certificate, serialize_certificate};
pub use verify::{verify_certificate, VerificationReport};

/// Default maximal recurrence order tried by [`zeilberger`].
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TelescopeError {
    #[error("{0}")]
    NotSimilar(#[from] TermError),
    #[error("not Gosper-summable (polynomial degree bound {degree_bound})")]
    NotSummable { degree_bound: i64 },
    #[error("no recurrence of order <= {max_order} found")]
    NoRecurrenceFound { max_order: usize },
    #[error("only the trivial dependency exists")]
    NoDependency,
    #[error("verification failed, residual {residual}")]
    VerificationFailed { residual: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Gosper,
    Zeilberger,
    PGosper,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Gosper => "gosper",
            Kind::Zeilberger => "zeilberger",
            Kind::PGosper => "pgosper",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        match s {
            "gosper" => Some(Kind::Gosper),
            "zeilberger" => Some(Kind::Zeilberger),
            "pgosper" => Some(Kind::PGosper),
            _ => None,
        }
    }
}

/// Everything needed to re-check a telescoping identity.
///
/// The identity is `sum_i sigma_i T_i(k) = G(k+1) - G(k)` with
/// `G = certificate * inputs[0]`. The terms `T_i` are `inputs[0]` alone for
/// Gosper (with `sigma = [1]` implied), `inputs[0]` shifted by `j` in
/// `recvar` for Zeilberger, and the inputs themselves for pgosper.
#[derive(Clone, Debug, PartialEq)]
pub struct TelescopeCertificate {
    pub kind: Kind,
    pub inputs: Vec<HyperTerm>,
    pub sumvar: Var,
    pub recvar: Option<Var>,
    pub order: usize,
    pub sigma: Vec<RatFun>,
    pub certificate: RatFun,
    pub boundary: Boundary,
    pub side_conditions: Vec<String>,
}

impl TelescopeCertificate {
    /// The terms `T_i` paired with their coefficients.
    pub fn terms(&self) -> Result<Vec<(RatFun, HyperTerm)>, TelescopeError> {
        let base = self
            .inputs
            .first()
            .ok_or_else(|| TelescopeError::Malformed("no input terms".into()))?;
        match self.kind {
            Kind::Gosper => Ok(vec![(RatFun::one(), base.clone())]),
            Kind::Zeilberger => {
                let rv = self
                    .recvar
                    .ok_or_else(|| TelescopeError::Malformed("zeilberger without recvar".into()))?;
                if self.sigma.len() != self.order + 1 {
                    return Err(TelescopeError::Malformed("sigma length is not order + 1".into()));
                }
                Ok(self
                    .sigma
                    .iter()
                    .enumerate()
                    .map(|(j, s)| (s.clone(), base.shift_param(rv, j as i64)))
                    .collect())
            }
            Kind::PGosper => {
                if self.sigma.len() != self.inputs.len() {
                    return Err(TelescopeError::Malformed("one coefficient per input required".into()));
                }
                Ok(self.sigma.iter().cloned().zip(self.inputs.iter().cloned()).collect())
            }
        }
    }
}

/// A linear recurrence `sum_j coeffs[j] * SUM[recvar + j] = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    pub recvar: Var,
    pub order: usize,
    pub coeffs: Vec<Poly>,
    /// Where the recurrence came from.
    pub provenance: String,
    /// `-G(0)` when it does not vanish, rendered.
    pub rhs: Option<String>,
}

/// `(c_0)*SUM[p] + (c_1)*SUM[p+1] + ... = rhs`, zero coefficients omitted.
impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.recvar;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => format!("({c})*SUM[{v}]"),
                _ => format!("({c})*SUM[{v}+{j}]"),
            })
            .collect();
        write!(f, "{} = {}", parts.join(" + "), self.rhs.as_deref().unwrap_or("0"))
    }
}

impl Recurrence {
    /// Clear denominators, drop the polynomial content and make the leading
    /// coefficient's leading term positive. Zero top coefficients are
    /// dropped; zero bottom coefficients are removed by shifting `recvar`,
    /// which is noted in `provenance`.
    pub fn new(recvar: Var, coeffs: &[RatFun], provenance: impl Into<String>) -> Recurrence {
        let mut polys = normalize_vector(coeffs, NormSign::Last);
        while polys.len() > 1 && polys.last().is_some_and(Poly::is_zero) {
            polys.pop();
        }
        let mut provenance = provenance.into();
        let lead_zeros = polys.iter().take_while(|p| p.is_zero()).count();
        if lead_zeros > 0 && lead_zeros < polys.len() {
            let shifted: Vec<Poly> = polys[lead_zeros..]
                .iter()
                .map(|p| p.shift_int(recvar, -(lead_zeros as i64)))
                .collect();
            polys = shifted;
            provenance.push_str(&format!("; index shifted by {lead_zeros}"));
        }
        Recurrence {
            recvar,
            order: polys.len().saturating_sub(1),
            coeffs: polys,
            provenance,
            rhs: None,
        }
    }

    /// The recurrence of a Zeilberger certificate.
    pub fn from_certificate(c: &TelescopeCertificate) -> Result<Recurrence, TelescopeError> {
        if c.kind != Kind::Zeilberger {
            return Err(TelescopeError::Malformed("not a zeilberger certificate".into()));
        }
        let rv = c.recvar.expect("zeilberger certificates carry recvar");
        let mut r = Recurrence::new(rv, &c.sigma, format!("zeilberger, order {}", c.order));
        if !c.boundary.start_vanishes {
            r.rhs = Some(format!("-({})", c.boundary.g_at_start));
        }
        Ok(r)
    }

    /// The recurrence after `f`, applied to every coefficient, then
    /// renormalized.
    pub fn map(&self, f: impl Fn(&Poly) -> RatFun) -> Recurrence {
        let c: Vec<RatFun> = self.coeffs.iter().map(f).collect();
        let mut r = Recurrence::new(self.recvar, &c, self.provenance.clone());
        r.rhs = self.rhs.clone();
        r
    }

    /// Equal up to a nonzero k-free rational factor.
    pub fn proportional(&self, other: &Recurrence) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let Some(i) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return other.coeffs.iter().all(Poly::is_zero);
        };
        if other.coeffs[i].is_zero() {
            return false;
        }
        let q = RatFun::new(other.coeffs[i].clone(), self.coeffs[i].clone());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| &RatFun::from_poly(a.clone()) * &q == RatFun::from_poly(b.clone()))
    }
}

#[derive(Clone, Copy)]
enum NormSign {
    First,
    Last,
}

/// Scale a coefficient vector to coprime polynomials with a fixed sign.
/// Returns the polynomials; `normalize_factor` gives the scaling used.
fn normalize_vector(v: &[RatFun], sign: NormSign) -> Vec<Poly> {
    let f = normalize_factor(v, sign);
    v.iter()
        .map(|c| {
            let s = c * &f;
            s.as_poly().cloned().expect("denominators cleared")
        })
        .collect()
}

fn normalize_factor(v: &[RatFun], sign: NormSign) -> RatFun {
    let den = v.iter().fold(Poly::one(), |l, c| lcm(&l, c.denom()));
    let nums: Vec<Poly> = v
        .iter()
        .map(|c| c.numer() * &den.div_exact(c.denom()).expect("lcm"))
        .collect();
    let content = nums.iter().fold(Poly::zero(), |g, p| gcd(&g, p));
    if content.is_zero() {
        return RatFun::one();
    }
    let mut f = RatFun::new(den, content);
    let pick = match sign {
        NormSign::First => nums.iter().find(|p| !p.is_zero()),
        NormSign::Last => nums.iter().rev().find(|p| !p.is_zero()),
    };
    if let Some(p) = pick {
        // The sign is fixed on the normalized polynomial.
        let scaled = &RatFun::from_poly(p.clone()) * &f;
        if scaled.numer().leading_coeff().is_negative() {
            f = -f;
        }
    }
    f
}

/// Knobs of the shared solver.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Require `G(0) = 0`, so that the dependency holds for sums from 0.
    pub vanishing_start: bool,
}

/// One element of the solution space.
#[derive(Clone, Debug)]
struct CoreVector {
    sigma: Vec<RatFun>,
    cert: RatFun,
}

struct CoreResult {
    vectors: Vec<CoreVector>,
    degree_bound: i64,
    side_conditions: Vec<String>,
}

/// Term with its rational factor removed; the factor moves into the
/// cross ratios.
fn bare(t: &HyperTerm) -> HyperTerm {
    HyperTerm::new(t.atoms().to_vec(), RatFun::one(), t.sumvar()).expect("atoms already valid")
}

/// Coefficients in `k` of a rational function whose denominator is k-free.
fn k_coeffs(r: &RatFun, k: Var) -> Vec<RatFun> {
    debug_assert!(!r.denom().contains(k));
    r.numer()
        .coeffs_in(k)
        .into_iter()
        .map(|c| RatFun::new(c, r.denom().clone()))
        .collect()
}

fn add_into(acc: &mut Vec<RatFun>, i: usize, v: &RatFun) {
    if acc.len() <= i {
        acc.resize(i + 1, RatFun::zero());
    }
    acc[i] = &acc[i] + v;
}

/// Scale each row by the lcm of its denominators.
fn clear_row_denominators(rows: &[Vec<RatFun>]) -> Vec<Vec<Poly>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(Poly::one(), |l, x| if x.denom().is_one() { l } else { lcm(&l, x.denom()) });
            row.iter()
                .map(|x| x.numer() * &l.div_exact(x.denom()).expect("lcm"))
                .collect()
        })
        .collect()
}

fn solve_core(base: &HyperTerm, terms: &[HyperTerm], opts: SolveOptions) -> Result<CoreResult, TelescopeError> {
    let k = base.sumvar();
    let tb = bare(base);
    let rho = tb.ratio();
    let ratios: Vec<RatFun> = terms.iter().map(|t| cross_ratio(t, &tb)).collect::<Result<_, _>>()?;
    let m = ratios.iter().fold(Poly::one(), |l, r| lcm(&l, &pp_in(r.denom(), k)));
    let m_rf = RatFun::from_poly(m.clone());
    let p: Vec<RatFun> = ratios.iter().map(|r| r * &m_rf).collect();
    let rho_bar = &(&rho * &m_rf) / &RatFun::from_poly(m.shift_int(k, 1));
    let gp = gp_decompose(&rho_bar, k);
    let mut side = gp.side_conditions.clone();
    let a = gp.a.clone();
    let bm = gp.b.shift_int(k, -1);
    let c = RatFun::from_poly(gp.c.clone());
    let rhs: Vec<Vec<RatFun>> = p.iter().map(|pi| k_coeffs(&(&c * pi), k)).collect();

    let d = degree_bound(&a, &bm, &rhs, k, &mut side);
    let nx = if d >= 0 { d as usize + 1 } else { 0 };
    let ns = terms.len();
    // Columns: x_0..x_d, then sigma_0..sigma_m.
    let mut cols: Vec<Vec<RatFun>> = Vec::with_capacity(nx + ns);
    let kp1 = &Poly::var(k) + &Poly::one();
    for j in 0..nx {
        let lhs = &(&a * &kp1.pow(j as u32)) - &(&bm * &Poly::var(k).pow(j as u32));
        cols.push(lhs.coeffs_in(k).into_iter().map(RatFun::from_poly).collect());
    }
    for r in &rhs {
        cols.push(r.iter().map(|x| -x).collect());
    }
    let nrows = cols.iter().map(Vec::len).max().unwrap_or(0);
    let mut rows: Vec<Vec<RatFun>> = (0..nrows)
        .map(|i| cols.iter().map(|col| col.get(i).cloned().unwrap_or_else(RatFun::zero)).collect())
        .collect();
    if opts.vanishing_start && nx > 0 {
        let c0 = gp.c.subst(k, &Poly::zero());
        let m0 = m.subst(k, &Poly::zero());
        if !c0.is_zero() && !m0.is_zero() {
            // G(0) = b(-1) x(0) t(0) / (c(0) M(0)), so G(0) = 0 iff b(-1) x_0 = 0.
            let mut row = vec![RatFun::zero(); nx + ns];
            row[0] = RatFun::from_poly(bm.subst(k, &Poly::zero()));
            rows.push(row);
        } else {
            side.push("G(0) was not constrained: the certificate has a pole at k = 0".into());
        }
    }
    let basis = nullspace_poly(&clear_row_denominators(&rows), nx + ns);
    let denom = &c * &m_rf;
    let mut vectors = Vec::new();
    for v in basis {
        let v: Vec<RatFun> = v.into_iter().map(RatFun::from_poly).collect();
        let sigma = v[nx..].to_vec();
        if sigma.iter().all(RatFun::is_zero) {
            continue;
        }
        let mut x = Vec::new();
        for (j, xj) in v[..nx].iter().enumerate() {
            add_into(&mut x, j, xj);
        }
        let xk = x
            .iter()
            .enumerate()
            .fold(RatFun::zero(), |acc, (j, xj)| &acc + &(xj * &RatFun::from_poly(Poly::var(k).pow(j as u32))));
        let cert_bare = &(&RatFun::from_poly(bm.clone()) * &xk) / &denom;
        let cert = &cert_bare / base.factor();
        vectors.push(CoreVector { sigma, cert });
    }
    Ok(CoreResult {
        vectors,
        degree_bound: d,
        side_conditions: side,
    })
}

/// Degree bound for polynomial solutions `x` of
/// `a(k) x(k+1) - bm(k) x(k) = rhs(k)`.
fn degree_bound(a: &Poly, bm: &Poly, rhs: &[Vec<RatFun>], k: Var, side: &mut Vec<String>) -> i64 {
    let dc = rhs
        .iter()
        .map(|r| r.iter().rposition(|x| !x.is_zero()).map_or(-1, |i| i as i64))
        .max()
        .unwrap_or(-1);
    if dc < 0 {
        return -1;
    }
    let da = a.deg(k) as i64;
    let db = bm.deg(k) as i64;
    if da != db {
        return dc - da.max(db);
    }
    let lca = a.lc_in(k);
    let lcb = bm.lc_in(k);
    if lca != lcb {
        let diff = &lca - &lcb;
        if !diff.is_constant() {
            side.push(format!("leading coefficients differ generically: {diff} != 0"));
        }
        return dc - da;
    }
    let mut d = dc - da + 1;
    if da >= 1 {
        let sub = (da - 1) as u32;
        let ell = RatFun::new(&bm.coeff_of(k, sub) - &a.coeff_of(k, sub), lca);
        match ell.as_constant() {
            Some(q) => {
                if q.is_integer() && !q.is_negative() {
                    let q = q.to_integer().try_into().unwrap_or(i64::MAX);
                    d = d.max(q);
                }
            }
            None => {
                side.push(format!(
                    "degree bound assumes {ell} is not an integer above {d}"
                ));
            }
        }
    }
    d
}

/// Gosper's algorithm: `R(k)` with `t(k) = G(k+1) - G(k)`, `G = R t`.
pub fn gosper(t: &HyperTerm) -> Result<TelescopeCertificate, TelescopeError> {
    let res = solve_core(t, std::slice::from_ref(t), SolveOptions { vanishing_start: false })?;
    let Some(v) = res.vectors.into_iter().next() else {
        return Err(TelescopeError::NotSummable {
            degree_bound: res.degree_bound,
        });
    };
    let cert = &v.cert / &v.sigma[0];
    Ok(finish(Kind::Gosper, vec![t.clone()], None, 0, Vec::new(), cert, res.side_conditions))
}

/// Zeilberger's fast algorithm: `sum_j sigma_j(recvar) t(recvar + j, k) =
/// G(k+1) - G(k)` for the smallest order `1 <= J <= max_order` that works.
pub fn zeilberger(t: &HyperTerm, recvar: Var, max_order: usize) -> Result<TelescopeCertificate, TelescopeError> {
    for order in 1..=max_order {
        let terms: Vec<HyperTerm> = (0..=order).map(|j| t.shift_param(recvar, j as i64)).collect();
        let res = solve_core(t, &terms, SolveOptions { vanishing_start: false })?;
        let Some(v) = res.vectors.into_iter().next() else { continue };
        let f = normalize_factor(&v.sigma, NormSign::Last);
        let sigma: Vec<RatFun> = v.sigma.iter().map(|s| s * &f).collect();
        let cert = &v.cert * &f;
        return Ok(finish(Kind::Zeilberger, vec![t.clone()], Some(recvar), order, sigma, cert, res.side_conditions));
    }
    Err(TelescopeError::NoRecurrenceFound { max_order })
}

/// Parameterized Gosper: a basis of k-free coefficient vectors `c` with
/// `sum_i c_i F_i(k) = G(k+1) - G(k)`, `G = R F_0`, and `G(0) = 0`, so
/// each dependency yields `sum_k sum_i c_i F_i(k) = 0` for terminating
/// sums. One certificate per basis vector.
pub fn parameterized_gosper(terms: &[HyperTerm]) -> Result<Vec<TelescopeCertificate>, TelescopeError> {
    parameterized_gosper_with(terms, SolveOptions { vanishing_start: true })
}

pub fn parameterized_gosper_with(
    terms: &[HyperTerm],
    opts: SolveOptions,
) -> Result<Vec<TelescopeCertificate>, TelescopeError> {
    if terms.len() < 2 {
        return Err(TelescopeError::Malformed("parameterized Gosper needs at least two terms".into()));
    }
    let res = solve_core(&terms[0], terms, opts)?;
    if res.vectors.is_empty() {
        return Err(TelescopeError::NoDependency);
    }
    Ok(res
        .vectors
        .into_iter()
        .map(|v| {
            let f = normalize_factor(&v.sigma, NormSign::First);
            let sigma: Vec<RatFun> = v.sigma.iter().map(|s| s * &f).collect();
            let cert = &v.cert * &f;
            finish(Kind::PGosper, terms.to_vec(), None, 0, sigma, cert, res.side_conditions.clone())
        })
        .collect())
}

fn finish(
    kind: Kind,
    inputs: Vec<HyperTerm>,
    recvar: Option<Var>,
    order: usize,
    sigma: Vec<RatFun>,
    certificate: RatFun,
    side_conditions: Vec<String>,
) -> TelescopeCertificate {
    let boundary = boundary_report(&inputs[0], &certificate, &default_nonneg(recvar));
    TelescopeCertificate {
        kind,
        sumvar: inputs[0].sumvar(),
        inputs,
        recvar,
        order,
        sigma,
        certificate,
        boundary,
        side_conditions,
    }
}

/// Parameters treated as nonnegative integers in boundary analysis.
pub fn default_nonneg(recvar: Option<Var>) -> Vec<Var> {
    let mut v = vec![Var::N, Var::P];
    if let Some(r) = recvar {
        if !v.contains(&r) {
            v.push(r);
        }
    }
    v
}

/// `sum_i c_i F_i` as a rational multiple of `F_0`, for callers that
/// combine dependencies.
pub fn combine(terms: &[HyperTerm], coeffs: &[RatFun]) -> Result<RatFun, TelescopeError> {
    let mut acc = RatFun::zero();
    for (t, c) in terms.iter().zip(coeffs) {
        acc = &acc + &(c * &cross_ratio(t, &terms[0])?);
    }
    Ok(acc)
}
