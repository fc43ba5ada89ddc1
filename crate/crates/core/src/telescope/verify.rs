//! Independent re-check of a certificate.

use std::fmt::Write;

use super::boundary::{boundary_report, Boundary};
use super::{default_nonneg, Kind, TelescopeCertificate, TelescopeError};
use crate::exactalg::RatFun;
use crate::hyperterm::cross_ratio;

#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Identically zero on success.
    pub residual: RatFun,
    pub boundary: Boundary,
    pub side_conditions: Vec<String>,
    pub transcript: String,
}

/// Divide the claimed identity by `t(k)`, reduce it to one rational
/// function and check that it is zero.
pub fn verify_certificate(c: &TelescopeCertificate) -> Result<VerificationReport, TelescopeError> {
    let terms = c.terms()?;
    if c.kind != Kind::Gosper && terms.iter().all(|(s, _)| s.is_zero()) {
        return Err(TelescopeError::Malformed("all coefficients are zero".into()));
    }
    let t = &c.inputs[0];
    let k = t.sumvar();
    let rho = t.ratio();
    let r = &c.certificate;
    let mut tr = String::new();
    let _ = writeln!(tr, "Claim: sum_i sigma_i T_i({k}) = G({k}+1) - G({k}) with G({k}) = R({k}) t({k}).");
    let _ = writeln!(tr, "t({k}) = {}", t.render());
    let _ = writeln!(tr, "R({k}) = {r}");
    let _ = writeln!(tr, "t({k}+1)/t({k}) = {rho}");
    let mut lhs = RatFun::zero();
    for (i, (s, ti)) in terms.iter().enumerate() {
        let q = cross_ratio(ti, t)?;
        let _ = writeln!(tr, "sigma_{i} = {s}");
        let _ = writeln!(tr, "T_{i}({k})/t({k}) = {q}");
        lhs = &lhs + &(s * &q);
    }
    let rhs = &(&r.shift_int(k, 1) * &rho) - r;
    let residual = &lhs - &rhs;
    let _ = writeln!(
        tr,
        "Dividing by t({k}): sum_i sigma_i T_i/t - (R({k}+1) t({k}+1)/t({k}) - R({k})) = {residual}"
    );
    if !residual.is_zero() {
        return Err(TelescopeError::VerificationFailed {
            residual: residual.to_string(),
        });
    }
    let boundary = boundary_report(t, r, &default_nonneg(c.recvar));
    let _ = writeln!(tr, "G(0) = {}", boundary.g_at_start);
    let _ = writeln!(tr, "G(N+1) = {}", boundary.g_at_end);
    if let Some(s) = &boundary.support {
        let _ = writeln!(tr, "Support: {s}.");
    }
    let _ = writeln!(tr, "Conclusion: {}.", boundary.conclusion);
    for s in &c.side_conditions {
        let _ = writeln!(tr, "Assuming: {s}.");
    }
    let _ = writeln!(tr, "QED");
    Ok(VerificationReport {
        residual,
        boundary,
        side_conditions: c.side_conditions.clone(),
        transcript: tr,
    })
}
