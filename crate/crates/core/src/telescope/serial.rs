//! TOML form of certificates. Terms and rational functions are stored in the
//! input grammar, so a parsed certificate re-verifies from scratch.

use serde::{Deserialize, Serialize};

use super::boundary::Boundary;
use super::{Kind, TelescopeCertificate, TelescopeError};
use crate::exactalg::Var;
use crate::hyperterm::{parse_ratfun, parse_term_in};

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    kind: String,
    sumvar: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    recvar: Option<String>,
    order: usize,
    inputs: Vec<String>,
    sigma: Vec<String>,
    certificate: String,
    side_conditions: Vec<String>,
    boundary: Boundary,
}

pub fn serialize_certificate(c: &TelescopeCertificate) -> String {
    let file = CertificateFile {
        kind: c.kind.name().to_string(),
        sumvar: c.sumvar.name().to_string(),
        recvar: c.recvar.map(|v| v.name().to_string()),
        order: c.order,
        inputs: c.inputs.iter().map(|t| t.render()).collect(),
        sigma: c.sigma.iter().map(|s| s.to_string()).collect(),
        certificate: c.certificate.to_string(),
        side_conditions: c.side_conditions.clone(),
        boundary: c.boundary.clone(),
    };
    toml::to_string(&file).expect("certificate fields serialize")
}

pub fn parse_certificate(text: &str) -> Result<TelescopeCertificate, TelescopeError> {
    let file: CertificateFile = toml::from_str(text).map_err(|e| TelescopeError::Malformed(e.to_string()))?;
    let kind = Kind::from_name(&file.kind)
        .ok_or_else(|| TelescopeError::Malformed(format!("unknown kind `{}`", file.kind)))?;
    let sumvar = Var::new(&file.sumvar);
    let inputs = file
        .inputs
        .iter()
        .map(|s| parse_term_in(s, sumvar))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma = file.sigma.iter().map(|s| parse_ratfun(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(TelescopeCertificate {
        kind,
        inputs,
        sumvar,
        recvar: file.recvar.as_deref().map(Var::new),
        order: file.order,
        sigma,
        certificate: parse_ratfun(&file.certificate)?,
        boundary: file.boundary,
        side_conditions: file.side_conditions,
    })
}
