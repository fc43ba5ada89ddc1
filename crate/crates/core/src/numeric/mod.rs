//! Floating-point oracle for the symbolic layer: terminating 3F2 sums,
//! Laguerre polynomials, wave-function quadrature and numeric checks of
//! every identity.
//!
//! Series evaluation and identity checks run in software floats of the
//! configured precision; the supported widths are 128, 256 and 512 bits
//! and a request is rounded up to the next one. Quadrature runs in `f64`.

mod check;
mod hyper;
mod quadrature;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coulomb::{make_state, rational_from_decimal, CoulombError, CoulombState, Integral, DEFAULT_ALPHA};
use crate::scalar::BigFloat;
use crate::Rational;

pub use check::{
    check_identity_in, free_constants, integral_by_series, recursion_check_in, series_value, standard_identities,
    GridRow, Identity, IdentityReport, Operand, Point, RecursionReport,
};
pub use hyper::{eval_3f2_terminating, laguerre, laguerre_coeffs};
pub use quadrature::{fit_wavefunction, gauss_laguerre, integral_by_quadrature, Wavefunction};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "COULSUM_CONFIG";

/// The test states `(Z, n, kappa)`.
pub const DEFAULT_STATES: [(i64, i64, i64); 4] = [(92, 0, -1), (92, 1, -1), (92, 1, 1), (1, 2, -2)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("series does not terminate: upper parameters {0}")]
    NonTerminating(String),
    #[error("outside the domain: {}", .0.join("; "))]
    DomainViolation(Vec<String>),
    #[error("unavailable: {0}")]
    GatedFeature(String),
    #[error("quadrature not converged: {coarse} vs {fine} under node doubling")]
    NotConverged { coarse: f64, fine: f64 },
    #[error("no value for symbol {0}")]
    UnboundSymbol(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Coulomb(#[from] CoulombError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericConfig {
    /// Working precision in bits.
    pub precision: u32,
    pub rel_tol: f64,
    pub quadrature_nodes: usize,
    /// Fine-structure constant, as a decimal literal.
    pub alpha: String,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            precision: 128,
            rel_tol: 1e-10,
            quadrature_nodes: 200,
            alpha: DEFAULT_ALPHA.to_string(),
        }
    }
}

impl NumericConfig {
    pub fn from_toml_str(text: &str) -> Result<NumericConfig, NumericError> {
        let cfg: NumericConfig = toml::from_str(text).map_err(|e| NumericError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<NumericConfig, NumericError> {
        let text = std::fs::read_to_string(path).map_err(|e| NumericError::Config(format!("{}: {e}", path.display())))?;
        NumericConfig::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        if self.precision < 64 || self.precision > 512 {
            return Err(NumericError::Config(format!("precision {} outside 64..=512", self.precision)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-6) {
            return Err(NumericError::Config(format!("rel_tol {} outside (0, 1e-6)", self.rel_tol)));
        }
        if self.quadrature_nodes == 0 {
            return Err(NumericError::Config("quadrature_nodes must be positive".into()));
        }
        self.alpha()?;
        Ok(())
    }

    pub fn alpha(&self) -> Result<Rational, NumericError> {
        rational_from_decimal(&self.alpha).ok_or_else(|| NumericError::Config(format!("alpha {:?}", self.alpha)))
    }

    /// The precision actually used.
    pub fn effective_precision(&self) -> u32 {
        match self.precision {
            0..=128 => 128,
            129..=256 => 256,
            _ => 512,
        }
    }
}

/// Run a generic numeric routine at the configured precision.
macro_rules! at_precision {
    ($cfg:expr, $f:ident :: <_>($($arg:expr),*)) => {
        match $cfg.effective_precision() {
            128 => $f::<BigFloat<128>>($($arg),*),
            256 => $f::<BigFloat<256>>($($arg),*),
            _ => $f::<BigFloat<512>>($($arg),*),
        }
    };
}

/// Numeric check of `id` over `states` and `ps`.
pub fn check_identity_numeric(
    id: &Identity,
    states: &[(i64, i64, i64)],
    ps: &[i64],
    cfg: &NumericConfig,
    seed: u64,
) -> Result<IdentityReport, NumericError> {
    at_precision!(cfg, check_identity_in::<_>(id, states, ps, cfg, seed))
}

/// Upward and downward recursion of `(A_p, B_p)` against series values.
pub fn recursion_check(z: i64, n: i64, kappa: i64, pmax: i64, cfg: &NumericConfig) -> Result<RecursionReport, NumericError> {
    at_precision!(cfg, recursion_check_in::<_>(z, n, kappa, pmax, cfg))
}

fn series_f64_in<S: crate::scalar::Real>(
    z: i64,
    n: i64,
    kappa: i64,
    which: Integral,
    p: i64,
    alpha: &Rational,
) -> Result<f64, NumericError> {
    let st: CoulombState<S> = make_state(z, n, kappa, alpha)?;
    Ok(integral_by_series(&st, which, p)?.approx_f64())
}

/// `I_p` of state `(Z, n, kappa)` from the series, rounded to `f64`.
pub fn integral_value(z: i64, n: i64, kappa: i64, which: Integral, p: i64, cfg: &NumericConfig) -> Result<f64, NumericError> {
    let alpha = cfg.alpha()?;
    at_precision!(cfg, series_f64_in::<_>(z, n, kappa, which, p, &alpha))
}

/// Fit the wave function of a state and validate it against the series:
/// `B_{-1}` and `C_0` from quadrature must agree with the series values to
/// `1e-8`. Otherwise the quadrature path stays gated.
pub fn resolve_wavefunction(z: i64, n: i64, kappa: i64, cfg: &NumericConfig) -> Result<Wavefunction, NumericError> {
    let state: CoulombState<f64> = make_state(z, n, kappa, &cfg.alpha()?)?;
    let wf = fit_wavefunction(&state, cfg.quadrature_nodes)?;
    for (which, p) in [(Integral::B, -1), (Integral::C, 0)] {
        let quad = wf.integral(which, p, cfg.quadrature_nodes)?;
        let series = integral_value(z, n, kappa, which, p, cfg)?;
        let rel = (quad - series).abs() / series.abs().max(1e-300);
        if rel > 1e-8 {
            return Err(NumericError::GatedFeature(format!(
                "fitted wave function disagrees with the series: {which:?}_{p} = {quad} vs {series}"
            )));
        }
    }
    Ok(wf)
}
