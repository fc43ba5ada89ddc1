//! The relativistic Coulomb integrals
//!
//! ```text
//! A_p = int r^(p+2) (F^2 + G^2) dr,  B_p = int r^(p+2) (F^2 - G^2) dr,
//! C_p = int r^(p+2) F G dr
//! ```
//!
//! through their terminating 3F2 representations: states, the series
//! basis, derivation of recurrences and dependencies, and proofs of the
//! linear relations among the integrals.

mod derive;
mod reduce;
mod relations;
mod series;
mod state;

use thiserror::Error;

use crate::telescope::TelescopeError;

pub use derive::{
    closed_form_recurrence, derive_contiguous, derive_dependencies, derive_unmixed, proportional,
    proportional_on_variety, ContiguousRelation, DependencySpace, UnmixedDerivation, UNMIXED_MAX_ORDER,
};
pub use reduce::{is_physically_zero, physics_reduce, physics_reduce_ratfun};
pub use relations::{
    expand_over_series, prove_relation, relation, relation_catalogue, rr1_from_indint1_and_rr2, two_param_symbols,
    verify_relation, ProofReport, Relation, RELATION_NAMES,
};
pub use series::{build_integral, Family, IntegralExpr, Series, SeriesBasis};
pub use state::{make_state, physical_constraints, rational_from_decimal, CoulombState, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoulombError {
    #[error("unphysical state: {0}")]
    UnphysicalState(String),
    #[error("{0}")]
    Derivation(#[from] TelescopeError),
    #[error("proof of {relation} failed, residual {residual}")]
    ProofFailed { relation: String, residual: String },
    #[error("unknown relation {0}")]
    UnknownRelation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Integral {
    A,
    B,
    C,
}

impl Integral {
    pub const ALL: [Integral; 3] = [Integral::A, Integral::B, Integral::C];

    pub fn from_name(s: &str) -> Option<Integral> {
        match s {
            "A" | "a" => Some(Integral::A),
            "B" | "b" => Some(Integral::B),
            "C" | "c" => Some(Integral::C),
            _ => None,
        }
    }
}
