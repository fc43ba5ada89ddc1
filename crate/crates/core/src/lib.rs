//! Exact symbolic summation (Gosper, Zeilberger, parameterized Gosper) and
//! a workbench for the relativistic Coulomb integrals `A_p`, `B_p`, `C_p`
//! built on top of it, with a floating-point oracle for every identity.

pub mod coulomb;
pub mod error;
pub mod exactalg;
pub mod hyperterm;
pub mod numeric;
pub mod scalar;
pub mod telescope;

pub type Rational = num_rational::BigRational;

pub use exactalg::{Poly, RatFun, Var};
