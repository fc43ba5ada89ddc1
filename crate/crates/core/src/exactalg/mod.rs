//! Exact multivariate polynomials and rational functions over the rationals.

pub mod gcd;
pub mod linsolve;
pub mod poly;
pub mod ratfun;
pub mod resultant;
pub mod var;

pub use gcd::{content_in, gcd, gcd_in, lcm, pp_in};
pub use linsolve::{mat_vec, nullspace, nullspace_poly, rref, solve_linear, Solution};
pub use poly::{Monomial, Poly};
pub use ratfun::RatFun;
pub use resultant::resultant;
pub use var::Var;
