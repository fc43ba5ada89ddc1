//! Terminating 3F2 series in `p` and the integrals built from them.
//!
//! With `K_p = 2 mu (2 a beta)^p Gamma(2nu+1) / Gamma(2nu+p+1)`,
//!
//! ```text
//! K_p A_p   = 2 p eps a n Z + (mu + a kappa) X + (mu - a kappa) Y
//! K_p B_p   = 2 p a n Z + eps (mu + a kappa) X + eps (mu - a kappa) Y
//! 2 K_p C_p = a (mu + a kappa) X - a (mu - a kappa) Y
//! ```
//!
//! where `X`, `Y`, `Z` are the series below. Shifting `p` by one turns `X`
//! into `U` and `Y` into `V`.

use std::fmt;

use crate::exactalg::{Poly, RatFun, Var};
use crate::hyperterm::{cross_ratio, parse_poly, parse_ratfun, parse_term_in, HyperTerm};

use super::Integral;

/// The series families. `Z` has the lower parameter 2 in place of 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    Y,
    Z,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::X, Family::Y, Family::Z];

    fn params(self) -> ([&'static str; 3], [&'static str; 2]) {
        match self {
            Family::X => (["1-n", "-p", "p+1"], ["2*nu+1", "1"]),
            Family::Y => (["-n", "-p", "p+1"], ["2*nu+1", "1"]),
            Family::Z => (["1-n", "-p", "p+1"], ["2*nu+1", "2"]),
        }
    }
}

/// One series `family` at `p + shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Series {
    pub family: Family,
    pub shift: i64,
}

impl Series {
    pub const X: Series = Series { family: Family::X, shift: 0 };
    pub const Y: Series = Series { family: Family::Y, shift: 0 };
    pub const Z: Series = Series { family: Family::Z, shift: 0 };
    pub const U: Series = Series { family: Family::X, shift: 1 };
    pub const V: Series = Series { family: Family::Y, shift: 1 };

    /// The upper and lower parameters.
    pub fn params(&self) -> ([Poly; 3], [Poly; 2]) {
        let (up, low) = self.family.params();
        let sh = |s: &str| parse_poly(s).expect("fixed parameter").shift_int(Var::P, self.shift);
        ([sh(up[0]), sh(up[1]), sh(up[2])], [sh(low[0]), sh(low[1])])
    }

    /// The summand as a hypergeometric term in `k`.
    pub fn term(&self) -> HyperTerm {
        let (up, low) = self.params();
        let text = format!(
            "Poch({},k)*Poch({},k)*Poch({},k)/(Poch({},k)*Poch({},k)*fact(k))",
            up[0], up[1], up[2], low[0], low[1]
        );
        parse_term_in(&text, Var::K).expect("well-formed series")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.shift) {
            (Family::X, 1) => write!(f, "U"),
            (Family::Y, 1) => write!(f, "V"),
            (fam, 0) => write!(f, "{fam:?}"),
            (fam, s) => write!(f, "{fam:?}[p{s:+}]"),
        }
    }
}

/// The five series of the dependency basis, in the order `Z, X, Y, U, V`.
#[derive(Clone, Debug)]
pub struct SeriesBasis {
    pub series: Vec<Series>,
    pub terms: Vec<HyperTerm>,
}

impl SeriesBasis {
    pub fn new() -> SeriesBasis {
        let series = vec![Series::Z, Series::X, Series::Y, Series::U, Series::V];
        let terms = series.iter().map(Series::term).collect();
        SeriesBasis { series, terms }
    }
}

impl Default for SeriesBasis {
    fn default() -> Self {
        SeriesBasis::new()
    }
}

/// `scale * mu (2 a beta)^p Gamma(2nu+1)/Gamma(2nu+p+1) * I_p` as a
/// combination of series.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralExpr {
    pub which: Integral,
    /// 2 for `A` and `B`, 4 for `C`.
    pub scale: i64,
    pub coeffs: Vec<(Series, RatFun)>,
}

/// The series representation of `which`.
pub fn build_integral(which: Integral) -> IntegralExpr {
    let c = |s: &str| parse_ratfun(s).expect("fixed coefficient");
    let (scale, coeffs) = match which {
        Integral::A => (
            2,
            vec![
                (Series::Z, c("2*p*eps*a*n")),
                (Series::X, c("mu+a*kappa")),
                (Series::Y, c("mu-a*kappa")),
            ],
        ),
        Integral::B => (
            2,
            vec![
                (Series::Z, c("2*p*a*n")),
                (Series::X, c("eps*(mu+a*kappa)")),
                (Series::Y, c("eps*(mu-a*kappa)")),
            ],
        ),
        Integral::C => (4, vec![(Series::X, c("a*(mu+a*kappa)")), (Series::Y, c("-a*(mu-a*kappa)"))]),
    };
    IntegralExpr { which, scale, coeffs }
}

impl IntegralExpr {
    /// The integral at `p + shift`, still over the prefactor at `p + shift`.
    pub fn shifted(&self, shift: i64) -> IntegralExpr {
        IntegralExpr {
            which: self.which,
            scale: self.scale,
            coeffs: self
                .coeffs
                .iter()
                .map(|(s, c)| {
                    (
                        Series { family: s.family, shift: s.shift + shift },
                        c.shift_int(Var::P, shift),
                    )
                })
                .collect(),
        }
    }

    /// `I_p` as a single term summed over `k`: the series are folded onto
    /// `X` through their cross ratios and the prefactor is inverted.
    pub fn summand(&self) -> HyperTerm {
        let x = Series::X.term();
        let mut factor = RatFun::zero();
        for (s, c) in &self.coeffs {
            let r = cross_ratio(&s.term(), &x).expect("series are similar");
            factor = &factor + &(c * &r);
        }
        let pre = parse_term_in(
            &format!("pow(2*a*beta,-p)*Poch(2*nu+1,p)/({}*mu)", self.scale),
            Var::K,
        )
        .expect("fixed prefactor");
        pre.mul(&x).scale(&factor)
    }

    /// `K_p / K_{p+shift}` where `K_p` is the prefactor of `A_p`.
    pub fn prefactor_ratio(shift: i64) -> RatFun {
        let two_a_beta = parse_ratfun("2*a*beta").expect("fixed");
        let mut r = RatFun::one();
        if shift >= 0 {
            for i in 1..=shift {
                let g = parse_ratfun(&format!("2*nu+p+{i}")).expect("fixed");
                r = &r * &(&g / &two_a_beta);
            }
        } else {
            for i in 0..(-shift) {
                let g = parse_ratfun(&format!("2*nu+p-{i}")).expect("fixed");
                r = &r * &(&two_a_beta / &g);
            }
        }
        r
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|(s, c)| format!("({c})*{s}")).collect();
        format!(
            "{}*mu*(2*a*beta)^p*Gamma(2*nu+1)/Gamma(2*nu+p+1)*{:?}_p = {}",
            self.scale,
            self.which,
            body.join(" + ")
        )
    }
}
