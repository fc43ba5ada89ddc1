//! Mechanical derivations: unmixed recurrences, series dependencies and
//! contiguous relations.

use crate::exactalg::{rref, Poly, RatFun, Var};
use crate::hyperterm::{parse_ratfun, parse_term_in, HyperTerm};
use crate::telescope::{parameterized_gosper, verify_certificate, zeilberger, Recurrence, TelescopeCertificate};

use super::reduce::is_physically_zero;
use super::series::{build_integral, SeriesBasis};
use super::{CoulombError, Integral};

/// A recurrence found by Zeilberger's algorithm, compared with the known
/// closed form.
#[derive(Clone, Debug)]
pub struct UnmixedDerivation {
    pub which: Integral,
    pub certificate: TelescopeCertificate,
    /// Coefficients of `I_p, I_{p+1}, I_{p+2}`.
    pub recurrence: Recurrence,
    /// The closed form, in the same index window, before reduction.
    pub closed_form: Vec<RatFun>,
    /// Whether every cross product `d_i e_j - d_j e_i` reduces to zero.
    pub matches_closed_form: bool,
}

/// Maximal order tried for the unmixed recurrences.
pub const UNMIXED_MAX_ORDER: usize = 2;

/// Run Zeilberger on the folded summand of `which` and compare the result
/// with the classical three-term recurrence.
pub fn derive_unmixed(which: Integral) -> Result<UnmixedDerivation, CoulombError> {
    let f = build_integral(which).summand();
    let certificate = zeilberger(&f, Var::P, UNMIXED_MAX_ORDER)?;
    verify_certificate(&certificate)?;
    let recurrence = Recurrence::from_certificate(&certificate)?;
    let closed_form = closed_form_recurrence(which);
    let matches_closed_form = proportional_on_variety(&recurrence.coeffs, &closed_form);
    Ok(UnmixedDerivation {
        which,
        certificate,
        recurrence,
        closed_form,
        matches_closed_form,
    })
}

/// `I_{p+1} = s(p) I_p + t(p) I_{p-1}`, returned as the coefficients of
/// `I_p, I_{p+1}, I_{p+2}` after `p -> p+1`, namely `(-t, -s, 1)`.
pub fn closed_form_recurrence(which: Integral) -> Vec<RatFun> {
    let r = |s: &str| parse_ratfun(s).expect("fixed closed form");
    let (s, t) = match which {
        Integral::A => {
            let pp = "(2*eps*p*(p+2)*(2*eps*kappa+p)*(2*eps*kappa+p+1) \
                      + eps*(4*(eps^2*kappa^2-nu^2) - p*(4*eps^2*kappa^2+p*(p+1))) \
                      + (2*p+1)*(4*eps^2*kappa+2*(p+2)*(2*eps*mu^2-kappa)))";
            let den = "(4*mu^2*(p+1)+p*(2*eps*kappa+p)*(2*eps*kappa+p+1))";
            (
                r(&format!("mu*{pp}/(a^2*beta*{den}*(p+2))")),
                r(&format!(
                    "-(4*nu^2-p^2)*(4*mu^2*(p+2)+(p+1)*(2*eps*kappa+p+1)*(2*eps*kappa+p+2))*p/((2*a*beta)^2*{den}*(p+2))"
                )),
            )
        }
        Integral::B => {
            let q = "((2*p+3)*(4*nu^2+2*eps*kappa*(2*p+1)+p*(p+1)) - a^2*(2*p+1)*(p+1)*(p+2))";
            let den = "(4*nu^2+2*eps*kappa*(2*p+1)+eps^2*p*(p+1))";
            (
                r(&format!("eps*mu*{q}/(a^2*beta*{den}*(p+2))")),
                r(&format!(
                    "-(4*nu^2-p^2)*(4*nu^2+2*eps*kappa*(2*p+3)+eps^2*(p+1)*(p+2))*(p+1)/((2*a*beta)^2*{den}*(p+2))"
                )),
            )
        }
        Integral::C => (
            r("mu*(2*p+1)*(2*kappa+eps*(p*(p+1)-4*kappa^2))/(a^2*beta*(p^2-4*kappa^2)*(p+1))"),
            r("p*(p^2-4*nu^2)*((p+1)^2-4*kappa^2)/((2*a*beta)^2*(p^2-4*kappa^2)*(p+1))"),
        ),
    };
    let s1 = s.shift_int(Var::P, 1);
    let t1 = t.shift_int(Var::P, 1);
    vec![-t1, -s1, RatFun::one()]
}

/// `d` and `e` are proportional modulo the physical identities.
pub fn proportional_on_variety(d: &[Poly], e: &[RatFun]) -> bool {
    if d.len() != e.len() || d.iter().all(Poly::is_zero) {
        return false;
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let di = RatFun::from_poly(d[i].clone());
            let dj = RatFun::from_poly(d[j].clone());
            let cross = &(&di * &e[j]) - &(&dj * &e[i]);
            if !is_physically_zero(&cross) {
                return false;
            }
        }
    }
    true
}

/// The dependency space of the five-series basis.
#[derive(Clone, Debug)]
pub struct DependencySpace {
    pub basis: SeriesBasis,
    pub certificates: Vec<TelescopeCertificate>,
    pub dimension: usize,
    /// The known relations, in basis coordinates `Z, X, Y, U, V`.
    pub known: Vec<(&'static str, Vec<RatFun>)>,
    /// Whether all known relations lie in the space and span it.
    pub known_span: bool,
}

const KNOWN_DEPENDENCIES: [(&str, [&str; 5]); 3] = [
    ("lin1", ["0", "n", "-(1+n+p)", "n", "1-n+p"]),
    ("lin2", ["2*n*p", "0", "1+2*n+p+2*nu", "0", "-(1+p+2*nu)"]),
    (
        "lin3",
        ["0", "2*n*(n+2*nu)", "-((n+1)^2+2*p+(n+p)^2+2*(2*n+p+1)*nu)", "0", "(1+p)*(1+p+2*nu)"],
    ),
];

/// Parameterized Gosper over `Z, X, Y, U, V`.
pub fn derive_dependencies() -> Result<DependencySpace, CoulombError> {
    let basis = SeriesBasis::new();
    let certificates = parameterized_gosper(&basis.terms)?;
    for c in &certificates {
        verify_certificate(c)?;
    }
    let space: Vec<Vec<RatFun>> = certificates.iter().map(|c| c.sigma.clone()).collect();
    let dimension = rref(&space, 5).1.len();
    let known: Vec<(&'static str, Vec<RatFun>)> = KNOWN_DEPENDENCIES
        .iter()
        .map(|(name, v)| (*name, v.iter().map(|s| parse_ratfun(s).expect("fixed")).collect()))
        .collect();
    let mut rows = space.clone();
    rows.extend(known.iter().map(|(_, v)| v.clone()));
    let joint = rref(&rows, 5).1.len();
    let own = rref(&known.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(), 5).1.len();
    Ok(DependencySpace {
        basis,
        certificates,
        dimension,
        known_span: joint == dimension && own == dimension,
        known,
    })
}

/// A contiguous relation among three series, derived and compared with
/// its closed form.
#[derive(Clone, Debug)]
pub struct ContiguousRelation {
    pub name: &'static str,
    pub terms: Vec<HyperTerm>,
    pub certificate: TelescopeCertificate,
    /// Closed-form coefficients of the relation `sum c_i F_i = 0`.
    pub closed_form: Vec<RatFun>,
    pub matches_closed_form: bool,
}

type ContiguousSpec = (&'static str, [&'static str; 3], [&'static str; 3]);

const CONTIGUOUS: [ContiguousSpec; 4] = [
    (
        "L1",
        [
            "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
            "Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))",
            "Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))",
        ],
        [
            "1",
            "-(2*nu+n)*(2*nu+p+1)*(2*nu+p+2)*(2*n+p+1)/(4*nu*(2*nu+1)*(nu+n)*(p+1))",
            "n*(4*nu+2*n+p+1)/(2*(nu+n)*(p+1))",
        ],
    ),
    (
        "L2",
        [
            "Poch(-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
            "Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))",
            "Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))",
        ],
        [
            "1",
            "-n*(4*nu+2*n-p-1)*(2*nu+p+1)*(2*nu+p+2)/(4*nu*(2*nu+1)*(nu+n)*(p+1))",
            "(2*nu+n)*(2*n-p-1)/(2*(nu+n)*(p+1))",
        ],
    ),
    (
        "L3",
        [
            "Poch(1-n,k)*Poch(p+1,k)*Poch(-p,k)/(Poch(2*nu+1,k)*Poch(2,k)*fact(k))",
            "Poch(1-n,k)*Poch(p+1,k)*Poch(-p,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))",
            "Poch(-n,k)*Poch(p+1,k)*Poch(-p,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))",
        ],
        [
            "p*(p+1)/(2*nu+n)",
            "-(p-2*nu)*(2*nu+p+1)/(2*(2*nu+1)*(nu+n))",
            "-nu/(nu+n)",
        ],
    ),
    (
        "Chebyshev",
        [
            "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(2,k)*fact(k))",
            "Poch(-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
            "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))",
        ],
        ["p*(p+1)/(n+2*nu)", "-1", "1"],
    ),
];

/// Derive the contiguous relations by parameterized Gosper on each triple.
pub fn derive_contiguous() -> Result<Vec<ContiguousRelation>, CoulombError> {
    CONTIGUOUS
        .iter()
        .map(|(name, terms, closed)| {
            let terms: Vec<HyperTerm> = terms
                .iter()
                .map(|t| parse_term_in(t, Var::K).expect("fixed term"))
                .collect();
            let closed_form: Vec<RatFun> = closed.iter().map(|s| parse_ratfun(s).expect("fixed")).collect();
            let certs = parameterized_gosper(&terms)?;
            let certificate = certs
                .into_iter()
                .next()
                .ok_or(CoulombError::Derivation(crate::telescope::TelescopeError::NoDependency))?;
            verify_certificate(&certificate)?;
            let matches_closed_form = proportional(&certificate.sigma, &closed_form);
            Ok(ContiguousRelation {
                name,
                terms,
                certificate,
                closed_form,
                matches_closed_form,
            })
        })
        .collect()
}

/// Exact proportionality of two coefficient vectors.
pub fn proportional(u: &[RatFun], v: &[RatFun]) -> bool {
    let Some(i) = u.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if v[i].is_zero() {
        return false;
    }
    let q = &v[i] / &u[i];
    u.len() == v.len() && u.iter().zip(v).all(|(a, b)| &(a * &q) == b)
}
