//! Gosper-Petkovšek normal form of a rational function of the summation
//! variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::{gcd, gcd_in, resultant, Monomial, Poly, RatFun, Var};
use crate::Rational;

/// `r(k) = a(k)/b(k) * c(k+1)/c(k)` with `gcd(a(k), b(k+j)) = 1` for all
/// integers `j >= 0`, up to the recorded side conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct GPForm {
    pub var: Var,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    /// Genericity assumptions made while computing the dispersion set.
    pub side_conditions: Vec<String>,
}

impl GPForm {
    /// The rational function this form represents.
    pub fn reconstruct(&self) -> RatFun {
        let k = self.var;
        &RatFun::new(self.a.clone(), self.b.clone())
            * &RatFun::new(self.c.shift_int(k, 1), self.c.clone())
    }
}

/// Largest root magnitude searched exhaustively.
const ROOT_SCAN_LIMIT: i64 = 100_000;

/// Nonnegative integer roots of a univariate rational polynomial in `h`, in
/// increasing order.
pub fn nonneg_integer_roots(p: &Poly, h: Var) -> Vec<i64> {
    if p.is_zero() {
        return Vec::new();
    }
    let coeffs: Vec<Rational> = p
        .coeffs_in(h)
        .iter()
        .map(|c| c.as_constant().expect("univariate input"))
        .collect();
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(0);
    }
    let ints = &ints[low..];
    if ints.len() <= 1 {
        return roots;
    }
    let lead = ints.last().unwrap().abs();
    // Cauchy bound; roots also divide the trailing coefficient.
    let bound: BigInt = ints[..ints.len() - 1].iter().map(|c| c.abs()).max().unwrap() / &lead + 1;
    let trail = ints[0].abs();
    let limit = bound.min(trail.clone()).to_i64().unwrap_or(ROOT_SCAN_LIMIT).min(ROOT_SCAN_LIMIT);
    for r in 1..=limit {
        if !(&trail % BigInt::from(r)).is_zero() {
            continue;
        }
        let x = BigInt::from(r);
        let val = ints.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c);
        if val.is_zero() {
            roots.push(r);
        }
    }
    roots
}

/// Split `p`, a polynomial in `h` and parameters, into the univariate
/// polynomials in `h` multiplying each parameter monomial.
fn parameter_slices(p: &Poly, h: Var) -> Vec<Poly> {
    let mut groups: Vec<(Monomial, Vec<(Monomial, Rational)>)> = Vec::new();
    for (m, c) in p.terms() {
        let e = m.exp(h);
        let key = m.with_exp(h, 0);
        let hm = Monomial::var(h, e);
        match groups.iter_mut().find(|(g, _)| *g == key) {
            Some((_, v)) => v.push((hm, c.clone())),
            None => groups.push((key, vec![(hm, c.clone())])),
        }
    }
    groups.into_iter().map(|(_, t)| Poly::from_terms(t)).collect()
}

/// Integer roots `j >= 0` of `Res_k(a(k), b(k+j))` valid for all parameter
/// values, together with a description of any parameter-dependent roots.
pub fn dispersion_set(a: &Poly, b: &Poly, k: Var, h: Var) -> (Vec<i64>, Option<String>) {
    if a.deg(k) == 0 || b.deg(k) == 0 {
        return (Vec::new(), None);
    }
    let bh = b.shift(k, &Poly::var(h));
    let res = resultant(a, &bh, k).expect("nonzero inputs");
    let slices = parameter_slices(&res, h);
    let common = slices.iter().fold(Poly::zero(), |g, s| gcd(&g, s));
    let roots = nonneg_integer_roots(&common, h);
    // Whatever remains of degree > 0 in h after the generic roots are gone
    // has roots that move with the parameters.
    let mut rest = crate::exactalg::pp_in(&res, h);
    for &r in &roots {
        let lin = &Poly::var(h) - &Poly::int(r);
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
        }
    }
    let note = if rest.deg(h) > 0 && rest.vars().iter().any(|&v| v != h) {
        let desc = if rest.deg(h) == 1 {
            let c = rest.coeffs_in(h);
            format!("{h} = {}", RatFun::new(-&c[0], c[1].clone()))
        } else {
            let s = rest.to_string();
            if s.len() <= 160 {
                format!("0 = {s}")
            } else {
                format!("a degree-{} polynomial equation in {h}", rest.deg(h))
            }
        };
        Some(format!(
            "parameter-dependent shift {desc} is assumed not to be a nonnegative integer"
        ))
    } else {
        None
    };
    (roots, note)
}

fn shift_var() -> Var {
    Var::new("h")
}

/// Gosper-Petkovšek decomposition of a nonzero rational function in `k`.
pub fn gp_decompose(r: &RatFun, k: Var) -> GPForm {
    assert!(!r.is_zero(), "GP form of zero");
    let h = shift_var();
    let mut a = r.numer().clone();
    let mut b = r.denom().clone();
    let mut c = Poly::one();
    let (roots, note) = dispersion_set(&a, &b, k, h);
    let side_conditions: Vec<String> = note.into_iter().collect();
    for j in roots {
        loop {
            let bj = b.shift_int(k, j);
            let g = gcd_in(&a, &bj, k);
            if g.deg(k) == 0 {
                break;
            }
            a = a.div_exact(&g).expect("gcd divides");
            b = b.div_exact(&g.shift_int(k, -j)).expect("shifted gcd divides");
            for i in 1..=j {
                c = &c * &g.shift_int(k, -i);
            }
        }
    }
    // Keep numerical content on `a`, and `b` and `c` integer-primitive.
    let (bc, cc) = (b.rational_content(), c.rational_content());
    let b_p = b.scale(&bc.recip());
    let c_p = c.scale(&cc.recip());
    a = a.scale(&bc.recip());
    GPForm {
        var: k,
        a,
        b: b_p,
        c: c_p,
        side_conditions,
    }
}
