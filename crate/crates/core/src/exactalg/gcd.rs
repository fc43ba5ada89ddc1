//! Multivariate polynomial gcd over the rationals.
//!
//! The entry point tries cheap structural reductions first (monomial
//! content, variables present in only one argument, trial division), then
//! the heuristic integer-evaluation gcd when few variables are involved, and
//! finally a recursive primitive PRS, which always succeeds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::poly::Poly;
use super::var::Var;
use crate::Rational;

/// Bit budget for the evaluation point of the heuristic gcd.
const HEU_BIT_LIMIT: u64 = 6000;

/// Above this many variables the nested evaluation points of the heuristic
/// gcd blow up and it fails slowly, while the PRS stays cheap.
const HEU_MAX_VARS: usize = 3;

/// Greatest common divisor, normalized to integer-coprime coefficients with
/// a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.meet(&mb);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let g = gcd_no_monomial(&a1, &b1);
    g.mul_monomial(&m).primitive()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).primitive()
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `v`.
pub fn content_in(a: &Poly, v: Var) -> Poly {
    let coeffs = a.coeffs_in(v);
    let mut g = Poly::zero();
    // Start from the smallest coefficients; the gcd tends to shrink fast.
    let mut order: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.len());
    for c in order {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part of `a` with respect to `v`.
pub fn pp_in(a: &Poly, v: Var) -> Poly {
    if a.is_zero() {
        return Poly::zero();
    }
    let c = content_in(a, v);
    a.div_exact(&c).expect("content divides").primitive()
}

/// Gcd in `Q(other variables)[v]`: the multivariate gcd with its
/// `v`-free content removed.
pub fn gcd_in(a: &Poly, b: &Poly, v: Var) -> Poly {
    let g = gcd(a, b);
    if g.is_zero() {
        return g;
    }
    pp_in(&g, v)
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if large.total_degree() >= small.total_degree() {
        if let Some(_q) = large.div_exact(small) {
            return small.primitive();
        }
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(b, &content_in(a, v));
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, v));
    }
    if joint_vars(a, b).len() <= HEU_MAX_VARS {
        if let Some(g) = heuristic_gcd(&a.primitive(), &b.primitive()) {
            return g.primitive();
        }
    }
    prs_gcd(a, b)
}

fn joint_vars(a: &Poly, b: &Poly) -> Vec<Var> {
    let mut vars = a.vars();
    for x in b.vars() {
        if !vars.contains(&x) {
            vars.push(x);
        }
    }
    vars
}

/// Recursive primitive PRS; always succeeds.
pub(crate) fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let vars: Vec<Var> = {
        let mut v = a.vars();
        for x in b.vars() {
            if !v.contains(&x) {
                v.push(x);
            }
        }
        v
    };
    if vars.is_empty() {
        return Poly::one();
    }
    // Main variable: the one with the smallest degree in both arguments.
    let v = *vars
        .iter()
        .min_by_key(|&&x| (a.deg(x).max(b.deg(x)), a.deg(x) + b.deg(x)))
        .unwrap();
    if a.deg(v) == 0 || b.deg(v) == 0 {
        let (with, without) = if a.deg(v) == 0 { (b, a) } else { (a, b) };
        return gcd(without, &content_in(with, v));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.deg(v) < q.deg(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.deg(v) == 0 {
            return c;
        }
        p = q;
        q = pp_in(&r, v);
    }
    (&pp_in(&q, v) * &c).primitive()
}

fn int_content(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
    }
    g
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms()
        .iter()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let mut r = c.mod_floor(m);
    if &r * 2 > *m {
        r -= m;
    }
    r
}

/// Rebuild a polynomial in `x` from the xi-adic digits of `gamma`.
fn genpoly(gamma: &Poly, xi: &BigInt, x: Var) -> Poly {
    let mut g = gamma.clone();
    let mut coeffs = Vec::new();
    let xi_q = Rational::from_integer(xi.clone());
    while !g.is_zero() {
        let e = Poly::from_terms(g.terms().iter().map(|(m, c)| {
            (*m, Rational::from_integer(symmetric_mod(c.numer(), xi)))
        }));
        g = (&g - &e).scale(&xi_q.recip());
        coeffs.push(e);
        if coeffs.len() > 4096 {
            break;
        }
    }
    Poly::from_coeffs(x, &coeffs)
}

/// Heuristic gcd by evaluation at large integers. Inputs must have integer
/// coefficients. Returns `None` when the evaluation point grows too large.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut vars = a.vars();
    for x in b.vars() {
        if !vars.contains(&x) {
            vars.push(x);
        }
    }
    if vars.is_empty() {
        let g = int_content(a).gcd(&int_content(b));
        return Some(Poly::constant(Rational::from_integer(g)));
    }
    let ca = int_content(a);
    let cb = int_content(b);
    let gc = ca.gcd(&cb);
    let a = a.scale(&Rational::from_integer(ca).recip());
    let b = b.scale(&Rational::from_integer(cb).recip());
    // Evaluate the variable of largest degree first: it shrinks the problem most.
    let x = *vars.iter().max_by_key(|&&v| a.deg(v).max(b.deg(v))).unwrap();
    let dmax = a.deg(x).max(b.deg(x)) as u64;
    let mut xi: BigInt = 2 * max_norm(&a).min(max_norm(&b)) + 29;
    for _ in 0..6 {
        if xi.bits() * dmax.max(1) > HEU_BIT_LIMIT {
            return None;
        }
        let xi_q = Rational::from_integer(xi.clone());
        let ae = a.eval_at(x, &xi_q);
        let be = b.eval_at(x, &xi_q);
        if !ae.is_zero() && !be.is_zero() {
            if let Some(gamma) = heuristic_gcd(&ae, &be) {
                let g = genpoly(&gamma, &xi, x);
                if !g.is_zero() {
                    let gi = int_content(&g);
                    let g = g.scale(&Rational::from_integer(gi).recip());
                    if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                        return Some(g.scale(&Rational::from_integer(gc)));
                    }
                }
            }
        }
        xi = (xi * BigInt::from(73794)) / BigInt::from(27011);
    }
    None
}

/// Exact quotient helper used by callers that already know `d | p`.
pub fn quo(p: &Poly, d: &Poly) -> Poly {
    p.div_exact(d).expect("exact division")
}

/// True when `g` divides both arguments.
pub fn divides_both(g: &Poly, a: &Poly, b: &Poly) -> bool {
    a.div_exact(g).is_some() && b.div_exact(g).is_some()
}
