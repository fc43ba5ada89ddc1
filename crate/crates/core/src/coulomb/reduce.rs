//! Canonical forms modulo the physical identities.
//!
//! After eliminating `n = (eps mu - a nu)/a`, the remaining relations
//! `eps^2 = 1 - a^2` and `kappa^2 = nu^2 + mu^2` have coprime leading
//! monomials `eps^2`, `kappa^2`, so they already form a Groebner basis and
//! replacing those squares until `eps` and `kappa` occur at most linearly
//! yields the unique normal form. The ideal is prime, hence an expression
//! vanishes on all physical states iff its normal form is zero.

use crate::exactalg::{Poly, RatFun, Var};

/// Normal form of `p`: `n` eliminated (the result is multiplied by
/// `a^deg_n(p)` to stay polynomial), then `eps^2 -> 1 - a^2` and
/// `kappa^2 -> nu^2 + mu^2`.
pub fn physics_reduce(p: &Poly) -> Poly {
    reduce_with_degree(p).0
}

/// Normal form of a rational function; numerator and denominator are
/// reduced separately with matching powers of `a`.
pub fn physics_reduce_ratfun(r: &RatFun) -> RatFun {
    let (num, dn) = reduce_with_degree(r.numer());
    let (den, dd) = reduce_with_degree(r.denom());
    let a = Poly::var(Var::A);
    if dn >= dd {
        RatFun::new(num, &den * &a.pow(dn - dd))
    } else {
        RatFun::new(&num * &a.pow(dd - dn), den)
    }
}

/// True when `r` vanishes on every physical state.
pub fn is_physically_zero(r: &RatFun) -> bool {
    physics_reduce(r.numer()).is_zero()
}

fn reduce_with_degree(p: &Poly) -> (Poly, u32) {
    let d = p.deg(Var::N);
    let without_n = eliminate_n(p, d);
    let a2 = Poly::var(Var::A).pow(2);
    let eps_sq = &Poly::one() - &a2;
    let kappa_sq = &Poly::var(Var::NU).pow(2) + &Poly::var(Var::MU).pow(2);
    let r = fold_square(&without_n, Var::EPS, &eps_sq);
    (fold_square(&r, Var::KAPPA, &kappa_sq), d)
}

/// `a^d p(n = (eps mu - a nu)/a)` for `d = deg_n p`.
fn eliminate_n(p: &Poly, d: u32) -> Poly {
    if d == 0 {
        return p.clone();
    }
    let a = Poly::var(Var::A);
    let an = &(&Poly::var(Var::EPS) * &Poly::var(Var::MU)) - &(&a * &Poly::var(Var::NU));
    let coeffs = p.coeffs_in(Var::N);
    let mut acc = Poly::zero();
    let mut an_pow = Poly::one();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(&(c * &an_pow) * &a.pow(d - i as u32));
        }
        an_pow = &an_pow * &an;
    }
    acc
}

/// Replace `v^2` by `sq` until `v` has degree at most one.
fn fold_square(p: &Poly, v: Var, sq: &Poly) -> Poly {
    let coeffs = p.coeffs_in(v);
    if coeffs.len() <= 2 {
        return p.clone();
    }
    let mut even = Poly::zero();
    let mut odd = Poly::zero();
    let mut sq_pow = Poly::one();
    for pair in coeffs.chunks(2) {
        even = &even + &(&pair[0] * &sq_pow);
        if let Some(c1) = pair.get(1) {
            odd = &odd + &(c1 * &sq_pow);
        }
        sq_pow = &sq_pow * sq;
    }
    &even + &(&odd * &Poly::var(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::parse_poly;

    #[test]
    fn squares_fold() {
        let p = parse_poly("eps^3*kappa^2").unwrap();
        let expected = parse_poly("(1-a^2)*eps*(nu^2+mu^2)").unwrap();
        assert_eq!(physics_reduce(&p), expected);
    }

    #[test]
    fn n_is_eliminated() {
        let p = parse_poly("a*n - eps*mu + a*nu").unwrap();
        assert!(physics_reduce(&p).is_zero());
    }
}
