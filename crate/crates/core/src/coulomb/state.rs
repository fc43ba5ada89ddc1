//! Physical parameters of a Dirac bound state in a Coulomb field.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::CoulombError;
use crate::exactalg::{Poly, Var};
use crate::scalar::Real;
use crate::Rational;

/// Fine-structure constant used when none is given.
pub const DEFAULT_ALPHA: &str = "7.2973525693e-3";

/// Exact rational value of a decimal literal such as `7.2973525693e-3`.
pub fn rational_from_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// A bound state `(Z, n, kappa)` with its derived parameters evaluated in
/// `S`. Units are `hbar = m = c = 1`, so `beta = 1`.
#[derive(Clone, Debug)]
pub struct CoulombState<S> {
    pub z: i64,
    pub n: i64,
    pub kappa: i64,
    pub alpha_fs: Rational,
    /// `j = |kappa| - 1/2`.
    pub j: Rational,
    pub mu: S,
    pub nu: S,
    pub eps: S,
    pub a: S,
    pub beta: S,
    pub gamma: S,
}

/// Build a numeric state. `eps` and `a` come from `eps mu = a (nu + n)`
/// and `eps^2 + a^2 = 1`, which give `eps = (nu+n)/s`, `a = mu/s` with
/// `s = sqrt(mu^2 + (nu+n)^2)`.
pub fn make_state<S: Real>(z: i64, n: i64, kappa: i64, alpha: &Rational) -> Result<CoulombState<S>, CoulombError> {
    if z < 1 {
        return Err(CoulombError::UnphysicalState(format!("Z = {z} must be positive")));
    }
    if n < 0 {
        return Err(CoulombError::UnphysicalState(format!("n = {n} must be nonnegative")));
    }
    if kappa == 0 {
        return Err(CoulombError::UnphysicalState("kappa must be nonzero".into()));
    }
    if !alpha.is_positive() {
        return Err(CoulombError::UnphysicalState("alpha must be positive".into()));
    }
    let mu_q = alpha * Rational::from_integer(z.into());
    let kappa_q = Rational::from_integer(kappa.into());
    let nu2 = &kappa_q * &kappa_q - &mu_q * &mu_q;
    if !nu2.is_positive() {
        return Err(CoulombError::UnphysicalState(format!(
            "mu = alpha Z = {} is not below |kappa| = {}",
            S::from_rational(&mu_q).approx_f64(),
            kappa.abs()
        )));
    }
    // With n = 0 the radial equations only admit kappa < 0; for kappa > 0
    // gamma = mu (kappa - nu)(eps kappa - nu) vanishes.
    if n == 0 && kappa > 0 {
        return Err(CoulombError::UnphysicalState("n = 0 requires kappa < 0".into()));
    }
    let mu = S::from_rational(&mu_q);
    let nu = S::from_rational(&nu2).sqrt();
    let nun = nu.clone() + S::from_i64(n);
    let s = (mu.clone() * mu.clone() + nun.clone() * nun.clone()).sqrt();
    let eps = nun / s.clone();
    let a = mu.clone() / s;
    let kap = S::from_i64(kappa);
    let gamma = mu.clone() * (kap.clone() - nu.clone()) * (eps.clone() * kap - nu.clone());
    Ok(CoulombState {
        z,
        n,
        kappa,
        alpha_fs: alpha.clone(),
        j: Rational::from_integer(kappa.abs().into()) - Rational::new(BigInt::one(), BigInt::from(2)),
        mu,
        nu,
        eps,
        a,
        beta: S::one(),
        gamma,
    })
}

impl<S: Real> CoulombState<S> {
    /// Value of a physical symbol. `p` and unknown symbols are not
    /// handled here.
    pub fn value(&self, v: Var) -> Option<S> {
        Some(match v {
            Var::N => S::from_i64(self.n),
            Var::NU => self.nu.clone(),
            Var::EPS => self.eps.clone(),
            Var::A => self.a.clone(),
            Var::KAPPA => S::from_i64(self.kappa),
            Var::MU => self.mu.clone(),
            Var::BETA => self.beta.clone(),
            _ => return None,
        })
    }

    /// Largest absolute residual of the defining identities, relative to
    /// the size of the terms involved.
    pub fn identity_residual(&self) -> f64 {
        let n = S::from_i64(self.n);
        let kap = S::from_i64(self.kappa);
        let one = S::one();
        let checks = [
            (self.eps.clone() * self.eps.clone() + self.a.clone() * self.a.clone(), one),
            (self.eps.clone() * self.mu.clone(), self.a.clone() * (self.nu.clone() + n.clone())),
            (
                kap.clone() * kap.clone(),
                self.nu.clone() * self.nu.clone() + self.mu.clone() * self.mu.clone(),
            ),
            (
                self.eps.clone() * self.eps.clone() * kap.clone() * kap.clone() - self.nu.clone() * self.nu.clone(),
                self.a.clone() * self.a.clone() * n.clone() * (n + S::from_i64(2) * self.nu.clone()),
            ),
            (
                self.mu.clone() * self.mu.clone() - self.a.clone() * self.a.clone() * kap.clone() * kap,
                self.eps.clone() * self.eps.clone() * S::from_i64(self.kappa * self.kappa)
                    - self.nu.clone() * self.nu.clone(),
            ),
        ];
        checks
            .into_iter()
            .map(|(l, r)| {
                let scale = l.abs_f64().max(r.abs_f64()).max(1.0);
                (l - r).abs_f64() / scale
            })
            .fold(0.0, f64::max)
    }
}

/// The relations tying the physical symbols together, each as a
/// polynomial that vanishes on physical states.
pub fn physical_constraints() -> Vec<(&'static str, Poly)> {
    let v = Poly::var;
    let one = Poly::one();
    vec![
        ("eps*mu - a*(nu+n)", &(&v(Var::EPS) * &v(Var::MU)) - &(&v(Var::A) * &(&v(Var::NU) + &v(Var::N)))),
        ("eps^2 + a^2 - 1", &(&v(Var::EPS).pow(2) + &v(Var::A).pow(2)) - &one),
        ("kappa^2 - nu^2 - mu^2", &(&v(Var::KAPPA).pow(2) - &v(Var::NU).pow(2)) - &v(Var::MU).pow(2)),
    ]
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;

    #[test]
    fn decimal_literals() {
        let q = rational_from_decimal("7.2973525693e-3").unwrap();
        assert_eq!(q, Rational::new(72973525693i64.into(), BigInt::from(10).pow(13)));
        assert_eq!(rational_from_decimal("-2.5").unwrap(), Rational::new((-5).into(), 2.into()));
        assert_eq!(rational_from_decimal("3e2").unwrap(), Rational::from_integer(300.into()));
        assert!(rational_from_decimal("x1").is_none());
        assert!(rational_from_decimal("1.5").unwrap() > Rational::zero());
    }
}
