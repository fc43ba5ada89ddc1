//! Radial wave functions and Gauss-Laguerre quadrature of the integrals.
//!
//! The wave functions are `F = Phi(x) P_F(x)`, `G = Phi(x) P_G(x)` with
//! `x = 2 a beta r`, `Phi = x^(nu-1) e^(-x/2)` and
//! `P_F = alpha1 L_{n-1}^{2nu} + alpha2 L_n^{2nu}`,
//! `P_G = beta1 L_{n-1}^{2nu} + beta2 L_n^{2nu}`. The four coefficients are
//! fixed by the radial Dirac system (with `hbar = m = c = 1`)
//!
//! ```text
//! F' = -(1+kappa)/r F + (beta (1+eps) + mu/r) G
//! G' = -(1-kappa)/r G + (beta (1-eps) - mu/r) F
//! ```
//!
//! which after multiplying by `x / (2 a beta Phi)` reads
//!
//! ```text
//! x P_F' + (nu + kappa - x/2) P_F - ((1+eps) x/(2a) + mu) P_G = 0
//! x P_G' + (nu - kappa - x/2) P_G - ((1-eps) x/(2a) - mu) P_F = 0
//! ```
//!
//! a homogeneous linear system for `(alpha1, alpha2, beta1, beta2)` with a
//! one-dimensional solution space. The scale is fixed by `A_0 = 1` and the
//! relative sign of `G` by the linear relation between `A_0`, `B_0` and
//! `C_0`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::coulomb::{CoulombState, Integral};

use super::hyper::laguerre_coeffs;
use super::NumericError;

/// Nodes and weights for `int_0^inf x^alpha e^(-x) f(x) dx`, by the
/// Golub-Welsch eigenvalue method.
pub fn gauss_laguerre(nodes: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>), NumericError> {
    if nodes == 0 || alpha <= -1.0 {
        return Err(NumericError::DomainViolation(vec![format!(
            "Gauss-Laguerre needs nodes > 0 and alpha > -1, got {nodes}, {alpha}"
        )]));
    }
    let mut j = DMatrix::<f64>::zeros(nodes, nodes);
    for i in 0..nodes {
        j[(i, i)] = 2.0 * i as f64 + alpha + 1.0;
        if i + 1 < nodes {
            let off = ((i as f64 + 1.0) * (i as f64 + 1.0 + alpha)).sqrt();
            j[(i, i + 1)] = off;
            j[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mu0 = ln_gamma(alpha + 1.0).exp();
    let mut pairs: Vec<(f64, f64)> = (0..nodes)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Coefficients of the two radial components in the Laguerre basis.
#[derive(Clone, Debug, Serialize)]
pub struct Wavefunction {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Largest residual of the Dirac system relative to its terms.
    pub fit_residual: f64,
    n: i64,
    nu: f64,
    a: f64,
}

fn poly_mul_x(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend_from_slice(p);
    out
}

fn poly_deriv(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

fn poly_axpy(acc: &mut Vec<f64>, s: f64, p: &[f64]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += s * c;
    }
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Columns of the Dirac system: the contribution of each unknown to the
/// two equations, as power-basis coefficient vectors.
fn dirac_columns(state: &CoulombState<f64>) -> Vec<(Vec<f64>, Vec<f64>)> {
    let (n, nu, eps, a, mu, kappa) = (
        state.n,
        state.nu,
        state.eps,
        state.a,
        state.mu,
        state.kappa as f64,
    );
    let basis = [laguerre_coeffs(n - 1, 2.0 * nu), laguerre_coeffs(n, 2.0 * nu)];
    let mut cols = Vec::new();
    // Unknowns alpha1, alpha2 enter P_F; beta1, beta2 enter P_G.
    for (is_f, l) in [(true, &basis[0]), (true, &basis[1]), (false, &basis[0]), (false, &basis[1])] {
        let xl = poly_mul_x(l);
        let xdl = poly_mul_x(&poly_deriv(l));
        let mut own = xdl.clone();
        let mut other = Vec::new();
        let shift = if is_f { nu + kappa } else { nu - kappa };
        poly_axpy(&mut own, shift, l);
        poly_axpy(&mut own, -0.5, &xl);
        if is_f {
            // P_F enters the second equation as -((1-eps) x/(2a) - mu) P_F.
            poly_axpy(&mut other, -(1.0 - eps) / (2.0 * a), &xl);
            poly_axpy(&mut other, mu, l);
            cols.push((own, other));
        } else {
            // P_G enters the first equation as -((1+eps) x/(2a) + mu) P_G.
            poly_axpy(&mut other, -(1.0 + eps) / (2.0 * a), &xl);
            poly_axpy(&mut other, -mu, l);
            cols.push((other, own));
        }
    }
    cols
}

/// Solve the Dirac system for the Laguerre coefficients, normalize by
/// `A_0 = 1` and fix the sign of `G` by `4 mu C_0 = (2 kappa + eps) A_0 -
/// (2 eps kappa + 1) B_0`.
pub fn fit_wavefunction(state: &CoulombState<f64>, nodes: usize) -> Result<Wavefunction, NumericError> {
    let cols = dirac_columns(state);
    // For n = 0 the L_{-1} columns vanish; only alpha2, beta2 remain.
    let active: Vec<usize> = if state.n == 0 { vec![1, 3] } else { vec![0, 1, 2, 3] };
    let len = cols.iter().map(|(e1, e2)| e1.len().max(e2.len())).max().unwrap_or(0);
    let mut m = DMatrix::<f64>::zeros(2 * len, active.len());
    for (jc, &c) in active.iter().enumerate() {
        let (e1, e2) = &cols[c];
        for (i, v) in e1.iter().enumerate() {
            m[(i, jc)] = *v;
        }
        for (i, v) in e2.iter().enumerate() {
            m[(len + i, jc)] = *v;
        }
    }
    // Equilibrate rows so that every equation carries equal weight.
    for i in 0..m.nrows() {
        let s = m.row(i).amax();
        if s > 0.0 {
            m.row_mut(i).scale_mut(1.0 / s);
        }
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let smallest = sv[order[0]];
    let largest = sv[order[order.len() - 1]];
    let second = if order.len() > 1 { sv[order[1]] } else { largest };
    if smallest > 1e-9 * largest || second < 1e-6 * largest {
        return Err(NumericError::GatedFeature(format!(
            "the Dirac system does not determine a unique coefficient vector (singular values {smallest:e}, {second:e}, max {largest:e})"
        )));
    }
    let null = v_t.row(order[0]).transpose();
    let mut coef = [0.0f64; 4];
    for (jc, &c) in active.iter().enumerate() {
        coef[c] = null[jc];
    }
    let fit_residual = (&m * &null).amax() / m.amax();
    let mut wf = Wavefunction {
        alpha1: coef[0],
        alpha2: coef[1],
        beta1: coef[2],
        beta2: coef[3],
        fit_residual,
        n: state.n,
        nu: state.nu,
        a: state.a,
    };
    let a0 = wf.integral(Integral::A, 0, nodes)?;
    let scale = 1.0 / a0.sqrt();
    wf.alpha1 *= scale;
    wf.alpha2 *= scale;
    wf.beta1 *= scale;
    wf.beta2 *= scale;
    let b0 = wf.integral(Integral::B, 0, nodes)?;
    let c0 = wf.integral(Integral::C, 0, nodes)?;
    let k = state.kappa as f64;
    let predicted = ((2.0 * k + state.eps) - (2.0 * state.eps * k + 1.0) * b0) / (4.0 * state.mu);
    if predicted * c0 < 0.0 {
        wf.beta1 = -wf.beta1;
        wf.beta2 = -wf.beta2;
    }
    Ok(wf)
}

impl Wavefunction {
    fn components(&self) -> (Vec<f64>, Vec<f64>) {
        let l0 = laguerre_coeffs(self.n - 1, 2.0 * self.nu);
        let l1 = laguerre_coeffs(self.n, 2.0 * self.nu);
        let mut pf = Vec::new();
        let mut pg = Vec::new();
        poly_axpy(&mut pf, self.alpha1, &l0);
        poly_axpy(&mut pf, self.alpha2, &l1);
        poly_axpy(&mut pg, self.beta1, &l0);
        poly_axpy(&mut pg, self.beta2, &l1);
        (pf, pg)
    }

    /// `I_p` with `beta = 1`, by `nodes`-point Gauss-Laguerre quadrature
    /// with weight `x^(2nu+p) e^(-x)`.
    pub fn integral(&self, which: Integral, p: i64, nodes: usize) -> Result<f64, NumericError> {
        let alpha = 2.0 * self.nu + p as f64;
        let (xs, ws) = gauss_laguerre(nodes, alpha)?;
        let (pf, pg) = self.components();
        let mut sum = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            let f = poly_eval(&pf, *x);
            let g = poly_eval(&pg, *x);
            sum += w * match which {
                Integral::A => f * f + g * g,
                Integral::B => f * f - g * g,
                Integral::C => f * g,
            };
        }
        // r^(p+2) dr = (2a)^-(p+3) x^(p+2) dx.
        Ok(sum * (2.0 * self.a).powi(-(p as i32) - 3))
    }

    /// [`Wavefunction::integral`] with `nodes` and `2 nodes` points;
    /// fails when the two differ by more than `rel_tol`.
    pub fn integral_converged(&self, which: Integral, p: i64, nodes: usize, rel_tol: f64) -> Result<f64, NumericError> {
        let coarse = self.integral(which, p, nodes)?;
        let fine = self.integral(which, p, 2 * nodes)?;
        let diff = (fine - coarse).abs() / fine.abs().max(1e-300);
        if diff > rel_tol {
            return Err(NumericError::NotConverged { coarse, fine });
        }
        Ok(fine)
    }
}

/// `I_p` by quadrature. The wave function must come from
/// [`fit_wavefunction`] for the same state.
pub fn integral_by_quadrature(
    wf: Option<&Wavefunction>,
    which: Integral,
    p: i64,
    nodes: usize,
    rel_tol: f64,
) -> Result<f64, NumericError> {
    let wf = wf.ok_or_else(|| NumericError::GatedFeature("wave function coefficients unresolved".into()))?;
    if 2.0 * wf.nu + p as f64 <= -1.0 {
        return Err(NumericError::DomainViolation(vec![format!("p = {p} is not integrable at the origin")]));
    }
    wf.integral_converged(which, p, nodes, rel_tol)
}
