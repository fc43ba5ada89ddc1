//! Terminating 3F2 sums and Laguerre polynomials in floating point.

use crate::scalar::Real;

use super::NumericError;

/// Distance from an integer below which a parameter counts as one.
const INTEGER_SLACK: f64 = 1e-12;

fn nonpositive_integer<S: Real>(x: &S) -> Option<usize> {
    let v = x.approx_f64();
    let r = v.round();
    if r <= 0.0 && (v - r).abs() <= INTEGER_SLACK * r.abs().max(1.0) {
        Some((-r) as usize)
    } else {
        None
    }
}

/// `sum_k (a1)_k (a2)_k (a3)_k / ((b1)_k (b2)_k k!)`, summed left to right
/// up to the first vanishing upper parameter.
pub fn eval_3f2_terminating<S: Real>(upper: &[S; 3], lower: &[S; 2]) -> Result<S, NumericError> {
    let nmax = upper
        .iter()
        .filter_map(nonpositive_integer)
        .min()
        .ok_or_else(|| NumericError::NonTerminating(format!("{upper:?}")))?;
    for b in lower {
        if let Some(m) = nonpositive_integer(b) {
            if m < nmax {
                return Err(NumericError::DomainViolation(vec![format!(
                    "lower parameter {} hits a pole before the series terminates",
                    b.approx_f64()
                )]));
            }
        }
    }
    let mut term = S::one();
    let mut sum = S::one();
    for k in 0..nmax {
        let kk = S::from_i64(k as i64);
        let num = (upper[0].clone() + kk.clone()) * (upper[1].clone() + kk.clone()) * (upper[2].clone() + kk.clone());
        let den = (lower[0].clone() + kk.clone()) * (lower[1].clone() + kk.clone()) * (kk + S::one());
        term = term * num / den;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// `L_n^lam(x)` by `(k+1) L_{k+1} = (2k+1+lam-x) L_k - (k+lam) L_{k-1}`.
/// `L_{-1}` is taken as zero.
pub fn laguerre<S: Real>(n: i64, lam: &S, x: &S) -> S {
    if n < 0 {
        return S::zero();
    }
    let mut prev = S::zero();
    let mut cur = S::one();
    for k in 0..n {
        let kk = S::from_i64(k);
        let next = ((S::from_i64(2 * k + 1) + lam.clone() - x.clone()) * cur.clone() - (kk.clone() + lam.clone()) * prev)
            / (kk + S::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-basis coefficients of `L_n^lam`:
/// `c_i = (-1)^i (lam+i+1)_{n-i} / ((n-i)! i!)`.
pub fn laguerre_coeffs(n: i64, lam: f64) -> Vec<f64> {
    if n < 0 {
        return Vec::new();
    }
    let n = n as usize;
    (0..=n)
        .map(|i| {
            let mut c = 1.0;
            for j in 0..(n - i) {
                c *= (lam + (i + 1 + j) as f64) / (j + 1) as f64;
            }
            for j in 1..=i {
                c /= j as f64;
            }
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}
