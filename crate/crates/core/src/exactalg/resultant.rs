//! Resultants via the Sylvester matrix.
//!
//! Sign convention: `Res_x(a, b) = lc(a)^deg(b) * prod b(root of a)`, the
//! determinant of the Sylvester matrix with the `deg b` shifted rows of `a`
//! on top. Thus `Res_x(x - u, x - v) = u - v`.

use super::poly::Poly;
use super::var::Var;
use crate::error::AlgebraError;

pub fn resultant(a: &Poly, b: &Poly, v: Var) -> Result<Poly, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::DegenerateResultant);
    }
    let m = a.deg(v) as usize;
    let n = b.deg(v) as usize;
    if m == 0 {
        return Ok(a.pow(n as u32));
    }
    if n == 0 {
        return Ok(b.pow(m as u32));
    }
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let size = m + n;
    let mut mat = vec![vec![Poly::zero(); size]; size];
    // Row i of the a-block holds a's coefficients, highest degree first,
    // starting at column i.
    for i in 0..n {
        for (j, c) in ac.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in bc.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant. Every division is exact.
pub fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let size = m.len();
    if size == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..size).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[size - 1][size - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}
