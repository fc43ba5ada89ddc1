//! Linear systems over the field of rational functions.
//!
//! Gauss-Jordan elimination with columns processed left to right and, within
//! a column, the pivot of smallest term count. Column order therefore
//! decides which unknowns end up free: later columns are preferred as
//! nullspace parameters.

use super::poly::Poly;
use super::ratfun::RatFun;

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<RatFun>>,
    pub nullspace: Vec<Vec<RatFun>>,
}

impl Solution {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }
}

/// Reduced row echelon form. Returns the nonzero rows and the pivot column
/// of each.
pub fn rref(rows: &[Vec<RatFun>], ncols: usize) -> (Vec<Vec<RatFun>>, Vec<usize>) {
    let mut m: Vec<Vec<RatFun>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].complexity(), i));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][col].inv();
        for j in col..ncols {
            if !m[r][j].is_zero() {
                m[r][j] = &m[r][j] * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in col..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : A x = 0}`, one vector per free column.
pub fn nullspace(rows: &[Vec<RatFun>], ncols: usize) -> Vec<Vec<RatFun>> {
    let (m, pivots) = rref(rows, ncols);
    nullspace_from_rref(&m, &pivots, ncols)
}

fn nullspace_from_rref(m: &[Vec<RatFun>], pivots: &[usize], ncols: usize) -> Vec<Vec<RatFun>> {
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RatFun::zero(); ncols];
        v[f] = RatFun::one();
        for (row, &pc) in m.iter().zip(pivots) {
            v[pc] = -&row[f];
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b`. An inconsistent system yields `particular: None`.
pub fn solve_linear(a: &[Vec<RatFun>], b: &[RatFun]) -> Solution {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<RatFun>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return Solution {
            particular: None,
            nullspace: Vec::new(),
        };
    }
    let mut x = vec![RatFun::zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    let coeff: Vec<Vec<RatFun>> = m.iter().map(|r| r[..ncols].to_vec()).collect();
    Solution {
        particular: Some(x),
        nullspace: nullspace_from_rref(&coeff, &pivots, ncols),
    }
}

/// `A x`, for checking solutions.
pub fn mat_vec(a: &[Vec<RatFun>], x: &[RatFun]) -> Vec<RatFun> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(c, v)| !c.is_zero() && !v.is_zero())
                .fold(RatFun::zero(), |acc, (c, v)| &acc + &(c * v))
        })
        .collect()
}

/// Nullspace basis of a polynomial matrix by fraction-free elimination.
///
/// Every entry stays a polynomial: after `r` eliminations each entry is an
/// `(r+1)`-minor of the input, so the Bareiss divisions are exact. Each
/// returned vector has its free column set to the determinant of the pivot
/// block and is therefore polynomial too (Cramer's rule). Vectors are not
/// content-reduced.
pub fn nullspace_poly(rows: &[Vec<Poly>], ncols: usize) -> Vec<Vec<Poly>> {
    let mut m: Vec<Vec<Poly>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots = Vec::new();
    let mut prev = Poly::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| (m[i][col].len(), i));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let piv = m[r][col].clone();
        for i in r + 1..m.len() {
            let f = m[i][col].clone();
            for j in col..ncols {
                let t = &(&m[i][j] * &piv) - &(&f * &m[r][j]);
                m[i][j] = if prev.is_one() { t } else { t.div_exact(&prev).expect("Bareiss division is exact") };
            }
        }
        // Rows above the pivot row keep their earlier scale; only the rows
        // below take part in the minor structure.
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    let det = m.last().map_or(Poly::one(), |row| row[*pivots.last().unwrap()].clone());
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Poly::zero(); ncols];
        x[f] = det.clone();
        for i in (0..r).rev() {
            let pc = pivots[i];
            let mut acc = Poly::zero();
            for j in pc + 1..ncols {
                if !m[i][j].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&m[i][j] * &x[j]);
                }
            }
            x[pc] = (-&acc).div_exact(&m[i][pc]).expect("Cramer solution is polynomial");
        }
        basis.push(x);
    }
    basis
}
