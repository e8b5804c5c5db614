//! Exact Gauss–Jordan elimination over ℚ.

use num_rational::BigRational;
use num_traits::Zero;

pub(crate) struct RationalSolution {
    /// Particular solution with every free variable set to zero.
    pub values: Vec<BigRational>,
    pub kernel_dim: usize,
}

/// Solve `A v = b` exactly. Returns `None` when the system is inconsistent.
///
/// Pivots are taken left to right, so earlier columns are preferred as
/// basic variables and later columns end up free (and zero).
pub(crate) fn solve(mut rows: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>, ncols: usize) -> Option<RationalSolution> {
    let nrows = rows.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(sel) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        rhs.swap(r, sel);
        let piv = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v = &*v / &piv;
        }
        rhs[r] = &rhs[r] / &piv;
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..ncols {
                if rows[r][j].is_zero() {
                    continue;
                }
                let d = &f * &rows[r][j];
                rows[i][j] -= d;
            }
            let d = &f * &rhs[r];
            rhs[i] -= d;
        }
        pivots.push((r, col));
        r += 1;
    }
    if rhs[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut values = vec![BigRational::zero(); ncols];
    for &(row, col) in &pivots {
        values[col] = rhs[row].clone();
    }
    Some(RationalSolution { values, kernel_dim: ncols - pivots.len() })
}
