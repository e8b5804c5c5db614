//! Three-point finite differences on a Dirichlet box with Richardson
//! extrapolation in `h²`.

use serde::Serialize;

use super::linalg::{tridiagonal_eigenvector, tridiagonal_lowest};
use super::result::{EigResult, Method};
use super::{PotentialSpec, SpectraError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridConfig {
    /// The box is `[−half_width, half_width]`.
    pub half_width: f64,
    /// Interior grid points of the finest grid.
    pub n_points: usize,
    /// Number of successively halved grids folded into the extrapolation
    /// (0 returns the raw fine-grid levels).
    pub richardson_levels: usize,
    pub rel_tol: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: 8.0, n_points: 4000, richardson_levels: 2, rel_tol: None }
    }
}

/// Eigenvector mass beyond this fraction of the half width counts as
/// touching the wall.
const BOUNDARY_FRACTION: f64 = 0.95;
const BOUNDARY_MASS_MAX: f64 = 1e-10;

struct Grid {
    diag: Vec<f64>,
    off: Vec<f64>,
    h: f64,
}

fn build_grid(pot: &PotentialSpec, half_width: f64, n: usize) -> Grid {
    let h = 2.0 * half_width / (n + 1) as f64;
    let kin = pot.kinetic_coeff / (h * h);
    let diag = (1..=n).map(|j| 2.0 * kin + pot.eval(-half_width + j as f64 * h)).collect();
    Grid { diag, off: vec![-kin; n - 1], h }
}

/// Raw lowest `k` levels on an `n`-point grid.
pub fn finite_difference_levels(pot: &PotentialSpec, half_width: f64, n: usize, k: usize) -> Vec<f64> {
    let g = build_grid(pot, half_width, n);
    tridiagonal_lowest(&g.diag, &g.off, k)
}

/// Neville extrapolation of `(t_i, e_i)` to `t = 0`; returns the final value
/// and the previous diagonal entry.
fn neville_to_zero(t: &[f64], e: &[f64]) -> (f64, f64) {
    let mut p = e.to_vec();
    let mut prev = p[0];
    for m in 1..t.len() {
        prev = p[0];
        for i in 0..t.len() - m {
            p[i] = (t[i + m] * p[i] - t[i] * p[i + 1]) / (t[i + m] - t[i]);
        }
    }
    (p[0], prev)
}

pub fn finite_difference_eigs(pot: &PotentialSpec, grid: &GridConfig, k: usize) -> Result<EigResult, SpectraError> {
    let l = grid.half_width;
    if !(l > 0.0 && l.is_finite()) {
        return Err(SpectraError::InvalidConfig(format!("half width {l} must be positive")));
    }
    let mut sizes = vec![grid.n_points];
    for _ in 0..grid.richardson_levels.max(1) {
        let last = *sizes.last().unwrap();
        sizes.push(last.div_ceil(2).saturating_sub(1));
    }
    let coarsest = *sizes.last().unwrap();
    if k == 0 || grid.n_points < 3 || coarsest < 4 * k + 3 {
        return Err(SpectraError::InvalidConfig(format!(
            "n_points = {} too small for k = {k} with {} Richardson levels",
            grid.n_points, grid.richardson_levels
        )));
    }

    let fine = build_grid(pot, l, grid.n_points);
    let raw = tridiagonal_lowest(&fine.diag, &fine.off, k);

    let e_max = *raw.last().unwrap();
    let wall = pot.eval(-l).min(pot.eval(l));
    if wall <= e_max {
        return Err(SpectraError::BoxTooSmall { half_width: l, level: k - 1, detail: format!("V(±L) = {wall} ≤ E = {e_max}") });
    }
    for (level, &e) in raw.iter().enumerate() {
        let v = tridiagonal_eigenvector(&fine.diag, &fine.off, e);
        let mass: f64 = v
            .iter()
            .enumerate()
            .filter(|(j, _)| (-l + (*j + 1) as f64 * fine.h).abs() > BOUNDARY_FRACTION * l)
            .map(|(_, c)| c * c)
            .sum();
        if mass > BOUNDARY_MASS_MAX {
            return Err(SpectraError::BoxTooSmall { half_width: l, level, detail: format!("boundary mass {mass:.3e}") });
        }
    }

    let mut ts = vec![fine.h * fine.h];
    let mut levels = vec![raw];
    for &n in &sizes[1..] {
        let h = 2.0 * l / (n + 1) as f64;
        ts.push(h * h);
        levels.push(finite_difference_levels(pot, l, n, k));
    }

    let mut values = Vec::with_capacity(k);
    let mut errors = Vec::with_capacity(k);
    for i in 0..k {
        let es: Vec<f64> = levels.iter().map(|lv| lv[i]).collect();
        if grid.richardson_levels == 0 {
            // plain Richardson estimate of the raw fine-grid error
            let r = ts[1] / ts[0];
            values.push(es[0]);
            errors.push((es[0] - es[1]).abs() / (r - 1.0));
        } else {
            let (v, prev) = neville_to_zero(&ts, &es);
            values.push(v);
            errors.push((v - prev).abs());
        }
    }

    if let Some(tol) = grid.rel_tol {
        if let Some((level, (v, e))) =
            values.iter().zip(&errors).enumerate().find(|(_, (v, e))| **e > tol * v.abs().max(1.0))
        {
            return Err(SpectraError::NotConverged { level, value: *v, estimate: *e });
        }
    }

    let params = serde_json::json!({
        "potential": pot,
        "half_width": l,
        "n_points": grid.n_points,
        "grids": sizes,
        "richardson_levels": grid.richardson_levels,
    });
    Ok(EigResult::new(Method::FiniteDifference, params, values, errors))
}
