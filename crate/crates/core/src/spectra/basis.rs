//! Rayleigh–Ritz truncation in harmonic-oscillator eigenfunctions.

use serde::Serialize;

use super::linalg::{householder_tridiagonal, jacobi_eigenvalues, tridiagonal_lowest, SymMatrix};
use super::result::{EigResult, Method};
use super::{PotentialSpec, SpectraError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseSolver {
    /// Householder tridiagonalisation followed by Sturm bisection.
    Householder,
    /// Cyclic Jacobi rotations on the full matrix.
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasisConfig {
    pub n_basis: usize,
    /// Oscillator frequency of the basis; chosen variationally when `None`.
    pub omega: Option<f64>,
    /// Size reduction used for the convergence estimate.
    pub delta: usize,
    /// Fail with `NotConverged` when a relative estimate exceeds this.
    pub rel_tol: Option<f64>,
    pub solver: DenseSolver,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self { n_basis: 200, omega: None, delta: 20, rel_tol: None, solver: DenseSolver::Householder }
    }
}

impl BasisConfig {
    pub fn with_n(n_basis: usize) -> Self {
        Self { n_basis, delta: (n_basis / 10).max(4), ..Self::default() }
    }
}

/// `⟨0|y^{2m}|0⟩ = (2m−1)!! / (2ω)^m` for the oscillator of frequency `ω`.
fn ground_moment(power: usize, omega: f64) -> f64 {
    if power % 2 == 1 {
        return 0.0;
    }
    let m = power / 2;
    let dfact: f64 = (1..=m).map(|j| (2 * j - 1) as f64).product();
    dfact / (2.0 * omega).powi(m as i32)
}

/// Basis-ground-state energy `⟨0|H|0⟩` as a function of the basis frequency.
pub fn ground_expectation(pot: &PotentialSpec, omega: f64) -> f64 {
    pot.kinetic_coeff * 0.5 * omega
        + pot.poly_coeffs.iter().enumerate().map(|(k, c)| c * ground_moment(k, omega)).sum::<f64>()
}

/// Minimise `⟨0|H|0⟩` over `ω` by golden section on `ln ω`.
pub fn optimal_omega(pot: &PotentialSpec) -> f64 {
    let (mut lo, mut hi) = ((1e-4f64).ln(), (1e4f64).ln());
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let f = |t: f64| ground_expectation(pot, t.exp());
    // coarse scan so the golden search starts in the right basin
    let n = 80;
    let best = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap();
    let step = (hi - lo) / n as f64;
    lo = best - step;
    hi = best + step;
    for _ in 0..100 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Matrix of `kinetic·p² + V(y)` in the first `n` oscillator states.
///
/// Powers of `y` are formed in a basis enlarged by the degree of `V` before
/// truncating, so every entry is the exact projection.
pub fn hamiltonian_matrix(pot: &PotentialSpec, n: usize, omega: f64) -> SymMatrix {
    let deg = pot.degree();
    let big = n + deg + 1;
    // y_{j,j+1} = √((j+1)/(2ω))
    let y_off: Vec<f64> = (0..big - 1).map(|j| ((j + 1) as f64 / (2.0 * omega)).sqrt()).collect();

    let mut h = SymMatrix::zeros(n);
    // kinetic: p²_{jj} = ω(j+½), p²_{j,j+2} = −(ω/2)√((j+1)(j+2))
    for j in 0..n {
        h.add_sym(j, j, pot.kinetic_coeff * omega * (j as f64 + 0.5));
        if j + 2 < n {
            h.add_sym(j, j + 2, -pot.kinetic_coeff * 0.5 * omega * (((j + 1) * (j + 2)) as f64).sqrt());
        }
    }

    // power[k] holds y^k as a banded matrix: rows 0..big, band offset −k..=k
    let mut power: Vec<Vec<f64>> = vec![vec![0.0; 1]; big];
    for row in power.iter_mut() {
        row[0] = 1.0;
    }
    let mut band = 0usize;
    for k in 0..=deg {
        let c = pot.poly_coeffs[k];
        if c != 0.0 {
            for i in 0..n {
                for j in i..n.min(i + band + 1) {
                    let off = j as isize - i as isize + band as isize;
                    let v = power[i][off as usize];
                    if v != 0.0 {
                        h.add_sym(i, j, c * v);
                    }
                }
            }
        }
        if k == deg {
            break;
        }
        // multiply by the tridiagonal y
        let nb = band + 1;
        let mut next = vec![vec![0.0; 2 * nb + 1]; big];
        for i in 0..big {
            for off in 0..(2 * band + 1) {
                let v = power[i][off];
                if v == 0.0 {
                    continue;
                }
                let j = i as isize + off as isize - band as isize;
                if j < 0 || j as usize >= big {
                    continue;
                }
                let j = j as usize;
                // (y^k · y)_{i,l} = Σ_j (y^k)_{ij} y_{jl}, l = j ± 1
                if j + 1 < big {
                    let l = j + 1;
                    next[i][(l as isize - i as isize + nb as isize) as usize] += v * y_off[j];
                }
                if j >= 1 {
                    let l = j - 1;
                    next[i][(l as isize - i as isize + nb as isize) as usize] += v * y_off[j - 1];
                }
            }
        }
        power = next;
        band = nb;
    }
    h
}

fn lowest_eigenvalues(m: &SymMatrix, k: usize, solver: DenseSolver) -> Vec<f64> {
    match solver {
        DenseSolver::Householder => {
            let (d, e) = householder_tridiagonal(m);
            tridiagonal_lowest(&d, &e, k)
        }
        DenseSolver::Jacobi => jacobi_eigenvalues(m, 100).into_iter().take(k).collect(),
    }
}

/// Lowest `k` eigenvalues of `kinetic·p² + V(y)` in a truncated oscillator
/// basis. The error estimate of each level is its shift between the
/// `n_basis` and `n_basis − delta` truncations.
pub fn oscillator_basis_eigs(pot: &PotentialSpec, basis: &BasisConfig, k: usize) -> Result<EigResult, SpectraError> {
    let n = basis.n_basis;
    if k == 0 || 2 * k > n {
        return Err(SpectraError::InvalidConfig(format!("need 1 <= k <= n_basis/2, got k = {k}, n_basis = {n}")));
    }
    if basis.delta == 0 || n - basis.delta < k {
        return Err(SpectraError::InvalidConfig(format!("delta = {} incompatible with n_basis = {n}", basis.delta)));
    }
    let omega = match basis.omega {
        Some(w) if w > 0.0 && w.is_finite() => w,
        Some(w) => return Err(SpectraError::InvalidConfig(format!("omega = {w} must be positive"))),
        None => optimal_omega(pot),
    };
    let full = hamiltonian_matrix(pot, n, omega);
    let values = lowest_eigenvalues(&full, k, basis.solver);
    let smaller = lowest_eigenvalues(&full.leading(n - basis.delta), k, basis.solver);
    let errors: Vec<f64> = values.iter().zip(&smaller).map(|(a, b)| (a - b).abs()).collect();

    if let Some(tol) = basis.rel_tol {
        if let Some((level, (v, e))) =
            values.iter().zip(&errors).enumerate().find(|(_, (v, e))| **e > tol * v.abs().max(1.0))
        {
            return Err(SpectraError::NotConverged { level, value: *v, estimate: *e });
        }
    }

    let params = serde_json::json!({
        "potential": pot,
        "n_basis": n,
        "omega": omega,
        "delta": basis.delta,
        "solver": basis.solver,
    });
    Ok(EigResult::new(Method::OscillatorBasis, params, values, errors))
}

/// Double `n_basis` from `start` until the highest requested level moves by
/// less than `rel_tol` (relative), up to `max_n`.
pub fn oscillator_basis_converged(
    pot: &PotentialSpec,
    k: usize,
    rel_tol: f64,
    start: usize,
    max_n: usize,
) -> Result<EigResult, SpectraError> {
    let omega = optimal_omega(pot);
    let mut n = start.max(2 * k);
    let mut prev: Option<f64> = None;
    loop {
        let cfg = BasisConfig { omega: Some(omega), ..BasisConfig::with_n(n) };
        let r = oscillator_basis_eigs(pot, &cfg, k)?;
        let top = r.values[k - 1];
        if let Some(p) = prev {
            if (top - p).abs() <= rel_tol * top.abs().max(1.0) {
                return Ok(r);
            }
        }
        if n >= max_n {
            let estimate = prev.map(|p| (top - p).abs()).unwrap_or(f64::INFINITY);
            return Err(SpectraError::NotConverged { level: k - 1, value: top, estimate });
        }
        prev = Some(top);
        n = (2 * n).min(max_n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_levels() {
        let r = oscillator_basis_eigs(&PotentialSpec::harmonic(), &BasisConfig::with_n(40), 6).unwrap();
        for (j, v) in r.values.iter().enumerate() {
            assert!((v - (2 * j + 1) as f64).abs() < 1e-10, "level {j}: {v}");
        }
    }

    #[test]
    fn harmonic_optimal_omega_is_one() {
        let w = optimal_omega(&PotentialSpec::harmonic());
        assert!((w - 1.0).abs() < 1e-6);
    }

    #[test]
    fn matrix_is_exact_projection() {
        // y⁴ diagonal: 3(2j² + 2j + 1)/(4ω²)
        let pot = PotentialSpec::new(1.0, vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let omega = 1.7;
        let h = hamiltonian_matrix(&pot, 10, omega);
        for j in 0..10 {
            let jf = j as f64;
            let expected = omega * (jf + 0.5) + 3.0 * (2.0 * jf * jf + 2.0 * jf + 1.0) / (4.0 * omega * omega);
            assert!((h.get(j, j) - expected).abs() < 1e-12, "{j}");
        }
        // ⟨j|y⁴|j+4⟩ = √((j+1)(j+2)(j+3)(j+4)) / (4ω²)
        let expected = (1.0f64 * 2.0 * 3.0 * 4.0).sqrt() / (4.0 * omega * omega);
        assert!((h.get(0, 4) - expected).abs() < 1e-12);
        // the last row is complete despite truncation
        let expected = ((6.0f64 * 7.0 * 8.0 * 9.0).sqrt()) / (4.0 * omega * omega);
        assert!((h.get(5, 9) - expected).abs() < 1e-12);
    }

    #[test]
    fn solvers_agree() {
        let pot = PotentialSpec::scaled_quartic(16.0, 0.0).unwrap();
        let a = oscillator_basis_eigs(&pot, &BasisConfig::with_n(60), 4).unwrap();
        let b = oscillator_basis_eigs(&pot, &BasisConfig { solver: DenseSolver::Jacobi, ..BasisConfig::with_n(60) }, 4).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_too_many_levels() {
        let pot = PotentialSpec::harmonic();
        assert!(oscillator_basis_eigs(&pot, &BasisConfig::with_n(10), 6).is_err());
        assert!(oscillator_basis_eigs(&pot, &BasisConfig { omega: Some(-1.0), ..BasisConfig::with_n(10) }, 2).is_err());
    }

    #[test]
    fn not_converged_is_reported() {
        let pot = PotentialSpec::scaled_quartic(16.0, 0.0).unwrap();
        let cfg = BasisConfig { rel_tol: Some(1e-12), ..BasisConfig::with_n(12) };
        assert!(matches!(oscillator_basis_eigs(&pot, &cfg, 6), Err(SpectraError::NotConverged { .. })));
    }

    #[test]
    fn adaptive_doubling() {
        let pot = PotentialSpec::scaled_quartic(16.0, 0.0).unwrap();
        let r = oscillator_basis_converged(&pot, 4, 1e-10, 25, 400).unwrap();
        assert!((r.values[0] - 1.4771).abs() < 1e-4);
    }
}
