use serde::Serialize;

use super::SpectraError;

/// `kinetic_coeff · p² + V(y)` with polynomial `V(y) = Σ c_k y^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub kinetic_coeff: f64,
    pub poly_coeffs: Vec<f64>,
}

impl PotentialSpec {
    /// Trailing zero coefficients are dropped; the remaining leading
    /// coefficient must be positive and of even degree.
    pub fn new(kinetic_coeff: f64, mut poly_coeffs: Vec<f64>) -> Result<Self, SpectraError> {
        while poly_coeffs.last() == Some(&0.0) {
            poly_coeffs.pop();
        }
        if !(kinetic_coeff > 0.0 && kinetic_coeff.is_finite()) {
            return Err(SpectraError::InvalidPotential(format!("kinetic coefficient {kinetic_coeff} must be positive")));
        }
        if poly_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(SpectraError::InvalidPotential("non-finite coefficient".into()));
        }
        let deg = poly_coeffs.len().saturating_sub(1);
        if deg < 2 || deg % 2 == 1 || poly_coeffs[deg] <= 0.0 {
            return Err(SpectraError::InvalidPotential(format!(
                "potential of degree {deg} with leading coefficient {:?} is not confining",
                poly_coeffs.last()
            )));
        }
        Ok(Self { kinetic_coeff, poly_coeffs })
    }

    /// `p² + y²`.
    pub fn harmonic() -> Self {
        Self { kinetic_coeff: 1.0, poly_coeffs: vec![0.0, 0.0, 1.0] }
    }

    /// `p² + (αy² − 4m²)²/(4α) − ½√α y`; with `m² = 0` this is
    /// `p² + ¼αy⁴ − ½√α y`.
    pub fn scaled_quartic(alpha: f64, m2: f64) -> Result<Self, SpectraError> {
        if !(alpha > 0.0) || !(m2 >= 0.0) {
            return Err(SpectraError::InvalidPotential(format!("alpha = {alpha}, m2 = {m2}")));
        }
        let c0 = 4.0 * m2 * m2 / alpha;
        Self::new(1.0, vec![c0, -0.5 * alpha.sqrt(), -2.0 * m2, 0.0, 0.25 * alpha])
    }

    pub fn degree(&self) -> usize {
        self.poly_coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.poly_coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    fn eval_derivative(&self, y: f64) -> f64 {
        self.poly_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * y + k as f64 * c)
    }

    /// Radius outside which `V` is increasing in `|y|` (Cauchy bound on the
    /// roots of `V′`).
    pub fn root_bound(&self) -> f64 {
        let deg = self.degree();
        let lead = deg as f64 * self.poly_coeffs[deg];
        1.0 + (1..deg)
            .map(|k| (k as f64 * self.poly_coeffs[k]).abs() / lead)
            .fold(0.0, f64::max)
    }

    /// Global minimum `(y*, V(y*))`, located by sampling and refined by
    /// Newton on `V′`.
    pub fn minimum(&self) -> (f64, f64) {
        let r = self.root_bound();
        let n = 4000;
        let (mut best_y, mut best_v) = (0.0, f64::INFINITY);
        for i in 0..=n {
            let y = -r + 2.0 * r * i as f64 / n as f64;
            let v = self.eval(y);
            if v < best_v {
                best_v = v;
                best_y = y;
            }
        }
        let h = 2.0 * r / n as f64;
        let (mut lo, mut hi) = (best_y - h, best_y + h);
        // golden section on the bracketing cell, then the derivative root
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if self.eval(a) < self.eval(b) {
                hi = b;
            } else {
                lo = a;
            }
            if hi - lo < 1e-15 * (1.0 + best_y.abs()) {
                break;
            }
        }
        let mut y = 0.5 * (lo + hi);
        for _ in 0..5 {
            let d1 = self.eval_derivative(y);
            let eps = 1e-6 * (1.0 + y.abs());
            let d2 = (self.eval_derivative(y + eps) - self.eval_derivative(y - eps)) / (2.0 * eps);
            if d2 <= 0.0 {
                break;
            }
            let step = d1 / d2;
            if step.abs() > h {
                break;
            }
            y -= step;
        }
        (y, self.eval(y))
    }
}
