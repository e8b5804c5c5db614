//! Wronskian shooting for the non-Hermitian contour problem.
//!
//! Two parametrisations of the same spectrum are supported:
//!
//! * the real line with `−(1+ix)φ″ − (i/2)φ′ − α(1+ix)²φ − 4m²(1+ix)φ = Eφ`,
//!   whose ends run into the decaying sectors of the quartic;
//! * two rays `z = r e^{iθ}` of `−ψ″ − g z⁴ ψ + m² z² ψ = Eψ`, joined at the
//!   origin.
//!
//! Both solutions are started from WKB data far out, integrated inward with
//! DOPRI5 and matched through the normalised Wronskian.

use num_complex::Complex64;
use serde::Serialize;

use super::ode::{integrate, OdeFailure, OdeTolerances, State};
use super::result::{EigResult, Method};
use super::SpectraError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShootProblem {
    TransformedLine { alpha: f64, m2: f64 },
    WedgeRays { g: f64, m2: f64, theta_left: f64, theta_right: f64 },
}

impl ShootProblem {
    /// Rays through the centres of the lower Stokes sectors of `−g z⁴`.
    pub fn quartic_rays(g: f64, m2: f64) -> Self {
        use std::f64::consts::PI;
        ShootProblem::WedgeRays { g, m2, theta_left: -5.0 * PI / 6.0, theta_right: -PI / 6.0 }
    }

    /// `−ψ″ + z²ψ` on the real axis, written as two rays.
    pub fn harmonic_rays() -> Self {
        ShootProblem::WedgeRays { g: 0.0, m2: 1.0, theta_left: -std::f64::consts::PI, theta_right: 0.0 }
    }

    fn method(&self) -> Method {
        match self {
            ShootProblem::TransformedLine { .. } => Method::ShootLine,
            ShootProblem::WedgeRays { .. } => Method::ShootRays,
        }
    }

    fn validate(&self) -> Result<(), SpectraError> {
        let ok = match *self {
            ShootProblem::TransformedLine { alpha, m2 } => alpha > 0.0 && alpha.is_finite() && m2 >= 0.0 && m2.is_finite(),
            ShootProblem::WedgeRays { g, m2, theta_left, theta_right } => {
                g >= 0.0 && g.is_finite() && m2.is_finite() && (g > 0.0 || m2 > 0.0) && theta_left.is_finite() && theta_right.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SpectraError::InvalidConfig(format!("invalid shooting problem {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShootConfig {
    /// Start of the inward integration (`|x|` on the line, `r` on the rays).
    pub x_max: f64,
    pub step_init: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Matching point on the line; the rays always meet at the origin.
    pub match_point: f64,
    /// Secant iterations allowed when polishing the energy.
    pub max_refinements: usize,
    /// Half width of the golden-section bracket around the guess.
    pub bracket_half_width: f64,
    /// Largest accepted normalised Wronskian.
    pub residual_tol: f64,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            x_max: 10.0,
            step_init: 1e-3,
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            match_point: 0.0,
            max_refinements: 40,
            bracket_half_width: 0.05,
            residual_tol: 1e-6,
        }
    }
}

impl ShootConfig {
    fn validate(&self) -> Result<(), SpectraError> {
        let positive = [self.x_max, self.step_init, self.rel_tol, self.bracket_half_width, self.residual_tol];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || !(self.abs_tol >= 0.0) {
            return Err(SpectraError::InvalidConfig("shooting tolerances and lengths must be positive".into()));
        }
        if self.match_point.abs() >= self.x_max {
            return Err(SpectraError::InvalidConfig(format!(
                "match point {} outside (−x_max, x_max)",
                self.match_point
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShootResult {
    pub energy: f64,
    /// `|W| / (|φ_L||φ_R′| + |φ_L′||φ_R|)` at `energy`; for states whose
    /// parity makes that denominator vanish, `|W|` over the product of the
    /// solution norms `√(|φ|² + |φ′|²)`.
    pub residual: f64,
    pub residual_re: f64,
    pub residual_im: f64,
    /// Imaginary part of the last complex secant iterate; a real eigenvalue
    /// gives a value at the integration-error level.
    pub imag_estimate: f64,
    /// Shift of the energy when the integration tolerance is loosened 100×.
    pub error_estimate: f64,
    /// `W` is real on both sides of `energy` and changes sign across it, so
    /// a real root lies in between. PT symmetry makes `W` real for real `E`
    /// when matching at the symmetry point.
    pub sign_change: bool,
    pub evaluations: usize,
}

/// Wronskian at the matching point divided by `‖(φ_L, φ_L′)‖ ‖(φ_R, φ_R′)‖`,
/// which stays smooth in `E` even when parity forces `φ` or `φ′` to vanish
/// there; `cross` is `|φ_L||φ_R′| + |φ_L′||φ_R|` on the same scale.
#[derive(Clone, Copy, Debug)]
struct Matched {
    w: Complex64,
    cross: f64,
}

impl Matched {
    /// `|W| / (|φ_L||φ_R′| + |φ_L′||φ_R|)`, or the norm-scaled `|W|` when
    /// that denominator is degenerate.
    fn residual(&self) -> (f64, Complex64) {
        let scale = if self.cross > 1e-3 { self.cross } else { 1.0 };
        (self.w.norm() / scale, self.w / scale)
    }
}

struct Shooter {
    problem: ShootProblem,
    cfg: ShootConfig,
    evaluations: std::cell::Cell<usize>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pick the branch of `±√q` whose solution decays along `outward`.
fn decaying_log_derivative(base: Complex64, sqrt_q: Complex64, outward: Complex64) -> Complex64 {
    let plus = base + sqrt_q;
    let minus = base - sqrt_q;
    if (plus * outward).re < (minus * outward).re {
        plus
    } else {
        minus
    }
}

impl Shooter {
    fn tolerances(&self, rel: f64) -> OdeTolerances {
        OdeTolerances { rel, abs: self.cfg.abs_tol, h_init: self.cfg.step_init, max_steps: 2_000_000 }
    }

    fn stiff(e: OdeFailure) -> SpectraError {
        let t = match e {
            OdeFailure::StepUnderflow { t } | OdeFailure::TooManySteps { t } | OdeFailure::NonFinite { t } => t,
        };
        SpectraError::StiffnessFailure { at: t }
    }

    fn wronskian(&self, e: f64, rel: f64) -> Result<Complex64, SpectraError> {
        Ok(self.matched(e, rel)?.w)
    }

    fn matched(&self, e: f64, rel: f64) -> Result<Matched, SpectraError> {
        self.evaluations.set(self.evaluations.get() + 1);
        let tol = self.tolerances(rel);
        let (l, r) = match self.problem {
            ShootProblem::TransformedLine { alpha, m2 } => {
                let rhs = move |x: f64, y: &State| {
                    let f = c(1.0, x);
                    let b = (f * f * alpha + f * (4.0 * m2) + e) / f;
                    [y[1], -(y[1] * c(0.0, 0.5) / f + y[0] * b)]
                };
                let start = |x: f64| -> State {
                    // φ = u e^{−½∫a}, u″ = q u with a = i/(2f)
                    let f = c(1.0, x);
                    let a = c(0.0, 0.5) / f;
                    let q = 0.1875 / (f * f) - (f * alpha + 4.0 * m2 + e / f);
                    let dq = c(0.0, -0.375) / (f * f * f) - c(0.0, alpha) + c(0.0, e) / (f * f);
                    let base = -a * 0.5 - dq / (q * 4.0);
                    let outward = c(x.signum(), 0.0);
                    [c(1.0, 0.0), decaying_log_derivative(base, q.sqrt(), outward)]
                };
                let xm = self.cfg.match_point;
                let xl = -self.cfg.x_max;
                let xr = self.cfg.x_max;
                let l = integrate(rhs, xl, xm, start(xl), &tol).map_err(Self::stiff)?;
                let r = integrate(rhs, xr, xm, start(xr), &tol).map_err(Self::stiff)?;
                (l.state, r.state)
            }
            ShootProblem::WedgeRays { g, m2, theta_left, theta_right } => {
                let qz = move |z: Complex64| -(z * z * z * z) * g + z * z * m2 - e;
                let ray = |theta: f64| -> Result<State, SpectraError> {
                    let w = Complex64::from_polar(1.0, theta);
                    let rhs = move |r: f64, y: &State| [w * y[1], w * qz(w * r) * y[0]];
                    let z0 = w * self.cfg.x_max;
                    let q = qz(z0);
                    let dq = -(z0 * z0 * z0) * (4.0 * g) + z0 * (2.0 * m2);
                    let base = -dq / (q * 4.0);
                    let y0 = [c(1.0, 0.0), decaying_log_derivative(base, q.sqrt(), w)];
                    Ok(integrate(rhs, self.cfg.x_max, 0.0, y0, &tol).map_err(Self::stiff)?.state)
                };
                (ray(theta_left)?, ray(theta_right)?)
            }
        };
        let w = l[0] * r[1] - l[1] * r[0];
        let cross = l[0].norm() * r[1].norm() + l[1].norm() * r[0].norm();
        let norms = l[0].norm().hypot(l[1].norm()) * r[0].norm().hypot(r[1].norm());
        if !(norms > 0.0) || !w.is_finite() {
            return Err(SpectraError::StiffnessFailure { at: self.cfg.match_point });
        }
        Ok(Matched { w: w / norms, cross: cross / norms })
    }

    /// Complex secant on `W(E)` started from two real energies; the real part
    /// of each iterate is used for the next evaluation.
    fn polish(&self, mut e0: f64, mut e1: f64, rel: f64) -> Result<(f64, f64), SpectraError> {
        let mut w0 = self.wronskian(e0, rel)?;
        let mut w1 = self.wronskian(e1, rel)?;
        let mut imag = 0.0;
        for _ in 0..self.cfg.max_refinements {
            let dw = w1 - w0;
            if dw.norm() == 0.0 {
                break;
            }
            let next = c(e1, 0.0) - w1 * (e1 - e0) / dw;
            imag = next.im;
            let e2 = next.re;
            if !e2.is_finite() {
                break;
            }
            let converged = (e2 - e1).abs() <= 1e-14 * e1.abs().max(1.0);
            e0 = e1;
            w0 = w1;
            e1 = e2;
            w1 = self.wronskian(e1, rel)?;
            if converged {
                break;
            }
        }
        Ok((e1, imag))
    }

    fn golden(&self, lo: f64, hi: f64) -> Result<f64, SpectraError> {
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let rel = self.cfg.rel_tol.max(1e-9);
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let mut f1 = self.wronskian(x1, rel)?.norm();
        let mut f2 = self.wronskian(x2, rel)?.norm();
        for _ in 0..24 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = self.wronskian(x1, rel)?.norm();
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = self.wronskian(x2, rel)?.norm();
            }
        }
        let best = if f1 < f2 { x1 } else { x2 };
        // a minimum pinned to the bracket edge means no root inside
        let edge = 1e-3 * (hi - lo);
        if best - lo < edge || hi - best < edge {
            return Err(SpectraError::NoRootInBracket { lo, hi });
        }
        Ok(best)
    }
}

/// Locate the real eigenvalue nearest `e_guess` by minimising `|W(E)|` and
/// polishing with a complex secant.
pub fn shoot_eigenvalue(problem: &ShootProblem, e_guess: f64, cfg: &ShootConfig) -> Result<ShootResult, SpectraError> {
    problem.validate()?;
    cfg.validate()?;
    if !e_guess.is_finite() {
        return Err(SpectraError::InvalidConfig("non-finite energy guess".into()));
    }
    let mut cfg = *cfg;
    if matches!(problem, ShootProblem::WedgeRays { .. }) {
        cfg.match_point = 0.0;
    }
    let s = Shooter { problem: *problem, cfg, evaluations: std::cell::Cell::new(0) };
    let lo = e_guess - cfg.bracket_half_width;
    let hi = e_guess + cfg.bracket_half_width;
    let start = s.golden(lo, hi)?;
    let step = 1e-6 * cfg.bracket_half_width;

    let (coarse, _) = s.polish(start, start + step, cfg.rel_tol * 100.0)?;
    let (energy, imag) = s.polish(start, start + step, cfg.rel_tol)?;
    if !(lo..=hi).contains(&energy) {
        return Err(SpectraError::NoRootInBracket { lo, hi });
    }
    let (residual, w) = s.matched(energy, cfg.rel_tol)?.residual();
    let error_estimate = (energy - coarse).abs();
    let delta = (10.0 * error_estimate).max(1e-10 * energy.abs().max(1.0));
    let below = s.wronskian(energy - delta, cfg.rel_tol)?;
    let above = s.wronskian(energy + delta, cfg.rel_tol)?;
    let real = |z: Complex64| z.im.abs() <= 1e-3 * z.re.abs();
    let sign_change = real(below) && real(above) && below.re * above.re < 0.0;
    if residual > cfg.residual_tol {
        return Err(SpectraError::ResidualAboveTolerance { energy, residual, tolerance: cfg.residual_tol });
    }
    Ok(ShootResult {
        energy,
        residual,
        residual_re: w.re.abs(),
        residual_im: w.im.abs(),
        imag_estimate: imag,
        error_estimate,
        sign_change,
        evaluations: s.evaluations.get(),
    })
}

/// Refine each guess (ascending) and collect the levels. Brackets shrink so
/// neighbouring guesses never share one.
pub fn shoot_spectrum(problem: &ShootProblem, guesses: &[f64], cfg: &ShootConfig) -> Result<EigResult, SpectraError> {
    if guesses.is_empty() || guesses.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SpectraError::InvalidConfig("guesses must be non-empty and strictly ascending".into()));
    }
    let mut values = Vec::with_capacity(guesses.len());
    let mut errors = Vec::with_capacity(guesses.len());
    let mut residuals = Vec::with_capacity(guesses.len());
    let mut imag = Vec::with_capacity(guesses.len());
    for (i, &g) in guesses.iter().enumerate() {
        let gap_lo = if i > 0 { g - guesses[i - 1] } else { f64::INFINITY };
        let gap_hi = guesses.get(i + 1).map_or(f64::INFINITY, |n| n - g);
        let mut c = *cfg;
        c.bracket_half_width = cfg.bracket_half_width.min(0.4 * gap_lo.min(gap_hi));
        let r = shoot_eigenvalue(problem, g, &c)?;
        values.push(r.energy);
        errors.push(r.error_estimate + r.imag_estimate.abs());
        residuals.push(r.residual);
        imag.push(r.imag_estimate);
    }
    let params = serde_json::json!({
        "problem": problem,
        "config": cfg,
        "guesses": guesses,
        "imag_estimates": imag,
    });
    let mut out = EigResult::new(problem.method(), params, values, errors);
    out.residuals = residuals;
    Ok(out)
}
