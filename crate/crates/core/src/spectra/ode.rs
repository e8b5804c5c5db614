//! Adaptive Dormand–Prince 5(4) for linear second-order complex ODEs written
//! as a two-component first-order system.

use num_complex::Complex64;

pub(crate) type State = [Complex64; 2];

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// B minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Copy, Debug)]
pub(crate) struct OdeTolerances {
    pub rel: f64,
    pub abs: f64,
    pub h_init: f64,
    pub max_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum OdeFailure {
    StepUnderflow { t: f64 },
    TooManySteps { t: f64 },
    NonFinite { t: f64 },
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct OdeOutcome {
    /// Final state up to a positive factor from renormalisation.
    pub state: State,
}

fn norm(y: &State) -> f64 {
    y[0].norm().max(y[1].norm())
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction). The state
/// is renormalised whenever its magnitude leaves `[1e-100, 1e100]`, which is
/// harmless for linear equations.
pub(crate) fn integrate<F>(f: F, t0: f64, t1: f64, y0: State, tol: &OdeTolerances) -> Result<OdeOutcome, OdeFailure>
where
    F: Fn(f64, &State) -> State,
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = tol.h_init.min(span).max(f64::MIN_POSITIVE);
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
    k[0] = f(t, &y);
    let mut steps = 0;
    let mut err_prev: f64 = 1e-4;

    while (t1 - t) * dir > 0.0 {
        if steps >= tol.max_steps {
            return Err(OdeFailure::TooManySteps { t });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h <= 1e-14 * t.abs().max(1.0) && !last {
            return Err(OdeFailure::StepUnderflow { t });
        }
        let hs = h * dir;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += kj[0] * (hs * a);
                    ys[1] += kj[1] * (hs * a);
                }
            }
            k[s] = f(t + C[s] * hs, &ys);
        }
        let mut y_new = y;
        let mut err = [Complex64::new(0.0, 0.0); 2];
        for s in 0..7 {
            for c in 0..2 {
                y_new[c] += k[s][c] * (hs * B[s]);
                err[c] += k[s][c] * (hs * E[s]);
            }
        }
        if !(y_new[0].is_finite() && y_new[1].is_finite()) {
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(OdeFailure::NonFinite { t });
            }
            h *= 0.1;
            continue;
        }
        let sc = tol.abs + tol.rel * norm(&y).max(norm(&y_new));
        let en = (err[0].norm() / sc).max(err[1].norm() / sc);
        if en <= 1.0 {
            steps += 1;
            t = if last { t1 } else { t + hs };
            y = y_new;
            // FSAL: the last stage is f at the new point
            k[0] = k[6];
            let ny = norm(&y);
            if !(1e-100..=1e100).contains(&ny) && ny > 0.0 {
                y[0] /= ny;
                y[1] /= ny;
                k[0][0] /= ny;
                k[0][1] /= ny;
            }
            // PI step-size control
            let fac = 0.9 * en.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 5.0);
            err_prev = en.max(1e-4);
        } else {
            h *= (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(OdeOutcome { state: y })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64) -> OdeTolerances {
        OdeTolerances { rel, abs: 1e-300, h_init: 1e-3, max_steps: 1_000_000 }
    }

    #[test]
    fn complex_exponential() {
        // y'' = −y, y(0) = 1, y'(0) = i → y = e^{it}
        let out = integrate(
            |_, y| [y[1], -y[0]],
            0.0,
            10.0,
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            &tol(1e-12),
        )
        .unwrap();
        let exact = Complex64::new(0.0, 10.0).exp();
        assert!((out.state[0] - exact).norm() < 1e-9, "{}", out.state[0]);
    }

    #[test]
    fn backward_and_rescaled() {
        // y' = y integrated from 0 down to −600 underflows without rescaling
        let out = integrate(
            |_, y| [y[1], y[0]],
            0.0,
            -600.0,
            [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            &tol(1e-12),
        )
        .unwrap();
        assert!(out.state[0].norm() > 1e-100);
        assert!((out.state[1] / out.state[0] - 1.0).norm() < 1e-10);
    }

    #[test]
    fn step_cap_reported() {
        let mut t = tol(1e-12);
        t.max_steps = 3;
        let r = integrate(|_, y| [y[1], -y[0]], 0.0, 100.0, [Complex64::new(1.0, 0.0); 2], &t);
        assert!(matches!(r, Err(OdeFailure::TooManySteps { .. })));
    }
}
