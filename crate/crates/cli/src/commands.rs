use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use ptmetric::metric::{build_model, equivalent_hermitian, verify_identities, IdentityCheck, MetricError};
use ptmetric::spectra::{
    compare_spectra, finite_difference_eigs, oscillator_basis_eigs, shoot_spectrum, BasisConfig, EigResult,
    GridConfig, PotentialSpec, ShootConfig, ShootProblem, SpectraError,
};

use crate::args::{CompareArgs, Couplings, Format, MethodArg, PotentialArg, PotentialArgs, SolverArgs, SpectrumArgs, VerifyArgs};
use crate::render;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NonConvergence(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Failure(m) | CliError::NonConvergence(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::InvalidCoupling(_) | MetricError::InvalidMass(_) | MetricError::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::InvalidPotential(_) | SpectraError::InvalidConfig(_) | SpectraError::LengthMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::NonConvergence(e.to_string()),
        }
    }
}

/// Rendered output and whether the run counts as a pass.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `(α, m²)` in floating point after validating the couplings.
fn couplings_f64(c: &Couplings) -> Result<(f64, f64), CliError> {
    let model = build_model(&c.g, &c.m2)?;
    Ok((to_f64(&model.alpha), to_f64(&model.m2)))
}

/// Scaled potential of the equivalent Hermitian problem, taken from the exact
/// pipeline.
fn scaled_potential(c: &Couplings) -> Result<PotentialSpec, CliError> {
    let eq = equivalent_hermitian(&build_model(&c.g, &c.m2)?)?;
    Ok(eq.h_scaled.potential)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let format = a.output.format.unwrap_or(Format::Human);
    let mut report = verify_identities(&a.couplings.g, &a.couplings.m2)?;
    let (alpha, m2) = couplings_f64(&a.couplings)?;
    let eq = equivalent_hermitian(&build_model(&a.couplings.g, &a.couplings.m2)?)?;
    let reference = PotentialSpec::scaled_quartic(alpha, m2)?;
    let got = &eq.h_scaled.potential;
    let matches = got.kinetic_coeff == 1.0
        && got.poly_coeffs.len() == reference.poly_coeffs.len()
        && got.poly_coeffs.iter().zip(&reference.poly_coeffs).all(|(x, y)| (x - y).abs() <= 1e-12 * y.abs().max(1.0));
    report.checks.push(
        IdentityCheck::new(
            "scaled Hamiltonian",
            "h~ = p_y^2 + (alpha y^2 - 4m^2)^2/(4 alpha) - (1/2) sqrt(alpha) y",
            matches,
        )
        .with_detail(render::potential_formula(got)),
    );
    report.all_passed = report.checks.iter().all(|c| c.passed);
    let text = match format {
        Format::Human => render::verify_human(&report, &eq.h_scaled),
        Format::Json => render::json(&render::VerifyJson { report: &report, scaled: &eq.h_scaled }),
        Format::Csv => render::verify_csv(&report),
    };
    Ok(Outcome { text, passed: report.all_passed })
}

struct Plan {
    potential: PotentialSpec,
    basis: BasisConfig,
    grid: GridConfig,
    shoot: ShootConfig,
    line: Option<ShootProblem>,
    rays: ShootProblem,
}

fn plan(c: &Couplings, which: PotentialArg, s: &SolverArgs, tol: Option<f64>) -> Result<Plan, CliError> {
    if s.n_basis < 2 || s.grid_n < 3 {
        return Err(CliError::Usage("--n-basis must be at least 2 and --grid-n at least 3".into()));
    }
    if !(s.grid_l > 0.0 && s.xmax > 0.0) || s.omega.is_some_and(|w| !(w > 0.0)) {
        return Err(CliError::Usage("--grid-L, --xmax and --omega must be positive".into()));
    }
    if tol.is_some_and(|t| !(t > 0.0)) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let (potential, line, rays) = match which {
        PotentialArg::Harmonic => (PotentialSpec::harmonic(), None, ShootProblem::harmonic_rays()),
        PotentialArg::Quartic => {
            let (alpha, m2) = couplings_f64(c)?;
            let g = alpha / 16.0;
            (scaled_potential(c)?, Some(ShootProblem::TransformedLine { alpha, m2 }), ShootProblem::quartic_rays(g, m2))
        }
    };
    let mut shoot = ShootConfig { x_max: s.xmax, ..ShootConfig::default() };
    if let Some(t) = tol {
        shoot.residual_tol = t;
    }
    Ok(Plan {
        potential,
        basis: BasisConfig { omega: s.omega, rel_tol: tol, ..BasisConfig::with_n(s.n_basis) },
        grid: GridConfig { half_width: s.grid_l, n_points: s.grid_n, rel_tol: tol, ..GridConfig::default() },
        shoot,
        line,
        rays,
    })
}

impl Plan {
    /// Starting energies for shooting: the same levels from the basis solver.
    fn guesses(&self, k: usize) -> Result<Vec<f64>, CliError> {
        let cfg = BasisConfig { rel_tol: None, ..self.basis };
        if cfg.n_basis < 2 * k {
            return Err(CliError::Usage(format!("--n-basis {} too small for {k} shooting guesses", cfg.n_basis)));
        }
        Ok(oscillator_basis_eigs(&self.potential, &cfg, k)?.values)
    }

    fn run(&self, method: MethodArg, k: usize, guesses: Option<&[f64]>) -> Result<EigResult, CliError> {
        let shoot = |problem: &ShootProblem| -> Result<EigResult, CliError> {
            let owned;
            let g = match guesses {
                Some(g) => g,
                None => {
                    owned = self.guesses(k)?;
                    &owned
                }
            };
            Ok(shoot_spectrum(problem, g, &self.shoot)?)
        };
        match method {
            MethodArg::Basis => {
                if self.basis.n_basis < 2 * k {
                    return Err(CliError::Usage(format!("--n-basis {} too small for {k} levels", self.basis.n_basis)));
                }
                Ok(oscillator_basis_eigs(&self.potential, &self.basis, k)?)
            }
            MethodArg::Fd => Ok(finite_difference_eigs(&self.potential, &self.grid, k)?),
            MethodArg::ShootLine => match &self.line {
                Some(p) => shoot(p),
                None => Err(CliError::Usage("shoot-line applies to the quartic potential only; use shoot-rays".into())),
            },
            MethodArg::ShootRays => shoot(&self.rays),
        }
    }
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let k = a.k as usize;
    let plan = plan(&a.couplings, a.potential, &a.solver, a.tol)?;
    let result = plan.run(a.method, k, None)?;
    let text = match a.output.format.unwrap_or(Format::Human) {
        Format::Human => render::spectrum_human(&result),
        Format::Json => render::json(&result),
        Format::Csv => result.to_csv(),
    };
    Ok(Outcome { text, passed: true })
}

pub fn compare(a: &CompareArgs) -> Result<Outcome, CliError> {
    let k = a.k as usize;
    let methods = &a.methods;
    if methods.len() < 2 || methods.iter().enumerate().any(|(i, m)| methods[..i].contains(m)) {
        return Err(CliError::Usage("--methods needs at least two distinct solvers".into()));
    }
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let plan = plan(&a.couplings, a.potential, &a.solver, None)?;
    let shooting = methods.iter().any(|m| matches!(m, MethodArg::ShootLine | MethodArg::ShootRays));
    let guesses = if shooting { Some(plan.guesses(k)?) } else { None };

    // Independent solver runs in parallel; results keep the requested order.
    let results: Vec<Result<EigResult, CliError>> = std::thread::scope(|s| {
        let (plan, guesses) = (&plan, guesses.as_deref());
        let handles: Vec<_> = methods.iter().map(|&m| s.spawn(move || plan.run(m, k, guesses))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(CliError::Failure("solver thread panicked".into())))).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut comparisons = Vec::new();
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            comparisons.push(compare_spectra(&results[i], &results[j], k, a.tol)?);
        }
    }
    let passed = comparisons.iter().all(|c| c.pass);
    let report = render::CompareJson {
        schema: render::COMPARE_SCHEMA,
        g: a.couplings.g.to_string(),
        m2: a.couplings.m2.to_string(),
        k,
        tolerance: a.tol,
        results: &results,
        comparisons: &comparisons,
        pass: passed,
    };
    let text = match a.output.format.unwrap_or(Format::Human) {
        Format::Human => render::compare_human(&report),
        Format::Json => render::json(&report),
        Format::Csv => render::compare_csv(&comparisons),
    };
    Ok(Outcome { text, passed })
}

pub fn potential(a: &PotentialArgs) -> Result<Outcome, CliError> {
    let model = build_model(&a.couplings.g, &a.couplings.m2)?;
    let pot = scaled_potential(&a.couplings)?;
    let (lo, hi) = a.range;
    let n = a.n as usize;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            (y, pot.eval(y))
        })
        .collect();
    let curve = render::Curve {
        schema: render::POTENTIAL_SCHEMA,
        alpha: model.alpha.to_string(),
        m2: model.m2.to_string(),
        potential: &pot,
        minimum: pot.minimum(),
        samples,
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Human => render::potential_human(&curve),
        Format::Json => render::json(&curve),
        Format::Csv => render::potential_csv(&curve),
    };
    Ok(Outcome { text, passed: true })
}
