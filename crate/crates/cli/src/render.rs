use std::fmt::Write as _;

use ptmetric::metric::{ScaledHamiltonian, VerificationReport};
use ptmetric::spectra::{sci12, Comparison, EigResult, PotentialSpec};
use serde::Serialize;

pub const COMPARE_SCHEMA: &str = "ptmetric.compare/1";
pub const POTENTIAL_SCHEMA: &str = "ptmetric.potential/1";

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// `p_y^2 + c0 + c1*y + ...` with 12 significant digits.
pub fn potential_formula(pot: &PotentialSpec) -> String {
    let mut s = if pot.kinetic_coeff == 1.0 { "p_y^2".to_string() } else { format!("{}*p_y^2", sci12(pot.kinetic_coeff)) };
    for (k, c) in pot.poly_coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let sign = if *c < 0.0 { '-' } else { '+' };
        // rounded to 12 significant digits, shortest form
        let mag: f64 = sci12(c.abs()).parse().unwrap_or(c.abs());
        let _ = match k {
            0 => write!(s, " {sign} {mag}"),
            1 => write!(s, " {sign} {mag}*y"),
            _ => write!(s, " {sign} {mag}*y^{k}"),
        };
    }
    s
}

#[derive(Serialize)]
pub struct VerifyJson<'a> {
    #[serde(flatten)]
    pub report: &'a VerificationReport,
    pub scaled: &'a ScaledHamiltonian,
}

pub fn verify_human(r: &VerificationReport, scaled: &ScaledHamiltonian) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "g = {}, alpha = {}, m^2 = {}", r.g, r.alpha, r.m2);
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &r.checks {
        let _ = write!(s, "{} {:width$}  {}", verdict(c.passed), c.name, c.anchor);
        if let Some(d) = &c.detail {
            let _ = write!(s, "  [{d}]");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "Q  = {}", r.q);
    let _ = writeln!(s, "h  = {}", r.h);
    let _ = writeln!(s, "h~ = {}  (x = {} y{})", potential_formula(&scaled.potential), scaled.scale, if scaled.exact { ", exact" } else { "" });
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "{}: {passed}/{} identities hold", verdict(r.all_passed), r.checks.len());
    s
}

pub fn verify_csv(r: &VerificationReport) -> String {
    let mut s = String::from("check,identity,result\n");
    for c in &r.checks {
        let _ = writeln!(s, "{},{},{}", csv_field(&c.name), csv_field(&c.anchor), verdict(c.passed));
    }
    s
}

pub fn spectrum_human(r: &EigResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "method: {}", r.method.tag());
    let _ = writeln!(s, "{:>3}  {:>20}  {:>18}{}", "n", "eigenvalue", "error estimate", if r.residuals.is_empty() { "" } else { "  residual" });
    for (i, (v, e)) in r.values.iter().zip(&r.errors).enumerate() {
        let _ = write!(s, "{i:>3}  {:>20}  {:>18}", sci12(*v), format!("{e:.2e}"));
        if let Some(res) = r.residuals.get(i) {
            let _ = write!(s, "  {res:.2e}");
        }
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
pub struct CompareJson<'a> {
    pub schema: &'static str,
    pub g: String,
    pub m2: String,
    pub k: usize,
    pub tolerance: f64,
    pub results: &'a [EigResult],
    pub comparisons: &'a [Comparison],
    pub pass: bool,
}

pub fn compare_human(r: &CompareJson<'_>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "g = {}, m^2 = {}, k = {}, relative tolerance {:e}", r.g, r.m2, r.k, r.tolerance);
    let _ = write!(s, "{:>3}", "n");
    for res in r.results {
        let _ = write!(s, "  {:>20}", res.method.tag());
    }
    s.push('\n');
    for i in 0..r.k {
        let _ = write!(s, "{i:>3}");
        for res in r.results {
            let _ = write!(s, "  {:>20}", sci12(res.values[i]));
        }
        s.push('\n');
    }
    for c in r.comparisons {
        let _ = writeln!(
            s,
            "{} {} vs {}: max rel dev {:.2e}, max abs dev {:.2e}",
            verdict(c.pass),
            c.method_a.tag(),
            c.method_b.tag(),
            c.max_rel_dev,
            c.max_abs_dev
        );
    }
    let _ = writeln!(s, "{}", verdict(r.pass));
    s
}

pub fn compare_csv(comparisons: &[Comparison]) -> String {
    let mut s = String::from("method_a,method_b,index,a,b,abs_dev,rel_dev\n");
    for c in comparisons {
        for p in &c.pairs {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.method_a.tag(),
                c.method_b.tag(),
                p.index,
                sci12(p.a),
                sci12(p.b),
                sci12(p.abs_dev),
                sci12(p.rel_dev)
            );
        }
    }
    s
}

#[derive(Serialize)]
pub struct Curve<'a> {
    pub schema: &'static str,
    pub alpha: String,
    pub m2: String,
    pub potential: &'a PotentialSpec,
    pub minimum: (f64, f64),
    pub samples: Vec<(f64, f64)>,
}

pub fn potential_csv(c: &Curve<'_>) -> String {
    let mut s = format!("# alpha={} m2={} h~={}\ny,V\n", c.alpha, c.m2, potential_formula(c.potential));
    for (y, v) in &c.samples {
        let _ = writeln!(s, "{},{}", sci12(*y), sci12(*v));
    }
    s
}

pub fn potential_human(c: &Curve<'_>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "alpha = {}, m^2 = {}", c.alpha, c.m2);
    let _ = writeln!(s, "h~ = {}", potential_formula(c.potential));
    let _ = writeln!(s, "minimum V({}) = {}", sci12(c.minimum.0), sci12(c.minimum.1));
    for (y, v) in &c.samples {
        let _ = writeln!(s, "{:>20}  {:>20}", sci12(*y), sci12(*v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_rounds_coefficients() {
        let pot = PotentialSpec::new(1.0, vec![0.0078125, -2.8284271247461903, -0.5000000000000001, 0.0, 8.000000000000004]).unwrap();
        assert_eq!(potential_formula(&pot), "p_y^2 + 0.0078125 - 2.82842712475*y - 0.5*y^2 + 8*y^4");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("[Q1,H1] = \"f\""), "\"[Q1,H1] = \"\"f\"\"\"");
    }
}
