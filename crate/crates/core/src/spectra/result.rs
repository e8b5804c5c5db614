use std::fmt::Write as _;

use serde::Serialize;

pub const EIG_SCHEMA: &str = "ptmetric.eig/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    OscillatorBasis,
    FiniteDifference,
    ShootLine,
    ShootRays,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::OscillatorBasis => "basis",
            Method::FiniteDifference => "fd",
            Method::ShootLine => "shoot-line",
            Method::ShootRays => "shoot-rays",
        }
    }
}

/// Eigenvalues from one solver run with per-level error estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigResult {
    pub schema: &'static str,
    pub method: Method,
    /// Echo of the solver configuration that produced the values.
    pub params: serde_json::Value,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Solver-specific residuals (normalised Wronskian for shooting, empty
    /// otherwise).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
}

impl EigResult {
    pub(crate) fn new(method: Method, params: serde_json::Value, values: Vec<f64>, errors: Vec<f64>) -> Self {
        Self { schema: EIG_SCHEMA, method, params, values, errors, residuals: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `index,eigenvalue,error_estimate` rows, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,error_estimate\n");
        for (i, (v, e)) in self.values.iter().zip(&self.errors).enumerate() {
            let _ = writeln!(out, "{i},{},{}", sci12(*v), sci12(*e));
        }
        out
    }
}

/// Scientific notation with 12 significant digits.
pub fn sci12(v: f64) -> String {
    format!("{v:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = EigResult::new(Method::FiniteDifference, serde_json::json!({}), vec![1.0, 3.0], vec![1e-9, 2.5e-9]);
        assert_eq!(
            r.to_csv(),
            "index,eigenvalue,error_estimate\n0,1.00000000000e0,1.00000000000e-9\n1,3.00000000000e0,2.50000000000e-9\n"
        );
    }

    #[test]
    fn json_has_schema_and_method() {
        let r = EigResult::new(Method::ShootLine, serde_json::json!({"alpha": 16.0}), vec![1.5], vec![0.0]);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], EIG_SCHEMA);
        assert_eq!(v["method"], "shoot-line");
        assert!(v.get("residuals").is_none());
    }
}
