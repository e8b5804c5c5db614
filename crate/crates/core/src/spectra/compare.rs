use serde::Serialize;

use super::result::{EigResult, Method};
use super::SpectraError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairDeviation {
    pub index: usize,
    pub a: f64,
    pub b: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub method_a: Method,
    pub method_b: Method,
    pub pairs: Vec<PairDeviation>,
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    pub tolerance: f64,
    /// `max_rel_dev ≤ tolerance`.
    pub pass: bool,
}

/// Pair the lowest `k` levels of two runs and judge them against a relative
/// tolerance.
pub fn compare_spectra(a: &EigResult, b: &EigResult, k: usize, tolerance: f64) -> Result<Comparison, SpectraError> {
    if a.len() < k || b.len() < k {
        return Err(SpectraError::LengthMismatch { needed: k, a: a.len(), b: b.len() });
    }
    let pairs: Vec<PairDeviation> = (0..k)
        .map(|index| {
            let (x, y) = (a.values[index], b.values[index]);
            let abs_dev = (x - y).abs();
            let scale = x.abs().max(y.abs());
            let rel_dev = if scale == 0.0 { 0.0 } else { abs_dev / scale };
            PairDeviation { index, a: x, b: y, abs_dev, rel_dev }
        })
        .collect();
    let max_abs_dev = pairs.iter().map(|p| p.abs_dev).fold(0.0, f64::max);
    let max_rel_dev = pairs.iter().map(|p| p.rel_dev).fold(0.0, f64::max);
    Ok(Comparison {
        method_a: a.method,
        method_b: b.method,
        pairs,
        max_abs_dev,
        max_rel_dev,
        tolerance,
        pass: max_rel_dev <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(values: Vec<f64>) -> EigResult {
        let n = values.len();
        EigResult::new(Method::OscillatorBasis, serde_json::json!({}), values, vec![0.0; n])
    }

    #[test]
    fn identical_inputs() {
        let a = run(vec![1.0, 3.0, 5.0]);
        let c = compare_spectra(&a, &a, 3, 0.0).unwrap();
        assert_eq!(c.max_abs_dev, 0.0);
        assert!(c.pass);
    }

    #[test]
    fn deviation_and_verdict() {
        let c = compare_spectra(&run(vec![1.0, 2.0]), &run(vec![1.0, 2.002]), 2, 1e-3).unwrap();
        assert!((c.max_abs_dev - 0.002).abs() < 1e-15);
        assert!((c.max_rel_dev - 0.002 / 2.002).abs() < 1e-15);
        assert!(c.pass);
        assert!(!compare_spectra(&run(vec![1.0, 2.0]), &run(vec![1.0, 2.01]), 2, 1e-3).unwrap().pass);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            compare_spectra(&run(vec![1.0]), &run(vec![1.0, 2.0]), 2, 1.0),
            Err(SpectraError::LengthMismatch { needed: 2, a: 1, b: 2 })
        ));
    }
}
