use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmetric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn values(v: &Value) -> Vec<f64> {
    v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn check_names(v: &Value) -> Vec<String> {
    v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect()
}

#[test]
fn verify_prints_pass_lines() {
    let o = run(&["verify", "--g", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for anchor in ["Q1 = -p^3/(3 alpha) + 2p", "[Q1,H1] = -p^4/alpha", "Q3 = Q5 = 0", "h = p^4/(4 alpha)", "e^{-Q} H e^{Q} = H^dagger"] {
        let line = text.lines().find(|l| l.contains(anchor)).unwrap_or_else(|| panic!("no line for {anchor}"));
        assert!(line.starts_with("PASS"), "{line}");
    }
    assert!(!text.contains("FAIL"));
    assert!(text.contains("Q  = (-1/48)*p^3 + 2*p"));
}

#[test]
fn verify_holds_for_other_couplings() {
    let one = json(&["verify", "--g", "1", "--format", "json"]);
    for g in ["3/2", "7", "0.25"] {
        let other = json(&["verify", "--g", g, "--format", "json"]);
        assert_eq!(other["all_passed"], Value::Bool(true), "g = {g}");
        assert_eq!(check_names(&other), check_names(&one));
    }
    let massive = json(&["verify", "--g", "2", "--m2", "1/4", "--format", "json"]);
    assert_eq!(massive["all_passed"], Value::Bool(true));
    assert_eq!(massive["alpha"], "32");
    assert_eq!(massive["scaled"]["exact"], Value::Bool(false));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--g", "0"][..],
        &["verify", "--g", "-1"],
        &["verify", "--g", "1/0"],
        &["verify", "--m2", "-1/4"],
        &["spectrum", "--k", "0"],
        &["spectrum", "--method", "nope"],
        &["spectrum", "--potential", "harmonic", "--method", "shoot-line"],
        &["compare", "--methods", "basis"],
        &["compare", "--methods", "fd,fd"],
        &["potential", "--range", "2:-2"],
        &["potential", "--n", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn spectrum_basis_and_fd_agree() {
    let basis = values(&json(&["spectrum", "--g", "1", "--method", "basis", "--k", "6", "--format", "json"]));
    assert_eq!(basis.len(), 6);
    assert!(basis.windows(2).all(|w| w[0] < w[1]));
    assert!((basis[0] - 1.4771).abs() < 5e-5);
    let fd = values(&json(&["spectrum", "--g", "1", "--method", "fd", "--k", "6", "--format", "json"]));
    for (a, b) in basis.iter().zip(&fd) {
        assert!((a - b).abs() <= 1e-6 * a.abs(), "{a} vs {b}");
    }
}

#[test]
fn harmonic_sanity_potential() {
    let o = run(&["spectrum", "--potential", "harmonic", "--k", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue,error_estimate"));
    for (n, line) in lines.enumerate() {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - (2 * n + 1) as f64).abs() < 1e-9, "{line}");
    }
    let rays = values(&json(&["spectrum", "--potential", "harmonic", "--k", "3", "--method", "shoot-rays", "--format", "json"]));
    assert!(rays.iter().enumerate().all(|(n, v)| (v - (2 * n + 1) as f64).abs() < 1e-9), "{rays:?}");
}

#[test]
fn compare_spectral_equivalence() {
    let o = run(&["compare", "--g", "1", "--methods", "basis,fd,shoot-line", "--k", "4", "--tol", "1e-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));

    let v = json(&["compare", "--g", "2", "--m2", "1/4", "--methods", "basis,shoot-line", "--k", "4", "--tol", "1e-3", "--format", "json"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["comparisons"].as_array().unwrap().len(), 1);
    assert!((values(&v["results"][0])[0] - 1.7647).abs() < 1e-3);
}

#[test]
fn compare_mismatch_exits_one() {
    let o = run(&["compare", "--methods", "basis,fd", "--n-basis", "12", "--k", "4", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL basis vs fd"));
}

#[test]
fn non_convergence_exits_three() {
    let o = run(&["spectrum", "--k", "6", "--n-basis", "16", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not converged"));
    let o = run(&["spectrum", "--method", "fd", "--grid-L", "1.5", "--grid-n", "999", "--k", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

fn curve(args: &[&str]) -> (String, Vec<(f64, f64)>) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().next().unwrap().to_string();
    let samples = text
        .lines()
        .skip(2)
        .map(|l| {
            let (y, v) = l.split_once(',').unwrap();
            (y.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    (header, samples)
}

#[test]
fn potential_curve_minimum_and_origin() {
    let (header, samples) = curve(&["potential", "--g", "1", "--range", "-2:2", "--n", "401"]);
    assert!(header.contains("alpha=16") && header.contains("m2=0"), "{header}");
    assert_eq!(samples.len(), 401);
    let &(y0, v0) = samples.iter().find(|(y, _)| *y == 0.0).expect("y = 0 sampled");
    assert_eq!((y0, v0), (0.0, 0.0));
    let &(ymin, vmin) = samples.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert!((ymin - 0.5).abs() < 1e-12 && (vmin + 0.75).abs() < 1e-12, "({ymin}, {vmin})");
}

#[test]
fn massive_potential_curve() {
    let (header, samples) = curve(&["potential", "--g", "2", "--m2", "1/4", "--n", "41"]);
    assert!(header.contains("alpha=32") && header.contains("m2=1/4"), "{header}");
    let (alpha, m2) = (32.0f64, 0.25f64);
    for (y, v) in samples {
        let want = (alpha * y * y - 4.0 * m2).powi(2) / (4.0 * alpha) - 0.5 * alpha.sqrt() * y;
        assert!((v - want).abs() <= 1e-10 * want.abs().max(1.0), "V({y}) = {v}, want {want}");
    }
}

#[test]
fn output_is_deterministic_and_out_matches_stdout() {
    for args in [
        &["spectrum", "--method", "fd", "--k", "3", "--grid-n", "801", "--format", "json"][..],
        &["compare", "--methods", "basis,shoot-rays", "--k", "2", "--format", "csv"],
        &["verify", "--g", "5/3", "--m2", "2", "--format", "json"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    let path = std::env::temp_dir().join(format!("ptmetric-cli-{}.csv", std::process::id()));
    let args = ["potential", "--n", "11"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = run(&with_out);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    let _ = std::fs::remove_file(path);
}
