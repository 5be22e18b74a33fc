#![allow(clippy::excessive_precision)]

mod common;

use std::path::Path;
use std::process::Command;

use frac_ivp::cli::{self, CommandOutput, EXIT_CERTIFICATE_FAILS, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_OK};
use frac_ivp::specfun::{gamma, mittag_leffler};

fn run(args: &[&str]) -> CommandOutput {
    let mut all = vec!["frac-ivp"];
    all.extend_from_slice(args);
    cli::run(all, None)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect()
}

#[test]
fn solve_zero_problem_writes_affine_solution() {
    let dir = tempfile::tempdir().unwrap();
    let file = common::write_file(dir.path(), "zero.toml", "sigma = 1.4\nb = 2\nT = 1\ng = \"0\"\nr1 = 5\nr2 = 5\n[solver]\nn = 32\n");
    let out = run(&["solve", path(&file)]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("x,w,v\n"));
    assert!(out.stderr.contains("iterations = 1"));
    let rows = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 33);
    let g = gamma(1.4).unwrap();
    for r in rows {
        assert!((r[1] - 2.0 * r[0].powf(0.4) / g).abs() <= 1e-15 * r[1].abs().max(1.0));
        assert_eq!(r[2], 2.0);
    }
}

#[test]
fn solve_writes_out_file_and_honours_flags() {
    let dir = tempfile::tempdir().unwrap();
    let file = common::write_file(dir.path(), "lin.toml", common::LINEAR_PROBLEM);
    let csv = dir.path().join("sol.csv");
    let out = run(&["solve", path(&file), "--n", "256", "--tol", "1e-12", "--out", path(&csv)]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 257);
    for r in rows.iter().skip(1) {
        let z = r[0].powf(1.5);
        let w = r[0].sqrt() * mittag_leffler(1.5, 1.5, z).unwrap();
        let v = mittag_leffler(1.5, 1.0, z).unwrap();
        assert!(((r[1] - w) / w).abs() < 1e-6);
        assert!((r[2] - v).abs() < 1e-6);
    }
    // 17 significant digits
    let first = text.lines().nth(2).unwrap().split(',').next().unwrap();
    assert_eq!(first.split('e').next().unwrap().replace('.', "").len(), 17);
}

#[test]
fn solve_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = common::write_file(dir.path(), "bad.toml", &common::CONSTANT_PROBLEM.replace("\"1\"", "\"2+*3\""));
    let out = run(&["solve", path(&bad)]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("field `g`") && out.stderr.contains("byte 2"), "{}", out.stderr);

    let sigma = common::write_file(dir.path(), "sigma.toml", &common::CONSTANT_PROBLEM.replace("sigma = 1.5", "sigma = 0.5"));
    let out = run(&["solve", path(&sigma)]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("field `sigma` (line 1)"), "{}", out.stderr);

    let domain = common::write_file(dir.path(), "domain.toml", &common::CONSTANT_PROBLEM.replace("\"1\"", "\"log(w)\""));
    assert_eq!(run(&["solve", path(&domain)]).code, EXIT_INPUT);
    assert_eq!(run(&["solve", "/no/such/file.toml"]).code, EXIT_INPUT);
    assert_eq!(run(&["solve"]).code, EXIT_INPUT);
}

#[test]
fn solve_non_convergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = common::write_file(dir.path(), "slow.toml", &format!("{}[solver]\nn = 16\nmax_iter = 2\n", common::LINEAR_PROBLEM));
    let out = run(&["solve", path(&file)]);
    assert_eq!(out.code, EXIT_NOT_CONVERGED);
    assert!(out.stderr.contains("did not converge"));
    assert!(out.stdout.is_empty());
}

#[test]
fn window_reports() {
    let dir = tempfile::tempdir().unwrap();
    let base = "sigma = 1.5\nb = 1\ng = \"1\"\nr1 = 0.5\nr2 = 0.5\nM = 1\n";
    let file = common::write_file(dir.path(), "w.toml", &format!("{base}T = 10\n"));
    let out = run(&["window", path(&file)]);
    assert_eq!(out.code, EXIT_OK);
    let value = |key: &str| -> String {
        out.stdout.lines().find_map(|l| l.strip_prefix(&format!("{key} = "))).unwrap().to_string()
    };
    assert!((value("T0").parse::<f64>().unwrap() - 0.041_635_155_324_312_348).abs() < 1e-13);
    assert_eq!(value("alpha").parse::<f64>().unwrap(), 0.5);
    assert_eq!(value("truncated_by_T"), "false");

    let file = common::write_file(dir.path(), "short.toml", &format!("{base}T = 0.01\n"));
    let out = run(&["window", path(&file)]);
    assert!(out.stdout.contains("T0 = 1.0000000000000000e-2"));
    assert!(out.stdout.contains("truncated_by_T = true"));

    let file = common::write_file(dir.path(), "wide.toml", &base.replace("r1 = 0.5", "r1 = 9.5").replace("M = 1\n", "T = 100\nM = 1\n"));
    let out = run(&["window", path(&file)]);
    assert!(out.stdout.contains("alpha = 1.0000000000000000e0"));
    assert!(out.stdout.contains("case = ratio_at_least_one"));

    let file = common::write_file(dir.path(), "est.toml", &base.replace("M = 1\n", "T = 1\n"));
    let out = run(&["window", path(&file)]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("M = 1.1000000000000001e0"));
    assert!(out.stderr.contains("estimated"));
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let base = "sigma = 1.5\nb = 1\nT = 1\ng = \"0.2*w\"\nr1 = 1\nr2 = 1\n";
    let file = common::write_file(dir.path(), "c.toml", base);

    let out = run(&["certify", path(&file), "--kind", "nagumo", "--L", "0.2"]);
    assert_eq!(out.code, EXIT_OK);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["kind"], "nagumo");
    assert_eq!(report["holds"], true);
    let threshold = report["thresholds"][0]["value"].as_f64().unwrap();
    assert!((threshold - 0.265_079_452_134_309_4).abs() < 1e-12);

    let out = run(&["certify", path(&file), "--kind", "nagumo", "--L", "0.3"]);
    assert_eq!(out.code, EXIT_CERTIFICATE_FAILS);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!((report["margins"][0]["value"].as_f64().unwrap() + 0.034_920_547_865_690_575).abs() < 1e-12);

    let out = run(&["certify", path(&file), "--kind", "osgood", "--p", "1.8", "--C", "10", "--modulus", "u"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("q ="), "{}", out.stderr);

    let out = run(&["certify", path(&file), "--kind", "kk"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("L, C, alpha"), "{}", out.stderr);

    let out = run(&["certify", path(&file), "--kind", "kk", "--L", "0.4", "--C", "1", "--alpha", "0.5"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);

    let out = run(&["certify", path(&file), "--kind", "osgood", "--p", "3", "--C", "100", "--modulus", "u"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["probe"].as_array().unwrap().len(), 8);
}

#[test]
fn certify_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let file = common::write_file(dir.path(), "n.toml", common::NONLINEAR_PROBLEM);
    let args = ["frac-ivp", "certify", path(&file), "--kind", "kk", "--C", "5", "--L", "0.5"];
    let from_file = cli::run(args, None);
    assert!(from_file.stderr.contains("seed = 11"));
    let from_env = cli::run(args, Some("5"));
    assert!(from_env.stderr.contains("seed = 5"));
    assert_ne!(from_file.stdout, from_env.stdout);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    let from_flag = cli::run(with_flag.clone(), Some("99"));
    assert_eq!(from_flag.stdout, from_env.stdout);
    assert_eq!(cli::run(args, Some("not-a-number")).code, EXIT_INPUT);
}

#[test]
fn study_tables() {
    let dir = tempfile::tempdir().unwrap();
    let zero = common::write_file(dir.path(), "zero.toml", "sigma = 1.5\nb = 1\nT = 0.5\ng = \"0\"\nr1 = 5\nr2 = 5\n");
    let out = run(&["study", path(&zero), "--grids", "16,32,64", "--oracle", "x^0.5/0.886226925452758,1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "n,err_w,err_v,order_w,order_v");
    assert!(lines[1..].iter().all(|l| l.ends_with(",NA,NA")));

    let constant = common::write_file(dir.path(), "k.toml", common::CONSTANT_PROBLEM);
    let oracle = "x^0.5/0.886226925452758 + 1.772453850905516*x, 1 + 2*x^0.5";
    let out = run(&["study", path(&constant), "--grids", "16,32", "--oracle", oracle]);
    for row in csv_like(&out.stdout) {
        assert!(row[1].parse::<f64>().unwrap() < 1e-13);
    }

    // truncated Mittag-Leffler series as the oracle
    let linear = common::write_file(dir.path(), "ml.toml", common::LINEAR_PROBLEM);
    let oracle = format!("{},{}", ml_series("x^0.5*", 1.5), ml_series("", 1.0));
    let out = run(&["study", path(&linear), "--grids", "16,32,64,128", "--oracle", &oracle]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let rows = csv_like(&out.stdout);
    let errs: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|p| p[1] < p[0]), "{errs:?}");
    assert_eq!(rows[0][3], "NA");

    let out = run(&["study", path(&linear), "--oracle", "x"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["study", path(&linear), "--grids", "8,x", "--oracle", "x,1"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&["study", path(&linear), "--oracle", "w,1"]);
    assert_eq!(out.code, EXIT_INPUT);
}

fn csv_like(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

/// `prefix (Σ_k x^{1.5k}/Γ(1.5k+β))` with 30 terms, as an expression in `x`.
fn ml_series(prefix: &str, beta: f64) -> String {
    let terms: Vec<String> = (0..30)
        .map(|k| format!("x^{}/{:e}", 1.5 * k as f64, gamma(1.5 * k as f64 + beta).unwrap()))
        .collect();
    format!("{prefix}({})", terms.join("+"))
}

#[test]
fn binary_matches_library_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = common::write_file(dir.path(), "n.toml", common::NONLINEAR_PROBLEM);
    let bin = env!("CARGO_BIN_EXE_frac-ivp");
    let output = Command::new(bin)
        .args(["certify", path(&file), "--kind", "osgood"])
        .env(cli::SEED_ENV, "3")
        .output()
        .unwrap();
    let lib = cli::run(["frac-ivp", "certify", path(&file), "--kind", "osgood"], Some("3"));
    assert_eq!(output.status.code(), Some(lib.code));
    assert_eq!(String::from_utf8(output.stdout).unwrap(), lib.stdout);

    let solve = || Command::new(bin).args(["solve", path(&file)]).output().unwrap();
    assert_eq!(solve().stdout, solve().stdout);

    let bad = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
}
