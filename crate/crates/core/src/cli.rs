//! Problem files and the commands behind the `frac-ivp` binary.
//!
//! A problem file is TOML:
//!
//! ```toml
//! sigma = 1.5          # order, 1 < sigma < 2
//! b = 1.0              # D^(sigma-1) w(0), non-zero
//! T = 0.5              # horizon
//! g = "1"              # regular part x^(sigma-1) f(x, w, v) in x, w, v
//! r1 = 5.0             # |w| <= r1
//! r2 = 5.0             # |v - b| <= r2
//! M = 1.0              # optional sup |g| on the box (estimated when absent)
//!
//! [solver]             # optional
//! n = 512
//! quad_points = 32
//! tol = 1e-10
//! max_iter = 200
//! X = 0.5              # solve endpoint, capped at T0
//!
//! [certificates]       # optional; each check needs its own keys
//! L = 0.2              # nagumo, kk
//! C = 1.0              # kk, osgood
//! alpha = 0.5          # kk
//! p = 3.0              # osgood
//! modulus = "u"        # osgood, in the variable u
//! samples = 1000
//! seed = 0
//! gamma = 1.0          # osgood probe upper limit
//! eps = [0.1, 0.01, 0.001, 0.0001]
//! ```
//!
//! Every command returns a [`CommandOutput`] holding its exit code and the text for
//! standard output and standard error. Exit codes: 0 success, 1 input error,
//! 2 Picard non-convergence, 3 certificate does not hold.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use toml::Spanned;

use crate::certificates::{kk_check, nagumo_check, osgood_check, CertificateReport, OsgoodParams};
use crate::expr::Expr;
use crate::problem::{existence_window, ProblemSpec};
use crate::solver::{picard_solve, refine_study, ExprOracle, SolverConfig, SolverError, StudyRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_CERTIFICATE_FAILS: i32 = 3;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "FRAC_IVP_SEED";

/// Result of one command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    sigma: Spanned<f64>,
    b: Spanned<f64>,
    #[serde(rename = "T")]
    horizon: Spanned<f64>,
    g: Spanned<String>,
    r1: Spanned<f64>,
    r2: Spanned<f64>,
    #[serde(rename = "M")]
    m: Option<Spanned<f64>>,
    solver: Option<RawSolver>,
    certificates: Option<CertificateSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    n: Option<usize>,
    quad_points: Option<usize>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    #[serde(rename = "X")]
    endpoint: Option<f64>,
}

/// Optional `[certificates]` table.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSection {
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub modulus: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub gamma: Option<f64>,
    pub eps: Option<Vec<f64>>,
}

/// A validated problem file.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub solver: SolverConfig,
    pub certificates: CertificateSection,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates a problem file. Messages name the offending field and line.
pub fn parse_problem(text: &str) -> Result<ProblemFile, String> {
    let raw: RawProblem = toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())?;
    let at = |name: &str, span: Range<usize>, msg: String| format!("field `{name}` (line {}): {msg}", line_of(text, span));

    let g = Expr::parse(raw.g.get_ref()).map_err(|e| at("g", raw.g.span(), e.to_string()))?;
    let spec = ProblemSpec::new(
        *raw.sigma.get_ref(),
        *raw.b.get_ref(),
        *raw.horizon.get_ref(),
        g,
        *raw.r1.get_ref(),
        *raw.r2.get_ref(),
    )
    .map_err(|e| {
        use crate::problem::ProblemError as P;
        let (name, span) = match &e {
            P::Sigma(_) => ("sigma", raw.sigma.span()),
            P::InitialValue(_) => ("b", raw.b.span()),
            P::Horizon(_) => ("T", raw.horizon.span()),
            P::Radius { name: "r1", .. } => ("r1", raw.r1.span()),
            _ => ("r2", raw.r2.span()),
        };
        at(name, span, e.to_string())
    })?;
    let spec = match &raw.m {
        Some(m) => spec.with_bound(*m.get_ref()).map_err(|e| at("M", m.span(), e.to_string()))?,
        None => spec,
    };

    let s = raw.solver.unwrap_or_default();
    let d = SolverConfig::default();
    let solver = SolverConfig {
        n: s.n.unwrap_or(d.n),
        quad_points: s.quad_points.unwrap_or(d.quad_points),
        tol: s.tol.unwrap_or(d.tol),
        max_iter: s.max_iter.unwrap_or(d.max_iter),
        endpoint: s.endpoint,
    };
    solver.validate().map_err(|e| format!("table `solver`: {e}"))?;
    Ok(ProblemFile { spec, solver, certificates: raw.certificates.unwrap_or_default() })
}

/// Reads and parses a problem file; errors carry the path.
pub fn load_problem(path: &Path) -> Result<ProblemFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Full-precision decimal used in every CSV (17 significant digits).
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `x,w,v` rows.
pub fn solution_csv(grid_points: impl Iterator<Item = f64>, w: &[f64], v: &[f64]) -> String {
    let mut out = String::from("x,w,v\n");
    for (i, x) in grid_points.enumerate() {
        let _ = writeln!(out, "{},{},{}", fmt_num(x), fmt_num(w[i]), fmt_num(v[i]));
    }
    out
}

/// Writes `n,err_w,err_v,order_w,order_v` rows, with `NA` where no order applies.
pub fn study_csv(rows: &[StudyRow]) -> String {
    let order = |o: Option<f64>| o.map_or_else(|| "NA".to_string(), fmt_num);
    let mut out = String::from("n,err_w,err_v,order_w,order_v\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt_num(r.err_w),
            fmt_num(r.err_v),
            order(r.order_w),
            order(r.order_v)
        );
    }
    out
}

fn emit(stdout: &mut String, out: Option<&Path>, body: String) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            stdout.push_str(&body);
            Ok(())
        }
    }
}

fn solver_exit(e: &SolverError) -> i32 {
    match e {
        SolverError::NotConverged { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_INPUT,
    }
}

/// `solve`: Picard iteration, CSV of `x,w,v`, summary on standard error.
pub fn run_solve(file: &Path, n: Option<usize>, tol: Option<f64>, out: Option<&Path>) -> CommandOutput {
    let problem = match load_problem(file) {
        Ok(p) => p,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut config = problem.solver.clone();
    if let Some(n) = n {
        config.n = n;
    }
    if let Some(tol) = tol {
        config.tol = tol;
    }
    let mut result = CommandOutput::default();
    match picard_solve(&problem.spec, &config) {
        Ok(sol) => {
            if let Some(x) = config.endpoint.filter(|&x| x > sol.grid.end()) {
                let _ = writeln!(result.stderr, "note: X = {x} capped at T0 = {}", sol.grid.end());
            }
            let _ = writeln!(result.stderr, "X = {}", sol.grid.end());
            let _ = writeln!(result.stderr, "iterations = {}", sol.iterations);
            let _ = writeln!(result.stderr, "final_update_norm = {:e}", sol.final_update_norm);
            let _ = writeln!(result.stderr, "box_escape = {}", sol.box_escape);
            if sol.box_escape {
                let _ = writeln!(result.stderr, "warning: iterates left the box; existence is not certified there");
            }
            let csv = solution_csv(sol.grid.points(), &sol.w, &sol.v);
            if let Err(e) = emit(&mut result.stdout, out, csv) {
                return CommandOutput::input_error(e);
            }
        }
        Err(e) => {
            result.code = solver_exit(&e);
            let _ = writeln!(result.stderr, "error: {e}");
        }
    }
    result
}

/// `window`: existence window as `key = value` lines.
pub fn run_window(file: &Path) -> CommandOutput {
    let problem = match load_problem(file) {
        Ok(p) => p,
        Err(e) => return CommandOutput::input_error(e),
    };
    let w = match existence_window(&problem.spec) {
        Ok(w) => w,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut result = CommandOutput::default();
    let out = &mut result.stdout;
    let _ = writeln!(out, "T0 = {}", fmt_num(w.t0));
    let _ = writeln!(out, "alpha = {}", fmt_num(w.alpha));
    let _ = writeln!(out, "C = {}", fmt_num(w.c));
    let _ = writeln!(out, "M = {}", fmt_num(w.m));
    let _ = writeln!(out, "r_over_C = {}", fmt_num(w.ratio));
    let _ = writeln!(out, "case = {}", w.case.tag());
    let _ = writeln!(out, "truncated_by_T = {}", w.truncated);
    if problem.spec.bound().is_none() {
        let _ = writeln!(result.stderr, "note: M estimated from a lattice of the box (x1.1)");
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Nagumo,
    Kk,
    Osgood,
}

/// Flag overrides for `certify`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CertifyOverrides {
    pub seed: Option<u64>,
    pub l: Option<f64>,
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub modulus: Option<String>,
    pub samples: Option<usize>,
}

/// Seed precedence: flag, then `FRAC_IVP_SEED`, then the file, then 0.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, file: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(text) = env {
        return text.trim().parse().map_err(|_| format!("{SEED_ENV} = {text:?} is not an unsigned integer"));
    }
    Ok(file.unwrap_or(0))
}

const DEFAULT_SAMPLES: usize = 1000;

/// `certify`: one certificate report as JSON on standard output.
pub fn run_certify(file: &Path, kind: Kind, flags: &CertifyOverrides, env_seed: Option<&str>) -> CommandOutput {
    let problem = match load_problem(file) {
        Ok(p) => p,
        Err(e) => return CommandOutput::input_error(e),
    };
    let section = &problem.certificates;
    let seed = match resolve_seed(flags.seed, env_seed, section.seed) {
        Ok(s) => s,
        Err(e) => return CommandOutput::input_error(e),
    };
    let l = flags.l.or(section.l);
    let c = flags.c.or(section.c);
    let alpha = flags.alpha.or(section.alpha);
    let p = flags.p.or(section.p);
    let modulus = flags.modulus.clone().or_else(|| section.modulus.clone());
    let samples = flags.samples.or(section.samples).unwrap_or(DEFAULT_SAMPLES);

    let mut missing = vec![];
    let need = |name: &'static str, present: bool, missing: &mut Vec<&'static str>| {
        if !present {
            missing.push(name);
        }
    };
    match kind {
        Kind::Nagumo => need("L", l.is_some(), &mut missing),
        Kind::Kk => {
            need("L", l.is_some(), &mut missing);
            need("C", c.is_some(), &mut missing);
            need("alpha", alpha.is_some(), &mut missing);
        }
        Kind::Osgood => {
            need("C", c.is_some(), &mut missing);
            need("p", p.is_some(), &mut missing);
            need("modulus", modulus.is_some(), &mut missing);
        }
    }
    if !missing.is_empty() {
        return CommandOutput::input_error(format!(
            "missing certificate parameters: {} (set them under [certificates] or as flags)",
            missing.join(", ")
        ));
    }

    let spec = &problem.spec;
    let report: Result<CertificateReport, String> = match kind {
        Kind::Nagumo => nagumo_check(spec, l.unwrap_or_default()).map_err(|e| e.to_string()),
        Kind::Kk => kk_check(spec, l.unwrap_or_default(), c.unwrap_or_default(), alpha.unwrap_or_default(), samples, seed)
            .map_err(|e| e.to_string()),
        Kind::Osgood => {
            let text = modulus.unwrap_or_default();
            match Expr::parse_modulus(&text) {
                Err(e) => Err(format!("field `modulus`: {e}")),
                Ok(m) => {
                    let mut params = OsgoodParams::new(m, p.unwrap_or_default(), c.unwrap_or_default());
                    params.samples = samples;
                    params.seed = seed;
                    if let Some(gamma) = section.gamma {
                        params.gamma = gamma;
                    }
                    if let Some(eps) = &section.eps {
                        params.eps = eps.clone();
                    }
                    osgood_check(spec, &params).map_err(|e| e.to_string())
                }
            }
        }
    };
    match report {
        Err(e) => CommandOutput::input_error(e),
        Ok(report) => {
            let mut stderr = format!("{}: {}\n", report.kind.name(), if report.holds { "holds" } else { "does not hold" });
            if kind != Kind::Nagumo {
                let _ = writeln!(stderr, "seed = {seed}");
            }
            CommandOutput {
                code: if report.holds { EXIT_OK } else { EXIT_CERTIFICATE_FAILS },
                stdout: report.to_json() + "\n",
                stderr,
            }
        }
    }
}

/// Splits `w-expr,v-expr` at the comma outside parentheses.
pub fn split_oracle(text: &str) -> Result<(&str, &str), String> {
    let mut depth = 0i32;
    let mut cut = None;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if cut.is_some() {
                    return Err("oracle must be exactly two expressions separated by a comma".into());
                }
                cut = Some(i);
            }
            _ => {}
        }
    }
    let i = cut.ok_or("oracle must be `<w-expr>,<v-expr>`")?;
    Ok((&text[..i], &text[i + 1..]))
}

/// Parses `64,128,256`.
pub fn parse_grids(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("grid size {s:?} is not a positive integer")))
        .collect()
}

/// `study`: grid refinement against an exact solution in `x`.
pub fn run_study(file: &Path, grids: &[usize], oracle: &str, out: Option<&Path>) -> CommandOutput {
    let problem = match load_problem(file) {
        Ok(p) => p,
        Err(e) => return CommandOutput::input_error(e),
    };
    if grids.is_empty() {
        return CommandOutput::input_error("--grids needs at least one size");
    }
    let oracle = match split_oracle(oracle).and_then(|(w, v)| {
        let w = Expr::parse_in_x(w).map_err(|e| format!("oracle w-expression: {e}"))?;
        let v = Expr::parse_in_x(v).map_err(|e| format!("oracle v-expression: {e}"))?;
        Ok(ExprOracle { w, v })
    }) {
        Ok(o) => o,
        Err(e) => return CommandOutput::input_error(e),
    };
    let mut result = CommandOutput::default();
    match refine_study(&problem.spec, grids, &problem.solver, &oracle) {
        Ok(rows) => {
            if let Err(e) = emit(&mut result.stdout, out, study_csv(&rows)) {
                return CommandOutput::input_error(e);
            }
        }
        Err(e) => {
            result.code = solver_exit(&e);
            let _ = writeln!(result.stderr, "error: {e}");
        }
    }
    result
}

/// Command-line interface of the `frac-ivp` binary.
#[derive(Debug, Parser)]
#[command(name = "frac-ivp", version, about = "Picard solver and uniqueness audits for fractional IVPs of order in (1, 2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve by Picard iteration and write x,w,v as CSV
    Solve {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// CSV destination (standard output when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the existence window T0, alpha and C
    Window { file: PathBuf },
    /// Check a uniqueness certificate and print its JSON report
    Certify {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        modulus: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Grid-refinement study against an exact solution
    Study {
        file: PathBuf,
        /// Comma-separated grid sizes
        #[arg(long, default_value = "64,128,256,512")]
        grids: String,
        /// Exact solution as `<w-expr>,<v-expr>` in x
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses arguments (including the program name) and runs the chosen command.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => CommandOutput { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    match cli.command {
        Command::Solve { file, n, tol, out } => run_solve(&file, n, tol, out.as_deref()),
        Command::Window { file } => run_window(&file),
        Command::Certify { file, kind, seed, l, c, alpha, p, modulus, samples } => {
            let flags = CertifyOverrides { seed, l, c, alpha, p, modulus, samples };
            run_certify(&file, kind, &flags, env_seed)
        }
        Command::Study { file, grids, oracle, out } => match parse_grids(&grids) {
            Ok(ns) => run_study(&file, &ns, &oracle, out.as_deref()),
            Err(e) => CommandOutput::input_error(e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "sigma = 1.5\nb = 1.0\nT = 1.0\ng = \"0.2*w\"\nr1 = 2.0\nr2 = 2.0\n";

    #[test]
    fn parses_full_file() {
        let text = format!("{BASE}M = 1.0\n[solver]\nn = 64\nX = 0.3\n[certificates]\nL = 0.2\nseed = 9\neps = [0.1, 0.01]\n");
        let p = parse_problem(&text).unwrap();
        assert_eq!(p.spec.sigma(), 1.5);
        assert_eq!(p.spec.bound(), Some(1.0));
        assert_eq!(p.solver.n, 64);
        assert_eq!(p.solver.endpoint, Some(0.3));
        assert_eq!(p.solver.tol, 1e-10);
        assert_eq!(p.certificates.l, Some(0.2));
        assert_eq!(p.certificates.seed, Some(9));
    }

    #[test]
    fn integers_are_accepted_as_numbers() {
        let p = parse_problem("sigma = 1.5\nb = 2\nT = 1\ng = \"0\"\nr1 = 1\nr2 = 1\n").unwrap();
        assert_eq!(p.spec.b(), 2.0);
    }

    #[test]
    fn errors_name_field_and_line() {
        let e = parse_problem(&BASE.replace("sigma = 1.5", "sigma = 2.5")).unwrap_err();
        assert!(e.contains("field `sigma` (line 1)"), "{e}");
        let e = parse_problem(&BASE.replace("0.2*w", "2+*3")).unwrap_err();
        assert!(e.contains("field `g` (line 4)") && e.contains("byte 2"), "{e}");
        let e = parse_problem(&BASE.replace("r2 = 2.0", "r2 = -1.0")).unwrap_err();
        assert!(e.contains("field `r2` (line 6)"), "{e}");
        let e = parse_problem(&BASE.replace("b = 1.0\n", "")).unwrap_err();
        assert!(e.contains("missing field `b`"), "{e}");
        let e = parse_problem(&format!("{BASE}sgima = 1\n")).unwrap_err();
        assert!(e.contains("sgima"), "{e}");
        let e = parse_problem(&format!("{BASE}[solver]\nn = 2\n")).unwrap_err();
        assert!(e.contains("solver") && e.contains("at least 8"), "{e}");
        let e = parse_problem(&format!("{BASE}M = 0\n")).unwrap_err();
        assert!(e.contains("field `M` (line 7)"), "{e}");
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(1), Some("2"), Some(3)), Ok(1));
        assert_eq!(resolve_seed(None, Some("2"), Some(3)), Ok(2));
        assert_eq!(resolve_seed(None, None, Some(3)), Ok(3));
        assert_eq!(resolve_seed(None, None, None), Ok(0));
        assert!(resolve_seed(None, Some("x"), None).is_err());
    }

    #[test]
    fn oracle_splitting() {
        assert_eq!(split_oracle("pow(x,2),1").unwrap(), ("pow(x,2)", "1"));
        assert_eq!(split_oracle("x^0.5, 1 + x").unwrap(), ("x^0.5", " 1 + x"));
        assert!(split_oracle("x").is_err());
        assert!(split_oracle("x,1,2").is_err());
        assert_eq!(parse_grids("64, 128").unwrap(), vec![64, 128]);
        assert!(parse_grids("64,a").is_err());
    }

    #[test]
    fn csv_formats() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        let rows = [
            StudyRow { n: 8, err_w: 0.5, err_v: 0.25, order_w: None, order_v: None },
            StudyRow { n: 16, err_w: 0.125, err_v: 1e-16, order_w: Some(2.0), order_v: None },
        ];
        let csv = study_csv(&rows);
        assert_eq!(csv.lines().next(), Some("n,err_w,err_v,order_w,order_v"));
        assert!(csv.lines().nth(2).unwrap().ends_with(",2.0000000000000000e0,NA"));
    }

    #[test]
    fn argument_errors_exit_one() {
        let out = run(["frac-ivp", "certify", "x.toml", "--kind", "bogus"], None);
        assert_eq!(out.code, EXIT_INPUT);
        let out = run(["frac-ivp", "--help"], None);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("solve"));
        let out = run(["frac-ivp", "window", "/nonexistent/problem.toml"], None);
        assert_eq!(out.code, EXIT_INPUT);
    }
}
