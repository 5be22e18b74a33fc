//! Driving the command layer in-process from a TOML problem file.
//!
//! Run with `cargo run --example problem_file`.

use frac_ivp::cli;

const PROBLEM: &str = r#"
sigma = 1.5
b = 1.0
T = 1.0
g = "0.2*sin(w) + 0.05*v"
r1 = 5.0
r2 = 5.0

[solver]
n = 64

[certificates]
L = 0.2
seed = 11
"#;

fn main() {
    let problem = cli::parse_problem(PROBLEM).unwrap();
    println!("sigma = {}, horizon = {}", problem.spec.sigma(), problem.spec.horizon());

    let path = std::env::temp_dir().join("frac_ivp_problem_file_example.toml");
    std::fs::write(&path, PROBLEM).unwrap();
    let file = path.to_str().unwrap();
    for args in [
        vec!["frac-ivp", "window", file],
        vec!["frac-ivp", "certify", file, "--kind", "nagumo"],
        vec!["frac-ivp", "certify", file, "--kind", "osgood"],
    ] {
        let out = cli::run(args.clone(), None);
        println!("$ {} -> exit {}", args[1..].join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
    }

    let out = cli::run(["frac-ivp", "solve", file], None);
    println!("$ solve -> exit {}, {} CSV lines", out.code, out.stdout.lines().count());
    println!("{}", out.stdout.lines().take(3).collect::<Vec<_>>().join("\n"));

    match cli::parse_problem(&PROBLEM.replace("0.2*sin(w)", "0.2*sin(w")) {
        Err(e) => println!("malformed g: {e}"),
        Ok(_) => unreachable!(),
    }
    std::fs::remove_file(path).ok();
}
