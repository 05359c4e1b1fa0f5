use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermite-cs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

/// Entropy of a two-mode squeezed vacuum whose Schmidt values fall off by `lam`.
fn tmsv_entropy(lam: f64) -> f64 {
    let l2 = lam * lam;
    -(1.0 - l2).ln() - l2 * l2.ln() / (1.0 - l2)
}

#[test]
fn orthogonality_example() {
    let o = run(&["verify-orthogonality", "--family", "k1d", "--alpha", "0.5", "--n", "10", "--order", "80"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["command"], "verify-orthogonality");
    assert!(f(&r["results"]["max_off_diagonal"]) <= 1e-8);
    assert_eq!(r["results"]["dimension"], 10);
    let checks = r["checks"].as_array().unwrap();
    assert!(!checks.is_empty() && checks.iter().all(|c| c["pass"] == true));
    for key in ["command", "parameters", "results", "checks", "warnings", "wall_time_s"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "parameters", "results", "checks", "warnings", "wall_time_s"]);
}

#[test]
fn kernel_example() {
    let o = run(&["kernel", "--spec", "bargmann1d", "--z", "0", "--w", "1"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(f(&r["results"]["value"]["re"]), 1.0);
    assert_eq!(f(&r["results"]["value"]["im"]), 0.0);
    // exp(z conj w) at z = i, w = 1 + i is exp(1 + i)
    let o = run(&["kernel", "--spec", "bargmann1d", "--z", "1i", "--w", "1+1i"]);
    let v = &json(&o)["results"]["value"];
    let e = std::f64::consts::E;
    assert!((f(&v["re"]) - e * 1f64.cos()).abs() < 1e-15 && (f(&v["im"]) - e * 1f64.sin()).abs() < 1e-15);
}

#[test]
fn entropy_sweep_example() {
    let o = run(&["entropy-sweep", "--z1", "0.3", "--z2", "0.3", "--alphas", "0.3,0.5,0.7,0.9,0.99", "--n", "12"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,entropy,entropy_log2,effective_rank,tail"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    let last = rows[4][1];
    assert!(rows[..4].iter().all(|r| r[1] > last));
    // entropy does not depend on the point, so the squeezed-vacuum value applies
    for r in &rows[2..] {
        let eps = (1.0 - r[0]) / (1.0 + r[0]);
        assert!((r[1] - tmsv_entropy(eps)).abs() < 1e-6, "{r:?}");
        assert!((r[2] - r[1] / std::f64::consts::LN_2).abs() < 1e-15);
    }
    let o = run(&["entropy-sweep", "--z1", "0.3", "--z2", "0.3", "--format", "json"]);
    let r = json(&o);
    assert_eq!(r["results"]["curve"].as_array().unwrap().len(), 5);
    assert_eq!(r["checks"][0]["name"], "final entropy smallest");
    assert!(!r["warnings"].as_array().unwrap().is_empty(), "alpha=0.3 at N=12 leaves a visible tail");
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = ["squeeze-compare", "--xi", "0.2-0.4i", "--deterministic"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let out = scratch("det.json");
    let c = run(&[&args[..], &["--output", out.to_str().unwrap()]].concat());
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    let d = bin().args(args).env("HERMITE_CS_THREADS", "1").output().unwrap();
    assert_eq!(d.stdout, a.stdout);
    let r = json(&a);
    assert_eq!(f(&r["wall_time_s"]), 0.0);
}

#[test]
fn numbers_carry_seventeen_digits() {
    let o = run(&["kernel", "--spec", "szego", "--z", "0", "--w", "0", "--deterministic"]);
    let text = String::from_utf8(o.stdout).unwrap();
    // 1/(2 pi)
    assert!(text.contains("1.5915494309189535e-1"), "{text}");
    let v = f(&serde_json::from_str::<Value>(&text).unwrap()["results"]["value"]["re"]);
    assert_eq!(v, 1.0 / (2.0 * std::f64::consts::PI));
}

#[test]
fn exit_codes() {
    // check failures
    assert_eq!(code(&run(&["squeeze-compare", "--xi", "0.3", "--middle", "as-printed"])), 1);
    assert_eq!(code(&run(&["verify-orthogonality", "--family", "h1d", "--tol", "1e-20"])), 1);
    assert_eq!(code(&run(&["logconvexity", "--kind", "counterexample"])), 1);
    assert_eq!(code(&run(&["logconvexity", "--kind", "counterexample", "--expect", "fail"])), 0);
    // usage errors
    for args in [
        &["verify-orthogonality", "--alpha", "1.5"][..],
        &["kernel", "--z", "one"],
        &["kernel", "--spec", "nope"],
        &["squeeze-compare", "--xi", "6"],
        &["kernel", "--bogus", "1"],
        &["kernel", "--spec", "bergman", "--z", "1.2"],
        &["entropy-sweep", "--n", "4"],
        &["run"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("eval-basis") && err.contains("limit-scan"), "{err}");
    // a failed check still writes its report
    let o = run(&["limit-scan", "--tol", "1e-9", "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["checks"][1]["pass"], false);
}

#[test]
fn config_precedence() {
    let cfg = scratch("prec.cfg");
    std::fs::write(&cfg, "# defaults for a coherent state\nalpha = 0.3\nn = 6\nz1 = 0.1\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["coherent-state", "--config", c, "--n", "4", "--z2", "0.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = &json(&o)["parameters"];
    assert_eq!(f(&p["alpha"]), 0.3);
    assert_eq!(p["n"], 4);
    assert_eq!(f(&p["z1"]["re"]), 0.1);
    assert_eq!(f(&p["z2"]["re"]), 0.2);
    let o = run(&["coherent-state", "--z", "0.1"]);
    let p = &json(&o)["parameters"];
    assert_eq!(f(&p["alpha"]), 0.5);
    assert_eq!(p["n"], 12);

    std::fs::write(&cfg, "rank_tol = 1e-3\nstray = 1\n").unwrap();
    let o = run(&["schmidt", "--config", c, "--alpha", "0.9"]);
    let r = json(&o);
    assert_eq!(f(&r["parameters"]["rank-tol"]), 1e-3);
    assert_eq!(r["warnings"][0], "parameter \"stray\" is not used by schmidt");

    let job = scratch("job.cfg");
    std::fs::write(&job, "command = resolution-check\narity = 2\n").unwrap();
    let o = run(&["run", "--config", job.to_str().unwrap(), "--deterministic"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["command"], "resolution-check");
    assert_eq!(r["parameters"]["arity"], "2");
    assert!(f(&r["results"]["residual"]) <= 1e-5);

    std::fs::write(&job, "command = kernel\n").unwrap();
    assert_eq!(code(&run(&["schmidt", "--config", job.to_str().unwrap()])), 2);
    std::fs::write(&job, "alpha: 0.3\n").unwrap();
    assert_eq!(code(&run(&["kernel", "--config", job.to_str().unwrap()])), 2);
    std::fs::write(&job, "command = nope\n").unwrap();
    assert_eq!(code(&run(&["run", "--config", job.to_str().unwrap()])), 2);
}

#[test]
fn schmidt_reads_a_matrix_file() {
    let m = scratch("product.txt");
    // rank one: (1, 2i) times (3, -1)
    std::fs::write(&m, "3, -1\n6i -2i\n").unwrap();
    let o = run(&["schmidt", "--input", m.to_str().unwrap(), "--max-entropy", "1e-12"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["results"]["effective_rank"], 1);
    assert_eq!(r["results"]["witness"]["product"], true);
    let s = f(&r["results"]["singular_values"][0]);
    assert!((s - (5.0f64 * 10.0).sqrt()).abs() < 1e-12);

    std::fs::write(&m, "1 0\n0 1\n").unwrap();
    let r = json(&run(&["schmidt", "--input", m.to_str().unwrap()]));
    assert!((f(&r["results"]["entropy"]) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(r["results"]["witness"]["product"], false);

    std::fs::write(&m, "1 0 0\n0 1\n").unwrap();
    assert_eq!(code(&run(&["schmidt", "--input", m.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["schmidt", "--input", "/nonexistent/matrix"])), 2);
}

#[test]
fn every_subcommand_runs_on_defaults() {
    for cmd in [
        "eval-basis",
        "kernel",
        "zaremba-compare",
        "verify-orthogonality",
        "transform-check",
        "compose-check",
        "coherent-state",
        "eigen-residual",
        "squeeze-compare",
        "resolution-check",
        "schmidt",
        "entropy-sweep",
        "logconvexity",
        "limit-scan",
    ] {
        let o = run(&[cmd, "--deterministic"]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn acceptance_style_invocations() {
    for args in [
        &["verify-orthogonality", "--family", "h2d", "--n", "4", "--order", "40"][..],
        &["zaremba-compare", "--spec", "vanem2d", "--alpha", "0.3", "--z1", "1.5", "--z2", "-1i", "--w1", "0.3-0.2i", "--w2", "0.6"],
        &["transform-check", "--transform", "b2", "--alpha", "0.5"],
        &["compose-check", "--arity", "2"],
        &["limit-scan", "--kind", "c2hat"],
        &["eigen-residual", "--z1", "1", "--z2", "1i", "--n", "24"],
        &["squeeze-compare", "--xi", "-0.35+0.35i", "--arity", "2"],
        &["schmidt", "--alpha", "0.5", "--min-entropy", "0.05"],
        &["schmidt", "--alpha", "0.999", "--z1", "0.5", "--z2", "-0.5i", "--max-entropy", "1e-3"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn csv_falls_back_to_checks() {
    let o = run(&["resolution-check", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value,tolerance,pass"));
    assert!(lines.next().unwrap().ends_with(",true"));
}
