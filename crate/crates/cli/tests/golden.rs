//! Each case runs the binary and compares stdout with `tests/golden/<name>`.
//! Numbers must agree to 1e−12 (relative above 1); everything else exactly.
//! `UPDATE_GOLDEN=1 cargo test -p favard-cli --test golden` rewrites the files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_favard")).args(args).env_remove("FAVARD_THREADS").output().expect("spawn favard")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn close(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0),
        _ => false,
    }
}

fn same_json(a: &serde_json::Value, b: &serde_json::Value) -> bool {
    use serde_json::Value as V;
    match (a, b) {
        (V::Number(x), V::Number(y)) => close(&x.to_string(), &y.to_string()),
        (V::String(x), V::String(y)) => close(x, y),
        (V::Array(x), V::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same_json(p, q)),
        (V::Object(x), V::Object(y)) => x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| same_json(v, w))),
        _ => a == b,
    }
}

fn same_csv(got: &str, want: &str) -> Result<(), String> {
    let (g, w): (Vec<&str>, Vec<&str>) = (got.lines().collect(), want.lines().collect());
    if g.len() != w.len() {
        return Err(format!("{} lines, expected {}", g.len(), w.len()));
    }
    for (i, (a, b)) in g.iter().zip(&w).enumerate() {
        let (fa, fb): (Vec<&str>, Vec<&str>) = (a.split(',').collect(), b.split(',').collect());
        if fa.len() != fb.len() || !fa.iter().zip(&fb).all(|(p, q)| close(p, q)) {
            return Err(format!("line {}:\n  got  {a}\n  want {b}", i + 1));
        }
    }
    Ok(())
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{name}: stderr {}", String::from_utf8_lossy(&out.stderr));
    let got = String::from_utf8(out.stdout).expect("utf-8 output");
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).expect("write golden");
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    if name.ends_with(".json") {
        let (g, w): (serde_json::Value, serde_json::Value) =
            (serde_json::from_str(&got).expect("valid json"), serde_json::from_str(&want).expect("golden json"));
        assert!(same_json(&g, &w), "{name}:\n{got}\nexpected\n{want}");
    } else if let Err(e) = same_csv(&got, &want) {
        panic!("{name}: {e}");
    }
}

#[test]
fn basis_eval_legendre() {
    golden("basis_legendre.csv", &["basis", "eval", "--family", "legendre", "--n", "0:3", "--grid", "-20:20:0.5"], 0);
}

#[test]
fn basis_eval_mt() {
    golden("basis_mt.csv", &["basis", "eval", "--family", "mt", "--n", "-2:1", "--grid", "-3:3:0.25"], 0);
}

#[test]
fn basis_eval_custom_weight() {
    golden(
        "basis_custom.csv",
        &["basis", "eval", "--family", "custom-weight:exp(-x^4)", "--n", "0:2", "--grid", "-4:4:1"],
        0,
    );
}

#[test]
fn quad_hermite() {
    golden("quad_hermite.csv", &["quad", "--family", "hermite", "--N", "6"], 0);
}

#[test]
fn quad_jacobi_weights_only() {
    golden("quad_jacobi.csv", &["quad", "--family", "jacobi:0.5,-0.5", "--N", "5", "--emit", "weights"], 0);
}

#[test]
fn diffmat_entries() {
    golden("diffmat_mt.csv", &["diffmat", "--family", "mt", "--N", "6"], 0);
    golden("diffmat_laguerre.csv", &["diffmat", "--family", "laguerre:0.5", "--N", "4"], 0);
}

#[test]
fn diffmat_radius() {
    golden("diffmat_hermite.json", &["diffmat", "--family", "hermite", "--N", "8", "--emit", "radius"], 0);
}

#[test]
fn coeffs_methods() {
    golden("coeffs_mt_fft.csv", &["coeffs", "--family", "mt", "--f", "exp(-x^2)", "--N", "32", "--method", "fft"], 0);
    golden(
        "coeffs_tanh_dct.csv",
        &["coeffs", "--family", "tanhjacobi:0.25,0.25", "--f", "1/cosh(x)", "--N", "16", "--out", "csv"],
        0,
    );
    golden(
        "coeffs_hermite_quad.csv",
        &["coeffs", "--family", "hermite", "--f", "x*exp(-x^2)", "--N", "8", "--xmax", "12", "--points", "1201"],
        0,
    );
}

#[test]
fn decay_fit() {
    golden(
        "decay_exp.json",
        &["decay", "--model", "exp", "--family", "mt", "--f", "1/(1+x^4)", "--N", "1024", "--scale", "1"],
        0,
    );
}

#[test]
fn periodic_eval() {
    golden("periodic.csv", &["periodic", "eval", "--a", "0.5", "--n", "0:2", "--grid", "-pi:pi:pi/8"], 0);
}

#[test]
fn schrodinger_free_and_harmonic() {
    golden(
        "schrodinger_free.csv",
        &["schrodinger", "--basis", "hermite", "--N", "16", "--f0", "exp(-x^2/2)", "--T", "0.5", "--tau", "0.25", "--grid", "-3:3:1"],
        0,
    );
    golden(
        "schrodinger_harmonic.csv",
        &[
            "schrodinger", "--basis", "hermite", "--N", "24", "--f0", "exp(-(x-1)^2/2)", "--T", "0.3", "--tau", "0.01",
            "--potential", "x^2", "--every", "10", "--grid", "-3:3:1",
        ],
        0,
    );
}

#[test]
fn verify_suites() {
    golden("verify_hermite.json", &["verify", "all", "--family", "hermite", "--N", "12"], 0);
    golden("verify_charlier.json", &["verify", "all", "--family", "charlier:0.5", "--N", "6"], 0);
    golden("verify_tanhjacobi.json", &["verify", "tanh-jacobi", "--family", "tanhjacobi:0.75,0.75", "--N", "4"], 0);
}

#[test]
fn decay_reads_coefficient_csv() {
    let dir = std::env::temp_dir().join(format!("favard-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("c.csv");
    let f = file.to_str().unwrap();
    let c = run(&["coeffs", "--family", "mt", "--f", "1/(1+x^4)", "--N", "1024", "--scale", "1", "--out", f]);
    assert!(c.status.success());
    let d = run(&["decay", "--model", "exp", "--input", f]);
    assert!(d.status.success());
    let v: serde_json::Value = serde_json::from_slice(&d.stdout).unwrap();
    let rho = v["fit"]["param"].as_f64().unwrap();
    assert!((rho - (1.0 + 2f64.sqrt())).abs() < 1e-3, "{rho}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn failing_check_exits_one() {
    // the ±40 window misses the slow x^{−5/4} tail of this family
    let out = run(&["verify", "gram", "--family", "jacobi:0.5,0.5", "--N", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "favard.verify");
    assert_eq!(v["reports"][0]["pass"], false);
}

#[test]
fn usage_errors_exit_two_with_help() {
    for args in [
        &["basis", "eval", "--family", "nope", "--n", "0"][..],
        &["basis", "eval", "--family", "hermite", "--n", "0:2", "--grid", "0:1"],
        &["basis", "eval", "--family", "hermite", "--n", "-1:2"],
        &["coeffs", "--family", "hermite", "--f", "exp(-x^2", "--N", "4"],
        &["coeffs", "--family", "hermite", "--f", "1", "--N", "4", "--method", "fft"],
        &["schrodinger", "--basis", "legendre", "--N", "8", "--f0", "1", "--T", "1", "--tau", "0.5", "--potential", "x"],
        &["schrodinger", "--basis", "hermite", "--N", "8", "--f0", "1", "--T", "1", "--tau", "0.3"],
        &["verify", "cramer", "--family", "legendre", "--N", "4"],
        &["decay", "--model", "quadratic", "--input", "-"],
        &["quad", "--family", "hermite"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("Usage:"), "{args:?}: {err}");
        assert!(out.stdout.is_empty(), "{args:?} wrote output");
    }
}

#[test]
fn thread_cap_is_validated_and_output_is_deterministic() {
    let args = ["basis", "eval", "--family", "conthahn:0.5,0.5", "--n", "0:2", "--grid", "-2:2:0.5"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_favard")).args(args).env("FAVARD_THREADS", "1").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_favard")).args(args).env("FAVARD_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
