use std::process::Command;

use heun_appell::cli::run_cli;
use proptest::prelude::*;
use serde_json::Value;

const GENERIC: [&str; 12] = [
    "--a", "3", "--q", "0.5", "--alpha", "1.2", "--beta", "0.7", "--gamma", "0.8", "--delta", "0.6",
];

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("heun").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let (code, out, err) = run(&all);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 1);
    serde_json::from_str(&out).unwrap()
}

fn with_generic(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = GENERIC.to_vec();
    v.extend_from_slice(extra);
    v
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn eval_matches_oracle() {
    let mut args = vec!["eval"];
    args.extend(with_generic(&["--z", "0.3", "--center", "origin", "--mu", "0"]));
    let e = run_json(&args);
    args[0] = "oracle";
    let o = run_json(&args);
    let (er, ei) = pair(&e["result"]["u"]);
    let (or, oi) = pair(&o["result"]["oracle_u"]);
    assert!(((er - or).powi(2) + (ei - oi).powi(2)).sqrt() < 1e-8);
    assert_eq!(e["result"]["u"], o["result"]["eval_u"]);
}

#[test]
fn json_has_stable_fields() {
    let mut args = vec!["eval"];
    args.extend(with_generic(&["--z", "0.2,0.1"]));
    let v = run_json(&args);
    for key in [
        "params",
        "command",
        "result",
        "error_estimate",
        "tags",
        "branch_choices",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "eval");
    assert_eq!(v["tags"], serde_json::json!(["Generic"]));
    assert!(v["result"]["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn classify_two_term_family() {
    // δ = ε with α = 1.2, β = 0.7 needs γ = 2.9 - 2δ
    let v = run_json(&[
        "classify", "--a=-1", "--q", "0", "--alpha", "1.2", "--beta", "0.7", "--gamma", "1.4", "--delta", "0.75",
    ]);
    let tags: Vec<&str> = v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap())
        .collect();
    assert!(tags.contains(&"TwoTermOrigin"), "{tags:?}");
}

#[test]
fn radius_at_origin() {
    let v = run_json(&["radius", "--a", "3", "--q", "0.5", "--alpha", "1.2", "--beta", "0.7"]);
    let r = v["result"]["origin"]["radius"].as_f64().unwrap();
    assert!((r - 0.5 / 0.84).abs() < 1e-12, "{r}");
    assert_eq!(v["result"]["origin"]["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn terminate_reports_verified_roots() {
    let v = run_json(&[
        "terminate",
        "--a",
        "3",
        "--alpha",
        "2",
        "--beta",
        "0.7",
        "--gamma",
        "0.8",
        "--delta",
        "0.6",
        "--n",
        "2",
    ]);
    let roots = v["result"]["roots"].as_array().unwrap();
    assert!(!roots.is_empty());
    for r in roots {
        assert_eq!(r["verified"], true);
        // the accepted q really terminates the series
        let (qr, qi) = pair(&r["q"]);
        let q = format!("{qr},{qi}");
        let e = run_json(&[
            "eval", "--a", "3", "--q", &q, "--alpha", "2", "--beta", "0.7", "--gamma", "0.8", "--delta", "0.6", "--z",
            "0.1",
        ]);
        assert_eq!(e["result"]["est_error"], 0.0);
    }
}

#[test]
fn cbrt_literal_is_exact() {
    let v = run_json(&["classify", "--a=cbrt-minus-one", "--alpha", "1"]);
    let (re, im) = pair(&v["params"]["a"]);
    let t = std::f64::consts::FRAC_PI_3;
    assert_eq!((re, im), (t.cos(), t.sin()));
}

#[test]
fn exit_codes() {
    // flag errors
    assert_eq!(run(&["eval", "--a", "3"]).0, 2);
    assert_eq!(run(&["eval", "--a", "3,x", "--z", "0.1"]).0, 2);
    assert_eq!(run(&["eval", "--a", "1", "--z", "0.1"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    let mut args = vec!["eval"];
    args.extend(with_generic(&["--z", "0.1", "--tol", "-1"]));
    assert_eq!(run(&args).0, 2);
    // computation errors name the precondition
    let mut args = vec!["eval"];
    args.extend(with_generic(&["--z", "0.99"]));
    let (code, _, err) = run(&args);
    assert_eq!(code, 1);
    assert!(err.contains("radius"), "{err}");
    let (code, _, err) = run(&["terminate", "--a", "3", "--alpha", "2.5", "--beta", "0.7", "--n", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("N + mu"), "{err}");
    // success, help
    assert_eq!(run(&["classify", "--a", "3"]).0, 0);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_follows_the_same_contract() {
    let bin = env!("CARGO_BIN_EXE_heun");
    let ok = Command::new(bin)
        .args(["radius", "--a", "3", "--q", "0.5", "--alpha", "1.2", "--beta", "0.7"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("0.595238"));
    let bad = Command::new(bin).args(["eval", "--a", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

fn flags_from_params(p: &Value) -> Vec<String> {
    let mut v = Vec::new();
    for k in ["a", "q", "alpha", "beta", "gamma", "delta"] {
        let (re, im) = pair(&p[k]);
        v.push(format!("--{k}={re},{im}"));
    }
    v
}

fn round_trip(cmd: &str, extra: &[String], p: Value) {
    let mut args: Vec<String> = vec![cmd.into()];
    args.extend(flags_from_params(&p));
    args.extend_from_slice(extra);
    args.extend(["--output".into(), "json".into()]);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let (code, first, _) = run(&refs);
    if code != 0 {
        return;
    }
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["params"], p);
    let mut again: Vec<String> = vec![cmd.into()];
    again.extend(flags_from_params(&v["params"]));
    again.extend_from_slice(extra);
    again.extend(["--output".into(), "json".into()]);
    let refs: Vec<&str> = again.iter().map(String::as_str).collect();
    let (_, second, _) = run(&refs);
    assert_eq!(first, second);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_round_trips(
        a in 1.5f64..4.0, ai in -0.5f64..0.5,
        q in -1.0f64..1.0, al in 0.2f64..2.0, be in 0.2f64..2.0,
        g in 0.15f64..0.85, d in 0.1f64..1.5,
        zr in -0.2f64..0.2, zi in -0.2f64..0.2,
    ) {
        let p = serde_json::json!({
            "a": [a, ai], "q": [q, 0.0], "alpha": [al, 0.0],
            "beta": [be, 0.0], "gamma": [g, 0.0], "delta": [d, 0.0],
        });
        round_trip("classify", &[], p.clone());
        round_trip("eval", &[format!("--z={zr},{zi}")], p);
    }
}
