use std::fs;

use krylov_agp::cli::{main_with_args, resolve_config, run, ExperimentConfig, Output, Subcommand, SharedArgs};

fn bin_args(args: &[&str]) -> Vec<String> {
    std::iter::once("krylov-agp").chain(args.iter().copied()).map(String::from).collect()
}

fn run_to_file(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let mut a = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    a.extend(["--out", &out_s]);
    let code = main_with_args(bin_args(&a));
    (code, fs::read_to_string(&out).unwrap_or_default())
}

#[test]
fn two_level_lanczos_rows() {
    let (code, text) = run_to_file(&["lanczos", "--model", "two_level", "--param", "lambda=1", "--param", "delta=1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,b_n,model,params_hash");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,2.0000000000000000e0,two_level,"));
    assert!(lines[2].starts_with("2,2.0000000000000000e0,two_level,"));
}

#[test]
fn sweep_is_byte_reproducible_across_thread_counts() {
    let base = [
        "sweep", "--model", "four_body", "--sweep", "lambda:0.1:2:6", "--mu", "0.25", "--truncate", "0..2,full",
        "--method", "krylov,exact",
    ];
    let (c1, a) = run_to_file(&base);
    let mut more = base.to_vec();
    more.extend(["--threads", "3"]);
    let (c2, b) = run_to_file(&more);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    // Six sweep points with four Krylov rows and one exact row each.
    assert_eq!(a.lines().count(), 1 + 6 * 5);
    let header = a.lines().next().unwrap();
    assert_eq!(header, "sweep_value,mu,method,truncation,norm,norm_over_L,bound,gauge_residual");
}

#[test]
fn four_body_sweep_matches_oracle() {
    let mut cfg = ExperimentConfig::from_json(
        r#"{"model": "four_body", "sweep": {"parameter": "lambda", "from": 0.1, "to": 2.0, "steps": 20},
            "mu": 0.25, "methods": ["krylov", "exact"]}"#,
    )
    .unwrap();
    cfg.subcommand = Some(Subcommand::Sweep);
    let Output::Table(t) = run(&cfg).unwrap() else { panic!("table expected") };
    let norm = t.column("norm").unwrap();
    let residual = t.column("gauge_residual").unwrap();
    for pair in t.rows.chunks(2) {
        let value = |c: &krylov_agp::cli::Cell| match c {
            krylov_agp::cli::Cell::Float(v) => *v,
            other => panic!("{other:?}"),
        };
        let (k, e) = (value(&pair[0][norm]), value(&pair[1][norm]));
        assert!((k - e).abs() <= 1e-6 * e, "{k} vs {e}");
        assert!(value(&pair[0][residual]) <= 1e-8);
    }
}

#[test]
fn truncated_norms_stay_below_full_for_xxz() {
    let (code, text) = run_to_file(&[
        "sweep", "--model", "xxz_open", "--param", "L=6", "--sweep", "delta:0.25:1.25:3", "--truncate", "0..8,full",
        "--method", "krylov", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    for point in rows.chunks(10) {
        let full = point[9]["norm"].as_f64().unwrap();
        assert_eq!(point[9]["truncation"], "full");
        for r in &point[..9] {
            assert!(r["norm"].as_f64().unwrap() <= full * (1.0 + 1e-12));
        }
    }
}

#[test]
fn truncation_report_for_ising() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("report.json");
    fs::write(
        &cfg,
        r#"{"models": [
              {"model": "ising_periodic", "params": {"L": 6, "h": 1}},
              {"model": "ising_periodic", "params": {"L": 8, "h": 1}}
           ]}"#,
    )
    .unwrap();
    let (code, text) = run_to_file(&["truncation-report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let models = v["models"].as_array().unwrap();
    assert_eq!(models[0]["max_truncation"], 4);
    assert_eq!(models[0]["n_for_agreement"], 4);
    assert_eq!(models[1]["max_truncation"], 6);
    assert_eq!(models[1]["n_for_agreement"], 6);
}

#[test]
fn scaling_emits_fit_slope() {
    let (code, text) = run_to_file(&["scaling", "--family", "gaussian", "--sizes", "10,11,12,13,14,15,16"]);
    assert_eq!(code, 0);
    let last = text.lines().last().unwrap();
    let slope: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((slope / 2f64.ln() - 1.0).abs() < 0.15);
    assert!(text.lines().skip(1).all(|l| l.contains(",quadrature,") || l.contains(",closed_form,")));
}

#[test]
fn exit_codes() {
    assert_eq!(main_with_args(bin_args(&["agp", "--model", "nope"])), 2);
    assert_eq!(main_with_args(bin_args(&["agp", "--model", "two_level", "--param", "lambda=1"])), 2);
    assert_eq!(main_with_args(bin_args(&["agp", "--model", "two_level", "--param", "x"])), 2);
    assert_eq!(main_with_args(bin_args(&["sweep", "--model", "two_level", "--param", "lambda=1", "--param", "delta=1"])), 2);
    assert_eq!(main_with_args(bin_args(&["bogus"])), 2);
    // Degenerate levels coupled by the deformation at μ = 0.
    let degenerate = ["agp", "--model", "four_body", "--param", "lambda=0", "--mu", "0", "--method", "exact"];
    assert_eq!(run_to_file(&degenerate).0, 3);
    let big = ["agp", "--model", "ising_periodic", "--param", "L=13", "--param", "h=1", "--method", "exact"];
    assert_eq!(run_to_file(&big).0, 4);
}

#[test]
fn config_errors_name_line_and_key() {
    let e = ExperimentConfig::from_json("{\n  \"model\": \"lmg\",\n  \"stepz\": 3\n}").unwrap_err();
    let msg = e.to_string();
    assert!(msg.contains("line 3"), "{msg}");
    assert!(msg.contains("stepz"), "{msg}");
    let e = ExperimentConfig::from_json(r#"{"sweep": {"parameter": "J", "from": 0, "to": 1, "steps": 0}}"#)
        .unwrap()
        .validate()
        .unwrap_err();
    assert!(e.to_string().contains("sweep.steps"));
    assert!(ExperimentConfig::from_json(r#"{"mu": "sometimes"}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"truncate": [-1]}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"methods": []}"#).unwrap().validate().is_err());
}

#[test]
fn flags_override_config_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, r#"{"model": "lmg", "params": {"S": 10, "J": 0.5}, "mu": 0.1, "truncate": [0, "full"]}"#).unwrap();
    let args = SharedArgs {
        config: Some(path),
        params: vec!["J=0.25".into()],
        mu: Some("auto".into()),
        threads: Some(2),
        ..Default::default()
    };
    let cfg = resolve_config(Subcommand::Agp, &args).unwrap();
    assert_eq!(cfg.params["J"], 0.25);
    assert_eq!(cfg.params["S"], 10.0);
    assert_eq!(cfg.threads, 2);
    let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
    assert_eq!(back, cfg);
    assert!(cfg.to_json().contains("\"mu\": \"auto\""));
}

#[test]
fn print_config_succeeds_without_running() {
    let code = main_with_args(bin_args(&["agp", "--model", "lmg", "--param", "S=200", "--param", "J=1", "--print-config"]));
    assert_eq!(code, 0);
}
