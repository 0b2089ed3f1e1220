use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renyi-lab"))
        .args(args)
        .env("RENYI_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dinf_check_exit_codes() {
    assert_eq!(lab(&["check-clt-dinf", "--model", "uniform"]).status.code(), Some(0));
    let ce = lab(&["check-clt-dinf", "--model", "counterexample"]);
    assert_eq!(ce.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&ce)).unwrap();
    assert_eq!(rep["verdict"], "fails");
    let hit = rep["zero_set"]
        .as_array()
        .unwrap()
        .iter()
        .any(|t| (t.as_f64().unwrap() - std::f64::consts::FRAC_PI_6).abs() < 1e-8);
    assert!(hit, "{rep}");
    let numeric = lab(&["check-clt-dinf", "--model", "uniform", "--numeric-only"]);
    assert_eq!(numeric.status.code(), Some(2));
}

#[test]
fn subgauss_check_separates_bernoulli_laws() {
    assert_eq!(
        lab(&["check-subgauss", "--model", "bernoulli_sym", "--range", "0:20"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        lab(&["check-subgauss", "--model", "bernoulli_asym:p=0.2", "--range", "0:20"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bad_input_exits_with_3() {
    assert_eq!(lab(&["dist", "--model", "no_such_model"]).status.code(), Some(3));
    assert_eq!(
        lab(&["dist", "--model", "uniform", "--grid", "12by4096"]).status.code(),
        Some(3)
    );
    assert_eq!(
        lab(&["rate", "--model", "uniform", "--n", "8,4"]).status.code(),
        Some(3)
    );
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn dist_prints_csv() {
    let o = lab(&[
        "dist",
        "--model",
        "uniform",
        "--grid",
        "12x4096",
        "--alpha",
        "0.5,1,2,inf",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,D_alpha,T_alpha,tail_bound"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn rate_output_is_deterministic() {
    let args = [
        "rate",
        "--model",
        "uniform",
        "--distance",
        "kl",
        "--n",
        "2,4,8",
        "--grid",
        "12x4096",
    ];
    let a = lab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_renyi-lab"))
        .args(args)
        .env("RENYI_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rate_reads_a_config_file() {
    let dir = std::env::temp_dir().join(format!("renyi-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("rate.json");
    let out = dir.join("rate.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"model": {{"kind": "uniform"}}, "distance": "chi2", "n_values": [4, 8],
                "grid": {{"half_width": 12.0, "points": 4096}}, "output": {:?}}}"#,
            out
        ),
    )
    .unwrap();
    let o = lab(&["rate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,value,"));
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zoo_lists_every_kind() {
    let text = stdout(&lab(&["zoo", "list"]));
    for kind in [
        "normal",
        "uniform",
        "bernoulli_gauss",
        "gauss_scale_mixture",
        "sin_power",
        "counterexample",
    ] {
        assert!(text.lines().any(|l| l.starts_with(kind)), "{kind} missing");
    }
}
