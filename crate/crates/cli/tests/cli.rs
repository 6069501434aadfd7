use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ghostlight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghostlight"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn simulate_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2a.csv");
    let o = ghostlight(&[
        "simulate",
        "--config",
        path_str(&config("fig2a.toml")),
        "--out",
        path_str(&out),
        "--emit-plot",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("u2_mm,gamma_re,gamma_im,gamma_sq,gamma_sq_norm,I1,I2,G2\n"));
    assert_eq!(csv.lines().count(), 202);
    let gp = std::fs::read_to_string(dir.path().join("fig2a.gp")).unwrap();
    assert!(gp.contains("'fig2a.csv'"));
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(
        summary.contains("peaks (mm): [-0.015000, 0.015000]"),
        "{summary}"
    );
}

#[test]
fn preset_matches_its_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let from_preset = dir.path().join("preset.csv");
    let from_config = dir.path().join("config.csv");
    assert!(
        ghostlight(&["preset", "fig2a", "--out", path_str(&from_preset)])
            .status
            .success()
    );
    assert!(ghostlight(&[
        "simulate",
        "--config",
        path_str(&config("fig2a.toml")),
        "--out",
        path_str(&from_config)
    ])
    .status
    .success());
    assert_eq!(
        std::fs::read(&from_preset).unwrap(),
        std::fs::read(&from_config).unwrap()
    );
}

#[test]
fn preset_without_out_prints_csv() {
    let o = ghostlight(&["preset", "fig4b"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 202);
}

#[test]
fn sweep_preset_writes_one_file_per_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig5.csv");
    let o = ghostlight(&["preset", "fig5", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for label in ["sigma_I-1", "sigma_I-5", "sigma_I-10"] {
        let csv = std::fs::read_to_string(dir.path().join(format!("fig5_{label}.csv"))).unwrap();
        assert!(csv.starts_with("value,V,Q,error\n"));
        assert_eq!(csv.lines().count(), 13);
    }
}

#[test]
fn sweep_command_reads_the_sweep_section() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = ghostlight(&[
        "sweep",
        "--config",
        path_str(&config("sigma-g-sweep.toml")),
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 6);

    let no_sweep = ghostlight(&[
        "sweep",
        "--config",
        path_str(&config("fig2a.toml")),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(no_sweep.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let ok = ghostlight(&["verify", "--config", path_str(&config("relaxed.toml"))]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    let strict = ghostlight(&[
        "verify",
        "--config",
        path_str(&config("relaxed.toml")),
        "--rtol",
        "1e-15",
    ]);
    assert_eq!(strict.status.code(), Some(3));

    // the imaging preset is beyond the brute-force grid
    let refused = ghostlight(&["verify", "--config", path_str(&config("fig2a.toml"))]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("brute-force"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("fig2a.toml")).unwrap();
    let typo = write_config(
        dir.path(),
        "typo.toml",
        &text.replace("slit_width", "slit_widht"),
    );
    let o = ghostlight(&["simulate", "--config", path_str(&typo)]);
    assert_eq!(o.status.code(), Some(1));

    let both = write_config(
        dir.path(),
        "both.toml",
        &text.replace("sigma_g = 1e-5", "sigma_g = 1e-5\ntemperature = 5000.0"),
    );
    let o = ghostlight(&["simulate", "--config", path_str(&both)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("source"));

    let missing = ghostlight(&[
        "simulate",
        "--config",
        path_str(&dir.path().join("absent.toml")),
    ]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(ghostlight(&["preset", "fig9"]).status.code(), Some(1));
    assert_eq!(ghostlight(&["simulate"]).status.code(), Some(1));
}

#[test]
fn numerical_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("fig2a.toml")).unwrap();
    let focused = write_config(
        dir.path(),
        "focused.toml",
        &text.replace("l2 = 20.0", "l2 = 15.0"),
    );
    let o = ghostlight(&["simulate", "--config", path_str(&focused)]);
    assert_eq!(o.status.code(), Some(2));

    // an opaque object still writes its all-zero scan before reporting
    let empty_text = text.replace(
        "type = \"double_slit\"\nslit_width = 0.01\nseparation = 0.03",
        "type = \"empty\"",
    );
    let empty = write_config(dir.path(), "empty.toml", &empty_text);
    let out = dir.path().join("empty.csv");
    let o = ghostlight(&[
        "simulate",
        "--config",
        path_str(&empty),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("visibility"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 202);
}

#[test]
fn engine_override_and_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_ghostlight"))
        .args([
            "simulate",
            "--config",
            path_str(&config("relaxed.toml")),
            "--engine",
            "brute",
        ])
        .env("GHOSTLIGHT_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 22);

    let bad = Command::new(env!("CARGO_BIN_EXE_ghostlight"))
        .args(["preset", "fig2a"])
        .env("GHOSTLIGHT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn blackbody_prints_the_coherence_width() {
    let hot = ghostlight(&["blackbody", "--temperature", "6000"]);
    let cold = ghostlight(&["blackbody", "--temperature", "3000"]);
    assert!(hot.status.success() && cold.status.success());
    let parse = |o: &Output| {
        String::from_utf8_lossy(&o.stdout)
            .trim()
            .parse::<f64>()
            .unwrap()
    };
    assert!((parse(&cold) / parse(&hot) - 2.0).abs() < 1e-5);
    assert_eq!(
        ghostlight(&["blackbody", "--temperature", "-5"])
            .status
            .code(),
        Some(1)
    );
}
