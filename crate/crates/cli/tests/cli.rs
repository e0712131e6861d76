use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jetflow::{phi, Mu};
use jetflow_cli::config::{config_from_output, ExperimentConfig};
use tempfile::TempDir;

fn jetflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    jetflow(&args)
}

/// Data rows as numbers, skipping metadata and the header row.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split([',', '\t']).map(|f| f.parse().unwrap()).collect())
        .collect()
}

fn summary_value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with("# summary:")).expect("summary line");
    let field = line
        .split_whitespace()
        .find_map(|w| w.strip_prefix(&format!("{key}=")))
        .expect("summary key");
    field.parse().unwrap()
}

const FREE: &str = r#"
mu = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]

[initial]
reduced = [0.5, -0.25, 0.75, 0.5]

[integrator]
step = 1e-3
t_final = 4.0
sample_stride = 100
"#;

#[test]
fn verify_passes_and_is_deterministic() {
    let a = jetflow(&["verify"]);
    let b = jetflow(&["verify"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_detects_a_corrupted_constant() {
    let out = jetflow(&["verify", "--corrupt-structure"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL bracket_table"), "{text}");
}

#[test]
fn free_motion_is_a_straight_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "free.toml", FREE);
    let out = dir.path().join("free.csv");
    let status = run("simulate", &cfg, &out, &["--freeze-metadata"]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("t[time],x[length],y[length],px[momentum],py[momentum]"));
    let data = rows(&text);
    assert_eq!(data.len(), 41);
    for r in &data {
        let t = r[0];
        assert!((r[1] - (0.5 + 0.75 * t)).abs() < 1e-12);
        assert!((r[2] - (-0.25 + 0.5 * t)).abs() < 1e-12);
        assert_eq!((r[3], r[4]), (0.75, 0.5));
    }
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "free.toml", FREE);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    run("simulate", &cfg, &a, &["--freeze-metadata"]);
    run("simulate", &cfg, &b, &["--freeze-metadata"]);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // The output path is part of the echoed config, so compare with it masked.
    let mask = |t: &[u8], p: &Path| String::from_utf8(t.to_vec()).unwrap().replace(p.to_str().unwrap(), "OUT");
    assert_eq!(mask(&ta, &a), mask(&tb, &b));

    let c = dir.path().join("c.csv");
    run("simulate", &cfg, &c, &[]);
    let stamped = std::fs::read_to_string(&c).unwrap();
    assert!(stamped.contains("# timestamp: "));
    let unstamped: String = stamped
        .lines()
        .filter(|l| !l.starts_with("# timestamp"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(unstamped.replace(c.to_str().unwrap(), "OUT"), mask(&ta, &a));
}

#[test]
fn echoed_config_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg_path = write_config(&dir, "free.toml", FREE);
    let out = dir.path().join("free.tsv");
    run("simulate", &cfg_path, &out, &["--freeze-metadata", "--step", "5e-4"]);
    let text = std::fs::read_to_string(&out).unwrap();
    let echoed = config_from_output(&text).unwrap();

    let mut expected = ExperimentConfig::parse(FREE).unwrap();
    expected.integrator.step = 5e-4;
    expected.output.path = Some(out.display().to_string());
    assert_eq!(echoed, expected);
}

#[test]
fn tsv_format_uses_tabs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "free.toml", &format!("{FREE}\n[output]\nformat = \"tsv\"\n"));
    let out = dir.path().join("free.tsv");
    run("simulate", &cfg, &out, &["--freeze-metadata"]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("t[time]\tx[length]\t"));
    assert_eq!(rows(&text).len(), 41);
}

#[test]
fn config_errors_name_the_field_and_write_nothing() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (FREE.replace("sample_stride", "sample_strides"), vec![], "sample_strides"),
        (FREE.replace("step = 1e-3", "step = 0.0"), vec![], "integrator.step"),
        (FREE.to_string(), vec!["--t-final", "-1"], "integrator.t_final"),
        (
            FREE.replace("reduced = [0.5, -0.25, 0.75, 0.5]", "full = [1.0, 2.0]"),
            vec![],
            "initial.full",
        ),
    ];
    for (k, (text, extra, field)) in cases.iter().enumerate() {
        let cfg = write_config(&dir, &format!("bad{k}.toml"), text);
        let out = dir.path().join(format!("bad{k}.csv"));
        let result = run("simulate", &cfg, &out, extra);
        assert_eq!(result.status.code(), Some(2), "case {k}");
        let err = String::from_utf8(result.stderr).unwrap();
        assert!(err.contains(field), "case {k}: {err}");
        assert!(!out.exists(), "case {k} left output behind");
    }
    let missing = jetflow(&["simulate", "--config", "/nonexistent/config.toml"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn escape_writes_partial_output_and_marker() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "blowup.toml",
        r#"
mu = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
[initial]
reduced = [1e60, 0.0, 1e70, 0.0]
[integrator]
step = 0.1
t_final = 10.0
"#,
    );
    let out = dir.path().join("blowup.csv");
    let result = run("simulate", &cfg, &out, &["--freeze-metadata"]);
    assert_eq!(result.status.code(), Some(3));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# TRUNCATED: trajectory escaped at t="), "{text}");
    assert!(!rows(&text).is_empty());
}

#[test]
fn harmonic_lyapunov_estimate_is_small() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "harmonic.toml",
        r#"
mu = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0]
[initial]
reduced = [0.3, 0.1, 0.2, 0.6]
[integrator]
step = 1e-2
t_final = 1e4
[analysis]
renorm_interval = 1.0
"#,
    );
    let out = dir.path().join("harmonic.csv");
    assert_eq!(run("lyapunov", &cfg, &out, &["--freeze-metadata"]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mle = summary_value(&text, "mle");
    assert!(mle <= 1e-3, "mle = {mle}");
    assert_eq!(rows(&text).len(), 10_000);
}

#[test]
fn quartic_section_with_eight_seeds() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "section.toml",
        r#"
mu = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
[integrator]
step = 1e-3
t_final = 400.0
[analysis]
energy = 0.5
max_crossings = 20
seeds = [
  [0.1, 0.0, 0.0],
  [0.3, 0.0, 0.0],
  [0.5, 0.0, 0.0],
  [0.7, 0.0, 0.0],
  [0.2, 0.0, 0.1],
  [0.648, 0.0, 0.375],
  [0.9, 0.0, 0.45],
  [1.1, 0.0, 0.542],
]
"#,
    );
    let out = dir.path().join("section.csv");
    assert_eq!(run("section", &cfg, &out, &["--freeze-metadata"]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("seed[index],crossing[index],t[time],x[length],px[momentum],py[momentum]"));
    let data = rows(&text);
    let mu = Mu::quartic(1.0);
    for seed in 0..8 {
        let pts: Vec<_> = data.iter().filter(|r| r[0] == seed as f64).collect();
        assert_eq!(pts.len(), 20, "seed {seed}");
        for (k, r) in pts.iter().enumerate() {
            assert_eq!(r[1], k as f64);
            assert!(r[5] > 0.0);
            let h = 0.5 * (r[4] * r[4] + r[5] * r[5]) + 0.5 * phi(&mu, r[3], 0.0);
            assert!((h - 0.5).abs() < 1e-5, "seed {seed}: H = {h}");
        }
        assert!(text.contains(&format!("# seed {seed} status: complete crossings=20")));
    }
}

#[test]
fn shooting_reports_solution_or_failure() {
    let dir = TempDir::new().unwrap();
    let base = r#"
mu = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0]
[integrator]
step = 1e-4
[shoot]
start = [1.0, 0.0]
target = [0.9, 0.3]
horizon = 1.0
"#;
    let cfg = write_config(&dir, "shoot.toml", base);
    let out = dir.path().join("shoot.csv");
    assert_eq!(run("shoot", &cfg, &out, &["--freeze-metadata"]).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let last = rows(&text).pop().unwrap();
    assert!(last[3] < 1e-10, "residual {}", last[3]);
    assert!(text.contains("# solution: px="));
    assert!(text.contains("# endpoint: x="));

    // The harmonic endpoint map is linear, so use the quartic level to keep Newton busy.
    let stuck = base.replace("[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]", "[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]");
    let cfg = write_config(&dir, "stuck.toml", &format!("{stuck}max_iterations = 1\ntolerance = 1e-14\n"));
    let out = dir.path().join("stuck.csv");
    assert_eq!(run("shoot", &cfg, &out, &["--freeze-metadata"]).status.code(), Some(1));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# FAILED: no convergence"), "{text}");
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        ExperimentConfig::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 5);
}
