//! End-to-end runs of the `whichway` binary on a coarse screen grid.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use whichway::config::RunConfig;

const SMALL: &str = r#"
lambda = "810nm"
slit_width = "500nm"
slit_separation = "2000nm"
source_distance = "1mm"
screen_distance = "1mm"
y_min = "-1.75mm"
y_max = "1.75mm"
n_points = 201
"#;

struct Table {
    header: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn read(path: &Path) -> Table {
        let text = fs::read_to_string(path).unwrap();
        let mut header = Vec::new();
        let mut lines = text.lines().peekable();
        while let Some(l) = lines.next_if(|l| l.starts_with('#')) {
            header.push(l.to_string());
        }
        let columns = lines.next().unwrap().split(',').map(str::to_string).collect();
        let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        Table { header, columns, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[i]).collect()
    }

    fn filtered(&self, name: &str, pred: impl Fn(&[f64]) -> bool) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).unwrap();
        self.rows.iter().filter(|r| pred(r)).map(|r| r[i]).collect()
    }
}

fn whichway(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_whichway")).current_dir(dir).args(args).output().unwrap()
}

fn run_ok(dir: &Path, args: &[&str]) -> PathBuf {
    let out = whichway(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    dir.to_path_buf()
}

fn small_config(dir: &Path, extra: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, format!("{SMALL}{extra}")).unwrap();
    p
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn simulate_writes_normalized_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    run_ok(dir.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--out", "sim.csv"]);
    let t = Table::read(&dir.path().join("sim.csv"));
    assert_eq!(t.columns, whichway::cli::SIMULATE_COLUMNS);
    assert_eq!(t.rows.len(), 201);
    let y = t.col("y_m");
    let p_ab = t.col("P_AB");
    assert_eq!(y[100], 0.0);
    assert_eq!(p_ab[100], 1.0);
    assert!(max_abs(&t.col("I_AB")) < 1e-12);
    for c in ["P_AB", "P_DA", "P_DB", "P_DADB", "P_DAB"] {
        assert!(t.col(c).iter().all(|v| *v >= 0.0), "{c} negative");
    }
    assert!(t.header.iter().any(|l| l.starts_with("# config-sha256: ")));
    assert!(t.header.iter().any(|l| l.starts_with("# quadrature-self-convergence: ")));
}

#[test]
fn simulate_is_deterministic_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let c = cfg.to_str().unwrap();
    run_ok(dir.path(), &["simulate", "--config", c, "--out", "a.csv"]);
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    run_ok(dir.path(), &["simulate", "--config", c, "--out", "a.csv"]);
    let b = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(a == b, "rerun changed the output");
    let echoed = RunConfig::from_echo(&a).unwrap();
    let mut original = RunConfig::from_toml(SMALL).unwrap();
    original.output = Some("a.csv".into());
    assert_eq!(echoed, original);
}

#[test]
fn sweep_zero_efficiency_shows_no_difference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    run_ok(dir.path(), &["sweep-efficiency", "--config", cfg.to_str().unwrap(), "--efficiency", "0,0.5,1", "--out", "sw.csv"]);
    let text = fs::read_to_string(dir.path().join("sw_delta_av.csv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some(whichway::cli::SUMMARY_COLUMNS.join(",").as_str()));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 30);
    let num = |s: &str| s.parse::<f64>().unwrap();
    for r in &rows {
        if num(r[0]) == 0.0 {
            assert_eq!(num(r[3]), 0.0);
            assert_eq!(num(r[4]), 0.0);
        }
    }
    let r = rows.iter().find(|r| num(r[0]) == 1.0 && r[1] == "Pp_DA" && r[2] == "Pp_DADB").unwrap();
    assert!(num(r[4]).abs() < 1e-12, "classical DA/DADB at n = 1: {}", r[4]);
    assert!(num(r[3]) > 1e-3);
}

#[test]
fn invert_recovers_simulated_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let c = cfg.to_str().unwrap();
    run_ok(dir.path(), &["simulate", "--config", c, "--out", "sim.csv"]);
    run_ok(dir.path(), &["sweep-efficiency", "--config", c, "--efficiency", "0.75", "--out", "sw.csv"]);
    run_ok(dir.path(), &["invert", "--config", c, "--efficiency", "0.75", "--measured", "sw.csv", "--out", "inv.csv"]);
    let sim = Table::read(&dir.path().join("sim.csv"));
    let inv = Table::read(&dir.path().join("inv.csv"));
    for col in ["P_AB", "P_DA", "P_DB", "P_DADB", "P_DAB"] {
        let (a, b) = (sim.col(col), inv.col(col));
        let err = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(err < 1e-10, "{col}: {err}");
    }
    assert!(max_abs(&inv.col("I_AB")) < 1e-10);
}

#[test]
fn corrupted_measurement_shows_up_in_born_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let c = cfg.to_str().unwrap();
    run_ok(dir.path(), &["sweep-efficiency", "--config", c, "--efficiency", "0.75", "--out", "sw.csv"]);
    let t = Table::read(&dir.path().join("sw.csv"));
    let mut csv = String::from("y_m,P_AB,Pp_DA,Pp_DB,Pp_DADB,Pp_DAB\n");
    let keep = |r: &[f64]| r[0] == 1.0;
    let cols: Vec<Vec<f64>> =
        ["y_m", "P_AB", "Pp_DA", "Pp_DB", "Pp_DADB", "Pp_DAB"].iter().map(|n| t.filtered(n, keep)).collect();
    for i in 0..cols[0].len() {
        let mut row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
        row[4] += 0.1;
        csv.push_str(&row.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }
    fs::write(dir.path().join("bad.csv"), csv).unwrap();
    run_ok(dir.path(), &["invert", "--config", c, "--efficiency", "0.75", "--measured", "bad.csv", "--out", "inv.csv"]);
    let inv = Table::read(&dir.path().join("inv.csv"));
    // A shift of 0.1 in P'_DADB maps to 0.1 / n^2 in P_DADB and twice that in I_AB.
    let expected = 2.0 * 0.1 / (0.75 * 0.75);
    for v in inv.col("I_AB") {
        assert!((v - expected).abs() < 1e-10);
    }
}

#[test]
fn sorkin_parameter_classical_and_with_inter_slit_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let c = cfg.to_str().unwrap();
    run_ok(dir.path(), &["sorkin", "--config", c, "--classical-only", "--out", "classical.csv"]);
    run_ok(dir.path(), &["sorkin", "--config", c, "--out", "full.csv"]);
    let classical = Table::read(&dir.path().join("classical.csv"));
    assert!(max_abs(&classical.col("I_ABC")) < 1e-12);
    let full = Table::read(&dir.path().join("full.csv"));
    let i_abc = full.col("I_ABC");
    let peak = max_abs(&i_abc);
    println!("max|I_ABC| / P_ABC(0) = {peak:.6e}");
    assert!(peak > 1e-6);
    for i in 0..i_abc.len() {
        assert!((i_abc[i] - i_abc[i_abc.len() - 1 - i]).abs() < 1e-12);
    }
    assert!(full.header.iter().any(|l| l.contains("psi_ABC = 0")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "slit_width = \"-5nm\"\n").unwrap();
    let out = whichway(dir.path(), &["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slit_width"));

    let cfg = small_config(dir.path(), "");
    let c = cfg.to_str().unwrap();
    let out = whichway(dir.path(), &["sweep-efficiency", "--config", c, "--efficiency", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("efficiencies[0]"));

    let out = whichway(dir.path(), &["invert", "--config", c, "--efficiency", "0", "--measured", "x.csv"]);
    assert_eq!(out.status.code(), Some(1));

    let out = whichway(dir.path(), &["simulate", "--config", c, "--nodes-per-wavelength", "4", "--convergence-tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(2));

    let out = whichway(dir.path(), &["simulate", "--config", "missing.toml"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn shipped_config_matches_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/case_study.toml");
    let cfg = RunConfig::from_toml(&fs::read_to_string(path).unwrap()).unwrap();
    let expected = RunConfig { window: cfg.window, ..RunConfig::default() };
    assert_eq!(cfg, expected);
    assert_eq!(cfg.window(), RunConfig::default().window());
}
