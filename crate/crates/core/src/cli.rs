//! Subcommands: `simulate`, `sweep-efficiency`, `invert`, `sorkin`.
//!
//! Every command writes a CSV whose header lines start with `#`: the
//! command name, the SHA-256 of the effective config, a quadrature
//! self-convergence estimate and the config itself (see
//! [`RunConfig::echo`]). Numbers are written in scientific notation with 17
//! significant digits, so identical configs give byte-identical files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_window, Length, RunConfig};
use crate::detection::{
    born_parameter, delta1, delta2, perfect_distributions, sorkin_parameter, triple_slit_probabilities,
    SetupDistributions,
};
use crate::error::Error;
use crate::geometry::{Mode, QuadratureSpec, ScreenGrid, SlitGeometry};
use crate::imperfect::{delta_av, imperfect_from_perfect, invert_imperfect, ImperfectDistributions};
use crate::propagators::{classical_propagator, compute_wave_components, nonclassical_propagator, PathSet};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged { .. } | Error::NonFinite(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "whichway", version, about = "Which-way double-slit simulator with inter-slit paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intensity profiles of the five detector setups with Delta1, Delta2 and I_AB.
    Simulate(CommonArgs),
    /// Finite-efficiency profiles and window-averaged differences versus efficiency.
    SweepEfficiency(CommonArgs),
    /// Recover perfect-detector profiles from measured finite-efficiency profiles.
    Invert(InvertArgs),
    /// Triple-slit profiles and the Sorkin parameter.
    Sorkin(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config file; flags below override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// fraunhofer | exact
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Drop the inter-slit contribution.
    #[arg(long)]
    pub classical_only: bool,
    #[arg(long)]
    pub nodes_per_wavelength: Option<usize>,
    /// Comma-separated detector efficiencies.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub efficiency: Option<Vec<f64>>,
    /// Averaging window `y1,y2`, e.g. `-1.75mm,1.75mm`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Reject propagators whose value changes by more than this on node doubling.
    #[arg(long)]
    pub convergence_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// CSV with columns y_m, P_AB, Pp_DA, Pp_DB, Pp_DADB, Pp_DAB.
    #[arg(long)]
    pub measured: PathBuf,
}

/// Loads the config file (if any) and applies command-line overrides.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if args.classical_only {
        cfg.classical_only = true;
    }
    if let Some(n) = args.nodes_per_wavelength {
        cfg.nodes_per_wavelength = n;
    }
    if let Some(effs) = &args.efficiency {
        cfg.efficiencies = effs.clone();
    }
    if let Some(w) = &args.window {
        cfg.window = Some(parse_window(w).map_err(|e| CliError::Config(format!("window: {e}")))?);
    }
    if args.convergence_tol.is_some() {
        cfg.convergence_tol = args.convergence_tol;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.display().to_string());
    }
    Ok(cfg)
}

pub fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(&resolve_config(&args)?).map(|p| vec![p]),
        Command::SweepEfficiency(args) => {
            let (profiles, summary) = cmd_sweep_efficiency(&resolve_config(&args)?)?;
            Ok(vec![profiles, summary])
        }
        Command::Invert(args) => {
            let cfg = resolve_config(&args.common)?;
            let n = match cfg.efficiencies.as_slice() {
                [n] => *n,
                _ => return Err(CliError::Config("efficiency: invert needs exactly one value".into())),
            };
            cmd_invert(&cfg, &args.measured, n).map(|p| vec![p])
        }
        Command::Sorkin(args) => cmd_sorkin(&resolve_config(&args)?).map(|p| vec![p]),
    }
}

fn output_path(cfg: &RunConfig, default: &str) -> PathBuf {
    PathBuf::from(cfg.output.clone().unwrap_or_else(|| default.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, values: &[f64]) {
    let row: Vec<String> = values.iter().map(|v| fmt_num(*v)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// Max relative change of `psi_A`, `psi_B` and the inter-slit field at a few
/// probe points when the node density is doubled.
pub fn convergence_estimate(geom: &SlitGeometry, grid: &ScreenGrid, quad: &QuadratureSpec) -> Result<f64, Error> {
    let quad = quad.with_convergence_tol(None);
    let fine = quad.doubled();
    let n = grid.len();
    let mut probes = vec![0, n / 4, grid.center_index(), (3 * n) / 4, n - 1];
    probes.dedup();
    let (a, b) = (geom.aperture(crate::Slit::A), geom.aperture(crate::Slit::B));
    let mut worst: f64 = 0.0;
    for &i in &probes {
        let y = grid.values()[i];
        let pairs = [
            (classical_propagator(geom, a, y, &quad)?, classical_propagator(geom, a, y, &fine)?),
            (classical_propagator(geom, b, y, &quad)?, classical_propagator(geom, b, y, &fine)?),
            (nonclassical_propagator(geom, a, b, y, &quad)?, nonclassical_propagator(geom, a, b, y, &fine)?),
        ];
        for (coarse, fine) in pairs {
            if fine.norm() > 0.0 {
                worst = worst.max((coarse - fine).norm() / fine.norm());
            }
        }
    }
    Ok(worst)
}

fn header(command: &str, cfg: &RunConfig, convergence: Option<f64>, extra: &[String]) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# whichway {command}");
    let _ = writeln!(h, "# config-sha256: {}", cfg.sha256());
    if let Some(c) = convergence {
        let _ = writeln!(h, "# quadrature-self-convergence: {c:.3e}");
    }
    for line in extra {
        let _ = writeln!(h, "# {line}");
    }
    h.push_str(&cfg.echo());
    h
}

/// Writes the normalized five-setup profiles plus `Delta1`, `Delta2`, `I_AB`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let geom = cfg.geometry()?;
    let grid = cfg.grid()?;
    let quad = cfg.quadrature()?;
    let paths = if cfg.classical_only { PathSet::ClassicalOnly } else { PathSet::All };
    let wc = compute_wave_components(&geom, &grid, &quad, paths)?;
    let sd = perfect_distributions(&wc)?.normalized();
    let conv = convergence_estimate(&geom, &grid, &quad)?;
    let text = simulate_csv(cfg, &sd, conv);
    let path = output_path(cfg, "simulate.csv");
    write_file(&path, &text)?;
    Ok(path)
}

pub const SIMULATE_COLUMNS: [&str; 9] = ["y_m", "P_AB", "P_DA", "P_DB", "P_DADB", "P_DAB", "Delta1", "Delta2", "I_AB"];

fn simulate_csv(cfg: &RunConfig, sd: &SetupDistributions, conv: f64) -> String {
    let mut out = header("simulate", cfg, Some(conv), &["intensities normalized to P_AB(0)".into()]);
    out.push_str(&SIMULATE_COLUMNS.join(","));
    out.push('\n');
    let (d1, d2, iab) = (delta1(sd), delta2(sd), born_parameter(sd));
    for (i, y) in sd.grid.values().iter().enumerate() {
        push_row(&mut out, &[*y, sd.p_ab[i], sd.p_da[i], sd.p_db[i], sd.p_dadb[i], sd.p_dab[i], d1[i], d2[i], iab[i]]);
    }
    out
}

pub const SWEEP_COLUMNS: [&str; 8] = ["higher_order", "n", "y_m", "P_AB", "Pp_DA", "Pp_DB", "Pp_DADB", "Pp_DAB"];
pub const SUMMARY_COLUMNS: [&str; 5] = ["n", "p", "q", "delta_av", "delta_av_classical"];
pub const PROFILE_NAMES: [&str; 5] = ["P_AB", "Pp_DA", "Pp_DB", "Pp_DADB", "Pp_DAB"];

fn profile<'a>(p_ab: &'a [f64], imp: &'a ImperfectDistributions, name: &str) -> &'a [f64] {
    match name {
        "P_AB" => p_ab,
        "Pp_DA" => &imp.p_da,
        "Pp_DB" => &imp.p_db,
        "Pp_DADB" => &imp.p_dadb,
        "Pp_DAB" => &imp.p_dab,
        _ => unreachable!("unknown profile {name}"),
    }
}

/// `Delta'_av` over the window for every pair of [`PROFILE_NAMES`], in order.
pub fn pairwise_delta_av(
    sd: &SetupDistributions,
    imp: &ImperfectDistributions,
    window: (f64, f64),
) -> Result<Vec<(&'static str, &'static str, f64)>, Error> {
    let mut rows = Vec::new();
    for (i, p) in PROFILE_NAMES.iter().enumerate() {
        for q in &PROFILE_NAMES[i + 1..] {
            let v = delta_av(&sd.grid, profile(&sd.p_ab, imp, p), profile(&sd.p_ab, imp, q), window.0, window.1)?;
            rows.push((*p, *q, v));
        }
    }
    Ok(rows)
}

fn summary_path(profiles: &Path) -> PathBuf {
    let stem = profiles.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    profiles.with_file_name(format!("{stem}_delta_av.csv"))
}

/// Writes finite-efficiency profiles for every efficiency, with and without
/// the inter-slit field, and a `<out>_delta_av.csv` summary.
pub fn cmd_sweep_efficiency(cfg: &RunConfig) -> Result<(PathBuf, PathBuf), CliError> {
    cfg.validate_efficiencies().map_err(CliError::Config)?;
    let geom = cfg.geometry()?;
    let grid = cfg.grid()?;
    let quad = cfg.quadrature()?;
    let window = cfg.window();
    let wc = compute_wave_components(&geom, &grid, &quad, PathSet::All)?;
    let full = perfect_distributions(&wc)?.normalized();
    let classical = perfect_distributions(&wc.classical_only())?.normalized();
    let conv = convergence_estimate(&geom, &grid, &quad)?;

    let mut profiles = header(
        "sweep-efficiency",
        cfg,
        Some(conv),
        &["intensities normalized to P_AB(0) of the same higher_order block".into()],
    );
    profiles.push_str(&SWEEP_COLUMNS.join(","));
    profiles.push('\n');
    let mut summary = header(
        "sweep-efficiency summary",
        cfg,
        None,
        &[format!("window: [{}, {}]", Length(window.0), Length(window.1))],
    );
    summary.push_str(&SUMMARY_COLUMNS.join(","));
    summary.push('\n');

    for &n in &cfg.efficiencies {
        let imp_full = imperfect_from_perfect(&full, n)?;
        let imp_classical = imperfect_from_perfect(&classical, n)?;
        for (flag, sd, imp) in [(1.0, &full, &imp_full), (0.0, &classical, &imp_classical)] {
            for (i, y) in grid.values().iter().enumerate() {
                push_row(&mut profiles, &[flag, n, *y, sd.p_ab[i], imp.p_da[i], imp.p_db[i], imp.p_dadb[i], imp.p_dab[i]]);
            }
        }
        let with = pairwise_delta_av(&full, &imp_full, window)?;
        let without = pairwise_delta_av(&classical, &imp_classical, window)?;
        for ((p, q, v), (_, _, vc)) in with.into_iter().zip(without) {
            let _ = writeln!(summary, "{},{p},{q},{},{}", fmt_num(n), fmt_num(v), fmt_num(vc));
        }
    }
    let path = output_path(cfg, "sweep.csv");
    let spath = summary_path(&path);
    write_file(&path, &profiles)?;
    write_file(&spath, &summary)?;
    Ok((path, spath))
}

pub const INVERT_COLUMNS: [&str; 7] = ["y_m", "P_AB", "P_DA", "P_DB", "P_DADB", "P_DAB", "I_AB"];
const MEASURED_COLUMNS: [&str; 6] = ["y_m", "P_AB", "Pp_DA", "Pp_DB", "Pp_DADB", "Pp_DAB"];

/// Reads measured finite-efficiency profiles. If the file carries `n` and
/// `higher_order` columns (as written by `sweep-efficiency`), only rows at
/// efficiency `n` and with `higher_order` matching `!classical_only` are used.
pub fn read_measured(path: &Path, n: f64, classical_only: bool) -> Result<(ImperfectDistributions, Vec<f64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| CliError::Io(e.to_string()))?.clone();
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let missing: Vec<&str> = MEASURED_COLUMNS.iter().copied().filter(|c| !index.contains_key(c)).collect();
    if !missing.is_empty() {
        return Err(CliError::Config(format!("{}: missing columns {}", path.display(), missing.join(", "))));
    }
    let want_flag = if classical_only { 0.0 } else { 1.0 };
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); MEASURED_COLUMNS.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io(e.to_string()))?;
        let field = |name: &str| -> Result<f64, CliError> {
            record[index[name]]
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{}: row {}: bad `{name}` value", path.display(), line + 1)))
        };
        if index.contains_key("n") && (field("n")? - n).abs() > 1e-12 {
            continue;
        }
        if index.contains_key("higher_order") && field("higher_order")? != want_flag {
            continue;
        }
        for (c, name) in cols.iter_mut().zip(MEASURED_COLUMNS) {
            c.push(field(name)?);
        }
    }
    if cols[0].len() < 2 {
        return Err(CliError::Config(format!("{}: fewer than two rows at efficiency {n}", path.display())));
    }
    let [y, p_ab, p_da, p_db, p_dadb, p_dab]: [Vec<f64>; 6] = cols.try_into().expect("six columns");
    let grid = ScreenGrid::from_values(y, false)?;
    let model = crate::imperfect::DetectorOverlapModel::from_efficiency(n)?;
    Ok((ImperfectDistributions { grid, p_da, p_db, p_dadb, p_dab, model }, p_ab))
}

pub fn cmd_invert(cfg: &RunConfig, measured: &Path, n: f64) -> Result<PathBuf, CliError> {
    if n == 0.0 {
        return Err(Error::SingularInversion.into());
    }
    if !(0.0..=1.0).contains(&n) {
        return Err(Error::InvalidEfficiency(n).into());
    }
    let (imp, p_ab) = read_measured(measured, n, cfg.classical_only)?;
    let sd = invert_imperfect(&imp, &p_ab, n)?;
    let iab = born_parameter(&sd);
    let mut out = header(
        "invert",
        cfg,
        None,
        &[format!("source: {}", measured.display()), format!("efficiency: {}", fmt_num(n))],
    );
    out.push_str(&INVERT_COLUMNS.join(","));
    out.push('\n');
    for (i, y) in sd.grid.values().iter().enumerate() {
        push_row(&mut out, &[*y, sd.p_ab[i], sd.p_da[i], sd.p_db[i], sd.p_dadb[i], sd.p_dab[i], iab[i]]);
    }
    let path = output_path(cfg, "invert.csv");
    write_file(&path, &out)?;
    Ok(path)
}

pub const SORKIN_COLUMNS: [&str; 9] = ["y_m", "P_ABC", "P_AB", "P_AC", "P_BC", "P_A", "P_B", "P_C", "I_ABC"];

pub fn cmd_sorkin(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let geom = cfg.triple_geometry()?;
    let grid = cfg.grid()?;
    let quad = cfg.quadrature()?;
    let paths = if cfg.classical_only { PathSet::ClassicalOnly } else { PathSet::All };
    let tp = triple_slit_probabilities(&geom, &grid, &quad, paths)?;
    let norm = tp.norm();
    if !(norm > 0.0) {
        return Err(Error::DegenerateNorm(norm).into());
    }
    let sorkin = sorkin_parameter(&tp);
    let centers: Vec<String> = geom.apertures().iter().map(|a| Length(a.center()).to_string()).collect();
    let mut out = header(
        "sorkin",
        cfg,
        None,
        &[
            format!("slit centers A, B, C: {}", centers.join(", ")),
            "psi_ABC = 0 (three-slit inter-slit term omitted; pairwise inter-slit terms included unless classical_only)"
                .into(),
            "intensities normalized to P_ABC(0)".into(),
        ],
    );
    out.push_str(&SORKIN_COLUMNS.join(","));
    out.push('\n');
    for (i, y) in grid.values().iter().enumerate() {
        let row = [tp.p_abc[i], tp.p_ab[i], tp.p_ac[i], tp.p_bc[i], tp.p_a[i], tp.p_b[i], tp.p_c[i], sorkin[i]];
        let mut values = vec![*y];
        values.extend(row.iter().map(|v| v / norm));
        push_row(&mut out, &values);
    }
    let path = output_path(cfg, "sorkin.csv");
    write_file(&path, &out)?;
    Ok(path)
}
