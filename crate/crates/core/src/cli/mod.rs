//! Config-driven command line: `orbstab <system> <action> [--config FILE] [--key.path value ...]`.
//!
//! Each run writes its CSV tables and a `manifest.json` into
//! `$ORBSTAB_OUT/<output>` (default root `orbstab-out`, default subdirectory
//! derived from the command and config hash).
//!
//! CSV schemas:
//!
//! | command | file | columns |
//! |---|---|---|
//! | spherical verdict | verdict.csv | rho, sigma, margin, verdict |
//! | spherical hessian | hessian.csv | matrix, row, c1, c2, c3 |
//! | spherical simulate | series.csv | t, d_orbit, H_drift, L_drift |
//! | spherical/planewave probe, harness coercivity | probe.csv | index, radius, distance, ratio |
//! | planewave verdict | verdict.csv | beta, lambda, length, alpha, margin, coercivity, verdict |
//! | planewave spectrum | spectrum.csv | n, k, hessian_re, hessian_im |
//! | planewave rates | rates.csv | n, k, growth, frequency |
//! | planewave simulate | series.csv | t, d_orbit, H_rel_drift, F1_drift, F2_drift |
//! | soliton simulate | series.csv | t, d_orbit, d_exact, charge_drift |
//! | soliton boost-check | boost.csv | velocity, t, dt, residual |
//! | manakov simulate | series.csv | t, charge1, charge2, d_exact |
//! | standing shoot | profile.csv | x, w, w_x |
//! | standing continue | curve.csv | xi, charge, peak, slope |
//! | standing slope | slope.csv | xi, slope, intid_residual |
//! | standing spectral | spectral.csv | xi, slope, morse_plus, gap_plus, lambda0_minus, cosine_minus, c1, c2 |
//! | standing limit | limit.csv | xi, peak, sup_distance |
//! | harness stability | series.csv, runs.csv | delta, t, d_orbit / delta, max_distance, max_ratio, aborted |

pub mod commands;
pub mod config;
pub mod table;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

pub use commands::{dispatch, Outcome, Task};
pub use config::{parse_overrides, RunConfig};
pub use table::{format_f64, sha256_hex, write_atomic, Cell, Manifest, Provenance, ResultTable};

use crate::error::{Error, Result};
use crate::Verdict;

pub const OUTPUT_ENV: &str = "ORBSTAB_OUT";
pub const DEFAULT_OUTPUT_ROOT: &str = "orbstab-out";

#[derive(Debug, Parser)]
#[command(name = "orbstab", version, about = "Orbital stability by the energy-momentum method", args_conflicts_with_subcommands = true)]
pub struct Cli {
    /// Re-run the manifest's config and compare summaries and CSV hashes.
    #[arg(long, value_name = "MANIFEST")]
    pub verify: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<SystemCommand>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct RunArgs {
    /// TOML config file.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Output root, overriding $ORBSTAB_OUT.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 2 if the verdict is unstable.
    #[arg(long)]
    pub expect_stable: bool,
    /// Config overrides as `--section.key value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum SystemCommand {
    /// Particle in a radial potential.
    Spherical {
        #[command(subcommand)]
        action: SphericalAction,
    },
    /// Cubic NLS plane waves on a torus.
    Planewave {
        #[command(subcommand)]
        action: PlaneWaveAction,
    },
    /// Bright solitons.
    Soliton {
        #[command(subcommand)]
        action: SolitonAction,
    },
    /// Two-component solitons.
    Manakov {
        #[command(subcommand)]
        action: ManakovAction,
    },
    /// Standing waves of the inhomogeneous NLS.
    Standing {
        #[command(subcommand)]
        action: StandingAction,
    },
    /// System-agnostic experiments.
    Harness {
        #[command(subcommand)]
        action: HarnessAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum SphericalAction {
    Verdict(RunArgs),
    Hessian(RunArgs),
    Simulate(RunArgs),
    Probe(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum PlaneWaveAction {
    Verdict(RunArgs),
    Spectrum(RunArgs),
    Rates(RunArgs),
    Simulate(RunArgs),
    Probe(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum SolitonAction {
    Simulate(RunArgs),
    BoostCheck(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum ManakovAction {
    Simulate(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum StandingAction {
    Shoot(RunArgs),
    Continue(RunArgs),
    Slope(RunArgs),
    Spectral(RunArgs),
    Limit(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum HarnessAction {
    Stability(RunArgs),
    Coercivity(RunArgs),
}

impl SystemCommand {
    pub fn into_task(self) -> (Task, RunArgs) {
        use SystemCommand as S;
        match self {
            S::Spherical { action } => match action {
                SphericalAction::Verdict(a) => (Task::SphericalVerdict, a),
                SphericalAction::Hessian(a) => (Task::SphericalHessian, a),
                SphericalAction::Simulate(a) => (Task::SphericalSimulate, a),
                SphericalAction::Probe(a) => (Task::SphericalProbe, a),
            },
            S::Planewave { action } => match action {
                PlaneWaveAction::Verdict(a) => (Task::PlanewaveVerdict, a),
                PlaneWaveAction::Spectrum(a) => (Task::PlanewaveSpectrum, a),
                PlaneWaveAction::Rates(a) => (Task::PlanewaveRates, a),
                PlaneWaveAction::Simulate(a) => (Task::PlanewaveSimulate, a),
                PlaneWaveAction::Probe(a) => (Task::PlanewaveProbe, a),
            },
            S::Soliton { action } => match action {
                SolitonAction::Simulate(a) => (Task::SolitonSimulate, a),
                SolitonAction::BoostCheck(a) => (Task::SolitonBoostCheck, a),
            },
            S::Manakov { action } => match action {
                ManakovAction::Simulate(a) => (Task::ManakovSimulate, a),
            },
            S::Standing { action } => match action {
                StandingAction::Shoot(a) => (Task::StandingShoot, a),
                StandingAction::Continue(a) => (Task::StandingContinue, a),
                StandingAction::Slope(a) => (Task::StandingSlope, a),
                StandingAction::Spectral(a) => (Task::StandingSpectral, a),
                StandingAction::Limit(a) => (Task::StandingLimit, a),
            },
            S::Harness { action } => match action {
                HarnessAction::Stability(a) => (Task::HarnessStability, a),
                HarnessAction::Coercivity(a) => (Task::HarnessCoercivity, a),
            },
        }
    }
}

fn provenance(task: Task, cfg: &RunConfig) -> Provenance {
    Provenance {
        tool: "orbstab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: task.command().into(),
        config_sha256: cfg.sha256(),
    }
}

/// CSV bytes per file, exactly as they are written.
pub fn render_tables(task: Task, cfg: &RunConfig, out: &Outcome) -> Vec<(String, String)> {
    let p = provenance(task, cfg);
    out.tables.iter().map(|(name, t)| (name.clone(), t.to_csv(&p))).collect()
}

fn output_dir(task: Task, cfg: &RunConfig, root: Option<&Path>) -> PathBuf {
    let root = root
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT));
    let sub = cfg
        .output
        .clone()
        .unwrap_or_else(|| format!("{}-{}", task.command().replace(' ', "-"), &cfg.sha256()[..12]));
    root.join(sub)
}

/// The result of one persisted run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub outcome: Outcome,
}

/// Run `task`, write CSVs, extras and the manifest under the output root.
pub fn execute(task: Task, cfg: &RunConfig, root: Option<&Path>) -> Result<RunReport> {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    let outcome = dispatch(task, cfg)?;
    let wall = clock.elapsed().as_secs_f64();
    let dir = output_dir(task, cfg, root);
    let mut files = std::collections::BTreeMap::new();
    for (name, csv) in render_tables(task, cfg, &outcome) {
        write_atomic(&dir.join(&name), csv.as_bytes())?;
        files.insert(name, sha256_hex(csv.as_bytes()));
    }
    for (name, v) in &outcome.extras {
        let bytes = serde_json::to_vec_pretty(v).map_err(|e| Error::Unsupported(e.to_string()))?;
        write_atomic(&dir.join(name), &bytes)?;
    }
    let manifest = Manifest {
        provenance: provenance(task, cfg),
        config: cfg.canonical(),
        seed: cfg.seed,
        started_unix: started,
        wall_time_s: wall,
        files,
        summary: outcome.summary.clone(),
        verdict: outcome.verdict.map(|v| v.as_str().to_string()),
    };
    let bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::Unsupported(e.to_string()))?;
    write_atomic(&dir.join("manifest.json"), &bytes)?;
    Ok(RunReport { dir, manifest, outcome })
}

/// Differences between a stored manifest and a fresh in-memory rerun; empty means verified.
pub fn verify_manifest(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let task = Task::from_command(&m.provenance.command).ok_or_else(|| Error::Config {
        path: path.display().to_string(),
        message: format!("unknown command `{}`", m.provenance.command),
    })?;
    let cfg = RunConfig::from_toml(&m.config)?;
    let mut diffs = Vec::new();
    if cfg.sha256() != m.provenance.config_sha256 {
        diffs.push("config hash does not match the stored config".to_string());
    }
    let outcome = dispatch(task, &cfg)?;
    for (k, v) in &m.summary {
        match outcome.summary.get(k) {
            Some(w) if w == v => {}
            Some(w) => diffs.push(format!("summary `{k}`: stored {v}, recomputed {w}")),
            None => diffs.push(format!("summary `{k}` missing from rerun")),
        }
    }
    for (name, csv) in render_tables(task, &cfg, &outcome) {
        let h = sha256_hex(csv.as_bytes());
        match m.files.get(&name) {
            Some(stored) if *stored == h => {}
            Some(_) => diffs.push(format!("{name}: CSV bytes differ")),
            None => diffs.push(format!("{name}: not in manifest")),
        }
    }
    Ok(diffs)
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let overrides = parse_overrides(&args.overrides)?;
    match &args.config {
        Some(p) => RunConfig::load(p, &overrides),
        None => RunConfig::from_toml_with("", &overrides),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(path) = cli.verify {
        return match verify_manifest(&path) {
            Ok(d) if d.is_empty() => {
                println!("verified: {}", path.display());
                0
            }
            Ok(d) => {
                for line in d {
                    eprintln!("mismatch: {line}");
                }
                1
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        };
    }
    let Some(cmd) = cli.command else {
        eprintln!("error: a subcommand or --verify is required (see --help)");
        return 1;
    };
    let (task, args) = cmd.into_task();
    let result = load_config(&args).and_then(|cfg| execute(task, &cfg, args.out.as_deref()));
    match result {
        Ok(r) => {
            for (k, v) in &r.outcome.summary {
                println!("{k} = {v}");
            }
            println!("wrote {}", r.dir.display());
            if args.expect_stable && r.outcome.verdict == Some(Verdict::Unstable) {
                eprintln!("verdict is unstable");
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", task.command());
            1
        }
    }
}
