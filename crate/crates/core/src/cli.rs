//! Command-line front end: protocol runs, fidelity sweeps, Bell-analyzer
//! confusion matrices and EIT medium estimates, emitted as CSV or JSON.
//!
//! Output for a given set of flags is byte-identical across runs and thread
//! counts: every random draw comes from a stream keyed by the master seed,
//! and floats are printed in shortest round-trip form.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bell::{classify_bell, detect, project_factorized, DetectorBank, MeasurementOutcome};
use crate::fidelity::{
    analytic_favg, monte_carlo_favg, quadrature_favg, BlochPoint, RunningStats, MIN_MC_SAMPLES,
    MIN_QUADRATURE_ORDER,
};
use crate::medium::{estimate_medium, medium_to_fidelity, MediumParameters};
use crate::quantum::{apply_gate, bell_state, disentangler, BellKind, ConditionalPhase};
use crate::rng::{stream, Purpose};
use crate::teleport::Channel;

/// Trials handled by one random stream in the protocol simulations.
const TRIAL_CHUNK: usize = 4096;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "kerr-teleport",
    version,
    about = "Teleportation with a cross-Kerr Bell analyzer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Teleport uniformly random qubits and report outcome statistics and fidelity.
    Teleport(ProtocolArgs),
    /// Average fidelity by three routes over a grid of conditional phases.
    Sweep(ProtocolArgs),
    /// Bell-analyzer confusion matrix for the four Bell inputs.
    Bellbox(ProtocolArgs),
    /// Conditional phase and absorption of an EIT Kerr medium.
    Medium(MediumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    /// Conditional phase in radians (e.g. `1.2`, `pi/2`), or `start:stop:steps` for sweeps.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Detector efficiency in [0, 1].
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub eta: f64,
    /// Monte Carlo samples / protocol trials.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Master random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gauss-Legendre order of the sphere quadrature.
    #[arg(long = "quad-order", default_value_t = 32)]
    pub quad_order: usize,
    /// Interpret `--phi` values as degrees.
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MediumArgs {
    /// Linewidth of the probed transition (any angular-frequency unit).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma24: f64,
    /// Detuning, same unit as the linewidth.
    #[arg(long, allow_hyphen_values = true)]
    pub delta24: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiSpec {
    Single(f64),
    Sweep { start: f64, stop: f64, steps: usize },
}

impl PhiSpec {
    pub fn parse(text: &str, degrees: bool) -> Result<Self, CliError> {
        let scale = if degrees {
            std::f64::consts::PI / 180.0
        } else {
            1.0
        };
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [one] => Ok(PhiSpec::Single(parse_angle(one)? * scale)),
            [start, stop, steps] => {
                let steps: usize = steps
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("invalid sweep step count `{steps}`")))?;
                if steps < 2 {
                    return Err(usage(format!("sweep needs at least 2 steps, got {steps}")));
                }
                Ok(PhiSpec::Sweep {
                    start: parse_angle(start)? * scale,
                    stop: parse_angle(stop)? * scale,
                    steps,
                })
            }
            _ => Err(usage(format!(
                "cannot parse --phi `{text}`; expected a value or start:stop:steps"
            ))),
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        match *self {
            PhiSpec::Single(x) => vec![x],
            PhiSpec::Sweep { start, stop, steps } => {
                let span = stop - start;
                (0..steps)
                    .map(|k| {
                        if k + 1 == steps {
                            stop
                        } else {
                            start + span * k as f64 / (steps - 1) as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Parses `1.5`, `pi`, `-pi/2`, `3pi/4`, `2*pi`, `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let s: String = text
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let bad = || usage(format!("invalid angle `{text}`"));
    let value = if let Some(pos) = s.find("pi") {
        let coef = s[..pos].trim_end_matches('*');
        let coef = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let rest = &s[pos + 2..];
        let denom = if rest.is_empty() {
            1.0
        } else {
            rest.strip_prefix('/')
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())?
        };
        coef * std::f64::consts::PI / denom
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Validated settings for the protocol subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub phi: PhiSpec,
    pub eta: f64,
    pub samples: usize,
    pub seed: u64,
    pub quadrature_order: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(
        args: &ProtocolArgs,
        default_phi: &str,
        sweep: bool,
    ) -> Result<Self, CliError> {
        let phi = PhiSpec::parse(args.phi.as_deref().unwrap_or(default_phi), args.degrees)?;
        match (sweep, phi) {
            (true, PhiSpec::Single(_)) => {
                return Err(usage("sweep requires --phi start:stop:steps"))
            }
            (false, PhiSpec::Sweep { .. }) => {
                return Err(usage("this command takes a single --phi value"))
            }
            _ => {}
        }
        if !(0.0..=1.0).contains(&args.eta) {
            return Err(usage(format!("--eta must lie in [0, 1], got {}", args.eta)));
        }
        if args.samples < MIN_MC_SAMPLES {
            return Err(usage(format!(
                "--samples must be >= {MIN_MC_SAMPLES}, got {}",
                args.samples
            )));
        }
        if args.quad_order < MIN_QUADRATURE_ORDER {
            return Err(usage(format!(
                "--quad-order must be >= {MIN_QUADRATURE_ORDER}, got {}",
                args.quad_order
            )));
        }
        Ok(Self {
            phi,
            eta: args.eta,
            samples: args.samples,
            seed: args.seed,
            quadrature_order: args.quad_order,
            format: args.output.format,
            out: args.output.out.clone(),
        })
    }

    fn single_phi(&self) -> f64 {
        self.phi.grid()[0]
    }
}

/// Per-grid-point seed so sweep points draw independent samples.
fn point_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub phi: f64,
    pub eta: f64,
    pub analytic: f64,
    pub quadrature: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub success_rate: f64,
    pub samples: usize,
    pub seed: u64,
}

pub const SWEEP_CSV_HEADER: &str =
    "phi,eta,analytic,quadrature,mc_mean,mc_stderr,success_rate,samples,seed";

/// Aggregated statistics of repeated single-shot teleportation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportReport {
    pub phi: f64,
    pub eta: f64,
    pub samples: usize,
    pub seed: u64,
    /// Counts of `e1..e4` reported by the detectors.
    pub outcome_counts: [u64; 4],
    pub no_output: u64,
    pub success_rate: f64,
    /// Mean `|⟨ψ|ψ_Bob⟩|²` over trials with an output.
    pub mean_fidelity: f64,
    pub fidelity_stderr: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellboxRow {
    pub input: &'static str,
    pub psi_plus: u64,
    pub psi_minus: u64,
    pub phi_plus: u64,
    pub phi_minus: u64,
    pub no_output: u64,
}

impl BellboxRow {
    pub fn total(&self) -> u64 {
        self.psi_plus + self.psi_minus + self.phi_plus + self.phi_minus + self.no_output
    }

    pub fn count(&self, kind: BellKind) -> u64 {
        match kind {
            BellKind::PsiPlus => self.psi_plus,
            BellKind::PsiMinus => self.psi_minus,
            BellKind::PhiPlus => self.phi_plus,
            BellKind::PhiMinus => self.phi_minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellboxReport {
    pub phi: f64,
    pub eta: f64,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<BellboxRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumRecord {
    pub gamma24: f64,
    pub delta24: f64,
    pub phase_shift: f64,
    pub absorption: f64,
    pub large_detuning_phase: f64,
    pub favg: f64,
    pub absorption_warning: bool,
}

/// Runs `trials` independent jobs split over chunked random streams and
/// returns the per-chunk results in chunk order.
fn chunked<T: Send>(
    trials: usize,
    seed: u64,
    purpose: Purpose,
    base: u64,
    job: impl Fn(&mut crate::rng::StreamRng, usize) -> crate::Result<T> + Sync,
) -> crate::Result<Vec<T>> {
    let chunks = trials.div_ceil(TRIAL_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, purpose, base + c as u64);
            job(&mut rng, TRIAL_CHUNK.min(trials - c * TRIAL_CHUNK))
        })
        .collect()
}

#[derive(Debug, Default, Clone, Copy)]
struct TeleportTally {
    outcomes: [u64; 4],
    no_output: u64,
    fidelity: RunningStats,
}

fn teleport_tally(
    channel: &Channel,
    bank: &DetectorBank,
    trials: usize,
    seed: u64,
) -> crate::Result<TeleportTally> {
    let parts = chunked(trials, seed, Purpose::Teleport, 0, |rng, len| {
        let mut t = TeleportTally::default();
        for _ in 0..len {
            let psi = BlochPoint::<f64>::sample_uniform(rng).state();
            let run = channel.teleport_once(&psi, bank, rng)?;
            match (run.outcome, run.bob_state) {
                (MeasurementOutcome::Detected(e), Some(bob)) => {
                    t.outcomes[e.slot()] += 1;
                    t.fidelity.push(bob.fidelity(&psi));
                }
                _ => t.no_output += 1,
            }
        }
        Ok(t)
    })?;
    Ok(parts
        .into_iter()
        .fold(TeleportTally::default(), |mut acc, t| {
            for (a, b) in acc.outcomes.iter_mut().zip(t.outcomes) {
                *a += b;
            }
            acc.no_output += t.no_output;
            acc.fidelity = acc.fidelity.merge(t.fidelity);
            acc
        }))
}

pub fn run_teleport(config: &RunConfig) -> Result<TeleportReport, CliError> {
    let raw = config.single_phi();
    let phi = ConditionalPhase::new(raw);
    let bank = DetectorBank::new(config.eta)?;
    let tally = teleport_tally(&Channel::new(phi), &bank, config.samples, config.seed)?;
    let detected: u64 = tally.outcomes.iter().sum();
    Ok(TeleportReport {
        phi: raw,
        eta: config.eta,
        samples: config.samples,
        seed: config.seed,
        outcome_counts: tally.outcomes,
        no_output: tally.no_output,
        success_rate: detected as f64 / config.samples as f64,
        mean_fidelity: tally.fidelity.mean(),
        fidelity_stderr: tally.fidelity.std_error(),
        analytic: analytic_favg(phi),
    })
}

pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>, CliError> {
    let bank = DetectorBank::new(config.eta)?;
    config
        .phi
        .grid()
        .into_iter()
        .enumerate()
        .map(|(k, raw)| {
            let phi = ConditionalPhase::new(raw);
            let seed = point_seed(config.seed, k);
            let mc = monte_carlo_favg(phi, config.samples, seed)?;
            let tally = teleport_tally(&Channel::new(phi), &bank, config.samples, seed)?;
            let detected: u64 = tally.outcomes.iter().sum();
            Ok(SweepRecord {
                phi: raw,
                eta: config.eta,
                analytic: analytic_favg(phi),
                quadrature: quadrature_favg(phi, config.quadrature_order)?,
                mc_mean: mc.mean,
                mc_stderr: mc.stderr,
                success_rate: detected as f64 / config.samples as f64,
                samples: config.samples,
                seed: config.seed,
            })
        })
        .collect()
}

pub fn run_bellbox(config: &RunConfig) -> Result<BellboxReport, CliError> {
    let raw = config.single_phi();
    let d = disentangler(ConditionalPhase::new(raw));
    let bank = DetectorBank::new(config.eta)?;
    let mut rows = Vec::with_capacity(4);
    for (k, kind) in BellKind::ALL.into_iter().enumerate() {
        let state = apply_gate(&d, &bell_state(kind), &[1, 2])?;
        let parts = chunked(
            config.samples,
            config.seed,
            Purpose::BellBox,
            (k as u64) << 32,
            |rng, len| {
                let mut counts = [0u64; 5];
                for _ in 0..len {
                    let (e, _) = project_factorized(&state, rng)?;
                    let slot =
                        match classify_bell(detect(MeasurementOutcome::Detected(e), &bank, rng)) {
                            Ok(b) => b as usize,
                            Err(_) => 4,
                        };
                    counts[slot] += 1;
                }
                Ok(counts)
            },
        )?;
        let mut counts = [0u64; 5];
        for part in parts {
            for (a, b) in counts.iter_mut().zip(part) {
                *a += b;
            }
        }
        rows.push(BellboxRow {
            input: kind.name(),
            psi_plus: counts[BellKind::PsiPlus as usize],
            psi_minus: counts[BellKind::PsiMinus as usize],
            phi_plus: counts[BellKind::PhiPlus as usize],
            phi_minus: counts[BellKind::PhiMinus as usize],
            no_output: counts[4],
        });
    }
    Ok(BellboxReport {
        phi: raw,
        eta: config.eta,
        samples: config.samples,
        seed: config.seed,
        rows,
    })
}

pub fn run_medium(args: &MediumArgs) -> Result<MediumRecord, CliError> {
    let params =
        MediumParameters::new(args.gamma24, args.delta24).map_err(|e| usage(e.to_string()))?;
    let est = estimate_medium(&params);
    Ok(MediumRecord {
        gamma24: args.gamma24,
        delta24: args.delta24,
        phase_shift: est.phase_shift,
        absorption: est.absorption,
        large_detuning_phase: est.large_detuning_phase,
        favg: medium_to_fidelity(&params),
        absorption_warning: est.absorption_warning(),
    })
}

/// JSON with keys sorted, as produced by `serde_json::Value`'s ordered map.
fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value)
        .map_err(|e| CliError::Runtime(crate::Error::InvalidParameter(e.to_string())))?;
    let mut s = serde_json::to_string_pretty(&v).expect("Value serializes");
    s.push('\n');
    Ok(s)
}

pub fn render_sweep(records: &[SweepRecord], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(&records),
        OutputFormat::Csv => {
            let mut s = String::new();
            writeln!(s, "{SWEEP_CSV_HEADER}").unwrap();
            for r in records {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.phi,
                    r.eta,
                    r.analytic,
                    r.quadrature,
                    r.mc_mean,
                    r.mc_stderr,
                    r.success_rate,
                    r.samples,
                    r.seed
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

pub fn render_teleport(r: &TeleportReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => {
            let [e1, e2, e3, e4] = r.outcome_counts;
            Ok(format!(
                "phi,eta,samples,seed,e1,e2,e3,e4,no_output,success_rate,mean_fidelity,fidelity_stderr,analytic\n\
                 {},{},{},{},{e1},{e2},{e3},{e4},{},{},{},{},{}\n",
                r.phi, r.eta, r.samples, r.seed, r.no_output, r.success_rate, r.mean_fidelity, r.fidelity_stderr, r.analytic
            ))
        }
    }
}

pub fn render_bellbox(r: &BellboxReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => {
            let mut s = String::from("input,psi_plus,psi_minus,phi_plus,phi_minus,no_output\n");
            for row in &r.rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    row.input,
                    row.psi_plus,
                    row.psi_minus,
                    row.phi_plus,
                    row.phi_minus,
                    row.no_output
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

pub fn render_medium(r: &MediumRecord, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => Ok(format!(
            "gamma24,delta24,phase_shift,absorption,large_detuning_phase,favg,absorption_warning\n{},{},{},{},{},{},{}\n",
            r.gamma24, r.delta24, r.phase_shift, r.absorption, r.large_detuning_phase, r.favg, r.absorption_warning
        )),
    }
}

/// Executes a parsed command and returns the rendered output plus its destination.
pub fn execute(cli: &Cli) -> Result<(String, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Teleport(args) => {
            let cfg = RunConfig::from_args(args, "pi", false)?;
            Ok((render_teleport(&run_teleport(&cfg)?, cfg.format)?, cfg.out))
        }
        Command::Sweep(args) => {
            let cfg = RunConfig::from_args(args, "0:2pi:9", true)?;
            Ok((render_sweep(&run_sweep(&cfg)?, cfg.format)?, cfg.out))
        }
        Command::Bellbox(args) => {
            let cfg = RunConfig::from_args(args, "pi", false)?;
            Ok((render_bellbox(&run_bellbox(&cfg)?, cfg.format)?, cfg.out))
        }
        Command::Medium(args) => Ok((
            render_medium(&run_medium(args)?, args.output.format)?,
            args.output.out.clone(),
        )),
    }
}

/// Writes the full output in one call so a failed run never leaves a partial file.
pub fn emit(content: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}
