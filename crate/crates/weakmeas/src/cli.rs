//! Flag parsing and dispatch. Every subcommand takes `--config FILE`, a
//! flat JSON object keyed by flag names; flags given on the command line
//! win over file values.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{
    distribution_report, parse_kind, parse_pointer, simulate_report, weak_value_report, Coupling, GridSpec,
    ObservableTag, SimulateSpec, StateSpec, XiChoice,
};
use crate::error::{CliError, CliResult};
use crate::figure::{run_figure, FigureId};
use crate::settings::{fock_dim, Config, OutputFormat, SweepRange};

#[derive(Debug, Parser)]
#[command(
    name = "weakmeas",
    version,
    about = "Weak values, quasi-distributions and pointer simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak value, strangeness category and postselection density at one q.
    WeakValue(WeakValueArgs),
    /// Negativity-probability sweep for one of the figure surfaces.
    Figure(FigureArgs),
    /// S, T or smeared grid as CSV, with a negativity summary.
    Distribution(DistributionArgs),
    /// Exact finite-coupling pointer simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Default)]
pub struct StateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_i: Option<f64>,
    #[arg(long)]
    pub nth: Option<f64>,
    /// Detector efficiency in (0, 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Use the Fock state |k> instead of a displaced thermal state.
    #[arg(long)]
    pub fock: Option<usize>,
}

impl StateArgs {
    fn resolve(&self, cfg: &Config) -> CliResult<StateSpec> {
        Ok(StateSpec {
            alpha_r: cfg.pick_or(self.alpha_r, "alpha_r", 0.0)?,
            alpha_i: cfg.pick_or(self.alpha_i, "alpha_i", 0.0)?,
            n_th: cfg.pick_or(self.nth, "nth", 0.0)?,
            eta: cfg.pick_or(self.eta, "eta", 1.0)?,
            fock: cfg.pick(self.fock, "fock")?,
            dim: fock_dim(cfg.pick_or(None, "dim", weakmeas_core::DEFAULT_DIM)?)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct WeakValueArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// p2, H, n, q or p.
    #[arg(long)]
    pub observable: Option<String>,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// p2_eta_nth, h_ideal, h_noisy, h_eta_nth, n_ideal, n_noisy or n_eta_nth.
    pub figure: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// VALUE or MIN:MAX:STEPS
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_i: Option<String>,
    #[arg(long)]
    pub nth: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// S, T, S_eta or T_eta.
    #[arg(long)]
    pub kind: Option<String>,
    /// fock or momentum.
    #[arg(long)]
    pub xi_basis: Option<String>,
    #[command(flatten)]
    pub state: StateArgs,
    /// Gauss-Legendre nodes per axis.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// generic, kerr or qubit.
    #[arg(long)]
    pub coupling: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub observable: Option<String>,
    #[arg(long)]
    pub pointer_sigma: Option<f64>,
    /// Gaussian mixture `weight:center:width[:boost];...`
    #[arg(long, allow_hyphen_values = true)]
    pub pointer: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub postselect_q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub probe_amplitude: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub qubit_sx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub qubit_sy: Option<f64>,
    #[command(flatten)]
    pub state: StateArgs,
}

fn parse_with<T>(raw: Option<String>, key: &str, f: impl Fn(&str) -> Result<T, String>) -> CliResult<Option<T>> {
    raw.map(|s| f(&s).map_err(|e| CliError::usage(format!("{key}: {e}"))))
        .transpose()
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn weak_value_cmd(a: WeakValueArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Config::from_optional(a.config.as_ref())?;
    let tag: Option<String> = cfg.pick(a.observable, "observable")?;
    let obs = parse_with(tag, "--observable", |s| s.parse::<ObservableTag>())?
        .ok_or_else(|| CliError::usage("--observable is required"))?;
    let q = cfg.pick(a.q, "q")?.ok_or_else(|| CliError::usage("--q is required"))?;
    let state = a.state.resolve(&cfg)?;
    emit_json(out, &weak_value_report(obs, &state, q)?)
}

fn figure_cmd(a: FigureArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Config::from_optional(a.config.as_ref())?;
    let name: Option<String> = cfg.pick(a.figure, "figure")?;
    let figure = parse_with(name, "figure", |s| s.parse::<FigureId>())?
        .ok_or_else(|| CliError::usage("a figure id is required"))?;
    let mut sweep = figure.default_config();
    let range = |flag: Option<String>, key: &str, default: SweepRange| -> CliResult<SweepRange> {
        let raw: Option<String> = cfg.pick(flag, key)?;
        Ok(parse_with(raw, key, |s| s.parse::<SweepRange>())?.unwrap_or(default))
    };
    sweep.alpha_r = range(a.alpha_r, "alpha_r", sweep.alpha_r)?;
    sweep.alpha_i = range(a.alpha_i, "alpha_i", sweep.alpha_i)?;
    sweep.n_th = range(a.nth, "nth", sweep.n_th)?;
    sweep.eta = range(a.eta, "eta", sweep.eta)?;
    sweep.output = cfg.pick(a.output, "output")?;
    let fmt: Option<String> = cfg.pick(a.format, "format")?;
    sweep.format = parse_with(fmt, "--format", |s| s.parse::<OutputFormat>())?.unwrap_or(OutputFormat::Csv);
    let table = run_figure(figure, &sweep)?;
    let mut sink: Box<dyn Write + '_> = match &sweep.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(&mut *out),
    };
    match sweep.format {
        OutputFormat::Csv => table.write_csv(&mut sink)?,
        OutputFormat::Json => emit_json(&mut sink, &table.to_json(&sweep))?,
    }
    sink.flush()?;
    Ok(())
}

fn distribution_cmd(a: DistributionArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Config::from_optional(a.config.as_ref())?;
    let kind: Option<String> = cfg.pick(a.kind, "kind")?;
    let kind = parse_with(kind, "--kind", parse_kind)?.unwrap_or(weakmeas_core::quasiprob::DistributionKind::T);
    let xi: Option<String> = cfg.pick(a.xi_basis, "xi_basis")?;
    let xi = parse_with(xi, "--xi-basis", |s| s.parse::<XiChoice>())?.unwrap_or(XiChoice::Momentum);
    let state = a.state.resolve(&cfg)?;
    let grid = GridSpec {
        nodes: cfg.pick_or(a.nodes, "nodes", weakmeas_core::quasiprob::DEFAULT_DISTRIBUTION_NODES)?,
        half_width: cfg.pick(a.half_width, "half_width")?,
    };
    let output: Option<PathBuf> = cfg.pick(a.output, "output")?;
    match output {
        Some(p) => {
            let mut file = BufWriter::new(File::create(&p)?);
            let report = distribution_report(kind, xi, &state, grid, &mut file)?;
            file.flush()?;
            emit_json(out, &report)
        }
        None => distribution_report(kind, xi, &state, grid, out).map(|_| ()),
    }
}

fn simulate_cmd(a: SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = Config::from_optional(a.config.as_ref())?;
    let coupling: Option<String> = cfg.pick(a.coupling, "coupling")?;
    let coupling = parse_with(coupling, "--coupling", |s| s.parse::<Coupling>())?.unwrap_or(Coupling::Generic);
    let obs: Option<String> = cfg.pick(a.observable, "observable")?;
    let default_obs = if coupling == Coupling::Generic {
        ObservableTag::H
    } else {
        ObservableTag::N
    };
    let observable = parse_with(obs, "--observable", |s| s.parse::<ObservableTag>())?.unwrap_or(default_obs);
    let pointer: Option<String> = cfg.pick(a.pointer, "pointer")?;
    let spec = SimulateSpec {
        coupling,
        epsilon: cfg.pick_or(a.epsilon, "epsilon", 1e-3)?,
        observable,
        pointer_sigma: cfg.pick_or(a.pointer_sigma, "pointer_sigma", 1.0)?,
        pointer: parse_with(pointer, "--pointer", parse_pointer)?,
        q: cfg
            .pick(a.postselect_q, "postselect_q")?
            .ok_or_else(|| CliError::usage("--postselect-q is required"))?,
        state: a.state.resolve(&cfg)?,
        probe_amplitude: cfg.pick_or(a.probe_amplitude, "probe_amplitude", 1.5)?,
        theta: cfg.pick_or(a.theta, "theta", std::f64::consts::FRAC_PI_2)?,
        qubit: (
            cfg.pick_or(a.qubit_sx, "qubit_sx", 1.0)?,
            cfg.pick_or(a.qubit_sy, "qubit_sy", 0.0)?,
        ),
    };
    emit_json(out, &simulate_report(&spec)?)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::WeakValue(a) => weak_value_cmd(a, out),
        Command::Figure(a) => figure_cmd(a, out),
        Command::Distribution(a) => distribution_cmd(a, out),
        Command::Simulate(a) => simulate_cmd(a, out),
    }
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
