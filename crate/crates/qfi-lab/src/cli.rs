//! Command-line surface: QFI evaluation, parameter sweeps, figure datasets,
//! Monte Carlo estimation and the photonic experiment.
//!
//! Single computations report JSON; sweeps report CSV (RFC-4180-style, comma
//! separated, LF line endings) with numbers at 12 significant digits. Exit
//! codes: 0 success, 2 configuration error, 3 numerical failure. Sweeps run
//! grid rows in parallel (capped by `QFI_LAB_THREADS`) with deterministic,
//! grid-ordered output.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::channel::{make_channel, KrausChannel, Layout, NoiseModel, PhaseScenario};
use crate::estimate::{
    adaptive_run, observable_catalog, qcr_bound, sample_distribution, ObservableId,
};
use crate::fisher::{closed_form, qfi_scenario, ClosedFormId};
use crate::optimize::optimize_two_probes;
use crate::photonics;
use crate::qstate::{make_state, StateFamily};
use crate::{par, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qfi-lab",
    about = "Phase-estimation precision limits of noisy qubit channels",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the QFI of a scenario, with the matching closed form when one
    /// exists; `--grid` sweeps the channel's noise parameter into CSV.
    Qfi(QfiArgs),
    /// Emit a figure-reproduction dataset (2a, 2b or 3) as CSV.
    Fig(FigArgs),
    /// Run a seeded adaptive Monte Carlo estimation and report JSON.
    Simulate(SimulateArgs),
    /// Simulate the single-photon experiment: click distribution and
    /// classical Fisher information.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
struct ChannelArgs {
    /// Noise model: ad | pauli | dephasing | depolarizing | identity.
    #[arg(long)]
    channel: String,
    /// Decay probability for the ad channel.
    #[arg(long)]
    eta: Option<f64>,
    /// σ_x probability for the pauli channel.
    #[arg(long)]
    p1: Option<f64>,
    /// σ_y probability for the pauli channel.
    #[arg(long)]
    p2: Option<f64>,
    /// σ_z probability for the pauli and dephasing channels.
    #[arg(long)]
    p3: Option<f64>,
    /// Strength of the depolarizing channel.
    #[arg(long)]
    p: Option<f64>,
}

impl ChannelArgs {
    fn model(&self) -> Result<NoiseModel> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Error::Config(format!("--channel {} needs {flag}", self.channel)))
        };
        match self.channel.as_str() {
            "ad" => Ok(NoiseModel::AmplitudeDamping {
                eta: need(self.eta, "--eta")?,
            }),
            "pauli" => Ok(NoiseModel::Pauli {
                p1: need(self.p1, "--p1")?,
                p2: need(self.p2, "--p2")?,
                p3: need(self.p3, "--p3")?,
            }),
            "dephasing" => Ok(NoiseModel::Dephasing {
                p3: need(self.p3, "--p3")?,
            }),
            "depolarizing" => Ok(NoiseModel::Depolarizing {
                p: need(self.p, "--p")?,
            }),
            "identity" => Ok(NoiseModel::Identity),
            other => Err(Error::Config(format!("unknown channel '{other}'"))),
        }
    }

    /// The model with its scalar noise parameter replaced, for sweeps.
    fn model_at(&self, value: f64) -> Result<NoiseModel> {
        match self.channel.as_str() {
            "ad" => Ok(NoiseModel::AmplitudeDamping { eta: value }),
            "dephasing" => Ok(NoiseModel::Dephasing { p3: value }),
            "depolarizing" => Ok(NoiseModel::Depolarizing { p: value }),
            other => Err(Error::Config(format!(
                "--grid sweeps need a single-parameter channel, not '{other}'"
            ))),
        }
    }

    fn sweep_parameter(&self) -> &'static str {
        match self.channel.as_str() {
            "ad" => "eta",
            "dephasing" => "p3",
            "depolarizing" => "p",
            _ => "param",
        }
    }
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    /// Input family: single | ancilla-pair | max-entangled | noon2 | noon4 |
    /// generic2.
    #[arg(long)]
    state: String,
    /// Amplitude of |0⟩ for the single family.
    #[arg(long)]
    eps: Option<f64>,
    /// Relative phase for the single family (default 0).
    #[arg(long)]
    alpha: Option<f64>,
    /// Weight of |00⟩ for the ancilla-pair family.
    #[arg(long)]
    gamma: Option<f64>,
    /// Six chart parameters for the generic2 family, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 6)]
    params: Option<Vec<f64>>,
}

impl StateArgs {
    fn family_and_layout(&self) -> Result<(StateFamily, Layout)> {
        match self.state.as_str() {
            "single" => {
                let eps = self
                    .eps
                    .ok_or_else(|| Error::Config("--state single needs --eps".into()))?;
                Ok((
                    StateFamily::Single {
                        eps,
                        alpha: self.alpha.unwrap_or(0.0),
                    },
                    Layout::single_probe(),
                ))
            }
            "ancilla-pair" => {
                let gamma = self
                    .gamma
                    .ok_or_else(|| Error::Config("--state ancilla-pair needs --gamma".into()))?;
                Ok((
                    StateFamily::AncillaPair { gamma },
                    Layout::probe_with_ancilla(),
                ))
            }
            "max-entangled" => Ok((StateFamily::MaxEntangled, Layout::probe_with_ancilla())),
            "noon2" => Ok((StateFamily::Noon { n: 2 }, Layout::two_probes())),
            "noon4" => Ok((
                StateFamily::FourQubitNoon,
                Layout::two_probes_two_ancillas(),
            )),
            "generic2" => {
                let p = self
                    .params
                    .as_ref()
                    .ok_or_else(|| Error::Config("--state generic2 needs --params".into()))?;
                Ok((
                    StateFamily::GenericTwoQubit {
                        params: [p[0], p[1], p[2], p[3], p[4], p[5]],
                    },
                    Layout::two_probes(),
                ))
            }
            other => Err(Error::Config(format!("unknown state family '{other}'"))),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct QfiArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    state: StateArgs,
    /// Encoded phase (default π/2).
    #[arg(long)]
    phi: Option<f64>,
    /// Sweep the channel's noise parameter: start:stop:steps.
    #[arg(long, value_parser = GridSpec::parse)]
    grid: Option<GridSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FigArgs {
    /// Figure id: 2a | 2b | 3.
    id: String,
    /// Override the default noise grid: start:stop:steps.
    #[arg(long, value_parser = GridSpec::parse)]
    grid: Option<GridSpec>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    state: StateArgs,
    /// True phase being estimated (default 1.0).
    #[arg(long)]
    phi: Option<f64>,
    /// Total repetition count ν.
    #[arg(long, default_value_t = 100_000)]
    nu: u64,
    /// Feedback rounds the repetitions are split across.
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    /// RNG seed (runs are bit-reproducible per seed).
    #[arg(long)]
    seed: u64,
    /// Observable: ad-ancilla | depolarizing-single | pauli-ancilla |
    /// ad-noon4 (inferred from the scenario when omitted).
    #[arg(long)]
    observable: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Encoded phase (default π/2).
    #[arg(long)]
    phi: Option<f64>,
    /// Sample this many detector clicks (needs --seed).
    #[arg(long)]
    nu: Option<u64>,
    /// RNG seed for click sampling.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Inclusive parameter grid start:stop:steps with steps ≥ 2.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err("grid must be start:stop:steps".into());
        }
        let start: f64 = parts[0].parse().map_err(|_| "bad grid start")?;
        let stop: f64 = parts[1].parse().map_err(|_| "bad grid stop")?;
        let steps: usize = parts[2].parse().map_err(|_| "bad grid steps")?;
        if steps < 2 {
            return Err("grid needs at least 2 steps".into());
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        Ok(GridSpec { start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| self.start + (self.stop - self.start) * (i as f64 / (n - 1) as f64))
            .collect()
    }
}

/// 12-significant-digit rendering used in every CSV cell.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&exp) {
        format!("{:.11e}", x)
    } else {
        let decimals = (11 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            file.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn csv_document(header: &str, rows: &[String]) -> String {
    let mut doc = String::with_capacity(rows.len() * 40 + header.len() + 1);
    doc.push_str(header);
    doc.push('\n');
    for row in rows {
        doc.push_str(row);
        doc.push('\n');
    }
    doc
}

/// Exit code for an error, per the scriptability contract.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence(_)
        | Error::StationaryPoint(_)
        | Error::ZeroInformation
        | Error::InfiniteBound => 3,
        _ => 2,
    }
}

/// Parses argv and runs; the process exit code is 0, 2 or 3.
pub fn main() -> ! {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => std::process::exit(0),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Qfi(args) => cmd_qfi(args),
        Command::Fig(args) => cmd_fig(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

#[derive(Serialize)]
struct ChannelReport {
    model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
}

impl ChannelReport {
    fn new(model: NoiseModel) -> Self {
        let mut r = ChannelReport {
            model: String::new(),
            eta: None,
            p1: None,
            p2: None,
            p3: None,
            p: None,
        };
        match model {
            NoiseModel::AmplitudeDamping { eta } => {
                r.model = "ad".into();
                r.eta = Some(eta);
            }
            NoiseModel::Pauli { p1, p2, p3 } => {
                r.model = "pauli".into();
                r.p1 = Some(p1);
                r.p2 = Some(p2);
                r.p3 = Some(p3);
            }
            NoiseModel::Dephasing { p3 } => {
                r.model = "dephasing".into();
                r.p3 = Some(p3);
            }
            NoiseModel::Depolarizing { p } => {
                r.model = "depolarizing".into();
                r.p = Some(p);
            }
            NoiseModel::Identity => r.model = "identity".into(),
        }
        r
    }
}

#[derive(Serialize)]
struct ClosedFormReport {
    id: &'static str,
    value: f64,
    difference: f64,
}

#[derive(Serialize)]
struct QfiReport {
    channel: ChannelReport,
    state: String,
    probes: Vec<usize>,
    ancillas: Vec<usize>,
    phi: f64,
    qfi: f64,
    closed_form: Option<ClosedFormReport>,
}

/// The closed form matching a scenario, if the catalog has one.
fn matching_closed_form(model: NoiseModel, family: &StateFamily, phi: f64) -> Option<ClosedFormId> {
    let near = |x: f64, target: f64| (x - target).abs() <= 1e-3;
    match (model, family) {
        (NoiseModel::AmplitudeDamping { eta }, StateFamily::Single { eps, .. })
            if near(*eps, FRAC_1_SQRT_2) =>
        {
            Some(ClosedFormId::AdSingle { eta })
        }
        (NoiseModel::AmplitudeDamping { eta }, StateFamily::AncillaPair { gamma })
            if near(*gamma, FRAC_1_SQRT_2) =>
        {
            Some(ClosedFormId::AdGammaHalf { eta })
        }
        (NoiseModel::AmplitudeDamping { eta }, StateFamily::MaxEntangled) => {
            Some(ClosedFormId::AdGammaHalf { eta })
        }
        (NoiseModel::AmplitudeDamping { eta }, StateFamily::FourQubitNoon) => {
            Some(ClosedFormId::AdNoon4 { eta, phi })
        }
        (NoiseModel::Dephasing { p3 }, StateFamily::Single { eps, .. })
            if near(*eps, FRAC_1_SQRT_2) =>
        {
            Some(ClosedFormId::Dephasing { p3 })
        }
        (NoiseModel::Dephasing { p3 }, StateFamily::Single { eps, alpha }) => {
            Some(ClosedFormId::PauliNoAncilla {
                p1: 0.0,
                p2: 0.0,
                p3,
                eps: *eps,
                alpha: *alpha,
                phi,
            })
        }
        (NoiseModel::Depolarizing { p }, StateFamily::Single { eps, .. })
            if near(*eps, FRAC_1_SQRT_2) =>
        {
            Some(ClosedFormId::DepolarizingSingle { p })
        }
        (NoiseModel::Depolarizing { p }, StateFamily::Single { eps, alpha }) => {
            Some(ClosedFormId::PauliNoAncilla {
                p1: p / 4.0,
                p2: p / 4.0,
                p3: p / 4.0,
                eps: *eps,
                alpha: *alpha,
                phi,
            })
        }
        (NoiseModel::Depolarizing { p }, StateFamily::MaxEntangled) => {
            Some(ClosedFormId::DepolarizingAncilla { p })
        }
        (NoiseModel::Pauli { p1, p2, p3 }, StateFamily::Single { eps, alpha }) => {
            Some(ClosedFormId::PauliNoAncilla {
                p1,
                p2,
                p3,
                eps: *eps,
                alpha: *alpha,
                phi,
            })
        }
        (NoiseModel::Pauli { p1, p2, p3 }, StateFamily::MaxEntangled) => {
            Some(ClosedFormId::PauliAncilla { p1, p2, p3 })
        }
        (NoiseModel::Dephasing { p3 }, StateFamily::MaxEntangled) => {
            Some(ClosedFormId::PauliAncilla {
                p1: 0.0,
                p2: 0.0,
                p3,
            })
        }
        _ => None,
    }
}

fn build_scenario(model: NoiseModel, family: &StateFamily, phi: f64) -> Result<PhaseScenario> {
    let layout = match family {
        StateFamily::Single { .. } | StateFamily::Plus => Layout::single_probe(),
        StateFamily::AncillaPair { .. } | StateFamily::MaxEntangled => Layout::probe_with_ancilla(),
        StateFamily::GenericTwoQubit { .. } => Layout::two_probes(),
        StateFamily::Noon { n } => Layout::new(*n, &(0..*n).collect::<Vec<_>>())?,
        StateFamily::FourQubitNoon => Layout::two_probes_two_ancillas(),
    };
    PhaseScenario::new(make_channel(model)?, make_state(family)?, layout, phi)
}

fn cmd_qfi(args: QfiArgs) -> Result<()> {
    let phi = args.phi.unwrap_or(FRAC_PI_2);
    let (family, layout) = args.state.family_and_layout()?;

    if let Some(grid) = &args.grid {
        let values = grid.values();
        let param = args.channel.sweep_parameter();
        // Validate the state and every grid point before the sweep.
        make_state(&family)?;
        for &v in &values {
            make_channel(args.channel.model_at(v)?)?;
        }
        let family_ref = &family;
        let layout_ref = &layout;
        let channel_args = &args.channel;
        let rows = par::map_indexed(values.len(), par::worker_count_from_env(), |i| {
            let v = values[i];
            let model = channel_args.model_at(v).expect("validated grid point");
            let s = PhaseScenario::new(
                make_channel(model).expect("validated grid point"),
                make_state(family_ref).expect("validated family"),
                layout_ref.clone(),
                phi,
            )
            .expect("validated scenario");
            let j = qfi_scenario(&s).expect("qfi evaluation");
            let reference =
                matching_closed_form(model, family_ref, phi).and_then(|id| closed_form(id).ok());
            match reference {
                Some(r) => format!(
                    "{},{},{},{}",
                    format_sig(v),
                    format_sig(j),
                    format_sig(r),
                    format_sig(j - r)
                ),
                None => format!("{},{},,", format_sig(v), format_sig(j)),
            }
        });
        let header = format!("{param},qfi,closed_form,difference");
        let doc = csv_document(&header, &rows);
        return write_output(&args.output.out, &doc);
    }

    let model = args.channel.model()?;
    let s = PhaseScenario::new(
        make_channel(model)?,
        make_state(&family)?,
        layout.clone(),
        phi,
    )?;
    let j = qfi_scenario(&s)?;
    let reference = matching_closed_form(model, &family, phi);
    let closed = match reference {
        Some(id) => Some(ClosedFormReport {
            id: id.name(),
            value: closed_form(id)?,
            difference: j - closed_form(id)?,
        }),
        None => None,
    };
    let report = QfiReport {
        channel: ChannelReport::new(model),
        state: args.state.state.clone(),
        probes: layout.probes().to_vec(),
        ancillas: layout.ancillas().to_vec(),
        phi,
        qfi: j,
        closed_form: closed,
    };
    match args.output.format.as_deref() {
        None | Some("json") => write_output(&args.output.out, &to_json(&report)),
        Some("csv") => Err(Error::Config(
            "single QFI evaluations report JSON; use --grid for CSV sweeps".into(),
        )),
        Some(other) => Err(Error::Config(format!("unknown format '{other}'"))),
    }
}

fn cmd_fig(args: FigArgs) -> Result<()> {
    if let Some(fmt) = args.output.format.as_deref() {
        if fmt != "csv" {
            return Err(Error::Config("figure datasets are CSV only".into()));
        }
    }
    let doc = match args.id.as_str() {
        "2a" => fig2a(args.grid.clone())?,
        "2b" => fig2b(args.grid.clone())?,
        "3" => fig3(args.grid.clone())?,
        other => {
            return Err(Error::Config(format!(
                "unknown figure '{other}' (expected 2a, 2b or 3)"
            )))
        }
    };
    write_output(&args.output.out, &doc)
}

fn check_unit_grid(grid: &GridSpec) -> Result<()> {
    let lo = grid.start.min(grid.stop);
    let hi = grid.start.max(grid.stop);
    if lo < 0.0 || hi > 1.0 {
        return Err(Error::Config(format!(
            "grid [{lo}, {hi}] leaves the parameter domain [0, 1]"
        )));
    }
    Ok(())
}

/// Single-probe vs ancilla-assisted QFI under amplitude damping.
pub fn fig2a(grid: Option<GridSpec>) -> Result<String> {
    let grid = grid.unwrap_or(GridSpec {
        start: 0.0,
        stop: 1.0,
        steps: 101,
    });
    check_unit_grid(&grid)?;
    let values = grid.values();
    let rows = par::map_indexed(values.len(), par::worker_count_from_env(), |i| {
        let eta = values[i];
        let single = closed_form(ClosedFormId::AdSingle { eta }).expect("eta in range");
        let half = closed_form(ClosedFormId::AdGammaHalf { eta }).expect("eta in range");
        let opt = closed_form(ClosedFormId::AdGammaOpt { eta }).expect("eta in range");
        format!(
            "{},{},{},{}",
            format_sig(eta),
            format_sig(single),
            format_sig(half),
            format_sig(opt)
        )
    });
    Ok(csv_document(
        "eta,qfi_single,qfi_gamma_half,qfi_gamma_opt",
        &rows,
    ))
}

/// Two-probe strategies vs the four-qubit NOON strategy under amplitude
/// damping, with the ancilla-less upper bound.
pub fn fig2b(grid: Option<GridSpec>) -> Result<String> {
    let grid = grid.unwrap_or(GridSpec {
        start: 0.0,
        stop: 1.0,
        steps: 21,
    });
    check_unit_grid(&grid)?;
    let values = grid.values();
    let rows = par::map_indexed(values.len(), par::worker_count_from_env(), |i| {
        let eta = values[i];
        let channel = make_channel(NoiseModel::AmplitudeDamping { eta }).expect("eta in range");
        let noon2 = PhaseScenario::new(
            channel.clone(),
            make_state(&StateFamily::Noon { n: 2 }).expect("noon"),
            Layout::two_probes(),
            FRAC_PI_2,
        )
        .and_then(|s| qfi_scenario(&s))
        .expect("noon2 qfi");
        let opt2 = optimize_two_probes(&channel, FRAC_PI_2)
            .expect("two-probe optimization")
            .best_qfi;
        let noon4 = PhaseScenario::new(
            channel,
            make_state(&StateFamily::FourQubitNoon).expect("noon4"),
            Layout::two_probes_two_ancillas(),
            FRAC_PI_4,
        )
        .and_then(|s| qfi_scenario(&s))
        .expect("noon4 qfi");
        let durkin = closed_form(ClosedFormId::DurkinBound { n: 2, eta })
            .map(format_sig)
            .unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            format_sig(eta),
            format_sig(noon2),
            format_sig(opt2),
            format_sig(noon4),
            durkin
        )
    });
    Ok(csv_document(
        "eta,qfi_noon2,qfi_opt2,qfi_noon4,durkin_bound",
        &rows,
    ))
}

/// Optimized single-probe vs ancilla-assisted QFI over the p1 = 0 slice of
/// the Pauli simplex; infeasible grid points keep empty cells.
pub fn fig3(grid: Option<GridSpec>) -> Result<String> {
    let grid = grid.unwrap_or(GridSpec {
        start: 0.0,
        stop: 1.0,
        steps: 51,
    });
    check_unit_grid(&grid)?;
    let values = grid.values();
    let n = values.len();
    let rows = par::map_indexed(n * n, par::worker_count_from_env(), |idx| {
        let p2 = values[idx / n];
        let p3 = values[idx % n];
        if p2 + p3 > 1.0 + 1e-9 {
            return format!("{},{},,", format_sig(p2), format_sig(p3));
        }
        let p3c = p3.min(1.0 - p2);
        let j_na =
            crate::fisher::pauli_no_ancilla_optimized(0.0, p2, p3c, 0.0).expect("simplex point");
        let j_a = closed_form(ClosedFormId::PauliAncilla {
            p1: 0.0,
            p2,
            p3: p3c,
        })
        .expect("simplex point");
        format!(
            "{},{},{},{}",
            format_sig(p2),
            format_sig(p3),
            format_sig(j_na),
            format_sig(j_a)
        )
    });
    Ok(csv_document("p2,p3,j_na_opt,j_a", &rows))
}

#[derive(Serialize)]
struct SimulateReport {
    channel: ChannelReport,
    state: String,
    observable: String,
    true_phi: f64,
    rounds: usize,
    shots_per_round: u64,
    run: crate::estimate::EstimationRun,
    qcr_bound: f64,
    variance_ratio: f64,
    warnings: Vec<String>,
}

fn infer_observable(model: NoiseModel, family: &StateFamily) -> Result<ObservableId> {
    match (model, family) {
        (NoiseModel::AmplitudeDamping { .. }, StateFamily::AncillaPair { .. })
        | (NoiseModel::AmplitudeDamping { .. }, StateFamily::MaxEntangled)
        | (NoiseModel::Depolarizing { .. }, StateFamily::MaxEntangled) => {
            Ok(ObservableId::AdAncilla)
        }
        (NoiseModel::Depolarizing { .. }, StateFamily::Single { .. })
        | (NoiseModel::Identity, StateFamily::Single { .. }) => {
            Ok(ObservableId::DepolarizingSingle)
        }
        (NoiseModel::Pauli { .. }, StateFamily::MaxEntangled)
        | (NoiseModel::Dephasing { .. }, StateFamily::MaxEntangled) => {
            Ok(ObservableId::PauliAncilla)
        }
        (NoiseModel::AmplitudeDamping { .. }, StateFamily::FourQubitNoon) => {
            Ok(ObservableId::AdNoon4)
        }
        _ => Err(Error::Config(
            "no catalog observable for this scenario; pass --observable".into(),
        )),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let model = args.channel.model()?;
    let (family, _) = args.state.family_and_layout()?;
    let phi_true = args.phi.unwrap_or(1.0);
    let scenario = build_scenario(model, &family, phi_true)?;

    let obs_id = match &args.observable {
        Some(name) => ObservableId::parse(name)?,
        None => infer_observable(model, &family)?,
    };
    let observable = observable_catalog(obs_id);
    if observable.matrix().dim() != scenario.dim() {
        return Err(Error::Config(format!(
            "observable acts on dimension {}, scenario has dimension {}",
            observable.matrix().dim(),
            scenario.dim()
        )));
    }

    if args.rounds == 0 || args.nu == 0 {
        return Err(Error::Config("--rounds and --nu must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let rounds = if args.nu < args.rounds as u64 {
        warnings.push(format!(
            "nu {} is below the round count; running {} single-shot rounds",
            args.nu, args.nu
        ));
        args.nu as usize
    } else {
        args.rounds
    };
    let shots = args.nu / rounds as u64;
    if shots * rounds as u64 != args.nu {
        warnings.push(format!(
            "nu rounded down to {} ({} rounds x {} shots)",
            shots * rounds as u64,
            rounds,
            shots
        ));
    }
    if args.nu < 100 {
        warnings.push("low repetition count; the variance estimate is unreliable".into());
    }

    let run = adaptive_run(&scenario, &observable, rounds, shots, args.seed)?;
    let bound = qcr_bound(&scenario, run.nu)?;
    let ratio = run.sample_variance / bound;
    let report = SimulateReport {
        channel: ChannelReport::new(model),
        state: args.state.state.clone(),
        observable: format!("{obs_id:?}"),
        true_phi: phi_true,
        rounds,
        shots_per_round: shots,
        run,
        qcr_bound: bound,
        variance_ratio: ratio,
        warnings,
    };
    match args.output.format.as_deref() {
        None | Some("json") => write_output(&args.output.out, &to_json(&report)),
        Some(other) => Err(Error::Config(format!(
            "simulation reports are JSON only, not '{other}'"
        ))),
    }
}

#[derive(Serialize)]
struct ClickReport {
    bs1_plus: f64,
    bs1_minus: f64,
    bs2_plus: f64,
    bs2_minus: f64,
}

#[derive(Serialize)]
struct ExperimentReport {
    noise: ChannelReport,
    phi: f64,
    clicks: ClickReport,
    click_fisher: f64,
    scenario_qfi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<u64>>,
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let model = args.channel.model()?;
    let noise: KrausChannel = make_channel(model)?;
    let phi = args.phi.unwrap_or(FRAC_PI_2);

    let evolved = photonics::evolve(&photonics::prepare(), phi, &noise);
    let clicks = photonics::detect(&evolved);
    let fisher = photonics::click_fisher(&noise, phi)?;
    let qfi = qfi_scenario(&photonics::equivalent_scenario(&noise, phi)?)?;

    let counts = match (args.nu, args.seed) {
        (Some(nu), Some(seed)) => Some(sample_distribution(&clicks.p, nu, seed)),
        (Some(_), None) => {
            return Err(Error::Config("click sampling needs --seed".into()));
        }
        _ => None,
    };

    let report = ExperimentReport {
        noise: ChannelReport::new(model),
        phi,
        clicks: ClickReport {
            bs1_plus: clicks.p[0],
            bs1_minus: clicks.p[1],
            bs2_plus: clicks.p[2],
            bs2_minus: clicks.p[3],
        },
        click_fisher: fisher,
        scenario_qfi: qfi,
        counts,
    };
    match args.output.format.as_deref() {
        None | Some("json") => write_output(&args.output.out, &to_json(&report)),
        Some(other) => Err(Error::Config(format!(
            "experiment reports are JSON only, not '{other}'"
        ))),
    }
}
