//! Command-line front end for the `seqwit` engine.
//!
//! Three subcommands: `max-observers` counts detecting observers in a
//! symmetric or asymmetric network, `compare` builds the sequential vs
//! non-sequential resource tables, `witness-eval` evaluates one modulated
//! witness. Settings come from flags, then an optional `--config` TOML file,
//! then built-in defaults.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use seqwit::sequential::{self, ChainReport};
use seqwit::{EpsilonPolicy, ScenarioKind, StateFamily};

pub use report::significant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] seqwit::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateArg {
    Bell,
    Werner,
    Colored,
    Pure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "seqwit", version, about = "Sequential entanglement witnessing with unsharp measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count observers that can detect entanglement in sequence.
    MaxObservers {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sequential vs non-sequential resource tables.
    Compare {
        /// Emit only this table; both when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: Option<u8>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Expectation of the sharpness-modulated witness on a state.
    WitnessEval {
        /// Also estimate the witness minimum over random product states.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub alices: Option<usize>,
    #[arg(long)]
    pub bobs: Option<usize>,
    #[arg(long, value_enum)]
    pub state: Option<StateArg>,
    /// Mixing parameter of the Werner or colored-noise state.
    #[arg(long)]
    pub p: Option<f64>,
    /// Angle of the pure state cos θ|01> + sin θ|10>.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Slack above the first stage's threshold.
    #[arg(long)]
    pub epsilon1: Option<f64>,
    /// Slack above later stages' thresholds.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Propagate two-decimal sharpness values and add rounded table columns.
    #[arg(long)]
    pub paper_rounding: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Significant digits in printed numbers (2 to 12).
    #[arg(long)]
    pub precision: Option<usize>,
    /// Flat TOML file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    alices: Option<usize>,
    bobs: Option<usize>,
    state: Option<StateArg>,
    p: Option<f64>,
    theta: Option<f64>,
    xi: Option<f64>,
    lambda: Option<f64>,
    epsilon1: Option<f64>,
    epsilon: Option<f64>,
    paper_rounding: Option<bool>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
    precision: Option<usize>,
}

fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub const DEFAULT_OBSERVERS: usize = 20;

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    /// Slack overrides; engine defaults apply where unset.
    pub epsilon1: Option<f64>,
    pub epsilon: Option<f64>,
    pub paper_rounding: bool,
    pub xi: f64,
    pub lambda: f64,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub precision_digits: usize,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => load_config(path)?,
            None => FileConfig::default(),
        };
        let state = args.state.or(file.state).unwrap_or(StateArg::Bell);
        let p = args.p.or(file.p);
        let theta = args.theta.or(file.theta);
        let family = match state {
            StateArg::Bell => StateFamily::BellPsiPlus,
            StateArg::Werner => StateFamily::Werner {
                p: p.ok_or_else(|| usage("--state werner needs --p"))?,
            },
            StateArg::Colored => StateFamily::ColoredNoise {
                p: p.ok_or_else(|| usage("--state colored needs --p"))?,
            },
            StateArg::Pure => StateFamily::PureNonMax {
                theta: theta.ok_or_else(|| usage("--state pure needs --theta"))?,
            },
        };
        let scenario = ScenarioKind::new(
            args.alices.or(file.alices).unwrap_or(DEFAULT_OBSERVERS),
            args.bobs.or(file.bobs).unwrap_or(DEFAULT_OBSERVERS),
            family,
        )
        .map_err(usage)?;
        let precision_digits = args.precision.or(file.precision).unwrap_or(6);
        if !(2..=12).contains(&precision_digits) {
            return Err(usage(format!("precision {precision_digits} outside [2, 12]")));
        }
        let xi = args.xi.or(file.xi).unwrap_or(1.0);
        let lambda = args.lambda.or(file.lambda).unwrap_or(1.0);
        for (name, v) in [("xi", xi), ("lambda", lambda)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(usage(format!("--{name} {v} outside (0, 1]")));
            }
        }
        let config = Self {
            scenario,
            epsilon1: args.epsilon1.or(file.epsilon1),
            epsilon: args.epsilon.or(file.epsilon),
            paper_rounding: args.paper_rounding || file.paper_rounding.unwrap_or(false),
            xi,
            lambda,
            output_format: args.format.or(file.format).unwrap_or(OutputFormat::Json),
            seed: args.seed.or(file.seed).unwrap_or(0),
            precision_digits,
        };
        config.policy(EpsilonPolicy::symmetric_default()).validate().map_err(usage)?;
        Ok(config)
    }

    /// `base` with this run's overrides applied.
    pub fn policy(&self, base: EpsilonPolicy) -> EpsilonPolicy {
        EpsilonPolicy {
            first_stage_slack: self.epsilon1.unwrap_or(base.first_stage_slack),
            later_stage_slack: self.epsilon.unwrap_or(base.later_stage_slack),
            paper_rounding: self.paper_rounding,
        }
    }
}

/// Observer counts for a network with the given numbers on each wing.
#[derive(Clone, Debug)]
pub struct ObserverCount {
    pub engine: &'static str,
    /// Detecting stages when observers are not the limiting factor.
    pub bound: usize,
    pub alices_detected: usize,
    pub bobs_detected: usize,
    pub chain: ChainReport,
}

/// Symmetric engine for equal wings, asymmetric otherwise. The witnesses
/// and states are symmetric under exchanging the wings, so a network with
/// more Alices than Bobs is run with the roles swapped.
pub fn count_observers(config: &RunConfig) -> Result<ObserverCount, CliError> {
    let ScenarioKind { alices, bobs, family } = config.scenario;
    if alices == bobs {
        let chain = sequential::greedy_symmetric(&family, &config.policy(EpsilonPolicy::symmetric_default()))?;
        let used = chain.detected_stages.min(alices);
        return Ok(ObserverCount {
            engine: "symmetric",
            bound: chain.detected_stages,
            alices_detected: used,
            bobs_detected: used,
            chain,
        });
    }
    let (few, many) = (alices.min(bobs), alices.max(bobs));
    let chain = sequential::greedy_asymmetric(few, &family, &config.policy(EpsilonPolicy::asymmetric_default()))?;
    let many_detected = chain.detected_stages.min(many);
    let few_detected = few.min(many_detected);
    let (alices_detected, bobs_detected) = if alices < bobs {
        (few_detected, many_detected)
    } else {
        (many_detected, few_detected)
    };
    Ok(ObserverCount {
        engine: "asymmetric",
        bound: chain.detected_stages,
        alices_detected,
        bobs_detected,
        chain,
    })
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(usage)?;
    execute(&cli.command, out)
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::MaxObservers { common } => {
            let config = RunConfig::resolve(common)?;
            let count = count_observers(&config)?;
            report::max_observers(&config, &count, out)
        }
        Command::Compare { table, common } => {
            let config = RunConfig::resolve(common)?;
            let tables = seqwit::resource::build_comparison_tables(config.paper_rounding)?;
            report::compare(&config, &tables, *table, out)
        }
        Command::WitnessEval { samples, common } => {
            let config = RunConfig::resolve(common)?;
            let eval = report::evaluate_witness(&config, *samples)?;
            report::witness_eval(&config, &eval, out)
        }
    }
}
