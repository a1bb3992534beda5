//! Command-line surface for the photon-added squeezed thermal state
//! library: scalar quantities as JSON records, Wigner and photon-number
//! data as deterministic CSV, and the analytic-vs-oracle validation suite.
//!
//! Every value printed here is computed by the library exactly as a caller
//! of the public API would; the binary adds parsing, merging of flag and
//! config-file inputs, and formatting — no computation of its own.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pasts_core::analytics::{self, PastsWigner};
use pasts_core::decoherence::{self, EvolvedWigner};
use pasts_core::gaussianity;
use pasts_core::grid::{self, GridSpec};
use pasts_core::validate;
use pasts_core::{ChannelSpec, Error, StateSpec};

#[derive(Parser)]
#[command(
    name = "pasts",
    version,
    about = "Photon-added squeezed thermal states: statistics, Wigner \
             functions, decoherence thresholds, and self-validation",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 bad input, \
                  3 I/O failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalization factor of the photon-added state
    Norm(CommonArgs),
    /// Mean photon number
    Mean(CommonArgs),
    /// Mandel Q parameter
    Q(CommonArgs),
    /// Photon-number distribution as CSV
    Pnd(CommonArgs),
    /// Wigner function of the initial state on a phase-space grid, as CSV
    Wigner(CommonArgs),
    /// Wigner function after thermal-channel evolution, as CSV
    #[command(name = "wigner-evolved")]
    WignerEvolved(CommonArgs),
    /// Negativity-loss time of the photon-added state
    Threshold(CommonArgs),
    /// Negativity-loss time of the photon-subtracted comparison state
    #[command(name = "threshold-sub")]
    ThresholdSub(CommonArgs),
    /// Overlap fidelity with the Gaussian reference state
    Fidelity(CommonArgs),
    /// Subtracted-to-added normalization ratio
    Ratio(CommonArgs),
    /// Run the analytic-vs-oracle validation suite
    Validate(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Norm(a)
            | Command::Mean(a)
            | Command::Q(a)
            | Command::Pnd(a)
            | Command::Wigner(a)
            | Command::WignerEvolved(a)
            | Command::Threshold(a)
            | Command::ThresholdSub(a)
            | Command::Fidelity(a)
            | Command::Ratio(a)
            | Command::Validate(a) => a,
        }
    }
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Squeeze parameter λ ≥ 0
    #[arg(long)]
    lambda: Option<f64>,
    /// Thermal occupation n_c ≥ 0 of the input state
    #[arg(long)]
    nc: Option<f64>,
    /// Number of added photons
    #[arg(long)]
    m: Option<u32>,
    /// Bath mean occupation N ≥ 0 of the thermal channel
    #[arg(long = "N")]
    big_n: Option<f64>,
    /// Dimensionless evolution time κt ≥ 0
    #[arg(long)]
    kt: Option<f64>,
    /// Phase-space window, min:max:n or min:max:n,min:max:n (re axis first)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Fock-space truncation dimension for oracle comparisons
    #[arg(long = "oracle-dim")]
    oracle_dim: Option<usize>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Skip master-equation checks in `validate`
    #[arg(long)]
    quick: bool,
}

/// Config-file mirror of the command-line flags.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lambda: Option<f64>,
    nc: Option<f64>,
    m: Option<u32>,
    #[serde(rename = "N")]
    big_n: Option<f64>,
    kt: Option<f64>,
    grid: Option<String>,
    oracle_dim: Option<usize>,
    out: Option<PathBuf>,
    quick: Option<bool>,
}

/// Fully resolved inputs: defaults, overlaid by the config file, overlaid
/// by explicit flags.
#[derive(Serialize)]
struct RunConfig {
    lambda: f64,
    nc: f64,
    m: u32,
    #[serde(rename = "N")]
    big_n: f64,
    kt: f64,
    grid: String,
    oracle_dim: usize,
    #[serde(skip)]
    out: Option<PathBuf>,
    #[serde(skip)]
    quick: bool,
}

impl RunConfig {
    /// Defaults give the running example used throughout: λ = 0.3,
    /// n_c = 0.3, m = 1 in a bath with N = 0.2, evaluated on [−3,3]².
    fn resolve(args: &CommonArgs) -> Result<Self, Error> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Io(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    Error::InvalidParameter {
                        name: "config",
                        message: format!("{}: {e}", path.display()),
                    }
                })?
            }
            None => FileConfig::default(),
        };
        Ok(RunConfig {
            lambda: args.lambda.or(file.lambda).unwrap_or(0.3),
            nc: args.nc.or(file.nc).unwrap_or(0.3),
            m: args.m.or(file.m).unwrap_or(1),
            big_n: args.big_n.or(file.big_n).unwrap_or(0.2),
            kt: args.kt.or(file.kt).unwrap_or(0.2),
            grid: args.grid.clone().or(file.grid).unwrap_or_else(|| "-3:3:121".into()),
            oracle_dim: args.oracle_dim.or(file.oracle_dim).unwrap_or(80),
            out: args.out.clone().or(file.out),
            quick: args.quick || file.quick.unwrap_or(false),
        })
    }

    fn state(&self) -> Result<StateSpec, Error> {
        StateSpec::new(self.lambda, self.nc, self.m)
    }

    fn channel(&self) -> Result<ChannelSpec, Error> {
        ChannelSpec::new(self.big_n, self.kt)
    }

    fn grid_spec(&self) -> Result<GridSpec, Error> {
        GridSpec::parse(&self.grid)
    }

    /// The `# meta:` echo embedded in CSV output.
    fn meta(&self, kind: &str) -> String {
        format!(
            "kind={kind} {}",
            serde_json::to_string(self).expect("plain struct serializes")
        )
    }
}

/// The single-value JSON record printed by scalar commands.
#[derive(Serialize)]
struct ScalarRecord {
    kind: &'static str,
    inputs: serde_json::Value,
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn emit_scalar(
    kind: &'static str,
    inputs: serde_json::Value,
    value: Option<f64>,
    note: Option<String>,
) {
    let record = ScalarRecord {
        kind,
        inputs,
        value,
        note,
    };
    println!(
        "{}",
        serde_json::to_string(&record).expect("record serializes")
    );
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => grid::write_csv(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Io(_) => ExitCode::from(3),
        Error::IntegrationFailure(_) | Error::InternalConsistency(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run(command: &Command) -> Result<ExitCode, Error> {
    let cfg = RunConfig::resolve(command.args())?;
    match command {
        Command::Norm(_) => {
            let s = cfg.state()?;
            emit_scalar(
                "norm",
                serde_json::json!({"lambda": cfg.lambda, "nc": cfg.nc, "m": cfg.m}),
                Some(analytics::normalization(&s)),
                None,
            );
        }
        Command::Mean(_) => {
            let s = cfg.state()?;
            emit_scalar(
                "mean",
                serde_json::json!({"lambda": cfg.lambda, "nc": cfg.nc, "m": cfg.m}),
                Some(analytics::mean_photon(&s)),
                None,
            );
        }
        Command::Q(_) => {
            let s = cfg.state()?;
            emit_scalar(
                "q",
                serde_json::json!({"lambda": cfg.lambda, "nc": cfg.nc, "m": cfg.m}),
                Some(analytics::mandel_q(&s)?),
                None,
            );
        }
        Command::Fidelity(_) => {
            let s = cfg.state()?;
            emit_scalar(
                "fidelity",
                serde_json::json!({"lambda": cfg.lambda, "nc": cfg.nc, "m": cfg.m}),
                Some(gaussianity::fidelity(&s)),
                None,
            );
        }
        Command::Ratio(_) => {
            let s = cfg.state()?;
            emit_scalar(
                "ratio",
                serde_json::json!({"lambda": cfg.lambda, "nc": cfg.nc, "m": cfg.m}),
                Some(gaussianity::fidelity_ratio(&s)),
                None,
            );
        }
        Command::Threshold(_) => {
            emit_scalar(
                "threshold",
                serde_json::json!({"N": cfg.big_n}),
                Some(decoherence::threshold_added(cfg.big_n)?),
                None,
            );
        }
        Command::ThresholdSub(_) => {
            let inputs =
                serde_json::json!({"N": cfg.big_n, "nc": cfg.nc, "lambda": cfg.lambda});
            match decoherence::threshold_subtracted(cfg.big_n, cfg.nc, cfg.lambda) {
                Ok(v) => emit_scalar("threshold-sub", inputs, Some(v), None),
                Err(Error::NoFiniteThreshold(note)) => {
                    emit_scalar("threshold-sub", inputs, None, Some(note))
                }
                Err(e) => return Err(e),
            }
        }
        Command::Pnd(_) => {
            let s = cfg.state()?;
            let (_total, cutoff) = analytics::pnd_pasts_total(&s)?;
            let dist = analytics::pnd_pasts_distribution(&s, cutoff as usize)?;
            let csv = grid::pnd_csv(&cfg.meta("pnd"), &dist);
            write_or_print(cfg.out.as_deref(), &csv)?;
        }
        Command::Wigner(_) => {
            let s = cfg.state()?;
            let g = cfg.grid_spec()?;
            let w = PastsWigner::new(&s);
            let values = g.evaluate(|p| w.eval(p));
            let csv = grid::wigner_csv(&cfg.meta("wigner"), &g, &values);
            write_or_print(cfg.out.as_deref(), &csv)?;
        }
        Command::WignerEvolved(_) => {
            let s = cfg.state()?;
            let ch = cfg.channel()?;
            let g = cfg.grid_spec()?;
            let w = EvolvedWigner::new(&s, &ch);
            let values = g.evaluate(|p| w.eval(p));
            let csv = grid::wigner_csv(&cfg.meta("wigner-evolved"), &g, &values);
            write_or_print(cfg.out.as_deref(), &csv)?;
        }
        Command::Validate(_) => {
            let s = cfg.state()?;
            let report = validate::run_suite(&s, cfg.oracle_dim, cfg.quick);
            print!("{}", report.render());
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
