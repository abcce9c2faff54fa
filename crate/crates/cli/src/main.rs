//! `survcomp`: run censored two-sample tests, export Kaplan-Meier curves and
//! launch size/power simulation studies.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use survcomp::datasets::EmbeddedId;
use survcomp::distributions::DistributionSpec;
use survcomp::montecarlo::builtin::Case;
use survcomp::Method;

#[derive(Parser)]
#[command(
    name = "survcomp",
    version,
    about = "Two-sample tests for right-censored survival data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run two-sample tests on a dataset.
    Test {
        #[command(flatten)]
        input: Input,
        /// Comma-separated subset of gehan, cox_mantel, logrank, peto_peto, proposed.
        #[arg(long, value_delimiter = ',', default_values = ["gehan", "cox_mantel", "logrank", "peto_peto", "proposed"])]
        methods: Vec<Method>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect or export the embedded datasets.
    Datasets {
        #[command(subcommand)]
        action: DatasetsAction,
    },
    /// Write one Kaplan-Meier curve CSV per group.
    Km {
        #[command(flatten)]
        input: Input,
        /// Directory for `<name>_group1.csv` and `<name>_group2.csv`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Monte Carlo size and power studies.
    Simulate {
        #[command(subcommand)]
        study: Study,
    },
    /// Relate uniform censoring U(0, theta) to the censored fraction.
    Calibrate {
        /// Event distribution, e.g. "exponential(1)" or "weibull3(0, 2, 2)".
        #[arg(long)]
        event: DistributionSpec,
        /// Target censored fraction in (0, 1); prints the matching theta.
        #[arg(long, conflicts_with = "theta", required_unless_present = "theta")]
        target: Option<f64>,
        /// Upper bound of the uniform censoring law; prints the censored fraction.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Locate the crossing points of two survival curves.
    Crossings {
        #[command(flatten)]
        pair: Pair,
        /// Bisection tolerance for each reported crossing.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Tabulate two theoretical survival curves for plotting.
    Curves {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Right end of the time grid; defaults to the larger 0.999-quantile.
        #[arg(long)]
        until: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Embedded dataset: gastric, dmba_rats, myeloma or melanoma.
    #[arg(long)]
    dataset: Option<EmbeddedId>,
    /// CSV file with columns time,event,group.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct Pair {
    /// A built-in power-study case (I to V).
    #[arg(long, conflicts_with_all = ["first", "second"])]
    case: Option<Case>,
    #[arg(long, requires = "second")]
    first: Option<DistributionSpec>,
    #[arg(long, requires = "first")]
    second: Option<DistributionSpec>,
}

#[derive(Subcommand)]
enum DatasetsAction {
    /// List the embedded datasets.
    List,
    /// Print a dataset's observations, censored times marked with `+`.
    Show { name: EmbeddedId },
    /// Write a dataset as CSV.
    Export {
        name: EmbeddedId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunOptions {
    /// Master seed; every random draw derives from it.
    #[arg(long)]
    seed: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Subcommand)]
enum Study {
    /// Replay the built-in null grid: four families, five censoring levels.
    Size {
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Power of all tests for a built-in alternative.
    Power {
        #[arg(long)]
        case: Case,
        /// Per-group sample size (50, 100 or 200); all three when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Censoring level in percent (0, 10, ..., 50); all levels when omitted.
        #[arg(long)]
        censoring: Option<u32>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Scenarios from a TOML file of [[scenario]] tables.
    Custom {
        #[arg(long)]
        config: PathBuf,
        /// Overrides every scenario's replication count.
        #[arg(long)]
        reps: Option<u64>,
        #[command(flatten)]
        run: RunOptions,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("survcomp: {f}");
            ExitCode::from(f.code())
        }
    }
}
