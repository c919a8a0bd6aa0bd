//! `duo-standby`: lifetime analysis of a two-server alternating-standby
//! repairable system.
//!
//! Exit codes: 0 success (and compare PASS), 1 compare FAIL, 2 usage or
//! config error, 3 model/numeric error (with a JSON error record on stderr).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use duo_standby::config::{self, CommandKind, OutputFormat, Overrides};
use duo_standby::{error_record, run};

#[derive(Parser)]
#[command(
    name = "duo-standby",
    version,
    about = "Lifetime analysis of a two-server alternating-standby repairable system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lifetime transform on an s-grid by closed form, fixed point and
    /// scenario sum
    Lst(CommonArgs),
    /// Lifetime moments (mean time to failure and higher orders)
    Moments(CommonArgs),
    /// Survival curve by numerical inversion
    Survival(CommonArgs),
    /// Time at which survival crosses a given probability
    Quantile(CommonArgs),
    /// Monte Carlo lifetime summary
    Simulate(CommonArgs),
    /// Analytic-vs-Monte-Carlo cross-validation with per-point z-scores
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Model/parameter config file
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Transform arguments, comma-separated (lst, compare)
    #[arg(long)]
    s: Option<String>,
    /// Upper end of the time grid (survival, compare)
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points (survival, compare)
    #[arg(long)]
    points: Option<u32>,
    /// Replication count (simulate, compare)
    #[arg(long)]
    n: Option<u64>,
    /// Random seed (simulate, compare)
    #[arg(long)]
    seed: Option<u64>,
    /// Cycle cap per replication (simulate, compare)
    #[arg(long = "max-cycles")]
    max_cycles: Option<u64>,
    /// Sigma multiplier for compare verdicts
    #[arg(long)]
    sigma: Option<f64>,
    /// Run replications single-threaded (results are identical either way)
    #[arg(long)]
    serial: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Lst(a) => (CommandKind::Lst, a),
        Command::Moments(a) => (CommandKind::Moments, a),
        Command::Survival(a) => (CommandKind::Survival, a),
        Command::Quantile(a) => (CommandKind::Quantile, a),
        Command::Simulate(a) => (CommandKind::Simulate, a),
        Command::Compare(a) => (CommandKind::Compare, a),
    };

    let format = match args.format.as_deref() {
        None => None,
        Some(text) => match OutputFormat::parse(text) {
            Some(f) => Some(f),
            None => {
                eprintln!("config error: unknown format {text:?} (expected csv or json)");
                return ExitCode::from(2);
            }
        },
    };
    let overrides = Overrides {
        s: args.s.clone(),
        t_max: args.t_max,
        points: args.points,
        n: args.n,
        seed: args.seed,
        max_cycles: args.max_cycles,
        sigma: args.sigma,
        format,
        serial: args.serial,
    };

    let config = match config::load(&args.config, Some(kind), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };

    let output = match run::execute(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}", error_record(&e));
            return ExitCode::from(3);
        }
    };

    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, output.body.as_bytes()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{}", output.body);
    }

    if output.compare_failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
