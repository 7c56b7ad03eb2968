use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctsearch_cli::{run, CliError, Command, FileConfig, Format, RunConfig, SweepConfig};

#[derive(Parser)]
#[command(
    name = "ctsearch",
    version,
    about = "Weighted continuous-time search experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum CommandArgs {
    /// Trajectory over [0, 2T] and the measurement distribution at T
    Simulate,
    /// Full-space evolution checked against the two-dimensional reduction
    Verify,
    /// Phase estimation of the overlap y
    Estimate,
    /// Count targets on the disjointified scenario
    Count,
    /// Misplaced-confidence curve of T against alpha2
    Sweep(SweepArgs),
    /// Weighted start against the uniform start
    Compare,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario JSON; the bundled library demo when omitted
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Phase register size, a power of two
    #[arg(long, global = true)]
    m_size: Option<usize>,
    /// Number of samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory [default: results]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Overrides the scenario energy
    #[arg(long, global = true)]
    energy: Option<f64>,
    /// JSON file with defaults for any of the flags above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Args, Default)]
struct SweepArgs {
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    n12: Option<usize>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Both => Format::Both,
        }
    }
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.common.config {
        Some(p) => FileConfig::from_path(p)?,
        None => FileConfig::default(),
    };
    let (command, sweep_args) = match cli.command {
        CommandArgs::Simulate => (Command::Simulate, SweepArgs::default()),
        CommandArgs::Verify => (Command::Verify, SweepArgs::default()),
        CommandArgs::Estimate => (Command::Estimate, SweepArgs::default()),
        CommandArgs::Count => (Command::Count, SweepArgs::default()),
        CommandArgs::Sweep(a) => (Command::Sweep, a),
        CommandArgs::Compare => (Command::Compare, SweepArgs::default()),
    };
    let c = cli.common;
    let base = file.sweep.unwrap_or_default();
    let sweep = SweepConfig {
        l: sweep_args.l.unwrap_or(base.l),
        n1: sweep_args.n1.unwrap_or(base.n1),
        n2: sweep_args.n2.unwrap_or(base.n2),
        n12: sweep_args.n12.unwrap_or(base.n12),
        alpha_min: sweep_args.alpha_min.unwrap_or(base.alpha_min),
        alpha_max: sweep_args.alpha_max.unwrap_or(base.alpha_max),
        points: sweep_args.points.unwrap_or(base.points),
    };
    Ok(RunConfig {
        command,
        scenario_path: c.scenario.or(file.scenario),
        m_size: c.m_size.or(file.m_size),
        n_samples: c.samples.or(file.samples),
        seed: c.seed.or(file.seed).unwrap_or(0),
        output_dir: c
            .out
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("results")),
        format: c
            .format
            .map(Format::from)
            .or(file.format)
            .unwrap_or_default(),
        energy: c.energy.or(file.energy),
        sweep,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match resolve(cli) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
