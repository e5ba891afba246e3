//! Command-line entry point.

use clap::Parser;
use pqsurf::cli::{emit, report_passes, run_pipeline, CommandKind, JobConfig, OutputFormat};
use pqsurf::prodquot::LambdaRegime;

/// Exact invariants of product quotient surfaces and their canonical maps.
#[derive(Parser)]
#[command(name = "pqsurf", version)]
struct Args {
    /// Builtin scenario name (surface1..surface4, scan) or a scenario file path.
    #[arg(long, default_value = "surface1")]
    scenario: String,
    /// Commands to run, comma separated; defaults to the scenario's full set.
    #[arg(long, value_delimiter = ',')]
    commands: Option<Vec<CommandKind>>,
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Deformation parameter regime.
    #[arg(long, value_enum, default_value_t = LambdaArg::Generic)]
    lambda: LambdaArg,
}

#[derive(Copy, Clone, PartialEq, Eq, clap::ValueEnum)]
enum LambdaArg {
    Generic,
    Zero,
}

impl From<LambdaArg> for LambdaRegime {
    fn from(arg: LambdaArg) -> Self {
        match arg {
            LambdaArg::Generic => LambdaRegime::Generic,
            LambdaArg::Zero => LambdaRegime::Zero,
        }
    }
}

fn main() {
    let args = Args::parse();
    let cfg = JobConfig {
        scenario: args.scenario,
        commands: args.commands,
        format: args.format,
        lambda: args.lambda.into(),
    };
    match run_pipeline(&cfg) {
        Ok(report) => {
            print!("{}", emit(&report, cfg.format));
            std::process::exit(if report_passes(&report) { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
