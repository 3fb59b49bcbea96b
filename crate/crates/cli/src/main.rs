use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use umbral_cli::{run_job, run_render, CliError, Format, Overrides, EXIT_OK};

#[derive(Parser)]
#[command(name = "umbral", version, about = "Exact delta operators, Goncarov and Abel polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute polynomial families or solve an interpolation problem.
    Compute(JobArgs),
    /// Run a verification suite; exits with 1 when an identity fails.
    Verify(JobArgs),
    /// Print a JSON polynomial in another format.
    Render {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Use every index with total degree at most this, replacing any index list.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Truncation order of the series checks.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    no_crosscheck: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Add the system summary and Abel determinants to the report, and timing on stderr.
    #[arg(long)]
    explain: bool,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn job(args: &JobArgs, verify: bool) -> Result<i32, CliError> {
    let start = Instant::now();
    let overrides = Overrides {
        format: args.format,
        max_degree: args.max_degree,
        order: args.order,
        no_crosscheck: args.no_crosscheck,
        explain: args.explain,
    };
    let report = run_job(&read(&args.spec)?, &overrides, args.jobs.max(1))?;
    if verify != (report.job.target == umbral_cli::Target::Verify) {
        let want = if verify { "verify" } else { "a compute target" };
        return Err(CliError::Invalid(format!("this subcommand needs target {want}")));
    }
    print!("{}", report.to_text());
    if args.explain {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => job(args, false),
        Command::Verify(args) => job(args, true),
        Command::Render { spec, format } => read(spec).and_then(|t| run_render(&t, *format)).map(|s| {
            print!("{s}");
            EXIT_OK
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
