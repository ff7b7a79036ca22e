use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use paratele_cli::{execute, exit_code, parse_problem, render_text, Options, Task};
use paratele_core::exec::{Config, Parallelism};
use paratele_core::Error;

#[derive(Parser)]
#[command(name = "paratele", version, about = "Parallel telescopers and PPV defining operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the task named in the problem file.
    Run(Common),
    /// Minimal telescoper of one input with respect to one parameter.
    Telescope {
        #[command(flatten)]
        common: Common,
        /// Input name; defaults to the file's telescope task or the first input.
        #[arg(long)]
        input: Option<String>,
        /// Parameter name; defaults to the file's telescope task or the first parameter.
        #[arg(long)]
        var: Option<String>,
    },
    /// Parallel telescoper of all inputs.
    Paratele(Common),
    /// Whether a parallel telescoper exists.
    Exists(Common),
    /// Defining operator of the PPV group of D_i(Y) = f_i.
    Ppv(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Problem file.
    file: PathBuf,
    /// Re-check every defining identity of the result by direct arithmetic.
    #[arg(long)]
    verify: bool,
    /// Largest telescoper order to try.
    #[arg(long, default_value_t = 12)]
    max_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print only the operator (or nothing on failure).
    #[arg(long)]
    quiet: bool,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
    /// Run all jobs on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn fail(e: &Error, quiet: bool) -> ExitCode {
    if !quiet || e.class() != paratele_core::ErrorClass::Negative {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(e) as u8)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (common, explicit) = match cli.command {
        Command::Run(c) => (c, None),
        Command::Telescope { common, input, var } => (common, Some(("telescope", input, var))),
        Command::Paratele(c) => (c, Some(("paratele", None, None))),
        Command::Exists(c) => (c, Some(("exists", None, None))),
        Command::Ppv(c) => (c, Some(("ppv", None, None))),
    };
    let text = match std::fs::read_to_string(&common.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.file.display());
            return ExitCode::from(2);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => return fail(&e, common.quiet),
    };
    let task = match explicit {
        None => match &problem.task {
            Some(t) => t.clone(),
            None => return fail(&Error::Problem("the file names no task; use a task subcommand".into()), common.quiet),
        },
        Some(("telescope", input, var)) => {
            let (fi, fv) = match &problem.task {
                Some(Task::Telescope { input, var }) => (Some(input.clone()), Some(var.clone())),
                _ => (None, None),
            };
            let input = input.or(fi).or_else(|| problem.inputs.first().map(|i| i.name.clone()));
            let Some(input) = input else {
                return fail(&Error::Problem("no inputs".into()), common.quiet);
            };
            let var = var.or(fv).unwrap_or_else(|| problem.names[1].clone());
            Task::Telescope { input, var }
        }
        Some(("paratele", ..)) => Task::Paratele,
        Some(("exists", ..)) => Task::Exists,
        Some(_) => Task::Ppv,
    };
    let parallelism = if common.sequential { Parallelism::Sequential } else { Parallelism::default() };
    let opts = Options {
        config: Config { max_order: common.max_order, parallelism },
        verify: common.verify,
        timings: common.timings,
    };
    match execute(&problem, &task, &opts) {
        Ok(report) => {
            match (common.quiet, common.format) {
                (true, _) => {
                    if let Some(op) = &report.operator {
                        println!("{op}");
                    }
                }
                (false, Format::Text) => print!("{}", render_text(&report)),
                (false, Format::Json) => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"))
                }
            }
            if report.exists == Some(false) {
                return fail(&Error::NoParallelTelescoperExists, common.quiet);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e, common.quiet),
    }
}
