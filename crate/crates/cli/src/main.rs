use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flagric::{
    cmd_solve, cmd_summands, cmd_system, cmd_troots, cmd_verify, exit, parse_flavor, parse_format,
    parse_spec, render::render, timed, CliError, CliResult,
};
use flagric_core::SolverConfig;

/// Invariant Einstein metrics on generalized flag manifolds.
#[derive(Parser)]
#[command(name = "flagric", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Isotropy summands and their count.
    Summands { spec: String },
    /// Positive t-roots and the type of the t-root set.
    Troots { spec: String },
    /// The Einstein system as JSON or polynomial text.
    System {
        spec: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value = "generated")]
        flavor: String,
        #[arg(long, default_value = "corrected")]
        edition: String,
    },
    /// Multistart Newton search for Einstein metrics.
    Solve {
        spec: String,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        dedup: f64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
    },
    /// Consistency checks for one spec or a whole suite.
    Verify {
        spec: Option<String>,
        #[arg(long)]
        suite: Option<String>,
    },
}

fn run(cli: Cli) -> CliResult<(String, i32)> {
    let o = &cli.output;
    let report = match cli.verb {
        Verb::System {
            spec,
            format,
            flavor,
            edition,
        } => {
            let format = parse_format(&format)?;
            let flavor = parse_flavor(&flavor, &edition)?;
            let spec = parse_spec(&spec)?;
            return Ok((cmd_system(&spec, format, flavor)?, exit::OK));
        }
        Verb::Summands { spec } => {
            let spec = parse_spec(&spec)?;
            timed(o.timing, || cmd_summands(&spec))?
        }
        Verb::Troots { spec } => {
            let spec = parse_spec(&spec)?;
            timed(o.timing, || cmd_troots(&spec))?
        }
        Verb::Solve {
            spec,
            starts,
            seed,
            tol,
            dedup,
            max_iters,
        } => {
            let spec = parse_spec(&spec)?;
            let cfg = SolverConfig {
                starts,
                seed,
                newton_tol: tol,
                dedup_tol: dedup,
                max_iters,
                ..SolverConfig::default()
            };
            cfg.validate()?;
            timed(o.timing, || cmd_solve(&spec, &cfg))?
        }
        Verb::Verify { spec, suite } => {
            let spec = spec.as_deref().map(parse_spec).transpose()?;
            if spec.is_none() && suite.is_none() {
                return Err(CliError::usage("verify needs a spec or --suite default"));
            }
            timed(o.timing, || cmd_verify(spec.as_ref(), suite.as_deref()))?
        }
    };
    let text = if o.json {
        report.to_json()
    } else {
        render(&report)
    };
    Ok((text, report.exit_code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.output.out.clone();
    let (text, code) = match run(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("flagric: {e}");
            return ExitCode::from(e.code as u8);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("flagric: cannot write {}: {e}", path.display());
                return ExitCode::from(exit::USAGE as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
