use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kvn::cli::{invalid_input, run, Command, Overrides, Report};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Extend,
    Complete,
    Kernel,
    Functional,
    Commutation,
    Schwarz,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Check => Command::Check,
            Cmd::Extend => Command::Extend,
            Cmd::Complete => Command::Complete,
            Cmd::Kernel => Command::Kernel,
            Cmd::Functional => Command::Functional,
            Cmd::Commutation => Command::Commutation,
            Cmd::Schwarz => Command::Schwarz,
        }
    }
}

/// Positive extensions of partially defined positive operators.
///
/// Exit status: 0 ok, 1 invalid input, 2 no solution exists.
/// KVN_TOL_PROFILE=strict|default selects the tolerance preset.
#[derive(Debug, Parser)]
#[command(name = "kvn", version)]
struct Args {
    command: Cmd,
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol_rank: Option<f64>,
    #[arg(long)]
    tol_psd: Option<f64>,
    #[arg(long)]
    tol_cmp: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn emit(report: &Report, out: Option<&PathBuf>) -> ExitCode {
    let text = report.render();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("kvn: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let report = match std::fs::read_to_string(&args.input) {
        Ok(text) => {
            let overrides = Overrides {
                profile: std::env::var("KVN_TOL_PROFILE").ok(),
                tol_rank: args.tol_rank,
                tol_psd: args.tol_psd,
                tol_cmp: args.tol_cmp,
                seed: args.seed,
            };
            run(args.command.into(), &text, &overrides)
        }
        Err(e) => invalid_input(format!("cannot read {}: {e}", args.input.display())),
    };
    emit(&report, args.out.as_ref())
}
