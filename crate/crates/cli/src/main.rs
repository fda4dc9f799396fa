use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cnlcheck_cli::bank::Bank;
use cnlcheck_cli::service::{router, AppState};
use cnlcheck_core::diagnostics::render_feedback;
use cnlcheck_core::wire::CheckResponse;
use cnlcheck_core::{check_source, Verbosity};

#[derive(Parser)]
#[command(name = "cnlcheck", version, about = "Check proofs written in controlled English")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof text; exits 0 if accepted, 1 if rejected.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = VerbosityArg::Explained)]
        verbosity: VerbosityArg,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, env = "CNLCHECK_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        bank: Option<PathBuf>,
    },
    /// Exercise bank tools.
    Bank {
        #[command(subcommand)]
        command: BankCommand,
    },
}

#[derive(Subcommand)]
enum BankCommand {
    /// Load a bank and run all its checks.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerbosityArg {
    Terse,
    Explained,
}

impl From<VerbosityArg> for Verbosity {
    fn from(v: VerbosityArg) -> Self {
        match v {
            VerbosityArg::Terse => Verbosity::Terse,
            VerbosityArg::Explained => Verbosity::Explained,
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("cnlcheck: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Check { file, format, verbosity } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", file.display())),
            };
            let report = check_source(&text);
            match format {
                Format::Json => print!("{}", CheckResponse::from_report(&report, verbosity.into()).to_json()),
                Format::Text => print!("{}", render_feedback(&report, verbosity.into()).to_text()),
            }
            if report.accepted() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Serve { port, bank } => {
            let bank = match bank.map(|p| Bank::load(&p)).transpose() {
                Ok(b) => b.unwrap_or_default(),
                Err(e) => return fail(e),
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let app = router(AppState { bank, ..AppState::default() });
            let served = runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                eprintln!("listening on port {port}");
                axum::serve(listener, app).await
            });
            match served {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Bank { command: BankCommand::Validate { file } } => match Bank::load(&file) {
            Ok(bank) => {
                println!("{}: {} exercises, all valid", file.display(), bank.exercises.len());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
