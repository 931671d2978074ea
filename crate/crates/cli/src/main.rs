//! `dsym`: symmetry analysis of rational difference equations from the shell.
//!
//! Every command prints a report in text or JSON form. Exit codes: 0 ok,
//! 2 verification failed, 1 error.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dsym_core::symmetry::XiMode;
use serde_json::json;

use commands::{Outcome, ReduceArgs, Sampling, SimArgs, Status, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "dsym",
    version,
    about = "Lie point symmetries of rational difference equations"
)]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for numeric sampling.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Tolerance for numeric verification (max relative residual).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Number of numeric samples.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Include wall-clock timing in JSON reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimKind {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Xi {
    None,
    Affine,
}

#[derive(clap::Args)]
struct EqArgs {
    /// Catalog id (dP1..dP5) or path to an equation JSON file.
    #[arg(long)]
    eq: String,
    #[arg(long)]
    branch: Option<String>,
    /// Parameter value, e.g. `--param a=1/2+i`.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical rational form.
    Parse { expr: String },
    /// Check a generator against the linearized symmetry condition.
    Verify {
        #[command(flatten)]
        eq: EqArgs,
        /// Catalog label (X2), 1-based index, combination (X2+iX3) or generator JSON file.
        #[arg(long)]
        gen: String,
        #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
        mode: Mode,
    },
    /// Build and solve the determining system for a polynomial ansatz.
    Determine {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Xi::None)]
        xi: Xi,
    },
    /// Iterate the equation from initial data.
    Simulate {
        #[command(flatten)]
        eq: EqArgs,
        /// Initial values `u0,u1`.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 0)]
        n0: i64,
        #[arg(long, default_value_t = 30)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SimKind::Exact)]
        mode: SimKind,
        #[arg(long, value_enum, default_value_t = Out::Json)]
        out: Out,
    },
    /// Apply a change of variable: reciprocal, log or affine:s,t.
    Transform {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long)]
        kind: String,
    },
    /// Reduce the order with a generator's invariant and solve.
    Reduce {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long)]
        gen: String,
        #[arg(long, allow_hyphen_values = true)]
        u0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u1: Option<String>,
        /// Catalog formula id to audit against exact iteration.
        #[arg(long)]
        audit: Option<String>,
    },
    /// Solve `c0 a(n) + c1 a(n+1) + ... = 0` with constant coefficients.
    SolveRecurrence {
        /// Coefficients `c0,c1,...`, lowest shift first.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Inspect the built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Verify every catalog generator and audit every catalog formula.
    Selftest,
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Export {
        #[arg(long)]
        id: String,
        #[arg(long)]
        branch: Option<String>,
    },
}

fn run(cli: &Cli) -> dsym_core::Result<Outcome> {
    let sampling = Sampling {
        seed: cli.seed,
        tol: cli.tol,
        samples: cli.samples,
    };
    match &cli.command {
        Command::Parse { expr } => commands::parse(expr),
        Command::Verify { eq, gen, mode } => commands::verify(
            &VerifyArgs {
                eq: &eq.eq,
                branch: eq.branch.as_deref(),
                gen,
                numeric: *mode == Mode::Numeric,
                params: &eq.params,
            },
            &sampling,
        ),
        Command::Determine { eq, degree, xi } => commands::determine(
            &eq.eq,
            eq.branch.as_deref(),
            &eq.params,
            *degree,
            if *xi == Xi::Affine {
                XiMode::Affine
            } else {
                XiMode::None
            },
        ),
        Command::Simulate {
            eq,
            init,
            n0,
            steps,
            mode,
            out,
        } => commands::simulate_cmd(&SimArgs {
            eq: &eq.eq,
            branch: eq.branch.as_deref(),
            params: &eq.params,
            init,
            n0: *n0,
            steps: *steps,
            float: *mode == SimKind::Float,
            csv: *out == Out::Csv,
        }),
        Command::Transform { eq, kind } => {
            commands::transform(&eq.eq, eq.branch.as_deref(), &eq.params, kind)
        }
        Command::Reduce {
            eq,
            gen,
            u0,
            u1,
            audit,
        } => commands::reduce(&ReduceArgs {
            eq: &eq.eq,
            branch: eq.branch.as_deref(),
            params: &eq.params,
            gen,
            u0: u0.as_deref(),
            u1: u1.as_deref(),
            audit: audit.as_deref(),
        }),
        Command::SolveRecurrence { coeffs } => commands::solve_recurrence_cmd(coeffs),
        Command::Catalog {
            action: CatalogAction::List,
        } => commands::catalog_list(),
        Command::Catalog {
            action: CatalogAction::Export { id, branch },
        } => commands::catalog_export(id, branch.as_deref()),
        Command::Selftest => commands::selftest(),
    }
}

/// Print to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are plain errors; 2 is reserved for failed verification
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = run(&cli).unwrap_or_else(|e| Outcome {
        status: Status::Error,
        payload: json!({"error": e.to_string(), "kind": format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("")}),
        text: format!("error: {e}"),
    });
    match cli.format {
        Format::Json => {
            let mut report = json!({"command": echo, "status": outcome.status.name(), "payload": outcome.payload});
            if cli.timing {
                report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            }
            emit(&serde_json::to_string_pretty(&report).expect("json"));
        }
        Format::Text => {
            if outcome.status == Status::Error {
                eprintln!("{}", outcome.text);
            } else {
                emit(&outcome.text);
            }
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
