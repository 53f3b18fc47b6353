//! `coxfill`: command-line front end for the Coxeter polytope toolkit.
//!
//! Every run prints a JSON report on stdout and a short summary on stderr.
//! Exit codes: 0 when every check passes, 1 when a check or a computation
//! fails, 2 for parse, usage and I/O errors, 3 for unsupported families and
//! 4 for an unknown `reproduce` identifier.

mod commands;
mod input;
mod report;
mod reproduce;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use coxfill::{Error, Order};
use serde_json::json;

use commands::Settings;
use input::UsageError;
use report::RunReport;
use reproduce::UnknownTable;

/// Convex projective Coxeter polytopes: deformation spaces, realizations and
/// group-theoretic checks.
#[derive(Parser, Debug)]
#[command(name = "coxfill", version)]
struct Cli {
    /// Machine output only: suppress the summary on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for witness determinants.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Longest word in orbit exploration.
    #[arg(long, global = true, default_value_t = 5)]
    max_word_length: usize,
    /// Output file: the PLY mesh for `orbit`, a copy of the report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a diagram and its components.
    Classify {
        /// Diagram file.
        path: PathBuf,
        /// Value of a symbolic label `m`.
        #[arg(long, value_parser = input::parse_order)]
        m: Option<Order>,
    },
    /// Deformation space of a family for each label value.
    Deform {
        /// Diagram file.
        path: PathBuf,
        /// Label values, e.g. `3..9,inf`.
        #[arg(long, default_value = "3..9")]
        m: String,
        /// Second cycle parameter at which to solve for the first.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Limit of a family as `m` grows.
    Limit {
        /// Diagram file with a symbolic label `m`.
        path: PathBuf,
        /// Second cycle parameter, for two-cycle families.
        #[arg(long)]
        mu: Option<f64>,
        /// Largest `m` used for extrapolation.
        #[arg(long, default_value_t = 1_000_000)]
        m_max: u32,
    },
    /// Realize a deformation-space witness or a Cartan matrix dump.
    Realize {
        /// Diagram file or JSON dump.
        path: PathBuf,
        #[arg(long, value_parser = input::parse_order)]
        /// Value of a symbolic label `m`.
        m: Option<Order>,
        /// Index of the witness.
        #[arg(long, default_value_t = 0)]
        witness: usize,
        /// Second cycle parameter at which to solve for the first.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Explore the orbit of the polytope under short words.
    Orbit {
        /// Diagram file or JSON dump.
        path: PathBuf,
        /// Value of a symbolic label `m`.
        #[arg(long, value_parser = input::parse_order)]
        m: Option<Order>,
        /// Index of the witness.
        #[arg(long, default_value_t = 0)]
        witness: usize,
        /// Number of sampled point pairs.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Check relative hyperbolicity against peripheral subgroups.
    Relhyp {
        /// Diagram file or JSON dump.
        path: PathBuf,
        /// Value of a symbolic label `m`.
        #[arg(long, value_parser = input::parse_order)]
        m: Option<Order>,
        /// Peripheral subsets such as `1,2,3;5,6`; the default collection otherwise.
        #[arg(long)]
        peripherals: Option<String>,
    },
    /// Truncate vertices of a realization.
    Truncate {
        /// Diagram file or JSON dump.
        path: PathBuf,
        /// Value of a symbolic label `m`.
        #[arg(long, value_parser = input::parse_order)]
        m: Option<Order>,
        /// Index of the witness.
        #[arg(long, default_value_t = 0)]
        witness: usize,
        /// Vertex as comma-separated facet names; repeat to truncate several.
        #[arg(long = "vertex", required = true)]
        vertices: Vec<String>,
    },
    /// Run the checks for a bundled table.
    Reproduce {
        /// One of cox_gp, ex1A, ex1B, ex1C, ex1D, ex2, mix, appendixB, circle.
        id: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Deform { .. } => "deform",
            Command::Limit { .. } => "limit",
            Command::Realize { .. } => "realize",
            Command::Orbit { .. } => "orbit",
            Command::Relhyp { .. } => "relhyp",
            Command::Truncate { .. } => "truncate",
            Command::Reproduce { .. } => "reproduce",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<RunReport> {
    let s = Settings { seed: cli.seed, tol: cli.tol, max_word_length: cli.max_word_length };
    match &cli.command {
        Command::Classify { path, m } => commands::classify(path, *m),
        Command::Deform { path, m, mu } => commands::deform(path, &input::parse_orders(m)?, *mu, s),
        Command::Limit { path, mu, m_max } => commands::limit(path, *mu, *m_max),
        Command::Realize { path, m, witness, mu } => commands::realize(path, *m, *witness, *mu),
        Command::Orbit { path, m, witness, samples } => {
            commands::orbit(path, *m, *witness, *samples, cli.out.as_deref(), s)
        }
        Command::Relhyp { path, m, peripherals } => commands::relhyp(path, *m, peripherals.as_deref()),
        Command::Truncate { path, m, witness, vertices } => commands::truncate(path, *m, *witness, vertices),
        Command::Reproduce { id } => reproduce::reproduce(id, s),
    }
}

/// Exit code for an error.
fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UnknownTable>().is_some() {
        return 4;
    }
    if e.downcast_ref::<UsageError>().is_some()
        || e.downcast_ref::<std::io::Error>().is_some()
        || e.downcast_ref::<serde_json::Error>().is_some()
    {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::UnsupportedFamily(_)) => 3,
        Some(
            Error::Syntax { .. }
            | Error::DuplicateEdge(..)
            | Error::SelfEdge(_)
            | Error::DuplicateNode(_)
            | Error::UnboundParameter(_)
            | Error::UnknownGenerator(_)
            | Error::InvalidInput(_),
        ) => 2,
        _ => 1,
    }
}

fn write_out(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = cli.command.name();
    let (value, code, lines) = match run(&cli) {
        Ok(rep) => {
            let code = u8::from(rep.failed() > 0);
            let mut lines = rep.summary.clone();
            for c in rep.checks.iter().filter(|c| !c.pass) {
                lines.push(format!("FAIL {}", c.name));
            }
            lines.push(format!("{}/{} checks passed", rep.passed(), rep.checks.len()));
            (rep.to_json(), code, lines)
        }
        Err(e) => {
            let code = exit_code(&e);
            let msg = format!("{e:#}");
            (json!({"command": name, "error": {"code": code, "message": msg}}), code, vec![format!("error: {msg}")])
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("reports serialize");
    println!("{text}");
    let mut code = code;
    if let (Some(path), false) = (&cli.out, matches!(cli.command, Command::Orbit { .. })) {
        if let Err(e) = write_out(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            code = code.max(2);
        }
    }
    if !cli.json {
        for l in lines {
            eprintln!("coxfill {name}: {l}");
        }
        eprintln!("coxfill {name}: {:.0} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    ExitCode::from(code)
}
