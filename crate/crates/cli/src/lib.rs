//! Verification reports over the `tropical-core` kernel.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use report::{Check, InputDigest, RunReport};

#[derive(Debug, Parser)]
#[command(name = "tropcalc", version, about = "Exact checks for tropical cycles, superforms and metric graphs")]
pub struct Cli {
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing to standard output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balancing at every codimension-one face of a weighted complex.
    Balance { complex: PathBuf },
    /// The Weil divisor of a PL function on a weighted complex.
    Divisor { complex: PathBuf, function: PathBuf },
    /// Push-forward of a weighted complex along a PL map.
    Pushforward { complex: PathBuf, map: PathBuf },
    /// Stokes' formula for a form of bidegree (d,d-1) or (d-1,d).
    Stokes { complex: PathBuf, form: PathBuf },
    /// Green's formula for symmetric forms.
    Green { complex: PathBuf, omega: PathBuf, eta: PathBuf },
    /// Pairing of a PL function with d'd'' of a form against its divisor.
    PoincareLelong { complex: PathBuf, function: PathBuf, eta: PathBuf },
    /// Metric graph checks.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// The theta graph with edge lengths a, b, c, end to end.
    ThetaDemo { a: String, b: String, c: String },
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Harmonicity of the function stored in the graph file.
    HarmonicCheck { graph: PathBuf },
    /// Solve the Dirichlet problem for the boundary values in the graph file
    /// or in `--values`.
    Dirichlet {
        graph: PathBuf,
        #[arg(long)]
        values: Option<PathBuf>,
    },
    /// Gram matrix of the canonical cycle basis.
    Jacobian { graph: PathBuf },
    /// Abel-Jacobi images of vertices or edge points such as `a@1/2`.
    AbelJacobi {
        graph: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Dolbeault dimension table of a closed connected graph.
    Dolbeault { graph: PathBuf },
}

/// Runs a parsed command line and returns the report.
pub fn run(cli: &Cli) -> RunReport {
    commands::dispatch(&cli.command)
}

/// Runs, prints and writes the report; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let report = run(cli);
    if !cli.quiet {
        if cli.json {
            println!("{}", report.to_json());
        } else {
            print!("{}", report.to_table());
        }
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("cannot write {}: {e}", path.display());
            return 2;
        }
    }
    report.exit_code
}
