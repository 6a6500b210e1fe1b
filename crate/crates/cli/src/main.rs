use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crstokes_cli::commands::{self, CliError};
use crstokes_cli::report::Report;
use crstokes_cli::{Geometry, Mode};

#[derive(Parser, Debug)]
#[command(name = "crstokes", version, about = "Verification reports for Crouzeix-Raviart Stokes elements")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kernel and rank lemmas on random vertex patches.
    Lemmas {
        #[arg(long, default_value_t = 10)]
        patches: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Minimum triangle angle in degrees.
        #[arg(long, default_value_t = 20.0)]
        min_angle: f64,
        #[arg(long, default_value_t = 1e-10)]
        rtol: f64,
    },
    /// Coefficient matrices and kernels of one patch.
    Patch {
        /// Number of triangles (default 6; crisscross fixes 4).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Geometry::Equilateral)]
        geometry: Geometry,
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Right inverses of the piecewise divergence on random data.
    Rightinv {
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Inf-sup constants on a mesh and its uniform refinements.
    Infsup {
        /// Mesh JSON file.
        #[arg(long, conflicts_with = "seed_mesh", required_unless_present = "seed_mesh")]
        mesh: Option<PathBuf>,
        /// Built-in mesh: crisscross, lshape or disk.
        #[arg(long)]
        seed_mesh: Option<String>,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Use the Lagrange-plus-edge-bubble subspace (compared against the full space).
        #[arg(long)]
        minimal: bool,
        /// Also write the sweep table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Mesh statistics and the admissibility verdict.
    Mesh {
        #[arg(long, conflicts_with = "seed_mesh", required_unless_present = "seed_mesh")]
        mesh: Option<PathBuf>,
        #[arg(long)]
        seed_mesh: Option<String>,
        #[arg(long, default_value_t = 0)]
        refine: usize,
        #[arg(long, default_value_t = 20.0)]
        min_angle: f64,
        #[arg(long, default_value_t = 1)]
        max_m: usize,
        /// Write the (refined) mesh as JSON.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

fn run(cli: Cli, argv: Vec<String>) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = match cli.command {
        Command::Lemmas { patches, seed, p, min_angle, rtol } => commands::lemmas(patches, seed, p, min_angle, rtol)?,
        Command::Patch { m, geometry, p, seed } => commands::patch(m, geometry, p, seed)?,
        Command::Rightinv { p, mode, trials, seed } => commands::rightinv(p, mode, trials, seed)?,
        Command::Infsup { mesh, seed_mesh, p, levels, minimal, csv } => {
            let tri = commands::load_mesh(mesh.as_deref(), seed_mesh.as_deref())?;
            commands::infsup(&tri, p, levels, minimal, csv.as_deref())?
        }
        Command::Mesh { mesh, seed_mesh, refine, min_angle, max_m, write } => {
            let tri = commands::load_mesh(mesh.as_deref(), seed_mesh.as_deref())?;
            commands::mesh(tri, refine, min_angle, max_m, write.as_deref())?
        }
    };
    report.command = argv;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli, argv) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json + "\n") {
                        eprintln!("error: cannot write report to '{}': {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                // a closed pipe (e.g. `| head`) is not an error of the run
                None => {
                    let _ = writeln!(std::io::stdout().lock(), "{json}");
                }
            }
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: observed {} (expected {}, tolerance {})", c.name, c.observed, c.expected, c.tolerance);
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
