use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entropy_dg::config::RunConfig;
use entropy_dg::driver::{convergence_study, run_simulation};
use entropy_dg::mesh::{validate_mesh, Mesh};
use entropy_dg::output::{eoc_table, write_eoc};
use entropy_dg::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Entropy-rate-corrected DG solver for the 2D Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the simulation described by a TOML config.
    Run { config: PathBuf },
    /// Run the config on each mesh and tabulate density errors and orders.
    Convergence {
        config: PathBuf,
        #[arg(required = true, num_args = 1..)]
        meshes: Vec<PathBuf>,
    },
    /// Print quality and marker statistics of a Triangle mesh (basename).
    InspectMesh { mesh: PathBuf },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => {
            let config = RunConfig::read(&config)?;
            let out = run_simulation(&config)?;
            let d = &out.diagnostics;
            println!("case        {}", config.case);
            println!("triangles   {}", out.solver.mesh.n_cells());
            println!("degree      {}", config.degree);
            println!("steps       {}", d.steps());
            println!("t           {:.6}", out.field.t);
            println!("min rho     {:.6e}", d.min_rho());
            println!("min p       {:.6e}", d.min_p());
            println!("max budget excess       {:.3e}", d.max_budget_excess());
            println!("max entropy step excess {:.3e}", d.max_entropy_step_excess());
            println!("max conservation resid  {:.3e}", d.max_conservation_residual());
            if let Some(e) = d.l2_error {
                println!("L2 error    {e:.6e}");
            }
            Ok(())
        }
        Command::Convergence { config, meshes } => {
            let config = RunConfig::read(&config)?;
            if meshes.len() < 2 {
                eprintln!("note: a single mesh gives an error but no order");
            }
            let rows = convergence_study(&config, &meshes)?;
            if let Some(dir) = &config.output_dir {
                write_eoc(dir, &rows)?;
            }
            print!("{}", eoc_table(&rows));
            Ok(())
        }
        Command::InspectMesh { mesh } => {
            let report = validate_mesh(&Mesh::read(&mesh)?);
            println!("{report}");
            if report.is_valid() {
                Ok(())
            } else {
                Err(Error::InvalidMesh(report.problems.join("; ")))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error kind={} message={:?}", e.kind(), e.to_string());
            ExitCode::FAILURE
        }
    }
}
