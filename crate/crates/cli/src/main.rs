use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use shellvi::solver::SolverMethod;
use shellvi::{validate_chart, ValidationOptions};
use shellvi_cli::output::{format_summary, write_csv, write_results};
use shellvi_cli::{build, postprocess, solve, sweep, Overrides, RunConfig, SweepParam};

#[derive(Parser)]
#[command(name = "shellvi", version, about = "Obstacle problems for elastic membrane and flexural shells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the solver tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Override the solver: psor | activeset.
    #[arg(long, global = true)]
    solver: Option<SolverMethod>,
    /// Leave the generation time out of written files.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Output directory (default: `output.dir` of the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble, solve and write the result files.
    Run { config: PathBuf },
    /// Repeat the run over several thickness or mesh values.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: SweepParam,
        #[arg(long, num_args = 1.., required = true)]
        values: Vec<f64>,
    },
    /// Check the chart's derivatives against finite differences.
    ValidateChart {
        config: PathBuf,
        #[arg(long, default_value_t = 10)]
        resolution: usize,
    },
    /// Write the assembled stiffness (coordinate format) and load/bounds vectors.
    DumpQp { config: PathBuf },
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| cfg.output_dir())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let overrides = Overrides { tol: cli.tol, method: cli.solver };
    match &cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(config)?;
            let problem = build(&cfg)?;
            let report = solve(&problem, &overrides)?;
            let bundle = postprocess(&problem, report)?;
            let dir = out_dir(cli, &cfg);
            write_results(&bundle, &problem.mesh, &problem.chart, &dir, !cli.no_timestamp, cfg.output.vtk)
                .context("output stage")?;
            print!("{}", format_summary(&bundle.summary));
            println!("results written to {}", dir.display());
            if bundle.converged() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("solver did not converge");
                Ok(ExitCode::from(2))
            }
        }
        Command::Sweep { config, param, values } => {
            let cfg = RunConfig::load(config)?;
            let rows = sweep(&cfg, *param, values, &overrides)?;
            let dir = out_dir(cli, &cfg);
            fs::create_dir_all(&dir)?;
            let path = dir.join("sweep.csv");
            write_csv(&rows, BufWriter::new(File::create(&path)?))?;
            write_csv(&rows, std::io::stdout())?;
            println!("table written to {}", path.display());
            let clean = rows.iter().all(|r| r.error.is_empty() && r.converged == Some(true));
            Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::ValidateChart { config, resolution } => {
            let cfg = RunConfig::load(config)?;
            let chart = cfg.chart()?;
            let report = validate_chart(&chart, &ValidationOptions { resolution: *resolution, ..Default::default() });
            println!("samples = {}", report.samples);
            println!("max_discrepancy = {:e}", report.max_discrepancy);
            if let Some(p) = report.worst_point {
                println!("worst_point = ({}, {})", p[0], p[1]);
            }
            println!("min_cross_norm = {:e}", report.min_cross_norm);
            println!("max_metric_defect = {:e}", report.max_metric_defect);
            println!("max_normal_defect = {:e}", report.max_normal_defect);
            println!("max_codazzi_defect = {:e}", report.max_codazzi_defect);
            for f in &report.failures {
                println!("failure = {f}");
            }
            println!("passed = {}", report.passed());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::DumpQp { config } => {
            let cfg = RunConfig::load(config)?;
            let problem = build(&cfg)?;
            let dir = out_dir(cli, &cfg);
            fs::create_dir_all(&dir)?;
            let (mp, vp) = (dir.join("matrix.coo"), dir.join("vectors.txt"));
            problem.qp().write_dump(BufWriter::new(File::create(&mp)?), BufWriter::new(File::create(&vp)?))?;
            println!("{} unknowns, {} stored entries", problem.qp().dim(), problem.qp().a.nnz());
            println!("written {} and {}", mp.display(), vp.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
