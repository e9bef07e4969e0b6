use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kleinvortex_cli::commands::{field, levels, scan, selftest, simulate};
use kleinvortex_cli::output::ensure_dir;
use kleinvortex_cli::{CliError, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "kleinvortex", version, about = "Point vortices on the Klein bottle")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of bottle copies in the field grid.
    #[arg(long, global = true, value_parser = ["1", "4"])]
    copies: Option<String>,

    /// Grid nodes per axis.
    #[arg(long, global = true)]
    resolution: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured vortices and write the trajectory.
    Simulate {
        /// Continue from the last row of an earlier trajectory CSV.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Sample the induced velocity field on a grid.
    Field,
    /// Reduced two-vortex energy grid, its singular and critical points, and the Robin profile.
    Levels,
    /// Scan the probe velocity Y1 over the horizontal separation.
    ReduceScan,
    /// Run the invariant suite and write a pass/fail report.
    Selftest,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(copies) = &cli.copies {
        cfg.field.copies = copies.parse().expect("validated by clap");
    }
    if let Some(n) = cli.resolution {
        cfg.field.resolution = n;
        cfg.levels.resolution = n;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load(&cli)?;
    let needs_vortices = matches!(cli.command, Command::Simulate { resume: None } | Command::Field);
    if needs_vortices && cli.config.is_none() {
        return Err(CliError::Usage("this command needs --config with vortices".into()));
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&out)?;
    match &cli.command {
        Command::Simulate { resume } => {
            let s = simulate::run(&cfg, &out, resume.as_deref())?;
            println!(
                "t = {} in {} steps; max energy drift {:e}, max momentum drift {:e}",
                s.t_end, s.accepted_steps, s.max_relative_energy_drift, s.max_momentum_drift
            );
        }
        Command::Field => {
            let m = field::run(&cfg, &out)?;
            println!("{}² nodes, {} singular", m.resolution, m.singular_points);
        }
        Command::Levels => {
            let r = levels::run(&cfg, &out)?;
            println!("{} sinks, {} critical points", r.divergence_sinks.len(), r.critical_points.len());
        }
        Command::ReduceScan => {
            let r = scan::run(&cfg, &out)?;
            for p in &r.pairs {
                println!(
                    "y1 = {}, y2 = {}: {} sign changes, bands {:?}",
                    p.y1,
                    p.y2,
                    p.sign_changes.len(),
                    p.extremum_bands
                );
            }
        }
        Command::Selftest => {
            let r = selftest::run(cfg.seed, &out)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            if !r.passed {
                let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                return Err(CliError::Failed(format!("failed checks: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
