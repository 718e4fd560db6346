use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use subradiance::commands::{self, Ctx};
use subradiance::config::{parse_solver, RunConfig};

#[derive(Parser)]
#[command(name = "subradiance", version, about = "Subradiant dimers in waveguide-coupled emitter chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for start vectors and disorder sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Eigen-solver: dense, si-direct or si-matfree.
    #[arg(long, global = true, value_parser = ["dense", "si-direct", "si-matfree"])]
    solver: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Two-excitation spectrum with branch classification.
    Spectrum,
    /// Type-II dimer rates on an (N, kd) grid.
    PhaseDiagram,
    /// Rate-versus-N series and fits.
    Scaling,
    /// Localised states around a missing site.
    Defect,
    /// Positional-disorder ensembles.
    Disorder,
    /// Free-space dipole chains with a missing site.
    Freespace,
    /// Relative/defect model identities.
    MapCheck,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx {
        out: cli.out.clone().unwrap_or_default(),
        seed: cli.seed,
        solver: cli.solver.as_deref().map(parse_solver).transpose()?,
    };
    let summary = match cli.command {
        Command::Spectrum => serde_json::to_value(commands::spectrum::run(&cfg, &ctx)?)?,
        Command::PhaseDiagram => serde_json::to_value(commands::phase::run(&cfg, &ctx)?)?,
        Command::Scaling => serde_json::to_value(commands::scaling::run(&cfg, &ctx)?)?,
        Command::Defect => serde_json::to_value(commands::defect::run(&cfg, &ctx)?)?,
        Command::Disorder => serde_json::to_value(commands::disorder::run(&cfg, &ctx)?)?,
        Command::Freespace => serde_json::to_value(commands::freespace::run(&cfg, &ctx)?)?,
        Command::MapCheck => serde_json::to_value(commands::mapcheck::run(&cfg, &ctx)?)?,
    };
    let out = ctx.out_dir(&cfg)?;
    eprintln!("wrote results to {}", out.display());
    if let Some(obj) = summary.as_object() {
        let keys: Vec<&String> = obj.keys().collect();
        eprintln!("summary keys: {keys:?}");
    }
    Ok(())
}
