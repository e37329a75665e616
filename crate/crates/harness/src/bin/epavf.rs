use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use epavf_harness::{
    convergence_study, efficiency_study, emit, energy_study, generate_reference, run_simulation, ConfigFile, Reference,
    ReferenceSource, ReferenceSpec, Report, ReportFormat, StudyKind,
};

/// Energy-preserving exponential integrators for Klein-Gordon-Schrodinger and
/// Klein-Gordon-Zakharov: references, convergence tables, energy drift and
/// efficiency data.
#[derive(Parser)]
#[command(name = "epavf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate EPAVF-C reference solutions (one file per eps).
    Reference(Common),
    /// Errors and observed rates over (eps, tau).
    Converge(Common),
    /// Relative energy error series.
    Energy(Common),
    /// Wall-clock time against final error (single-threaded timing).
    Efficiency(Common),
    /// Single runs with energy tracking and the final state.
    Simulate(Common),
}

#[derive(Args)]
struct Common {
    /// TOML file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// kgs1d, kgs2d, kgz1d or kgz2d.
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated schemes.
    #[arg(long, value_delimiter = ',')]
    scheme: Option<Vec<String>>,
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eps: Option<Vec<f64>>,
    /// Comma-separated list, decreasing.
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Interval per axis as `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    domain: Option<Vec<f64>>,
    /// `auto` or a reference file / directory.
    #[arg(long)]
    reference: Option<String>,
    /// Reference at h = 1/32, tau = 2.5e-6.
    #[arg(long)]
    paper_exact: bool,
    /// Output file (stdout when omitted; a directory for `reference`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    threads: Option<usize>,
    /// Start-up of CISP / DISP: epavf-c, epavf-c:<substeps> or taylor.
    #[arg(long)]
    bootstrap: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Energy sampling period in steps.
    #[arg(long)]
    energy_every: Option<usize>,
    /// Time limit in seconds for each reference run.
    #[arg(long)]
    budget: Option<f64>,
}

impl Common {
    fn overrides(&self) -> ConfigFile {
        ConfigFile {
            model: self.model.clone(),
            schemes: self.scheme.clone(),
            preset: self.preset.clone(),
            eps: self.eps.clone(),
            tau: self.tau.clone(),
            h: self.h,
            domain: self.domain.as_ref().map(|d| (d[0], d[1])),
            t_end: self.t_end,
            reference: self.reference.clone(),
            paper_exact: self.paper_exact.then_some(true),
            tol: self.tol,
            max_iter: self.max_iter,
            bootstrap: self.bootstrap.clone(),
            energy_every: self.energy_every,
            threads: self.threads,
            budget_seconds: self.budget,
        }
    }

    fn config(&self, study: StudyKind) -> anyhow::Result<epavf_harness::ExperimentConfig> {
        let base = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(base.merge(self.overrides()).resolve(study)?)
    }
}

fn write_references(args: &Common) -> anyhow::Result<()> {
    let cfg = args.config(StudyKind::Reference)?;
    let ReferenceSource::Generate { h, tau } = cfg.reference else {
        bail!("`reference` generates files; pass `--reference auto` or `--paper-exact`");
    };
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for &eps in &cfg.eps {
        let problem = cfg.problem(eps)?;
        let spec = ReferenceSpec {
            problem: problem.with_h(h.unwrap_or(problem.h)),
            tau,
            t_end: cfg.t_end,
            solver: cfg.solver.fixed_point.clone(),
        };
        let r = generate_reference(&spec, cfg.budget)?;
        let path = dir.join(Reference::file_name(&r.provenance));
        r.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (args, study) = match &cli.command {
        Command::Reference(a) => return write_references(a),
        Command::Converge(a) => (a, StudyKind::Converge),
        Command::Energy(a) => (a, StudyKind::Energy),
        Command::Efficiency(a) => (a, StudyKind::Efficiency),
        Command::Simulate(a) => (a, StudyKind::Simulate),
    };
    let format: ReportFormat = args.format.parse()?;
    let cfg = args.config(study)?;
    let report = match study {
        StudyKind::Converge => Report::Convergence(convergence_study(&cfg)?),
        StudyKind::Energy => Report::Energy(energy_study(&cfg)?),
        StudyKind::Efficiency => Report::Efficiency(efficiency_study(&cfg)?),
        _ => Report::Simulation(run_simulation(&cfg)?),
    };
    emit(&report, format, args.out.as_deref())?;
    Ok(())
}
