//! Convergence, energy and efficiency sweeps.

use epavf_models::{relative_energy_errors, Scheme};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::problem::{field_errors, simulate, ModelSpec, Problem, RunSettings, Simulation, Snapshot};

pub(crate) mod scheme_name {
    use epavf_models::Scheme;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Scheme, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(s.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scheme, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Error of one field; `None` when the run was unstable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub error: Option<f64>,
}

/// Error of one field with the observed rate against the previous row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRate {
    pub field: String,
    pub error: Option<f64>,
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub model: ModelSpec,
    #[serde(with = "scheme_name")]
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    pub fields: Vec<FieldRate>,
    pub stable: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySeries {
    pub model: ModelSpec,
    #[serde(with = "scheme_name")]
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    pub times: Vec<f64>,
    /// `|H_n - H_0| / |H_0|`.
    pub rh: Vec<f64>,
    pub stable: bool,
}

impl EnergySeries {
    pub fn max_rh(&self) -> f64 {
        self.rh.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRecord {
    pub model: ModelSpec,
    #[serde(with = "scheme_name")]
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    /// Seconds.
    pub wall_clock: f64,
    pub errors: Vec<FieldError>,
    pub iterations: usize,
    pub stable: bool,
}

/// Outcome of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub model: ModelSpec,
    #[serde(with = "scheme_name")]
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    pub t_end: f64,
    pub steps: usize,
    pub iterations: usize,
    pub stable: bool,
    pub instability: Option<String>,
    pub wall_clock: f64,
    pub energy: EnergySeries,
    pub snapshot: Snapshot,
}

/// `log(e1 / e2) / log(tau1 / tau2)`.
pub fn observed_rate(e1: f64, tau1: f64, e2: f64, tau2: f64) -> f64 {
    (e1 / e2).ln() / (tau1 / tau2).ln()
}

/// Rates between adjacent rows of the same model, scheme and `eps` that are
/// both stable; every other rate is cleared.
pub fn fill_rates(rows: &mut [ConvergenceRow]) {
    for r in rows.iter_mut() {
        for f in &mut r.fields {
            f.rate = None;
        }
    }
    for k in 1..rows.len() {
        let (head, tail) = rows.split_at_mut(k);
        let (prev, row) = (&head[k - 1], &mut tail[0]);
        if prev.model != row.model || prev.scheme != row.scheme || prev.eps != row.eps {
            continue;
        }
        if !(prev.stable && row.stable) {
            continue;
        }
        for f in &mut row.fields {
            let before = prev.fields.iter().find(|p| p.field == f.field).and_then(|p| p.error);
            if let (Some(e1), Some(e2)) = (before, f.error) {
                f.rate = Some(observed_rate(e1, prev.tau, e2, row.tau));
            }
        }
    }
}

fn settings(cfg: &ExperimentConfig, scheme: Scheme, tau: f64, energy_every: usize) -> RunSettings {
    RunSettings {
        scheme,
        tau,
        t_end: cfg.t_end,
        energy_every,
        solver: cfg.solver.clone(),
        bootstrap: cfg.bootstrap,
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

/// The problem and the reference restricted to its grid, for every `eps`.
fn references(cfg: &ExperimentConfig) -> Result<Vec<(Problem, Snapshot)>> {
    cfg.eps
        .par_iter()
        .map(|&eps| {
            let problem = cfg.problem(eps)?;
            let reference = cfg
                .reference
                .resolve(&problem, cfg.t_end, &cfg.solver.fixed_point, cfg.budget)?;
            Ok((problem, reference.restrict_to(&problem)?))
        })
        .collect()
}

fn errors_of(problem: &Problem, sim: &Simulation, reference: &Snapshot) -> Result<Vec<FieldError>> {
    if sim.is_stable() {
        Ok(field_errors(problem.model, &sim.snapshot, reference)?
            .into_iter()
            .map(|(field, e)| FieldError { field, error: Some(e) })
            .collect())
    } else {
        Ok(problem
            .model
            .error_fields()
            .iter()
            .map(|f| FieldError {
                field: f.to_string(),
                error: None,
            })
            .collect())
    }
}

fn cells(cfg: &ExperimentConfig, n_problems: usize) -> Vec<(usize, Scheme, f64)> {
    let mut out = Vec::new();
    for k in 0..n_problems {
        for &scheme in &cfg.schemes {
            for &tau in &cfg.tau {
                out.push((k, scheme, tau));
            }
        }
    }
    out
}

/// Runs every `(eps, scheme, tau)` cell to `t_end` and measures max-norm
/// errors against the `eps`-matched reference. Rows are ordered by `eps`,
/// scheme, then decreasing `tau`.
pub fn convergence_study(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    pool(cfg.threads)?.install(|| {
        let refs = references(cfg)?;
        let mut rows = cells(cfg, refs.len())
            .into_par_iter()
            .map(|(k, scheme, tau)| {
                let (problem, reference) = &refs[k];
                let sim = simulate(problem, &settings(cfg, scheme, tau, 0))?;
                Ok(ConvergenceRow {
                    model: cfg.model,
                    scheme,
                    eps: problem.eps,
                    tau,
                    fields: errors_of(problem, &sim, reference)?
                        .into_iter()
                        .map(|f| FieldRate {
                            field: f.field,
                            error: f.error,
                            rate: None,
                        })
                        .collect(),
                    stable: sim.is_stable(),
                    iterations: sim.iterations,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        fill_rates(&mut rows);
        Ok(rows)
    })
}

fn series(problem: &Problem, scheme: Scheme, tau: f64, sim: &Simulation) -> EnergySeries {
    let (times, rh) = relative_energy_errors(&sim.energies).into_iter().unzip();
    EnergySeries {
        model: problem.model,
        scheme,
        eps: problem.eps,
        tau,
        times,
        rh,
        stable: sim.is_stable(),
    }
}

/// Relative energy error series for every `(eps, scheme, tau)` cell.
pub fn energy_study(cfg: &ExperimentConfig) -> Result<Vec<EnergySeries>> {
    cfg.validate()?;
    let every = cfg.energy_every.max(1);
    pool(cfg.threads)?.install(|| {
        let problems = cfg.eps.iter().map(|&e| cfg.problem(e)).collect::<Result<Vec<_>>>()?;
        cells(cfg, problems.len())
            .into_par_iter()
            .map(|(k, scheme, tau)| {
                let sim = simulate(&problems[k], &settings(cfg, scheme, tau, every))?;
                Ok(series(&problems[k], scheme, tau, &sim))
            })
            .collect()
    })
}

/// Wall-clock time and final errors per `(eps, scheme, tau)`. References are
/// built in parallel; the timed runs execute one after another on the
/// calling thread.
pub fn efficiency_study(cfg: &ExperimentConfig) -> Result<Vec<EfficiencyRecord>> {
    cfg.validate()?;
    let refs = pool(cfg.threads)?.install(|| references(cfg))?;
    cells(cfg, refs.len())
        .into_iter()
        .map(|(k, scheme, tau)| {
            let (problem, reference) = &refs[k];
            let sim = simulate(problem, &settings(cfg, scheme, tau, 0))?;
            Ok(EfficiencyRecord {
                model: cfg.model,
                scheme,
                eps: problem.eps,
                tau,
                wall_clock: sim.wall.as_secs_f64(),
                errors: errors_of(problem, &sim, reference)?,
                iterations: sim.iterations,
                stable: sim.is_stable(),
            })
        })
        .collect()
}

/// One run per `(eps, scheme, tau)` with energy tracking and the final state.
pub fn run_simulation(cfg: &ExperimentConfig) -> Result<Vec<SimulationRecord>> {
    cfg.validate()?;
    pool(cfg.threads)?.install(|| {
        let problems = cfg.eps.iter().map(|&e| cfg.problem(e)).collect::<Result<Vec<_>>>()?;
        cells(cfg, problems.len())
            .into_par_iter()
            .map(|(k, scheme, tau)| {
                let problem = &problems[k];
                let sim = simulate(problem, &settings(cfg, scheme, tau, cfg.energy_every))?;
                Ok(SimulationRecord {
                    model: cfg.model,
                    scheme,
                    eps: problem.eps,
                    tau,
                    t_end: cfg.t_end,
                    steps: sim.steps,
                    iterations: sim.iterations,
                    stable: sim.is_stable(),
                    instability: sim.instability.as_ref().map(|i| i.to_string()),
                    wall_clock: sim.wall.as_secs_f64(),
                    energy: series(problem, scheme, tau, &sim),
                    snapshot: sim.snapshot,
                })
            })
            .collect()
    })
}
