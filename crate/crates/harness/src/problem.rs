//! Model construction and single runs behind one interface for both models.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use epavf_core::StepperConfig;
use epavf_models::{
    run, step_count, Bootstrap, Instability, Integrator, KgsModel, KgsParams, KgzModel, KgzParams, ModelKind,
    Preset, RunReport, Scheme,
};
use epavf_spectral::SpectralGrid;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Model and dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModelSpec {
    Kgs1d,
    Kgs2d,
    Kgz1d,
    Kgz2d,
}

impl ModelSpec {
    pub const ALL: [ModelSpec; 4] = [ModelSpec::Kgs1d, ModelSpec::Kgs2d, ModelSpec::Kgz1d, ModelSpec::Kgz2d];

    pub fn name(self) -> &'static str {
        match self {
            ModelSpec::Kgs1d => "kgs1d",
            ModelSpec::Kgs2d => "kgs2d",
            ModelSpec::Kgz1d => "kgz1d",
            ModelSpec::Kgz2d => "kgz2d",
        }
    }

    pub fn kind(self) -> ModelKind {
        match self {
            ModelSpec::Kgs1d | ModelSpec::Kgs2d => ModelKind::Kgs,
            _ => ModelKind::Kgz,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            ModelSpec::Kgs1d | ModelSpec::Kgz1d => 1,
            _ => 2,
        }
    }

    pub fn default_preset(self) -> Preset {
        match self {
            ModelSpec::Kgs1d => Preset::KgsExample1,
            ModelSpec::Kgs2d => Preset::KgsExample2,
            ModelSpec::Kgz1d => Preset::KgzExample3,
            ModelSpec::Kgz2d => Preset::KgzExample4,
        }
    }

    /// Fields entering the error tables.
    pub fn error_fields(self) -> [&'static str; 2] {
        match self.kind() {
            ModelKind::Kgs => ["psi", "u"],
            ModelKind::Kgz => ["E", "M"],
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        ModelSpec::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| HarnessError::Config(format!("unknown model '{s}' (kgs1d, kgs2d, kgz1d, kgz2d)")))
    }
}

impl TryFrom<String> for ModelSpec {
    type Error = HarnessError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModelSpec> for String {
    fn from(m: ModelSpec) -> String {
        m.name().to_string()
    }
}

/// One discretized initial-value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub model: ModelSpec,
    pub preset: Preset,
    pub eps: f64,
    pub h: f64,
    /// Overrides the preset's interval (per axis).
    pub domain: Option<(f64, f64)>,
}

impl Problem {
    pub fn new(model: ModelSpec, preset: Preset, eps: f64, h: f64, domain: Option<(f64, f64)>) -> Result<Self> {
        if preset.model() != model.kind() || preset.dimension() != model.dimension() {
            return Err(HarnessError::Config(format!("preset {preset} does not belong to model {model}")));
        }
        if !(eps > 0.0) || !(h > 0.0) {
            return Err(HarnessError::Config(format!("need eps > 0 and h > 0 (eps = {eps}, h = {h})")));
        }
        if let Some((a, b)) = domain {
            if !(b > a) {
                return Err(HarnessError::Config(format!("empty domain [{a}, {b}]")));
            }
        }
        Ok(Self {
            model,
            preset,
            eps,
            h,
            domain,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain.unwrap_or(self.preset.domain())
    }

    pub fn grid(&self) -> Result<SpectralGrid> {
        Ok(self.preset.grid(self.h, self.domain)?)
    }

    pub fn with_h(&self, h: f64) -> Self {
        Self { h, ..*self }
    }
}

/// Named raw fields of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub fields: Vec<NamedField>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedField {
    pub name: String,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub(crate) fn from_fields(fields: [(&'static str, &[f64]); 4]) -> Self {
        Self {
            fields: fields
                .iter()
                .map(|(n, v)| NamedField {
                    name: n.to_string(),
                    values: v.to_vec(),
                })
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.fields.iter().find(|f| f.name == name).map(|f| f.values.as_slice())
    }

    fn field(&self, name: &str) -> Result<&[f64]> {
        self.get(name)
            .ok_or_else(|| HarnessError::ReferenceMismatch(format!("snapshot has no field {name}")))
    }

    /// Same fields restricted to the given point indices.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            fields: self
                .fields
                .iter()
                .map(|f| NamedField {
                    name: f.name.clone(),
                    values: idx.iter().map(|&i| f.values[i]).collect(),
                })
                .collect(),
        }
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Max-norm errors: `psi` takes the max over real and imaginary parts.
pub fn field_errors(model: ModelSpec, run: &Snapshot, reference: &Snapshot) -> Result<Vec<(String, f64)>> {
    let d = |name: &str| -> Result<f64> {
        let (a, b) = (run.field(name)?, reference.field(name)?);
        if a.len() != b.len() {
            return Err(HarnessError::ReferenceMismatch(format!(
                "field {name}: {} values vs {} in the reference",
                a.len(),
                b.len()
            )));
        }
        Ok(max_diff(a, b))
    };
    Ok(match model.kind() {
        ModelKind::Kgs => vec![("psi".into(), d("q")?.max(d("p")?)), ("u".into(), d("u")?)],
        ModelKind::Kgz => vec![("E".into(), d("E")?), ("M".into(), d("M")?)],
    })
}

/// Scheme, step and solver settings of one run.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub scheme: Scheme,
    pub tau: f64,
    pub t_end: f64,
    /// Energy sampling period in steps (0 disables sampling).
    pub energy_every: usize,
    pub solver: StepperConfig,
    pub bootstrap: Bootstrap,
}

/// Outcome of [`simulate`].
#[derive(Debug, Clone)]
pub struct Simulation {
    pub snapshot: Snapshot,
    pub steps: usize,
    pub iterations: usize,
    pub energies: Vec<(f64, f64)>,
    pub instability: Option<Instability>,
    /// Stepping time; excludes building the propagator tables.
    pub wall: Duration,
}

impl Simulation {
    pub fn is_stable(&self) -> bool {
        self.instability.is_none()
    }
}

fn timed<I: Integrator>(
    solver: &mut I,
    initial: I::State,
    steps: usize,
    energy_every: usize,
) -> Result<(RunReport<I::State>, Duration)> {
    let start = Instant::now();
    let report = run(solver, initial, steps, energy_every)?;
    Ok((report, start.elapsed()))
}

/// Initial state of the problem as a snapshot.
pub fn initial_snapshot(problem: &Problem) -> Result<Snapshot> {
    let grid = problem.grid()?;
    Ok(match problem.model.kind() {
        ModelKind::Kgs => {
            let m = KgsModel::new(grid, KgsParams::new(1.0, problem.eps)?);
            Snapshot::from_fields(problem.preset.kgs_state(&m)?.fields())
        }
        ModelKind::Kgz => {
            let m = KgzModel::new(grid, KgzParams::new(problem.eps)?)?;
            Snapshot::from_fields(problem.preset.kgz_state(&m)?.fields())
        }
    })
}

/// Runs `settings.scheme` from the preset's initial data to `t_end`.
pub fn simulate(problem: &Problem, settings: &RunSettings) -> Result<Simulation> {
    if !problem.model.kind().supports(settings.scheme) {
        return Err(HarnessError::Config(format!(
            "scheme {} is not available for {}",
            settings.scheme, problem.model
        )));
    }
    let steps = step_count(settings.t_end, settings.tau)?;
    let grid = problem.grid()?;
    let (snapshot, steps, iterations, energies, instability, wall) = match problem.model.kind() {
        ModelKind::Kgs => {
            let m = KgsModel::new(grid, KgsParams::new(1.0, problem.eps)?);
            let s = problem.preset.kgs_state(&m)?;
            let mut solver = m.solver(settings.scheme, settings.tau, settings.solver.clone())?;
            let (r, wall) = timed(&mut solver, s, steps, settings.energy_every)?;
            (Snapshot::from_fields(r.state.fields()), r.steps, r.iterations, r.energies, r.instability, wall)
        }
        ModelKind::Kgz => {
            let m = KgzModel::new(grid, KgzParams::new(problem.eps)?)?;
            let s = problem.preset.kgz_state(&m)?;
            let mut solver =
                m.solver_with_bootstrap(settings.scheme, settings.tau, settings.solver.clone(), settings.bootstrap)?;
            let (r, wall) = timed(&mut solver, s, steps, settings.energy_every)?;
            (Snapshot::from_fields(r.state.fields()), r.steps, r.iterations, r.energies, r.instability, wall)
        }
    };
    Ok(Simulation {
        snapshot,
        steps,
        iterations,
        energies,
        instability,
        wall,
    })
}
