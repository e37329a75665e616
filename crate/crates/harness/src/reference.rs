//! EPAVF-C reference solutions stored as JSON with a provenance header.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use epavf_core::{FixedPointConfig, StepperConfig};
use epavf_models::{
    run, step_count, Integrator, KgsModel, KgsParams, KgzModel, KgzParams, ModelKind, Preset, Scheme,
};
use serde::{Deserialize, Serialize};

use crate::error::{io_at, HarnessError, Result};
use crate::problem::{initial_snapshot, ModelSpec, Problem, Snapshot};

pub const REFERENCE_SCHEMA_VERSION: u32 = 1;

/// Desk-scale reference step.
pub const DESK_TAU_REF: f64 = 1e-5;
/// Reference mesh and step of the printed tables.
pub const PAPER_H_REF: f64 = 1.0 / 32.0;
pub const PAPER_TAU_REF: f64 = 2.5e-6;

/// Everything needed to regenerate a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub model: ModelSpec,
    pub preset: String,
    pub scheme: String,
    pub eps: f64,
    pub h: f64,
    pub tau: f64,
    pub t_end: f64,
    pub domain: (f64, f64),
    pub tol: f64,
    pub max_iter: usize,
    pub code_version: String,
}

/// A reference run request.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpec {
    pub problem: Problem,
    pub tau: f64,
    pub t_end: f64,
    pub solver: FixedPointConfig,
}

impl ReferenceSpec {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            schema_version: REFERENCE_SCHEMA_VERSION,
            model: self.problem.model,
            preset: self.problem.preset.name().to_string(),
            scheme: Scheme::EpavfC.name().to_string(),
            eps: self.problem.eps,
            h: self.problem.h,
            tau: self.tau,
            t_end: self.t_end,
            domain: self.problem.domain(),
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn from_provenance(p: &Provenance) -> Result<Self> {
        let preset = Preset::from_str(&p.preset)?;
        Ok(Self {
            problem: Problem::new(p.model, preset, p.eps, p.h, Some(p.domain))?,
            tau: p.tau,
            t_end: p.t_end,
            solver: FixedPointConfig {
                tol: p.tol,
                max_iter: p.max_iter,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub provenance: Provenance,
    pub snapshot: Snapshot,
}

/// Runs EPAVF-C in chunks so that `budget` can abort a long run.
fn chunked<I: Integrator>(
    solver: &mut I,
    mut state: I::State,
    total: usize,
    budget: Option<Duration>,
) -> Result<I::State> {
    let start = Instant::now();
    let chunk = 1000;
    let mut done = 0;
    while done < total {
        if budget.is_some_and(|b| start.elapsed() >= b) {
            return Err(HarnessError::Budget { done, total });
        }
        let n = chunk.min(total - done);
        let r = run(solver, state, n, 0)?;
        if let Some(bad) = r.instability {
            return Err(HarnessError::Config(format!(
                "reference run unstable: {bad} (after {} steps)",
                done + bad.step()
            )));
        }
        state = r.state;
        done += n;
    }
    Ok(state)
}

/// EPAVF-C run at the reference resolution.
pub fn generate_reference(spec: &ReferenceSpec, budget: Option<Duration>) -> Result<Reference> {
    let provenance = spec.provenance();
    if spec.t_end == 0.0 {
        return Ok(Reference {
            provenance,
            snapshot: initial_snapshot(&spec.problem)?,
        });
    }
    let steps = step_count(spec.t_end, spec.tau)?;
    let cfg = StepperConfig {
        fixed_point: spec.solver.clone(),
        ..StepperConfig::default()
    };
    let grid = spec.problem.grid()?;
    let p = &spec.problem;
    let snapshot = match p.model.kind() {
        ModelKind::Kgs => {
            let m = KgsModel::new(grid, KgsParams::new(1.0, p.eps)?);
            let s = p.preset.kgs_state(&m)?;
            let mut solver = m.solver(Scheme::EpavfC, spec.tau, cfg)?;
            let out = chunked(&mut solver, s, steps, budget)?;
            Snapshot::from_fields(out.fields())
        }
        ModelKind::Kgz => {
            let m = KgzModel::new(grid, KgzParams::new(p.eps)?)?;
            let s = p.preset.kgz_state(&m)?;
            let mut solver = m.solver(Scheme::EpavfC, spec.tau, cfg)?;
            let out = chunked(&mut solver, s, steps, budget)?;
            Snapshot::from_fields(out.fields())
        }
    };
    Ok(Reference { provenance, snapshot })
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

impl Reference {
    /// Canonical file name derived from the provenance.
    pub fn file_name(p: &Provenance) -> String {
        format!(
            "ref-{}-{}-eps{:e}-h{:e}-tau{:e}-t{:e}.json",
            p.model, p.preset, p.eps, p.h, p.tau, p.t_end
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).map_err(io_at(path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_at(path))?;
        let r: Reference = serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if r.provenance.schema_version != REFERENCE_SCHEMA_VERSION {
            return Err(HarnessError::ReferenceMismatch(format!(
                "{}: schema version {} (expected {REFERENCE_SCHEMA_VERSION})",
                path.display(),
                r.provenance.schema_version
            )));
        }
        Ok(r)
    }

    /// Whether this reference describes `problem` at time `t_end` (any mesh).
    pub fn matches(&self, problem: &Problem, t_end: f64) -> bool {
        let p = &self.provenance;
        let (a, b) = problem.domain();
        p.model == problem.model
            && p.preset == problem.preset.name()
            && same(p.eps, problem.eps)
            && same(p.t_end, t_end)
            && same(p.domain.0, a)
            && same(p.domain.1, b)
    }

    /// Reference values at the grid points of `problem`, whose mesh must be
    /// an integer multiple of the reference mesh.
    pub fn restrict_to(&self, problem: &Problem) -> Result<Snapshot> {
        let spec = ReferenceSpec::from_provenance(&self.provenance)?;
        let ref_grid = spec.problem.grid()?;
        let grid = problem.grid()?;
        let shape = ref_grid.shape();
        let ref_pts = ref_grid.points();
        let (x0, y0) = ref_pts[0];
        let href = self.provenance.h;
        let locate = |c: f64, c0: f64, n: usize| -> Option<usize> {
            let k = ((c - c0) / href).round();
            (k >= 0.0 && (k as usize) < n && (c0 + k * href - c).abs() <= 1e-9 * href.max(c.abs())).then_some(k as usize)
        };
        let mut idx = Vec::with_capacity(grid.points().len());
        for (x, y) in grid.points() {
            let ix = locate(x, x0, shape[0]);
            let iy = if shape.len() == 2 { locate(y, y0, shape[1]) } else { Some(0) };
            match (ix, iy) {
                (Some(i), Some(j)) => idx.push(j * shape[0] + i),
                _ => {
                    return Err(HarnessError::ReferenceMismatch(format!(
                        "point ({x}, {y}) of the h = {} grid is not on the reference grid (h = {href})",
                        problem.h
                    )))
                }
            }
        }
        Ok(self.snapshot.select(&idx))
    }
}

/// Where convergence studies get their references.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSource {
    /// Generate with EPAVF-C at mesh `h` (the run mesh when `None`) and step `tau`.
    Generate { h: Option<f64>, tau: f64 },
    /// A reference file, or a directory of files named by [`Reference::file_name`].
    Path(PathBuf),
}

impl ReferenceSource {
    pub fn desk() -> Self {
        ReferenceSource::Generate {
            h: None,
            tau: DESK_TAU_REF,
        }
    }

    pub fn paper_exact() -> Self {
        ReferenceSource::Generate {
            h: Some(PAPER_H_REF),
            tau: PAPER_TAU_REF,
        }
    }

    /// Reference for `problem` at `t_end`.
    pub fn resolve(
        &self,
        problem: &Problem,
        t_end: f64,
        solver: &FixedPointConfig,
        budget: Option<Duration>,
    ) -> Result<Reference> {
        match self {
            ReferenceSource::Generate { h, tau } => {
                let spec = ReferenceSpec {
                    problem: problem.with_h(h.unwrap_or(problem.h)),
                    tau: *tau,
                    t_end,
                    solver: solver.clone(),
                };
                generate_reference(&spec, budget)
            }
            ReferenceSource::Path(path) => {
                let candidates: Vec<PathBuf> = if path.is_dir() {
                    let mut v: Vec<PathBuf> = fs::read_dir(path)
                        .map_err(io_at(path))?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|x| x == "json"))
                        .collect();
                    v.sort();
                    v
                } else {
                    vec![path.clone()]
                };
                for c in &candidates {
                    let r = Reference::load(c)?;
                    if r.matches(problem, t_end) {
                        return Ok(r);
                    }
                }
                Err(HarnessError::MissingReference(format!(
                    "{} eps = {} t_end = {} in {}",
                    problem.model,
                    problem.eps,
                    t_end,
                    path.display()
                )))
            }
        }
    }
}

impl FromStr for ReferenceSource {
    type Err = HarnessError;

    /// `auto` or a path.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "auto" => ReferenceSource::desk(),
            "" => return Err(HarnessError::Config("empty reference path".into())),
            p => ReferenceSource::Path(PathBuf::from(p)),
        })
    }
}
