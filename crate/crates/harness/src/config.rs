//! Experiment configuration: per-study defaults, a TOML file, and overrides.

use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use epavf_core::{FixedPointConfig, StepperConfig};
use epavf_models::{Bootstrap, ModelKind, Preset, Scheme};
use serde::{Deserialize, Serialize};

use crate::error::{io_at, HarnessError, Result};
use crate::problem::{ModelSpec, Problem};
use crate::reference::ReferenceSource;

/// The five operations of the harness; each has its own defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Reference,
    Converge,
    Energy,
    Efficiency,
    Simulate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub schemes: Vec<Scheme>,
    pub preset: Preset,
    pub eps: Vec<f64>,
    /// Strictly decreasing.
    pub tau: Vec<f64>,
    pub h: f64,
    pub domain: Option<(f64, f64)>,
    pub t_end: f64,
    pub reference: ReferenceSource,
    pub solver: StepperConfig,
    /// Start-up step of CISP / DISP.
    pub bootstrap: Bootstrap,
    pub energy_every: usize,
    /// Worker threads for sweeps (`None`: all cores). Timing runs ignore it.
    pub threads: Option<usize>,
    /// Wall-clock limit for each reference run.
    pub budget: Option<Duration>,
}

fn halvings(tau0: f64, n: i32) -> Vec<f64> {
    (0..n).map(|k| tau0 * 0.5f64.powi(k)).collect()
}

impl ExperimentConfig {
    pub fn defaults(study: StudyKind, model: ModelSpec) -> Self {
        let preset = model.default_preset();
        let mut cfg = Self {
            model,
            schemes: vec![Scheme::EpavfC],
            preset,
            eps: vec![1.0],
            tau: vec![0.2, 0.05, 0.0125],
            h: preset.default_h(),
            domain: None,
            t_end: 1.0,
            reference: ReferenceSource::desk(),
            solver: StepperConfig::default(),
            bootstrap: Bootstrap::default(),
            energy_every: 0,
            threads: None,
            budget: None,
        };
        match study {
            StudyKind::Reference | StudyKind::Converge => {}
            StudyKind::Energy => {
                cfg.tau = vec![0.1];
                cfg.h = 0.5;
                cfg.t_end = 100.0;
                cfg.eps = vec![1.0, 0.5, 0.25, 0.125];
                cfg.energy_every = 1;
            }
            StudyKind::Efficiency => match model.kind() {
                ModelKind::Kgs => {
                    cfg.schemes = vec![Scheme::EpavfC, Scheme::Eavf, Scheme::PavfC, Scheme::Avf];
                    cfg.tau = halvings(0.025, 6);
                }
                ModelKind::Kgz => {
                    cfg.schemes = vec![Scheme::EpavfC, Scheme::Cisp, Scheme::Disp];
                    cfg.tau = halvings(0.05, 8);
                }
            },
            StudyKind::Simulate => {
                cfg.tau = vec![preset.default_tau()];
                cfg.t_end = preset.default_t_end();
                cfg.energy_every = 1;
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.schemes.is_empty() || self.eps.is_empty() || self.tau.is_empty() {
            return bad("scheme, eps and tau lists must be non-empty".into());
        }
        if let Some(s) = self.schemes.iter().find(|s| !self.model.kind().supports(**s)) {
            return bad(format!("scheme {s} is not available for {}", self.model));
        }
        if self.tau.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return bad(format!("time steps must be positive: {:?}", self.tau));
        }
        if self.tau.windows(2).any(|w| w[1] >= w[0]) {
            return bad(format!("tau list must be strictly decreasing: {:?}", self.tau));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end must be positive (got {})", self.t_end));
        }
        if self.solver.fixed_point.max_iter == 0 || !(self.solver.fixed_point.tol > 0.0) {
            return bad("solver needs tol > 0 and max_iter > 0".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        for &eps in &self.eps {
            Problem::new(self.model, self.preset, eps, self.h, self.domain)?;
        }
        Ok(())
    }

    pub fn problem(&self, eps: f64) -> Result<Problem> {
        Problem::new(self.model, self.preset, eps, self.h, self.domain)
    }
}

/// Declarative configuration; every field is optional and overrides the
/// study defaults. The CLI builds one of these from its flags and merges it
/// over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<String>,
    pub schemes: Option<Vec<String>>,
    pub preset: Option<String>,
    pub eps: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
    pub h: Option<f64>,
    pub domain: Option<(f64, f64)>,
    pub t_end: Option<f64>,
    /// `auto` or a path.
    pub reference: Option<String>,
    pub paper_exact: Option<bool>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub bootstrap: Option<String>,
    pub energy_every: Option<usize>,
    pub threads: Option<usize>,
    pub budget_seconds: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_at(path))?;
        toml::from_str(&text).map_err(|source| HarnessError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigFile { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            model,
            schemes,
            preset,
            eps,
            tau,
            h,
            domain,
            t_end,
            reference,
            paper_exact,
            tol,
            max_iter,
            bootstrap,
            energy_every,
            threads,
            budget_seconds
        )
    }

    /// Study defaults for the chosen model with this file applied, validated.
    pub fn resolve(&self, study: StudyKind) -> Result<ExperimentConfig> {
        let preset = self.preset.as_deref().map(Preset::from_str).transpose()?;
        let model = match (&self.model, preset) {
            (Some(m), _) => m.parse()?,
            (None, Some(p)) => ModelSpec::ALL
                .into_iter()
                .find(|m| m.default_preset() == p)
                .unwrap_or(ModelSpec::Kgs1d),
            (None, None) => ModelSpec::Kgs1d,
        };
        let mut cfg = ExperimentConfig::defaults(study, model);
        if let Some(p) = preset {
            cfg.preset = p;
        }
        if let Some(list) = &self.schemes {
            cfg.schemes = list.iter().map(|s| Scheme::from_str(s)).collect::<std::result::Result<_, _>>()?;
        }
        if let Some(v) = &self.eps {
            cfg.eps = v.clone();
        }
        if let Some(v) = &self.tau {
            cfg.tau = v.clone();
        }
        if let Some(h) = self.h {
            cfg.h = h;
        }
        if self.domain.is_some() {
            cfg.domain = self.domain;
        }
        if let Some(t) = self.t_end {
            cfg.t_end = t;
        }
        if self.paper_exact == Some(true) {
            cfg.reference = ReferenceSource::paper_exact();
        }
        if let Some(r) = &self.reference {
            if self.paper_exact == Some(true) && r != "auto" {
                return Err(HarnessError::Config("--paper-exact generates its own reference".into()));
            }
            if r != "auto" {
                cfg.reference = r.parse()?;
            }
        }
        let defaults = FixedPointConfig::default();
        cfg.solver.fixed_point = FixedPointConfig {
            tol: self.tol.unwrap_or(defaults.tol),
            max_iter: self.max_iter.unwrap_or(defaults.max_iter),
        };
        if let Some(b) = &self.bootstrap {
            cfg.bootstrap = b.parse()?;
        }
        if let Some(k) = self.energy_every {
            cfg.energy_every = k;
        }
        cfg.threads = self.threads.or(cfg.threads);
        if let Some(s) = self.budget_seconds {
            if !(s > 0.0) || !s.is_finite() {
                return Err(HarnessError::Config(format!("budget must be positive (got {s})")));
            }
            cfg.budget = Some(Duration::from_secs_f64(s));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
