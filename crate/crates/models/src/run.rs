//! Fixed-step trajectories with instability detection.

use epavf_core::CoreError;

use crate::error::{ModelError, Result};

/// Growth of the max-norm beyond this factor of its initial value marks a run as unstable.
pub const BLOWUP_FACTOR: f64 = 1e8;

pub trait ModelState: Clone {
    fn is_finite(&self) -> bool;
    fn max_abs(&self) -> f64;
}

/// A configured one-step map for one model.
pub trait Integrator {
    type State: ModelState;

    fn tau(&self) -> f64;

    /// Advances `state` by one step; returns the number of fixed-point map evaluations.
    fn step(&mut self, state: &mut Self::State) -> Result<usize>;

    fn energy(&self, state: &Self::State) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instability {
    NonFinite { step: usize },
    Growth { step: usize, ratio: f64 },
    NonConvergence { step: usize, iterations: usize, residual: f64 },
}

impl Instability {
    pub fn step(&self) -> usize {
        match *self {
            Instability::NonFinite { step }
            | Instability::Growth { step, .. }
            | Instability::NonConvergence { step, .. } => step,
        }
    }
}

impl std::fmt::Display for Instability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Instability::NonFinite { step } => write!(f, "non-finite values at step {step}"),
            Instability::Growth { step, ratio } => {
                write!(f, "max-norm grew by {ratio:e} at step {step}")
            }
            Instability::NonConvergence {
                step,
                iterations,
                residual,
            } => write!(
                f,
                "fixed point failed at step {step} after {iterations} iterations (residual {residual:e})"
            ),
        }
    }
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunReport<S> {
    /// Last state reached (the pre-failure state for unstable runs).
    pub state: S,
    pub steps: usize,
    pub iterations: usize,
    /// `(t, H)` samples, including `t = 0`.
    pub energies: Vec<(f64, f64)>,
    pub instability: Option<Instability>,
}

impl<S> RunReport<S> {
    pub fn is_stable(&self) -> bool {
        self.instability.is_none()
    }
}

/// Takes `steps` steps, sampling the energy every `energy_every` steps (never if 0).
pub fn run<I: Integrator>(
    integrator: &mut I,
    initial: I::State,
    steps: usize,
    energy_every: usize,
) -> Result<RunReport<I::State>> {
    let tau = integrator.tau();
    let initial_norm = initial.max_abs();
    let mut energies = Vec::new();
    if energy_every > 0 {
        energies.push((0.0, integrator.energy(&initial)));
    }
    let mut state = initial;
    let mut iterations = 0;
    for n in 1..=steps {
        let mut next = state.clone();
        let verdict = match integrator.step(&mut next) {
            Ok(it) => {
                iterations += it;
                check(&next, initial_norm, n)
            }
            Err(ModelError::Core(CoreError::NonConvergence {
                iterations: it,
                residual,
            })) => Some(Instability::NonConvergence {
                step: n,
                iterations: it,
                residual,
            }),
            Err(e) => return Err(e),
        };
        if let Some(instability) = verdict {
            return Ok(RunReport {
                state,
                steps: n - 1,
                iterations,
                energies,
                instability: Some(instability),
            });
        }
        state = next;
        if energy_every > 0 && n % energy_every == 0 {
            energies.push((n as f64 * tau, integrator.energy(&state)));
        }
    }
    Ok(RunReport {
        state,
        steps,
        iterations,
        energies,
        instability: None,
    })
}

fn check<S: ModelState>(s: &S, initial_norm: f64, step: usize) -> Option<Instability> {
    if !s.is_finite() {
        return Some(Instability::NonFinite { step });
    }
    let norm = s.max_abs();
    if norm > BLOWUP_FACTOR * initial_norm.max(f64::MIN_POSITIVE) {
        return Some(Instability::Growth {
            step,
            ratio: norm / initial_norm,
        });
    }
    None
}

/// Number of steps of size `tau` reaching `t_end`, which must be a multiple of `tau`.
pub fn step_count(t_end: f64, tau: f64) -> Result<usize> {
    let r = t_end / tau;
    let n = r.round();
    if !(tau > 0.0) || !(t_end >= 0.0) || (r - n).abs() > 1e-9 * r.max(1.0) {
        return Err(ModelError::InvalidParams(format!(
            "t_end = {t_end} is not a multiple of tau = {tau}"
        )));
    }
    Ok(n as usize)
}

/// `|H_n - H_0| / |H_0|` for every sample.
pub fn relative_energy_errors(energies: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let Some(&(_, h0)) = energies.first() else {
        return Vec::new();
    };
    energies
        .iter()
        .map(|&(t, h)| (t, ((h - h0) / h0).abs()))
        .collect()
}
