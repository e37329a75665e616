//! One-step maps for multi-component Hamiltonian systems.
//!
//! Exponential family (`epavf*`, `eavf`) advance each component with
//! `y_i' = exp(V_i) y_i + tau phi(V_i) S_i dG_i`; the midpoint family
//! (`avf`, `pavf*`) uses `y_i' = C_i y_i + R_i tau S_i dG_i` with the Cayley map
//! `C_i` and resolvent `R_i = (I - V_i/2)^{-1}`, which is the AVF scheme for the
//! full Hamiltonian including its quadratic part.
//!
//! Fixed-point iterations start from the linear prediction `exp(V_i) y_i`
//! (resp. `C_i y_i`), so a vanishing potential costs a single evaluation.
//!
//! Steppers that take a [`DgSpec`] use only its ordering; the variant is set
//! by the stepper itself.

use crate::dg::{averaged_gradient, avf_line_segment, staircase_frame, DgSpec, DgVariant};
use crate::error::{check_len, CoreError, Result};
use crate::fixed_point::{try_fixed_point_solve, FixedPointConfig};
use crate::propagator::{ExponentialPropagator, MidpointPropagator};
use crate::quadrature::QuadratureRule;
use crate::state::BlockState;
use crate::system::HamiltonianSystem;

/// Quadrature and nonlinear-solver settings shared by all steppers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepperConfig {
    pub quadrature: QuadratureRule,
    pub fixed_point: FixedPointConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: BlockState,
    /// Total fixed-point map evaluations over all component solves.
    pub iterations: usize,
}

trait LinearPart {
    fn tau(&self) -> f64;
    fn dim(&self) -> usize;
    fn free(&self, x: &[f64]) -> Vec<f64>;
    fn forcing(&self, x: &[f64]) -> Vec<f64>;
}

struct Exp<'a, P>(&'a P);
struct Mid<'a, P>(&'a P);

impl<P: ExponentialPropagator> LinearPart for Exp<'_, P> {
    fn tau(&self) -> f64 {
        self.0.tau()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn free(&self, x: &[f64]) -> Vec<f64> {
        self.0.apply_exp(x)
    }
    fn forcing(&self, x: &[f64]) -> Vec<f64> {
        self.0.apply_phi(x)
    }
}

impl<P: MidpointPropagator> LinearPart for Mid<'_, P> {
    fn tau(&self) -> f64 {
        self.0.tau()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn free(&self, x: &[f64]) -> Vec<f64> {
        self.0.apply_cayley(x)
    }
    fn forcing(&self, x: &[f64]) -> Vec<f64> {
        self.0.apply_resolvent(x)
    }
}

fn check_props<S, L>(sys: &S, props: &[L]) -> Result<f64>
where
    S: HamiltonianSystem + ?Sized,
    L: LinearPart,
{
    let layout = sys.layout();
    check_len("propagator count", layout.len(), props.len())?;
    for (p, &d) in props.iter().zip(&layout) {
        check_len("propagator dimension", d, p.dim())?;
    }
    let tau = props[0].tau();
    if props.iter().any(|p| p.tau() != tau) {
        return Err(CoreError::InvalidInput("propagators built for different step sizes".into()));
    }
    Ok(tau)
}

/// `free + L(tau S g)` for one component.
fn update<S, L>(sys: &S, lin: &L, i: usize, free: &[f64], g: &[f64], tau: f64) -> Vec<f64>
where
    S: HamiltonianSystem + ?Sized,
    L: LinearPart,
{
    let sg: Vec<f64> = sys.apply_s(i, g).into_iter().map(|v| tau * v).collect();
    let f = lin.forcing(&sg);
    free.iter().zip(f).map(|(a, b)| a + b).collect()
}

fn partitioned_step<S, L>(
    sys: &S,
    props: &[L],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    L: LinearPart,
{
    sys.check_state(y)?;
    spec.check_components(sys.num_components())?;
    let tau = check_props(sys, props)?;
    let mut y_new = y.clone();
    let mut iterations = 0;
    for pos in spec.solve_positions() {
        let i = spec.ordering()[pos];
        let lin = &props[i];
        let free = lin.free(y.block(i));
        let frame = staircase_frame(spec, pos, &y_new, y);
        let yi = y.block(i);
        let sol = try_fixed_point_solve(
            |x| {
                let g = avf_line_segment(|s| sys.grad(i, s), &frame, i, x, yi, &cfg.quadrature)?;
                Ok(update(sys, lin, i, &free, &g, tau))
            },
            free.clone(),
            &cfg.fixed_point,
        )?;
        iterations += sol.iterations;
        y_new.set_block(i, sol.x);
    }
    Ok(StepOutcome { state: y_new, iterations })
}

fn full_avf_step<S, L>(sys: &S, props: &[L], y: &BlockState, cfg: &StepperConfig) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    L: LinearPart,
{
    sys.check_state(y)?;
    let tau = check_props(sys, props)?;
    let layout = sys.layout();
    let free: Vec<Vec<f64>> = (0..layout.len()).map(|i| props[i].free(y.block(i))).collect();
    let sol = try_fixed_point_solve(
        |x| {
            let cand = BlockState::from_flat(&layout, x)?;
            let g = averaged_gradient(sys, &cand, y, &cfg.quadrature)?;
            Ok((0..layout.len())
                .flat_map(|i| update(sys, &props[i], i, &free[i], g.block(i), tau))
                .collect())
        },
        free.concat(),
        &cfg.fixed_point,
    )?;
    Ok(StepOutcome {
        state: BlockState::from_flat(&layout, &sol.x)?,
        iterations: sol.iterations,
    })
}

/// EPAVF step with the forward partitioned gradient; components are solved in
/// `spec` order, each by fixed-point iteration.
pub fn epavf_step<S, P>(
    sys: &S,
    props: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: ExponentialPropagator,
{
    let props: Vec<_> = props.iter().map(Exp).collect();
    partitioned_step(sys, &props, y, &spec.with_variant(DgVariant::Forward), cfg)
}

/// Adjoint of [`epavf_step`]: adjoint partitioned gradient, components solved
/// in reverse `spec` order.
pub fn epavf_adjoint_step<S, P>(
    sys: &S,
    props: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: ExponentialPropagator,
{
    let props: Vec<_> = props.iter().map(Exp).collect();
    partitioned_step(sys, &props, y, &spec.with_variant(DgVariant::Adjoint), cfg)
}

/// Symmetric composition: forward half step then adjoint half step.
/// `props_half` must be built for `tau / 2`.
pub fn epavf_c_step<S, P>(
    sys: &S,
    props_half: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: ExponentialPropagator,
{
    let a = epavf_step(sys, props_half, y, spec, cfg)?;
    let b = epavf_adjoint_step(sys, props_half, &a.state, spec, cfg)?;
    Ok(StepOutcome {
        state: b.state,
        iterations: a.iterations + b.iterations,
    })
}

/// Exponential AVF: full AVF gradient, whole state solved jointly.
pub fn eavf_step<S, P>(sys: &S, props: &[P], y: &BlockState, cfg: &StepperConfig) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: ExponentialPropagator,
{
    let props: Vec<_> = props.iter().map(Exp).collect();
    full_avf_step(sys, &props, y, cfg)
}

/// AVF method for the full Hamiltonian.
pub fn avf_step<S, P>(sys: &S, props: &[P], y: &BlockState, cfg: &StepperConfig) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: MidpointPropagator,
{
    let props: Vec<_> = props.iter().map(Mid).collect();
    full_avf_step(sys, &props, y, cfg)
}

/// Partitioned AVF method for the full Hamiltonian.
pub fn pavf_step<S, P>(
    sys: &S,
    props: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: MidpointPropagator,
{
    let props: Vec<_> = props.iter().map(Mid).collect();
    partitioned_step(sys, &props, y, &spec.with_variant(DgVariant::Forward), cfg)
}

pub fn pavf_adjoint_step<S, P>(
    sys: &S,
    props: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: MidpointPropagator,
{
    let props: Vec<_> = props.iter().map(Mid).collect();
    partitioned_step(sys, &props, y, &spec.with_variant(DgVariant::Adjoint), cfg)
}

/// `props_half` must be built for `tau / 2`.
pub fn pavf_c_step<S, P>(
    sys: &S,
    props_half: &[P],
    y: &BlockState,
    spec: &DgSpec,
    cfg: &StepperConfig,
) -> Result<StepOutcome>
where
    S: HamiltonianSystem + ?Sized,
    P: MidpointPropagator,
{
    let a = pavf_step(sys, props_half, y, spec, cfg)?;
    let b = pavf_adjoint_step(sys, props_half, &a.state, spec, cfg)?;
    Ok(StepOutcome {
        state: b.state,
        iterations: a.iterations + b.iterations,
    })
}
