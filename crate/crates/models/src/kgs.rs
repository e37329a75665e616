//! Klein-Gordon-Schrodinger equations under periodic boundary conditions.
//!
//! With `psi = q + i p` and `v = u_t` the Fourier semi-discretization is the
//! two-component system
//!
//! ```text
//! (q, p):  S1 = J / 2,      L1 = diag(-2 beta D2, -2 beta D2)
//! (u, v):  S2 = J / eps^2,  L2 = diag(-D2 + 1/eps^2, eps^2)
//! U = -sum (q^2 + p^2) u
//! ```
//!
//! whose energy, weighted by the grid cell, is the discrete KGS energy.

use std::sync::Arc;

use epavf_core::{fixed_point_solve, BlockState, FixedPointConfig, HamiltonianSystem, StepperConfig};
use epavf_spectral::{Block2, SpectralGrid, SpectralSpace};

use crate::baseline::CoreRoute;
use crate::error::{ModelError, Result};
use crate::modes::{affine_pair, concat, increment_pair, LinearBlock};
use crate::run::{Integrator, ModelState};
use crate::scheme::Scheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgsParams {
    pub beta: f64,
    pub eps: f64,
}

impl KgsParams {
    pub fn new(beta: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) || !beta.is_finite() {
            return Err(ModelError::InvalidParams(format!("beta = {beta}, eps = {eps}")));
        }
        Ok(Self { beta, eps })
    }
}

/// `q = Re psi`, `p = Im psi`, `u`, `v = u_t` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KgsState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl KgsState {
    pub fn zeros(n: usize) -> Self {
        Self {
            q: vec![0.0; n],
            p: vec![0.0; n],
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `((q, p), (u, v))`.
    pub fn to_blocks(&self) -> BlockState {
        BlockState::new(vec![
            concat(self.q.clone(), self.p.clone()),
            concat(self.u.clone(), self.v.clone()),
        ])
    }

    pub fn from_blocks(y: &BlockState) -> Result<Self> {
        if y.num_blocks() != 2 || y.block(0).len() != y.block(1).len() || y.block(0).len() % 2 != 0 {
            return Err(ModelError::InvalidParams(format!(
                "layout {:?} is not a KGS state",
                y.layout()
            )));
        }
        let n = y.block(0).len() / 2;
        let (q, p) = y.block(0).split_at(n);
        let (u, v) = y.block(1).split_at(n);
        Ok(Self {
            q: q.to_vec(),
            p: p.to_vec(),
            u: u.to_vec(),
            v: v.to_vec(),
        })
    }

    pub fn fields(&self) -> [(&'static str, &[f64]); 4] {
        [("q", &self.q), ("p", &self.p), ("u", &self.u), ("v", &self.v)]
    }

    /// Max-norm distance over all four fields.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .map(|((_, a), (_, b))| max_diff(a, b))
            .fold(0.0, f64::max)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.fields().iter().any(|(_, f)| f.len() != n) {
            return Err(ModelError::InvalidParams(format!(
                "state fields do not match the grid size {n}"
            )));
        }
        Ok(())
    }
}

impl ModelState for KgsState {
    fn is_finite(&self) -> bool {
        self.fields().iter().all(|(_, f)| f.iter().all(|v| v.is_finite()))
    }

    fn max_abs(&self) -> f64 {
        self.fields().iter().map(|(_, f)| max_abs(f)).fold(0.0, f64::max)
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Propagator tables for one step size.
#[derive(Debug, Clone, PartialEq)]
pub struct KgsPropagators {
    pub tau: f64,
    /// `exp(V1)`: `[[cos, -sin], [sin, cos]]` of `tau beta Lambda`.
    pub exp1: Block2,
    /// `tau phi(V1)`.
    pub tau_phi1: Block2,
    /// `exp(V1) - I` and `exp(V2) - I`.
    pub dexp1: Block2,
    pub dexp2: Block2,
    /// `exp(V2)` with frequency `(1 - eps^2 Lambda)^{1/2} / eps^2`.
    pub exp2: Block2,
    pub tau_phi2: Block2,
    /// `tau phi12(V2) / eps^2` and `tau phi22(V2) / eps^2`.
    pub forcing_u: Vec<f64>,
    pub forcing_v: Vec<f64>,
}

/// Discretized KGS model on a 1D or 2D periodic grid.
#[derive(Debug, Clone)]
pub struct KgsModel {
    grid: Arc<SpectralGrid>,
    params: KgsParams,
    blocks: [LinearBlock; 2],
}

impl KgsModel {
    pub fn new(grid: impl Into<Arc<SpectralGrid>>, params: KgsParams) -> Self {
        let grid = grid.into();
        let (b, e) = (params.beta, params.eps);
        let e2 = e * e;
        let blocks = [
            LinearBlock::new(grid.as_ref(), 0.5, |l| -2.0 * b * l, |l| -2.0 * b * l),
            LinearBlock::new(grid.as_ref(), 1.0 / e2, |l| 1.0 / e2 - l, |_| e2),
        ];
        Self { grid, params, blocks }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn params(&self) -> KgsParams {
        self.params
    }

    /// `(q, p)` and `(u, v)` linear parts.
    pub fn blocks(&self) -> &[LinearBlock; 2] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Samples `psi0 = (Re, Im)`, `u0` and `u_t(0) = u1 / eps^2`.
    pub fn init<P, U0, U1>(&self, psi0: P, u0: U0, u1: U1) -> KgsState
    where
        P: Fn(f64, f64) -> (f64, f64),
        U0: Fn(f64, f64) -> f64,
        U1: Fn(f64, f64) -> f64,
    {
        let pts = self.grid.points();
        let e2 = self.params.eps * self.params.eps;
        let (q, p) = pts.iter().map(|&(x, y)| psi0(x, y)).unzip();
        KgsState {
            q,
            p,
            u: pts.iter().map(|&(x, y)| u0(x, y)).collect(),
            v: pts.iter().map(|&(x, y)| u1(x, y) / e2).collect(),
        }
    }

    /// `1/2 (eps^-2 |u|^2 + eps^2 |v|^2 + |u|_1^2) + beta (|q|_1^2 + |p|_1^2) - (q^2 + p^2, u)`.
    pub fn energy(&self, s: &KgsState) -> f64 {
        let g = self.grid.as_ref();
        let lam = g.lambda();
        let e2 = self.params.eps * self.params.eps;
        let (d2q, d2p) = g.apply_multiplier_pair(lam, &s.q, &s.p).expect("grid-sized state");
        let d2u = g.apply_multiplier(lam, &s.u).expect("grid-sized state");
        let mut wave = 0.0;
        let mut schr = 0.0;
        let mut coupling = 0.0;
        for j in 0..s.len() {
            wave += s.u[j] * s.u[j] / e2 + e2 * s.v[j] * s.v[j] - d2u[j] * s.u[j];
            schr -= d2q[j] * s.q[j] + d2p[j] * s.p[j];
            coupling += (s.q[j] * s.q[j] + s.p[j] * s.p[j]) * s.u[j];
        }
        g.weight() * (0.5 * wave + self.params.beta * schr - coupling)
    }

    pub fn propagators(&self, tau: f64) -> Result<KgsPropagators> {
        let (exp1, tau_phi1) = self.blocks[0].exp_tables(tau)?;
        let (exp2, tau_phi2) = self.blocks[1].exp_tables(tau)?;
        let e2 = self.params.eps * self.params.eps;
        Ok(KgsPropagators {
            tau,
            forcing_u: tau_phi2.m12.iter().map(|v| v / e2).collect(),
            forcing_v: tau_phi2.m22.iter().map(|v| v / e2).collect(),
            dexp1: self.blocks[0].exp_increment_table(tau)?,
            dexp2: self.blocks[1].exp_increment_table(tau)?,
            exp1,
            tau_phi1,
            exp2,
            tau_phi2,
        })
    }

    fn check(&self, props: &KgsPropagators, s: &KgsState) -> Result<()> {
        s.check(self.len())?;
        if props.exp1.len() != self.len() {
            return Err(ModelError::InvalidParams("propagators built for another grid".into()));
        }
        Ok(())
    }

    /// Fixed-point solve of the `(q, p)` update with coupling field `u`.
    fn schrodinger(
        &self,
        props: &KgsPropagators,
        q: &[f64],
        p: &[f64],
        u: &[f64],
        cfg: &FixedPointConfig,
    ) -> Result<(Vec<f64>, Vec<f64>, usize)> {
        let g = self.grid.as_ref();
        let n = q.len();
        let (lq, lp) = increment_pair(g, &props.dexp1, q, p)?;
        let init = concat(lq.clone(), lp.clone());
        let sol = fixed_point_solve(
            |x| {
                let (xq, xp) = x.split_at(n);
                let w1: Vec<f64> = (0..n).map(|j| -0.5 * u[j] * (xp[j] + p[j])).collect();
                let w2: Vec<f64> = (0..n).map(|j| 0.5 * u[j] * (xq[j] + q[j])).collect();
                let (fq, fp) = g.apply_block(&props.tau_phi1, &w1, &w2).expect("grid-sized fields");
                let mut out = Vec::with_capacity(2 * n);
                out.extend((0..n).map(|j| lq[j] + fq[j]));
                out.extend((0..n).map(|j| lp[j] + fp[j]));
                out
            },
            init,
            cfg,
        )?;
        let mut x = sol.x;
        let p_new = x.split_off(n);
        Ok((x, p_new, sol.iterations))
    }

    /// Explicit `(u, v)` update driven by `q^2 + p^2`.
    fn wave(&self, props: &KgsPropagators, s: &KgsState, q: &[f64], p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let rho: Vec<f64> = q.iter().zip(p).map(|(a, b)| a * a + b * b).collect();
        affine_pair(
            self.grid.as_ref(),
            &props.dexp2,
            &s.u,
            &s.v,
            &props.forcing_u,
            &props.forcing_v,
            &rho,
        )
    }

    /// EPAVF step: `(q, p)` with `u^n`, then `(u, v)` with the new density.
    pub fn epavf_step(
        &self,
        props: &KgsPropagators,
        s: &KgsState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgsState, usize)> {
        self.check(props, s)?;
        let (q, p, it) = self.schrodinger(props, &s.q, &s.p, &s.u, cfg)?;
        let (u, v) = self.wave(props, s, &q, &p)?;
        Ok((KgsState { q, p, u, v }, it))
    }

    /// Adjoint step: `(u, v)` with the old density, then `(q, p)` with `u^{n+1}`.
    pub fn epavf_adjoint_step(
        &self,
        props: &KgsPropagators,
        s: &KgsState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgsState, usize)> {
        self.check(props, s)?;
        let (u, v) = self.wave(props, s, &s.q, &s.p)?;
        let (q, p, it) = self.schrodinger(props, &s.q, &s.p, &u, cfg)?;
        Ok((KgsState { q, p, u, v }, it))
    }

    /// EPAVF-C: forward then adjoint with tables built for `tau / 2`.
    pub fn epavf_c_step(
        &self,
        props_half: &KgsPropagators,
        s: &KgsState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgsState, usize)> {
        let (a, i1) = self.epavf_step(props_half, s, cfg)?;
        let (b, i2) = self.epavf_adjoint_step(props_half, &a, cfg)?;
        Ok((b, i1 + i2))
    }

    /// The semi-discrete system with matrix-free operators.
    pub fn system(&self) -> KgsSystem {
        KgsSystem {
            grid: Arc::clone(&self.grid),
            blocks: self.blocks.clone(),
        }
    }

    pub fn solver(&self, scheme: Scheme, tau: f64, cfg: StepperConfig) -> Result<KgsSolver> {
        let route = match scheme {
            Scheme::Epavf | Scheme::EpavfAdjoint => Route::Direct(self.propagators(tau)?),
            Scheme::EpavfC => Route::Direct(self.propagators(0.5 * tau)?),
            Scheme::Cisp | Scheme::Disp => {
                return Err(ModelError::InvalidParams(format!("{scheme} is defined for KGZ only")))
            }
            _ => Route::Core(
                Box::new(CoreRoute::new(&self.grid, &self.blocks, scheme, tau, cfg.clone())?),
                self.system(),
            ),
        };
        Ok(KgsSolver {
            model: self.clone(),
            scheme,
            tau,
            cfg,
            route,
        })
    }
}

/// Matrix-free KGS semi-discretization for the generic steppers.
#[derive(Debug, Clone)]
pub struct KgsSystem {
    grid: Arc<SpectralGrid>,
    blocks: [LinearBlock; 2],
}

impl HamiltonianSystem for KgsSystem {
    fn layout(&self) -> Vec<usize> {
        vec![2 * self.grid.len(); 2]
    }

    fn apply_s(&self, i: usize, x: &[f64]) -> Vec<f64> {
        self.blocks[i].apply_s(x)
    }

    fn apply_l(&self, i: usize, x: &[f64]) -> Vec<f64> {
        self.blocks[i].apply_l(self.grid.as_ref(), x)
    }

    fn potential(&self, y: &BlockState) -> f64 {
        let n = self.grid.len();
        let (q, p) = y.block(0).split_at(n);
        let u = &y.block(1)[..n];
        -(0..n).map(|j| (q[j] * q[j] + p[j] * p[j]) * u[j]).sum::<f64>()
    }

    fn grad(&self, i: usize, y: &BlockState) -> Vec<f64> {
        let n = self.grid.len();
        let (q, p) = y.block(0).split_at(n);
        let u = &y.block(1)[..n];
        if i == 0 {
            let mut g: Vec<f64> = (0..n).map(|j| -2.0 * q[j] * u[j]).collect();
            g.extend((0..n).map(|j| -2.0 * p[j] * u[j]));
            g
        } else {
            let mut g: Vec<f64> = (0..n).map(|j| -(q[j] * q[j] + p[j] * p[j])).collect();
            g.extend(std::iter::repeat(0.0).take(n));
            g
        }
    }
}

#[derive(Debug, Clone)]
enum Route {
    Direct(KgsPropagators),
    Core(Box<CoreRoute>, KgsSystem),
}

/// A KGS model bound to one scheme and step size.
#[derive(Debug, Clone)]
pub struct KgsSolver {
    model: KgsModel,
    scheme: Scheme,
    tau: f64,
    cfg: StepperConfig,
    route: Route,
}

impl KgsSolver {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn model(&self) -> &KgsModel {
        &self.model
    }
}

impl Integrator for KgsSolver {
    type State = KgsState;

    fn tau(&self) -> f64 {
        self.tau
    }

    fn step(&mut self, state: &mut KgsState) -> Result<usize> {
        let fp = &self.cfg.fixed_point;
        let (next, it) = match &self.route {
            Route::Direct(props) => match self.scheme {
                Scheme::Epavf => self.model.epavf_step(props, state, fp)?,
                Scheme::EpavfAdjoint => self.model.epavf_adjoint_step(props, state, fp)?,
                _ => self.model.epavf_c_step(props, state, fp)?,
            },
            Route::Core(route, sys) => {
                state.check(self.model.len())?;
                let out = route.step(sys, &state.to_blocks())?;
                (KgsState::from_blocks(&out.state)?, out.iterations)
            }
        };
        *state = next;
        Ok(it)
    }

    fn energy(&self, state: &KgsState) -> f64 {
        self.model.energy(state)
    }
}
