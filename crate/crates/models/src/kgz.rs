//! Klein-Gordon-Zakharov equations under homogeneous Dirichlet conditions.
//!
//! With `F = E_t` and `N_t = M + E^2` the sine semi-discretization is
//!
//! ```text
//! (E, F):  S1 = J / (2 eps^2),  L1 = diag(2/eps^2 - 2 D2, 2 eps^2)
//! (M, N):  S2 = -J,             L2 = diag(I, -D2)
//! U = sum M E^2
//! ```
//!
//! Every eigenvalue of `D2` must be strictly negative, which holds for sine
//! bases and for 2D grids with at least one sine axis.

use std::sync::Arc;

use epavf_core::{fixed_point_solve, BlockState, FixedPointConfig, HamiltonianSystem, StepperConfig};
use epavf_spectral::{Block2, SpectralGrid, SpectralSpace};

use crate::baseline::CoreRoute;
use crate::error::{ModelError, Result};
use crate::kgs::{max_abs, max_diff};
use crate::modes::{affine_pair, concat, increment_pair, LinearBlock};
use crate::run::{Integrator, ModelState};
use crate::scheme::Scheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgzParams {
    pub eps: f64,
}

impl KgzParams {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(ModelError::InvalidParams(format!("eps = {eps}")));
        }
        Ok(Self { eps })
    }
}

/// `E`, `F = E_t`, `M` and the auxiliary `N` on the interior grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KgzState {
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
}

impl KgzState {
    pub fn zeros(n: usize) -> Self {
        Self {
            e: vec![0.0; n],
            f: vec![0.0; n],
            m: vec![0.0; n],
            n: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    /// `((E, F), (M, N))`.
    pub fn to_blocks(&self) -> BlockState {
        BlockState::new(vec![
            concat(self.e.clone(), self.f.clone()),
            concat(self.m.clone(), self.n.clone()),
        ])
    }

    pub fn from_blocks(y: &BlockState) -> Result<Self> {
        if y.num_blocks() != 2 || y.block(0).len() != y.block(1).len() || y.block(0).len() % 2 != 0 {
            return Err(ModelError::InvalidParams(format!(
                "layout {:?} is not a KGZ state",
                y.layout()
            )));
        }
        let n = y.block(0).len() / 2;
        let (e, f) = y.block(0).split_at(n);
        let (m, nn) = y.block(1).split_at(n);
        Ok(Self {
            e: e.to_vec(),
            f: f.to_vec(),
            m: m.to_vec(),
            n: nn.to_vec(),
        })
    }

    pub fn fields(&self) -> [(&'static str, &[f64]); 4] {
        [("E", &self.e), ("F", &self.f), ("M", &self.m), ("N", &self.n)]
    }

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

impl ModelState for KgzState {
    fn is_finite(&self) -> bool {
        self.fields().iter().all(|(_, f)| f.iter().all(|v| v.is_finite()))
    }

    fn max_abs(&self) -> f64 {
        self.fields().iter().map(|(_, f)| max_abs(f)).fold(0.0, f64::max)
    }
}

/// Propagator tables for one step size.
#[derive(Debug, Clone, PartialEq)]
pub struct KgzPropagators {
    pub tau: f64,
    /// `exp(V1)` with frequency `(1/eps^4 - Lambda/eps^2)^{1/2}`.
    pub exp1: Block2,
    pub tau_phi1: Block2,
    /// `exp(V1) - I` and `exp(V2) - I`.
    pub dexp1: Block2,
    pub dexp2: Block2,
    /// `exp(V2)` with frequency `(-Lambda)^{1/2}`.
    pub exp2: Block2,
    pub tau_phi2: Block2,
    /// `-tau phi12(V1) / eps^2` and `-tau phi22(V1) / eps^2`.
    pub forcing_e: Vec<f64>,
    pub forcing_f: Vec<f64>,
}

/// Start-up of the three-level schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bootstrap {
    /// One EPAVF-C step of size `tau`.
    #[default]
    EpavfC,
    /// `k` EPAVF-C steps of size `tau / k`.
    EpavfCSubsteps(usize),
    /// Second-order Taylor expansion in time, with `E_tt` and `M_tt` taken
    /// from the semi-discrete equations.
    Taylor,
}

impl std::fmt::Display for Bootstrap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bootstrap::EpavfC => f.write_str("epavf-c"),
            Bootstrap::EpavfCSubsteps(k) => write!(f, "epavf-c:{k}"),
            Bootstrap::Taylor => f.write_str("taylor"),
        }
    }
}

impl std::str::FromStr for Bootstrap {
    type Err = ModelError;

    /// `epavf-c`, `epavf-c:<substeps>` or `taylor`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let unknown = || ModelError::Unknown {
            kind: "bootstrap",
            name: s.to_string(),
        };
        match key.as_str() {
            "epavf-c" => Ok(Bootstrap::EpavfC),
            "taylor" => Ok(Bootstrap::Taylor),
            _ => match key.strip_prefix("epavf-c:").map(str::parse::<usize>) {
                Some(Ok(k)) if k > 0 => Ok(Bootstrap::EpavfCSubsteps(k)),
                _ => Err(unknown()),
            },
        }
    }
}

/// Discretized KGZ model on a 1D or 2D grid.
#[derive(Debug, Clone)]
pub struct KgzModel {
    grid: Arc<SpectralGrid>,
    params: KgzParams,
    blocks: [LinearBlock; 2],
}

impl KgzModel {
    pub fn new(grid: impl Into<Arc<SpectralGrid>>, params: KgzParams) -> Result<Self> {
        let grid = grid.into();
        if grid.lambda().iter().any(|&l| !(l < 0.0)) {
            return Err(ModelError::InvalidParams(
                "KGZ needs a strictly negative second-derivative spectrum".into(),
            ));
        }
        let e2 = params.eps * params.eps;
        let blocks = [
            LinearBlock::new(grid.as_ref(), 0.5 / e2, |l| 2.0 / e2 - 2.0 * l, |_| 2.0 * e2),
            LinearBlock::new(grid.as_ref(), -1.0, |_| 1.0, |l| -l),
        ];
        Ok(Self { grid, params, blocks })
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn params(&self) -> KgzParams {
        self.params
    }

    pub fn blocks(&self) -> &[LinearBlock; 2] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `E = E0`, `F = E1 / eps^2`, `M = M0` and `N = D2^{-1} M1`, so that
    /// `M_t(0) = D2 N(0) = M1`.
    pub fn init<E0, E1, M0, M1>(&self, e0: E0, e1: E1, m0: M0, m1: M1) -> KgzState
    where
        E0: Fn(f64, f64) -> f64,
        E1: Fn(f64, f64) -> f64,
        M0: Fn(f64, f64) -> f64,
        M1: Fn(f64, f64) -> f64,
    {
        let g = self.grid.as_ref();
        let e2 = self.params.eps * self.params.eps;
        let inv: Vec<f64> = g.lambda().iter().map(|l| 1.0 / l).collect();
        KgzState {
            e: g.sample(e0),
            f: g.sample(|x, y| e1(x, y) / e2),
            m: g.sample(m0),
            n: g.apply_multiplier(&inv, &g.sample(m1)).expect("grid-sized field"),
        }
    }

    /// `eps^-2 |E|^2 + eps^2 |F|^2 + |E|_1^2 + 1/2 |M|^2 + 1/2 |N|_1^2 + (M, E^2)`.
    pub fn energy(&self, s: &KgzState) -> f64 {
        let g = self.grid.as_ref();
        let e2 = self.params.eps * self.params.eps;
        let (d2e, d2n) = g
            .apply_multiplier_pair(g.lambda(), &s.e, &s.n)
            .expect("grid-sized state");
        let mut h = 0.0;
        for j in 0..s.len() {
            let (e, f, m, n) = (s.e[j], s.f[j], s.m[j], s.n[j]);
            h += e * e / e2 + e2 * f * f - d2e[j] * e + 0.5 * (m * m - d2n[j] * n) + m * e * e;
        }
        g.weight() * h
    }

    pub fn propagators(&self, tau: f64) -> Result<KgzPropagators> {
        let (exp1, tau_phi1) = self.blocks[0].exp_tables(tau)?;
        let (exp2, tau_phi2) = self.blocks[1].exp_tables(tau)?;
        let e2 = self.params.eps * self.params.eps;
        Ok(KgzPropagators {
            tau,
            forcing_e: tau_phi1.m12.iter().map(|v| -v / e2).collect(),
            forcing_f: tau_phi1.m22.iter().map(|v| -v / e2).collect(),
            dexp1: self.blocks[0].exp_increment_table(tau)?,
            dexp2: self.blocks[1].exp_increment_table(tau)?,
            exp1,
            tau_phi1,
            exp2,
            tau_phi2,
        })
    }

    fn check(&self, props: &KgzPropagators, s: &KgzState) -> Result<()> {
        s.check(self.len())?;
        if props.exp1.len() != self.len() {
            return Err(ModelError::InvalidParams("propagators built for another grid".into()));
        }
        Ok(())
    }

    /// Fixed-point solve for `E^{n+1}` with coupling `m`, then explicit `F^{n+1}`.
    fn langmuir(
        &self,
        props: &KgzPropagators,
        s: &KgzState,
        m: &[f64],
        cfg: &FixedPointConfig,
    ) -> Result<(Vec<f64>, Vec<f64>, usize)> {
        let g = self.grid.as_ref();
        let (le, lf) = increment_pair(g, &props.dexp1, &s.e, &s.f)?;
        let coupling = |x: &[f64]| -> Vec<f64> { (0..x.len()).map(|j| 0.5 * m[j] * (x[j] + s.e[j])).collect() };
        let sol = fixed_point_solve(
            |x| {
                let d = g
                    .apply_multiplier(&props.forcing_e, &coupling(x))
                    .expect("grid-sized field");
                le.iter().zip(d).map(|(a, b)| a + b).collect()
            },
            le.clone(),
            cfg,
        )?;
        let d = g.apply_multiplier(&props.forcing_f, &coupling(&sol.x))?;
        let f = lf.iter().zip(d).map(|(a, b)| a + b).collect();
        Ok((sol.x, f, sol.iterations))
    }

    /// Explicit `(M, N)` update driven by `e^2`.
    fn acoustic(&self, props: &KgzPropagators, s: &KgzState, e: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let sq: Vec<f64> = e.iter().map(|v| v * v).collect();
        affine_pair(
            self.grid.as_ref(),
            &props.dexp2,
            &s.m,
            &s.n,
            &props.tau_phi2.m12,
            &props.tau_phi2.m22,
            &sq,
        )
    }

    /// EPAVF step: `E` (implicit) and `F` with `M^n`, then `(M, N)` with `(E^{n+1})^2`.
    pub fn epavf_step(
        &self,
        props: &KgzPropagators,
        s: &KgzState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgzState, usize)> {
        self.check(props, s)?;
        let (e, f, it) = self.langmuir(props, s, &s.m, cfg)?;
        let (m, n) = self.acoustic(props, s, &e)?;
        Ok((KgzState { e, f, m, n }, it))
    }

    /// Adjoint step: `(M, N)` with `(E^n)^2`, then `E`, `F` with `M^{n+1}`.
    pub fn epavf_adjoint_step(
        &self,
        props: &KgzPropagators,
        s: &KgzState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgzState, usize)> {
        self.check(props, s)?;
        let (m, n) = self.acoustic(props, s, &s.e)?;
        let (e, f, it) = self.langmuir(props, s, &m, cfg)?;
        Ok((KgzState { e, f, m, n }, it))
    }

    pub fn epavf_c_step(
        &self,
        props_half: &KgzPropagators,
        s: &KgzState,
        cfg: &FixedPointConfig,
    ) -> Result<(KgzState, usize)> {
        let (a, i1) = self.epavf_step(props_half, s, cfg)?;
        let (b, i2) = self.epavf_adjoint_step(props_half, &a, cfg)?;
        Ok((b, i1 + i2))
    }

    /// State at `t = tau` for the three-level schemes.
    pub fn bootstrap(
        &self,
        s: &KgzState,
        tau: f64,
        method: Bootstrap,
        cfg: &FixedPointConfig,
    ) -> Result<(KgzState, usize)> {
        let k = match method {
            Bootstrap::EpavfC => 1,
            Bootstrap::EpavfCSubsteps(k) => k.max(1),
            Bootstrap::Taylor => return Ok((self.taylor_start(s, tau)?, 0)),
        };
        let props = self.propagators(0.5 * tau / k as f64)?;
        let mut cur = s.clone();
        let mut total = 0;
        for _ in 0..k {
            let (next, it) = self.epavf_c_step(&props, &cur, cfg)?;
            cur = next;
            total += it;
        }
        Ok((cur, total))
    }

    fn taylor_start(&self, s: &KgzState, tau: f64) -> Result<KgzState> {
        s.check(self.len())?;
        let g = self.grid.as_ref();
        let e2 = self.params.eps * self.params.eps;
        let n = s.len();
        let src: Vec<f64> = (0..n).map(|j| s.m[j] + s.e[j] * s.e[j]).collect();
        let (d2e, d2n) = g.apply_multiplier_pair(g.lambda(), &s.e, &s.n)?;
        let d2s = g.apply_multiplier(g.lambda(), &src)?;
        let h2 = 0.5 * tau * tau;
        let mut out = KgzState::zeros(n);
        for j in 0..n {
            let ett = (d2e[j] - s.e[j] / e2 - s.m[j] * s.e[j]) / e2;
            out.e[j] = s.e[j] + tau * s.f[j] + h2 * ett;
            out.f[j] = s.f[j] + tau * ett;
            out.m[j] = s.m[j] + tau * d2n[j] + h2 * d2s[j];
            out.n[j] = s.n[j] + tau * src[j] + h2 * (d2n[j] + 2.0 * s.e[j] * s.f[j]);
        }
        Ok(out)
    }

    pub fn three_level_tables(&self, tau: f64) -> ThreeLevelTables {
        let e2 = self.params.eps * self.params.eps;
        let t2 = tau * tau;
        let lam = self.grid.lambda();
        let de: Vec<f64> = lam.iter().map(|l| e2 / t2 - 0.5 * l + 0.5 / e2).collect();
        let dm: Vec<f64> = lam.iter().map(|l| 1.0 / t2 - 0.5 * l).collect();
        ThreeLevelTables {
            tau,
            cisp_e: de.iter().map(|d| 2.0 * e2 / t2 / d).collect(),
            cisp_e_coupling: de.iter().map(|d| -0.25 / d).collect(),
            cisp_m: dm.iter().map(|d| 2.0 / t2 / d).collect(),
            cisp_m_coupling: lam.iter().zip(&dm).map(|(l, d)| 0.5 * l / d).collect(),
        }
    }

    /// CISP: fixed-point solve of the coupled implicit system for `(E^{n+1}, M^{n+1})`.
    pub fn cisp_step(
        &self,
        tables: &ThreeLevelTables,
        prev: (&[f64], &[f64]),
        cur: (&[f64], &[f64]),
        cfg: &FixedPointConfig,
    ) -> Result<(Vec<f64>, Vec<f64>, usize)> {
        let g = self.grid.as_ref();
        let (ep, mp) = prev;
        let (ec, mc) = cur;
        let n = ec.len();
        let (be, bm) = g.apply_block(
            &Block2 {
                m11: tables.cisp_e.clone(),
                m12: vec![0.0; n],
                m21: vec![0.0; n],
                m22: tables.cisp_m.clone(),
            },
            ec,
            mc,
        )?;
        let base_e: Vec<f64> = (0..n).map(|j| be[j] - ep[j]).collect();
        let base_m: Vec<f64> = (0..n).map(|j| bm[j] - mp[j]).collect();
        let coupling = Block2 {
            m11: tables.cisp_e_coupling.clone(),
            m12: vec![0.0; n],
            m21: vec![0.0; n],
            m22: tables.cisp_m_coupling.clone(),
        };
        let mut init: Vec<f64> = (0..n).map(|j| 2.0 * ec[j] - ep[j]).collect();
        init.extend((0..n).map(|j| 2.0 * mc[j] - mp[j]));
        let sol = fixed_point_solve(
            |x| {
                let (xe, xm) = x.split_at(n);
                let a: Vec<f64> = (0..n).map(|j| (xm[j] + mp[j]) * (xe[j] + ep[j])).collect();
                let b: Vec<f64> = (0..n).map(|j| xe[j] * xe[j] + ep[j] * ep[j]).collect();
                let (ta, tb) = g.apply_block(&coupling, &a, &b).expect("grid-sized fields");
                let mut out: Vec<f64> = (0..n).map(|j| base_e[j] + ta[j]).collect();
                out.extend((0..n).map(|j| base_m[j] + tb[j]));
                out
            },
            init,
            cfg,
        )?;
        let mut e = sol.x;
        let m = e.split_off(n);
        Ok((e, m, sol.iterations))
    }

    /// DISP: explicit update with the pointwise coefficient
    /// `eps^2/tau^2 + 1/(2 eps^2) + M^n/2`.
    pub fn disp_step(
        &self,
        tables: &ThreeLevelTables,
        prev: (&[f64], &[f64]),
        cur: (&[f64], &[f64]),
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let g = self.grid.as_ref();
        let (ep, mp) = prev;
        let (ec, mc) = cur;
        let e2 = self.params.eps * self.params.eps;
        let t2 = tables.tau * tables.tau;
        let src: Vec<f64> = mc.iter().zip(ec).map(|(m, e)| m + e * e).collect();
        let (d2e, d2s) = g.apply_multiplier_pair(g.lambda(), ec, &src)?;
        let e = (0..ec.len())
            .map(|j| {
                let c = e2 / t2 + 0.5 / e2 + 0.5 * mc[j];
                (2.0 * e2 / t2 * ec[j] + d2e[j]) / c - ep[j]
            })
            .collect();
        let m = (0..ec.len())
            .map(|j| 2.0 * mc[j] - mp[j] + t2 * d2s[j])
            .collect();
        Ok((e, m))
    }

    pub fn system(&self) -> KgzSystem {
        KgzSystem {
            grid: Arc::clone(&self.grid),
            blocks: self.blocks.clone(),
        }
    }

    pub fn solver(&self, scheme: Scheme, tau: f64, cfg: StepperConfig) -> Result<KgzSolver> {
        self.solver_with_bootstrap(scheme, tau, cfg, Bootstrap::default())
    }

    pub fn solver_with_bootstrap(
        &self,
        scheme: Scheme,
        tau: f64,
        cfg: StepperConfig,
        bootstrap: Bootstrap,
    ) -> Result<KgzSolver> {
        let route = match scheme {
            Scheme::Epavf | Scheme::EpavfAdjoint => Route::Direct(self.propagators(tau)?),
            Scheme::EpavfC => Route::Direct(self.propagators(0.5 * tau)?),
            Scheme::Cisp | Scheme::Disp => Route::ThreeLevel {
                tables: self.three_level_tables(tau),
                bootstrap,
                prev: None,
            },
            _ => Route::Core(
                Box::new(CoreRoute::new(&self.grid, &self.blocks, scheme, tau, cfg.clone())?),
                self.system(),
            ),
        };
        Ok(KgzSolver {
            model: self.clone(),
            scheme,
            tau,
            cfg,
            route,
        })
    }
}

/// Per-mode coefficients of the three-level schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLevelTables {
    pub tau: f64,
    pub cisp_e: Vec<f64>,
    pub cisp_e_coupling: Vec<f64>,
    pub cisp_m: Vec<f64>,
    pub cisp_m_coupling: Vec<f64>,
}

/// Matrix-free KGZ semi-discretization for the generic steppers.
#[derive(Debug, Clone)]
pub struct KgzSystem {
    grid: Arc<SpectralGrid>,
    blocks: [LinearBlock; 2],
}

impl HamiltonianSystem for KgzSystem {
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
        let e = &y.block(0)[..n];
        let m = &y.block(1)[..n];
        (0..n).map(|j| m[j] * e[j] * e[j]).sum()
    }

    fn grad(&self, i: usize, y: &BlockState) -> Vec<f64> {
        let n = self.grid.len();
        let e = &y.block(0)[..n];
        let m = &y.block(1)[..n];
        let mut g: Vec<f64> = if i == 0 {
            (0..n).map(|j| 2.0 * m[j] * e[j]).collect()
        } else {
            e.iter().map(|v| v * v).collect()
        };
        g.extend(std::iter::repeat(0.0).take(n));
        g
    }
}

#[derive(Debug, Clone)]
enum Route {
    Direct(KgzPropagators),
    Core(Box<CoreRoute>, KgzSystem),
    ThreeLevel {
        tables: ThreeLevelTables,
        bootstrap: Bootstrap,
        prev: Option<(Vec<f64>, Vec<f64>)>,
    },
}

/// A KGZ model bound to one scheme and step size.
///
/// The three-level schemes keep the previous `(E, M)` level internally; the
/// first call bootstraps. Their `F` and `N` fields are diagnostic estimates
/// (one-sided second-order difference and trapezoidal integration of
/// `N_t = M + E^2`).
#[derive(Debug, Clone)]
pub struct KgzSolver {
    model: KgzModel,
    scheme: Scheme,
    tau: f64,
    cfg: StepperConfig,
    route: Route,
}

impl KgzSolver {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn model(&self) -> &KgzModel {
        &self.model
    }
}

impl Integrator for KgzSolver {
    type State = KgzState;

    fn tau(&self) -> f64 {
        self.tau
    }

    fn step(&mut self, state: &mut KgzState) -> Result<usize> {
        let fp = &self.cfg.fixed_point;
        let tau = self.tau;
        let (next, it) = match &mut self.route {
            Route::Direct(props) => match self.scheme {
                Scheme::Epavf => self.model.epavf_step(props, state, fp)?,
                Scheme::EpavfAdjoint => self.model.epavf_adjoint_step(props, state, fp)?,
                _ => self.model.epavf_c_step(props, state, fp)?,
            },
            Route::Core(route, sys) => {
                state.check(self.model.len())?;
                let out = route.step(sys, &state.to_blocks())?;
                (KgzState::from_blocks(&out.state)?, out.iterations)
            }
            Route::ThreeLevel {
                tables,
                bootstrap,
                prev,
            } => {
                state.check(self.model.len())?;
                match prev.take() {
                    None => {
                        let (s1, it) = self.model.bootstrap(state, tau, *bootstrap, fp)?;
                        *prev = Some((state.e.clone(), state.m.clone()));
                        (s1, it)
                    }
                    Some((ep, mp)) => {
                        let cur = (state.e.as_slice(), state.m.as_slice());
                        let (e, m, it) = if self.scheme == Scheme::Cisp {
                            self.model.cisp_step(tables, (&ep, &mp), cur, fp)?
                        } else {
                            let (e, m) = self.model.disp_step(tables, (&ep, &mp), cur)?;
                            (e, m, 0)
                        };
                        let n = e.len();
                        let f = (0..n)
                            .map(|j| (3.0 * e[j] - 4.0 * state.e[j] + ep[j]) / (2.0 * tau))
                            .collect();
                        let nn = (0..n)
                            .map(|j| {
                                let old = state.m[j] + state.e[j] * state.e[j];
                                let new = m[j] + e[j] * e[j];
                                state.n[j] + 0.5 * tau * (old + new)
                            })
                            .collect();
                        *prev = Some((state.e.clone(), state.m.clone()));
                        (KgzState { e, f, m, n: nn }, it)
                    }
                }
            }
        };
        *state = next;
        Ok(it)
    }

    fn energy(&self, state: &KgzState) -> f64 {
        self.model.energy(state)
    }
}
