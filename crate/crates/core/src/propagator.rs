//! Linear propagators `exp(V)`, `phi(V)` with `V = tau S L`, and the
//! midpoint (Cayley) counterparts used by the non-exponential baselines.

use nalgebra::DMatrix;

use crate::error::{check_len, CoreError, Result};
use crate::quadrature::QuadratureRule;
use crate::system::{matvec, Component};

/// Action of `exp(V)` and `phi(V) = int_0^1 exp((1 - xi) V) dxi` on vectors.
pub trait ExponentialPropagator {
    fn tau(&self) -> f64;
    fn dim(&self) -> usize;
    fn apply_exp(&self, x: &[f64]) -> Vec<f64>;
    fn apply_phi(&self, x: &[f64]) -> Vec<f64>;
}

/// Action of the Cayley map `(I - V/2)^{-1} (I + V/2)` and of `(I - V/2)^{-1}`.
pub trait MidpointPropagator {
    fn tau(&self) -> f64;
    fn dim(&self) -> usize;
    fn apply_cayley(&self, x: &[f64]) -> Vec<f64>;
    fn apply_resolvent(&self, x: &[f64]) -> Vec<f64>;
}

const TAYLOR_TERMS: usize = 24;

/// `(exp(V), phi(V))` by a scaled Taylor series and the doubling relations
/// `exp(2W) = exp(W)^2`, `phi(2W) = (exp(W) phi(W) + phi(W)) / 2`.
pub fn expm_phi(v: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !v.is_square() {
        return Err(CoreError::InvalidInput("V must be square".into()));
    }
    if !v.iter().all(|x| x.is_finite()) {
        return Err(CoreError::InvalidInput("V has non-finite entries".into()));
    }
    let n = v.nrows();
    let norm = v.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scaled = norm;
    while scaled > 0.5 {
        scaled *= 0.5;
        squarings += 1;
    }
    let w = v * 0.5f64.powi(squarings as i32);

    let id = DMatrix::<f64>::identity(n, n);
    let mut e = id.clone();
    let mut phi = id.clone();
    let mut power = id;
    let mut fact = 1.0;
    for k in 1..=TAYLOR_TERMS {
        power = &power * &w;
        fact *= k as f64;
        e += &power / fact;
        phi += &power / (fact * (k + 1) as f64);
    }
    for _ in 0..squarings {
        phi = (&e * &phi + &phi) * 0.5;
        e = &e * &e;
    }
    Ok((e, phi))
}

/// `phi(V)` by `n`-node Gauss-Legendre quadrature of its integral definition.
pub fn phi_by_quadrature(v: &DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    let rule = QuadratureRule::gauss_legendre(n);
    let mut acc = DMatrix::zeros(v.nrows(), v.ncols());
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        let (e, _) = expm_phi(&(v * (1.0 - xi)))?;
        acc += e * w;
    }
    Ok(acc)
}

/// Dense `exp(V)` and `phi(V)` for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePropagator {
    pub exp_v: DMatrix<f64>,
    pub phi_v: DMatrix<f64>,
    pub tau: f64,
}

fn check_pair(s: &DMatrix<f64>, l: &DMatrix<f64>) -> Result<()> {
    if !s.is_square() || !l.is_square() {
        return Err(CoreError::InvalidInput("S and L must be square".into()));
    }
    check_len("propagator L", s.nrows(), l.nrows())
}

pub fn build_dense_propagator(s: &DMatrix<f64>, l: &DMatrix<f64>, tau: f64) -> Result<DensePropagator> {
    check_pair(s, l)?;
    let v = s * l * tau;
    let (exp_v, phi_v) = expm_phi(&v)?;
    Ok(DensePropagator { exp_v, phi_v, tau })
}

/// One propagator per component of a dense system.
pub fn dense_propagators(components: &[Component], tau: f64) -> Result<Vec<DensePropagator>> {
    components.iter().map(|c| build_dense_propagator(c.s(), c.l(), tau)).collect()
}

impl ExponentialPropagator for DensePropagator {
    fn tau(&self) -> f64 {
        self.tau
    }

    fn dim(&self) -> usize {
        self.exp_v.nrows()
    }

    fn apply_exp(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.exp_v, x)
    }

    fn apply_phi(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.phi_v, x)
    }
}

/// Dense Cayley map and resolvent for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMidpoint {
    pub cayley: DMatrix<f64>,
    pub resolvent: DMatrix<f64>,
    pub tau: f64,
}

pub fn build_dense_midpoint(s: &DMatrix<f64>, l: &DMatrix<f64>, tau: f64) -> Result<DenseMidpoint> {
    check_pair(s, l)?;
    let n = s.nrows();
    let half = s * l * (0.5 * tau);
    let id = DMatrix::<f64>::identity(n, n);
    let resolvent = (&id - &half)
        .try_inverse()
        .ok_or_else(|| CoreError::InvalidInput("I - tau S L / 2 is singular".into()))?;
    let cayley = &resolvent * (id + half);
    Ok(DenseMidpoint { cayley, resolvent, tau })
}

pub fn dense_midpoints(components: &[Component], tau: f64) -> Result<Vec<DenseMidpoint>> {
    components.iter().map(|c| build_dense_midpoint(c.s(), c.l(), tau)).collect()
}

impl MidpointPropagator for DenseMidpoint {
    fn tau(&self) -> f64 {
        self.tau
    }

    fn dim(&self) -> usize {
        self.cayley.nrows()
    }

    fn apply_cayley(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.cayley, x)
    }

    fn apply_resolvent(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.resolvent, x)
    }
}

/// Max-norm residuals of the six structural identities of `exp(V)`, `phi(V)`:
///
/// 1. `L exp(V) - exp(-V)^T L`
/// 2. `exp(V) S - S exp(-V)^T`
/// 3. `L phi(V) - phi(-V)^T L`
/// 4. `phi(V) S - S phi(-V)^T`
/// 5. `V phi(V) - (exp(V) - I)`
/// 6. `exp(-V) phi(V) - phi(-V)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaResiduals(pub [f64; 6]);

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

pub fn lemma_identities_check(s: &DMatrix<f64>, l: &DMatrix<f64>, tau: f64) -> Result<LemmaResiduals> {
    check_pair(s, l)?;
    let n = s.nrows();
    let v = s * l * tau;
    let (ep, pp) = expm_phi(&v)?;
    let (em, pm) = expm_phi(&(-&v))?;
    let id = DMatrix::<f64>::identity(n, n);
    let r = [
        (l * &ep - em.transpose() * l).amax(),
        (&ep * s - s * em.transpose()).amax(),
        (l * &pp - pm.transpose() * l).amax(),
        (&pp * s - s * pm.transpose()).amax(),
        (&v * &pp - (&ep - &id)).amax(),
        (&em * &pp - &pm).amax(),
    ];
    Ok(LemmaResiduals(r))
}
