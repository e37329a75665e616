//! Per-mode closed forms for components with `S = s J` and
//! `L = diag(l1(D2), l2(D2))`, both diagonal in the spectral basis.
//!
//! On each eigenvalue `lambda` the generator `S L` reduces to the 2x2 matrix
//! `[[0, a], [b, 0]]` with `a = s l2`, `b = -s l1`. When `a b <= 0` its square
//! is `-(theta/tau)^2 I` with `theta = tau sqrt(-a b)`, which gives
//!
//! ```text
//! exp(V) = cos(theta) I + tau sinc(theta) M
//! phi(V) = sinc(theta) I + tau verc2(theta) M
//! ```
//!
//! and the rational Cayley and resolvent maps used by the midpoint family.

use std::sync::Arc;

use epavf_core::{ExponentialPropagator, MidpointPropagator};
use epavf_spectral::{sinc, verc2, Block2, SpectralGrid, SpectralSpace};

use crate::error::{ModelError, Result};

/// Entries `[m11, m12, m21, m22]` of `exp(tau M)` and `phi(tau M)`.
pub fn exp_phi_entries(a: f64, b: f64, tau: f64) -> Result<([f64; 4], [f64; 4])> {
    let theta = oscillation_angle(a, b, tau)?;
    let (c, s, v) = (theta.cos(), sinc(theta), verc2(theta));
    Ok((
        [c, tau * s * a, tau * s * b, c],
        [s, tau * v * a, tau * v * b, s],
    ))
}

/// Entries of `exp(tau M) - I`, with `cos(theta) - 1 = -theta^2 verc2(theta)`.
pub fn exp_increment_entries(a: f64, b: f64, tau: f64) -> Result<[f64; 4]> {
    let theta = oscillation_angle(a, b, tau)?;
    let d = -theta * theta * verc2(theta);
    let s = sinc(theta);
    Ok([d, tau * s * a, tau * s * b, d])
}

/// Entries of the Cayley map `(I - V/2)^{-1}(I + V/2)` and of `(I - V/2)^{-1}`.
pub fn cayley_entries(a: f64, b: f64, tau: f64) -> Result<([f64; 4], [f64; 4])> {
    let theta = oscillation_angle(a, b, tau)?;
    let q = 0.25 * theta * theta;
    let d = 1.0 + q;
    Ok((
        [(1.0 - q) / d, tau * a / d, tau * b / d, (1.0 - q) / d],
        [1.0 / d, 0.5 * tau * a / d, 0.5 * tau * b / d, 1.0 / d],
    ))
}

fn oscillation_angle(a: f64, b: f64, tau: f64) -> Result<f64> {
    let ab = a * b;
    if ab > 0.0 || !ab.is_finite() || !tau.is_finite() {
        return Err(ModelError::InvalidParams(format!(
            "mode generator [[0, {a}], [{b}, 0]] is not oscillatory"
        )));
    }
    Ok(tau.abs() * (-ab).sqrt())
}

/// One component `S = s J`, `L = diag(l1, l2)` sampled on the eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBlock {
    pub s: f64,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
}

impl LinearBlock {
    pub fn new<S, F1, F2>(space: &S, s: f64, l1: F1, l2: F2) -> Self
    where
        S: SpectralSpace + ?Sized,
        F1: Fn(f64) -> f64,
        F2: Fn(f64) -> f64,
    {
        Self {
            s,
            l1: space.lambda().iter().map(|&l| l1(l)).collect(),
            l2: space.lambda().iter().map(|&l| l2(l)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.l1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l1.is_empty()
    }

    /// `(a, b)` of mode `k`.
    pub fn generator(&self, k: usize) -> (f64, f64) {
        (self.s * self.l2[k], -self.s * self.l1[k])
    }

    /// `exp(V)` and `tau phi(V)` tables.
    pub fn exp_tables(&self, tau: f64) -> Result<(Block2, Block2)> {
        self.tables(tau, exp_phi_entries)
    }

    /// `exp(V) - I` table.
    pub fn exp_increment_table(&self, tau: f64) -> Result<Block2> {
        let mut out = Block2::default();
        for k in 0..self.len() {
            let (a, b) = self.generator(k);
            push(&mut out, exp_increment_entries(a, b, tau)?);
        }
        Ok(out)
    }

    /// Cayley and `tau (I - V/2)^{-1}` tables.
    pub fn cayley_tables(&self, tau: f64) -> Result<(Block2, Block2)> {
        self.tables(tau, cayley_entries)
    }

    fn tables<F>(&self, tau: f64, f: F) -> Result<(Block2, Block2)>
    where
        F: Fn(f64, f64, f64) -> Result<([f64; 4], [f64; 4])>,
    {
        let mut lin = Block2::default();
        let mut forcing = Block2::default();
        for k in 0..self.len() {
            let (a, b) = self.generator(k);
            let (e, p) = f(a, b, tau)?;
            push(&mut lin, e);
            push(&mut forcing, p.map(|v| tau * v));
        }
        Ok((lin, forcing))
    }

    /// `S x` for the stacked pair `x = (x1, x2)`.
    pub fn apply_s(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len() / 2;
        let mut out = Vec::with_capacity(x.len());
        out.extend(x[n..].iter().map(|v| self.s * v));
        out.extend(x[..n].iter().map(|v| -self.s * v));
        out
    }

    /// `L x` for the stacked pair `x = (x1, x2)`.
    pub fn apply_l<S: SpectralSpace + ?Sized>(&self, space: &S, x: &[f64]) -> Vec<f64> {
        let n = x.len() / 2;
        let (a, b) = space
            .apply_block(
                &Block2 {
                    m11: self.l1.clone(),
                    m12: vec![0.0; n],
                    m21: vec![0.0; n],
                    m22: self.l2.clone(),
                },
                &x[..n],
                &x[n..],
            )
            .expect("component length matches the grid");
        concat(a, b)
    }
}

fn push(b: &mut Block2, e: [f64; 4]) {
    b.m11.push(e[0]);
    b.m12.push(e[1]);
    b.m21.push(e[2]);
    b.m22.push(e[3]);
}

pub(crate) fn concat(mut a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    a.extend(b);
    a
}

/// `(a, b) + inc (a, b)`, transforming only the increment back.
pub(crate) fn increment_pair<S: SpectralSpace + ?Sized>(
    space: &S,
    inc: &Block2,
    a: &[f64],
    b: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (da, db) = space.apply_block(inc, a, b)?;
    Ok((add(a, &da), add(b, &db)))
}

fn add(x: &[f64], d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(u, v)| u + v).collect()
}

/// `(a, b) + inc (a, b) + (c1 g, c2 g)` with all operators diagonal in the basis.
pub(crate) fn affine_pair<S: SpectralSpace + ?Sized>(
    space: &S,
    inc: &Block2,
    a: &[f64],
    b: &[f64],
    c1: &[f64],
    c2: &[f64],
    g: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ah, bh) = space.forward_pair(a, b)?;
    let gh = space.forward(g)?;
    let (mut oa, mut ob) = inc.apply_coefficients(&ah, &bh);
    for k in 0..oa.len() {
        oa[k] += gh[k] * c1[k];
        ob[k] += gh[k] * c2[k];
    }
    let (da, db) = space.inverse_pair(&oa, &ob)?;
    Ok((add(a, &da), add(b, &db)))
}

/// Matrix-free `exp(V)` / `phi(V)` on one stacked component.
#[derive(Debug, Clone)]
pub struct SpectralExp {
    grid: Arc<SpectralGrid>,
    tau: f64,
    exp: Block2,
    phi: Block2,
}

impl SpectralExp {
    pub fn new(grid: Arc<SpectralGrid>, block: &LinearBlock, tau: f64) -> Result<Self> {
        let (exp, tau_phi) = block.exp_tables(tau)?;
        let phi = scale(&tau_phi, 1.0 / tau);
        Ok(Self { grid, tau, exp, phi })
    }
}

/// Matrix-free Cayley map and resolvent on one stacked component.
#[derive(Debug, Clone)]
pub struct SpectralMidpoint {
    grid: Arc<SpectralGrid>,
    tau: f64,
    cayley: Block2,
    resolvent: Block2,
}

impl SpectralMidpoint {
    pub fn new(grid: Arc<SpectralGrid>, block: &LinearBlock, tau: f64) -> Result<Self> {
        let (cayley, tau_res) = block.cayley_tables(tau)?;
        let resolvent = scale(&tau_res, 1.0 / tau);
        Ok(Self {
            grid,
            tau,
            cayley,
            resolvent,
        })
    }
}

fn scale(b: &Block2, c: f64) -> Block2 {
    let f = |v: &Vec<f64>| v.iter().map(|x| x * c).collect();
    Block2 {
        m11: f(&b.m11),
        m12: f(&b.m12),
        m21: f(&b.m21),
        m22: f(&b.m22),
    }
}

fn apply_stacked(grid: &SpectralGrid, blk: &Block2, x: &[f64]) -> Vec<f64> {
    let n = x.len() / 2;
    let (a, b) = grid
        .apply_block(blk, &x[..n], &x[n..])
        .expect("component length matches the grid");
    concat(a, b)
}

impl ExponentialPropagator for SpectralExp {
    fn tau(&self) -> f64 {
        self.tau
    }
    fn dim(&self) -> usize {
        2 * self.grid.len()
    }
    fn apply_exp(&self, x: &[f64]) -> Vec<f64> {
        apply_stacked(&self.grid, &self.exp, x)
    }
    fn apply_phi(&self, x: &[f64]) -> Vec<f64> {
        apply_stacked(&self.grid, &self.phi, x)
    }
}

impl MidpointPropagator for SpectralMidpoint {
    fn tau(&self) -> f64 {
        self.tau
    }
    fn dim(&self) -> usize {
        2 * self.grid.len()
    }
    fn apply_cayley(&self, x: &[f64]) -> Vec<f64> {
        apply_stacked(&self.grid, &self.cayley, x)
    }
    fn apply_resolvent(&self, x: &[f64]) -> Vec<f64> {
        apply_stacked(&self.grid, &self.resolvent, x)
    }
}

/// Max entrywise residual of `V phi(V) - (exp(V) - I)` over all modes.
pub fn property5_residual(block: &LinearBlock, tau: f64) -> Result<f64> {
    let mut worst = 0.0_f64;
    for k in 0..block.len() {
        let (a, b) = block.generator(k);
        let (e, p) = exp_phi_entries(a, b, tau)?;
        let v = [0.0, tau * a, tau * b, 0.0];
        let vp = [
            v[0] * p[0] + v[1] * p[2],
            v[0] * p[1] + v[1] * p[3],
            v[2] * p[0] + v[3] * p[2],
            v[2] * p[1] + v[3] * p[3],
        ];
        let rhs = [e[0] - 1.0, e[1], e[2], e[3] - 1.0];
        for i in 0..4 {
            worst = worst.max((vp[i] - rhs[i]).abs());
        }
    }
    Ok(worst)
}
