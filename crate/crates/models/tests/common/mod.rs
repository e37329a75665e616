#![allow(dead_code)]

use epavf_core::{FixedPointConfig, StepperConfig};
use epavf_models::*;
use epavf_spectral::{BasisKind, Grid2D, SpectralBasis, SpectralGrid};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fp() -> FixedPointConfig {
    FixedPointConfig::default()
}

pub fn cfg() -> StepperConfig {
    StepperConfig::default()
}

pub fn grid1(kind: BasisKind, n: usize, a: f64, b: f64) -> SpectralGrid {
    SpectralGrid::OneD(SpectralBasis::new(kind, n, a, b).unwrap())
}

pub fn grid2(kind_x: BasisKind, kind_y: BasisKind, n: usize, a: f64, b: f64) -> SpectralGrid {
    SpectralGrid::TwoD(
        Grid2D::new(
            SpectralBasis::new(kind_x, n, a, b).unwrap(),
            SpectralBasis::new(kind_y, n, a, b).unwrap(),
        )
        .unwrap(),
    )
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth random field: a few low modes with random amplitudes.
pub fn smooth_field(r: &mut ChaCha8Rng, pts: &[(f64, f64)], a: f64, b: f64, dirichlet: bool) -> Vec<f64> {
    let len = b - a;
    let modes: Vec<(f64, f64, f64)> = (1..=4)
        .map(|k| (r.gen_range(-0.5..0.5), r.gen_range(0.0..6.3), k as f64))
        .collect();
    pts.iter()
        .map(|&(x, _)| {
            modes
                .iter()
                .map(|&(amp, ph, k)| {
                    if dirichlet {
                        amp * (std::f64::consts::PI * k * (x - a) / len).sin()
                    } else {
                        amp * (2.0 * std::f64::consts::PI * k * (x - a) / len + ph).cos()
                    }
                })
                .sum()
        })
        .collect()
}

pub fn random_kgs_state(model: &KgsModel, seed: u64) -> KgsState {
    let mut r = rng(seed);
    let pts = model.grid().points();
    let (a, b) = (pts[0].0, pts[pts.len() - 1].0 + (pts[1].0 - pts[0].0));
    KgsState {
        q: smooth_field(&mut r, &pts, a, b, false),
        p: smooth_field(&mut r, &pts, a, b, false),
        u: smooth_field(&mut r, &pts, a, b, false),
        v: smooth_field(&mut r, &pts, a, b, false),
    }
}

pub fn random_kgz_state(model: &KgzModel, seed: u64) -> KgzState {
    let mut r = rng(seed);
    let pts = model.grid().points();
    let h = pts[1].0 - pts[0].0;
    let (a, b) = (pts[0].0 - h, pts[pts.len() - 1].0 + h);
    KgzState {
        e: smooth_field(&mut r, &pts, a, b, true),
        f: smooth_field(&mut r, &pts, a, b, true),
        m: smooth_field(&mut r, &pts, a, b, true),
        n: smooth_field(&mut r, &pts, a, b, true),
    }
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
