#![allow(dead_code)]

use epavf_core::{BlockState, BlockSystem, Component};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn j2() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_skew(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: f64 = rng.gen_range(-1.0..1.0);
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    s
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.gen_range(-1.0..1.0);
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    l
}

/// Positive definite symmetric matrix, keeping the linear flow bounded.
pub fn random_spd(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = random_symmetric(rng, n);
    a.transpose() * &a + DMatrix::identity(n, n)
}

pub fn random_state(rng: &mut impl Rng, layout: &[usize], scale: f64) -> BlockState {
    BlockState::new(
        layout
            .iter()
            .map(|&d| (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect())
            .collect(),
    )
}

/// Two coupled 1-dof oscillators, `U = c p1 p2` on the first entries.
pub fn coupled_harmonic(c: f64) -> BlockSystem {
    let comp = || Component::new(j2(), DMatrix::identity(2, 2)).unwrap();
    BlockSystem::from_fns(
        vec![comp(), comp()],
        move |y| c * y.block(0)[0] * y.block(1)[0],
        move |i, y| vec![c * y.block(1 - i)[0], 0.0],
    )
    .unwrap()
}

/// Two oscillators with the cubic coupling `U = a0^2 b0 / 2 + a1 b1^2 / 4`.
pub fn cubic_pair() -> BlockSystem {
    let c1 = Component::new(j2(), DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]))).unwrap();
    let c2 = Component::new(j2() * 0.5, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0]))).unwrap();
    BlockSystem::from_fns(
        vec![c1, c2],
        |y| {
            let (a, b) = (y.block(0), y.block(1));
            0.5 * a[0] * a[0] * b[0] + 0.25 * a[1] * b[1] * b[1]
        },
        |i, y| {
            let (a, b) = (y.block(0), y.block(1));
            if i == 0 {
                vec![a[0] * b[0], 0.25 * b[1] * b[1]]
            } else {
                vec![0.5 * a[0] * a[0], 0.5 * a[1] * b[1]]
            }
        },
    )
    .unwrap()
}

/// Random dense system with the cubic potential
/// `U = sum_k c_k (w_k . y)^3 / 3 + (v . y)^2 / 2` over the stacked state.
pub fn random_cubic_system(rng: &mut impl Rng, layout: &[usize], coupling: f64) -> BlockSystem {
    let n: usize = layout.iter().sum();
    let comps = layout
        .iter()
        .map(|&d| Component::new(random_skew(rng, d), random_spd(rng, d)).unwrap())
        .collect();
    let w: Vec<Vec<f64>> = (0..2).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let c: Vec<f64> = (0..2).map(|_| coupling * rng.gen_range(-1.0..1.0)).collect();
    let v: Vec<f64> = (0..n).map(|_| coupling * rng.gen_range(-1.0..1.0)).collect();
    let lay = layout.to_vec();
    let (w2, c2, v2) = (w.clone(), c.clone(), v.clone());
    BlockSystem::from_fns(
        comps,
        move |y| {
            let x = y.flatten();
            let mut u = 0.5 * dot(&v, &x).powi(2);
            for (wk, ck) in w.iter().zip(&c) {
                u += ck * dot(wk, &x).powi(3) / 3.0;
            }
            u
        },
        move |i, y| {
            let x = y.flatten();
            let mut g: Vec<f64> = v2.iter().map(|vj| vj * dot(&v2, &x)).collect();
            for (wk, ck) in w2.iter().zip(&c2) {
                let s = ck * dot(wk, &x).powi(2);
                for (gj, wj) in g.iter_mut().zip(wk) {
                    *gj += s * wj;
                }
            }
            let off: usize = lay[..i].iter().sum();
            g[off..off + lay[i]].to_vec()
        },
    )
    .unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
