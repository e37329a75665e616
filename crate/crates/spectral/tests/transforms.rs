use std::f64::consts::PI;

use epavf_spectral::dense::{
    second_derivative_matrix, second_derivative_matrix_2d, spectral_function_matrix,
    spectral_function_matrix_2d,
};
use epavf_spectral::*;
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_field(seed: u64, n: usize) -> Vec<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn dense_apply(m: &nalgebra::DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(v)).as_slice().to_vec()
}

#[test]
fn periodic_sine_second_derivative() {
    let b = SpectralBasis::periodic(16, 0.0, 2.0 * PI).unwrap();
    let v: Vec<f64> = b.points().iter().map(|x| x.sin()).collect();
    let d = b.apply_spectral_function(|l| l, &v).unwrap();
    let minus: Vec<f64> = v.iter().map(|x| -x).collect();
    assert!(max_diff(&d, &minus) <= 1e-12);
    let dense = dense_apply(&second_derivative_matrix(&b), &v);
    assert!(max_diff(&dense, &minus) <= 1e-12);
}

#[test]
fn dirichlet_eigenfunction() {
    let (a, bnd) = (0.0, 3.0);
    let b = SpectralBasis::dirichlet(16, a, bnd).unwrap();
    let k = PI / (bnd - a);
    let v: Vec<f64> = b.points().iter().map(|x| (k * x).sin()).collect();
    let d = b.apply_spectral_function(|l| l, &v).unwrap();
    let want: Vec<f64> = v.iter().map(|x| -k * k * x).collect();
    assert!(max_diff(&d, &want) <= 1e-12);
    let dense = dense_apply(&second_derivative_matrix(&b), &v);
    assert!(max_diff(&dense, &want) <= 1e-12);
}

#[test]
fn zero_field() {
    for b in [SpectralBasis::periodic(8, 0.0, 1.0).unwrap(), SpectralBasis::dirichlet(8, 0.0, 1.0).unwrap()] {
        let z = vec![0.0; b.len()];
        assert_eq!(b.apply_spectral_function(|l| l, &z).unwrap(), z);
        assert!(b.forward(&z).unwrap().iter().all(|c| c.norm() == 0.0));
    }
}

#[test]
fn round_trip_all_sizes() {
    for n in [8, 16, 64, 256] {
        for b in [SpectralBasis::periodic(n, -3.0, 5.0).unwrap(), SpectralBasis::dirichlet(n, -3.0, 5.0).unwrap()] {
            let v = random_field(n as u64, b.len());
            let back = b.inverse(&b.forward(&v).unwrap()).unwrap();
            assert!(max_diff(&back, &v) <= 1e-13 * max_abs(&v), "{:?}", b);
        }
    }
}

#[test]
fn dense_operator_equivalence() {
    for n in [4, 8, 16, 32] {
        for b in [SpectralBasis::periodic(n, -2.0, 7.0).unwrap(), SpectralBasis::dirichlet(n, -2.0, 7.0).unwrap()] {
            let v = random_field(7 + n as u64, b.len());
            let fast = b.apply_spectral_function(|l| l, &v).unwrap();
            let dense = dense_apply(&second_derivative_matrix(&b), &v);
            assert!(max_diff(&fast, &dense) <= 1e-11, "{b:?}");
            // Trig-sum and eigenbasis assemblies agree.
            let e = spectral_function_matrix(&b, |l| l);
            assert!((e - second_derivative_matrix(&b)).amax() <= 1e-11);
        }
    }
}

#[test]
fn spectral_function_identities() {
    let b = SpectralBasis::periodic(32, -32.0, 32.0).unwrap();
    let v = random_field(3, 32);
    let same = b.apply_spectral_function(|_| 1.0, &v).unwrap();
    assert!(max_diff(&same, &v) <= 1e-13);
    let tau = 0.0;
    let cos0 = b.apply_spectral_function(|l| (tau * l).cos(), &v).unwrap();
    assert!(max_diff(&cos0, &v) <= 1e-13);
    let bad = b.apply_spectral_function(|l| 1.0 / l, &v);
    assert!(matches!(bad, Err(SpectralError::NonFinite(_))));
    assert!(matches!(
        b.apply_spectral_function(|l| l, &v[..5]),
        Err(SpectralError::LengthMismatch { .. })
    ));
}

#[test]
fn general_function_matches_dense() {
    for b in [SpectralBasis::periodic(16, -1.0, 2.0).unwrap(), SpectralBasis::dirichlet(16, -1.0, 2.0).unwrap()] {
        let f = |l: f64| (0.3 * (-l).sqrt()).cos();
        let v = random_field(5, b.len());
        let fast = b.apply_spectral_function(f, &v).unwrap();
        let dense = dense_apply(&spectral_function_matrix(&b, f), &v);
        assert!(max_diff(&fast, &dense) <= 1e-12);
    }
}

#[test]
fn pair_packing_matches_separate_transforms() {
    for b in [SpectralBasis::periodic(16, 0.0, 1.0).unwrap(), SpectralBasis::dirichlet(16, 0.0, 1.0).unwrap()] {
        let x = random_field(1, b.len());
        let y = random_field(2, b.len());
        let (xh, yh) = b.forward_pair(&x, &y).unwrap();
        let xs = b.forward(&x).unwrap();
        let ys = b.forward(&y).unwrap();
        for k in 0..b.len() {
            assert!((xh[k] - xs[k]).norm() <= 1e-13);
            assert!((yh[k] - ys[k]).norm() <= 1e-13);
        }
        let (x2, y2) = b.inverse_pair(&xh, &yh).unwrap();
        assert!(max_diff(&x2, &x) <= 1e-14);
        assert!(max_diff(&y2, &y) <= 1e-14);
    }
}

#[test]
fn block_application() {
    let b = SpectralBasis::periodic(32, -4.0, 4.0).unwrap();
    let blk = Block2::from_fn(&b, |l| [(0.1 * l).cos(), l, 2.0, sinc(l)]).unwrap();
    let x = random_field(11, 32);
    let y = random_field(12, 32);
    let (u, v) = b.apply_block(&blk, &x, &y).unwrap();
    let m = |f: &dyn Fn(f64) -> f64, z: &[f64]| b.apply_spectral_function(f, z).unwrap();
    let u2: Vec<f64> = m(&|l| (0.1 * l).cos(), &x).iter().zip(m(&|l| l, &y)).map(|(p, q)| p + q).collect();
    let v2: Vec<f64> = x.iter().zip(m(&|l| sinc(l), &y)).map(|(p, q)| 2.0 * p + q).collect();
    assert!(max_diff(&u, &u2) <= 1e-12);
    assert!(max_diff(&v, &v2) <= 1e-12);
}

#[test]
fn kronecker_oracle_2d() {
    for kind in [BasisKind::Periodic, BasisKind::Dirichlet] {
        let g = Grid2D::new(
            SpectralBasis::new(kind, 4, 0.0, 2.0).unwrap(),
            SpectralBasis::new(kind, 4, -1.0, 3.0).unwrap(),
        )
        .unwrap();
        let v = random_field(21, g.len());
        let fast = g.apply_spectral_function(|l| l, &v).unwrap();
        let dense = dense_apply(&second_derivative_matrix_2d(&g), &v);
        assert!(max_diff(&fast, &dense) <= 1e-12, "{kind:?}");
        let f = |l: f64| (0.7 * l).cos();
        let fast = g.apply_spectral_function(f, &v).unwrap();
        let dense = dense_apply(&spectral_function_matrix_2d(&g, f), &v);
        assert!(max_diff(&fast, &dense) <= 1e-12, "{kind:?}");
    }
    let g = Grid2D::new(
        SpectralBasis::periodic(8, 0.0, 2.0).unwrap(),
        SpectralBasis::periodic(6, 0.0, 1.0).unwrap(),
    )
    .unwrap();
    let v = random_field(22, g.len());
    let fast = g.apply_spectral_function(|l| l, &v).unwrap();
    let dense = dense_apply(&second_derivative_matrix_2d(&g), &v);
    assert!(max_diff(&fast, &dense) <= 1e-11);
}

#[test]
fn separable_eigenfunction_2d() {
    let g = Grid2D::square(SpectralBasis::periodic(16, 0.0, 2.0 * PI).unwrap());
    let v: Vec<f64> = g.points().iter().map(|(x, y)| x.sin() * y.sin()).collect();
    let d = g.apply_spectral_function(|l| l, &v).unwrap();
    let want: Vec<f64> = v.iter().map(|x| -2.0 * x).collect();
    assert!(max_diff(&d, &want) <= 1e-12);
    assert!(max_diff(&g.apply_spectral_function(|_| 1.0, &v).unwrap(), &v) <= 1e-13);
}

#[test]
fn two_d_constant_in_y_matches_1d() {
    let bx = SpectralBasis::periodic(16, -2.0, 2.0).unwrap();
    let by = SpectralBasis::periodic(8, 0.0, 1.0).unwrap();
    let g = Grid2D::new(bx.clone(), by).unwrap();
    let line = random_field(4, bx.len());
    let field: Vec<f64> = (0..g.ny()).flat_map(|_| line.clone()).collect();
    let f = |l: f64| (0.2 * l).sin();
    let out2 = g.apply_spectral_function(f, &field).unwrap();
    let out1 = bx.apply_spectral_function(f, &line).unwrap();
    for j in 0..g.ny() {
        assert!(max_diff(&out2[j * g.nx()..(j + 1) * g.nx()], &out1) <= 1e-13);
    }
}

#[test]
fn spectral_grid_delegates() {
    let b = SpectralBasis::periodic(8, 0.0, 1.0).unwrap();
    let g: SpectralGrid = b.clone().into();
    let v = random_field(9, 8);
    assert_eq!(g.apply_spectral_function(|l| l, &v).unwrap(), b.apply_spectral_function(|l| l, &v).unwrap());
    assert_eq!(g.weight(), 0.125);
    let g2: SpectralGrid = Grid2D::square(b).into();
    assert_eq!(g2.len(), 64);
    assert_eq!(g2.shape(), vec![8, 8]);
    assert_eq!(g2.weight(), 0.125 * 0.125);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplier_is_linear(seed in any::<u64>(), alpha in -3.0f64..3.0, dirichlet in any::<bool>()) {
        let kind = if dirichlet { BasisKind::Dirichlet } else { BasisKind::Periodic };
        let b = SpectralBasis::new(kind, 32, -5.0, 5.0).unwrap();
        let x = random_field(seed, b.len());
        let y = random_field(seed.wrapping_add(1), b.len());
        let f = |l: f64| (0.1 * l).cos() + l;
        let lhs = b.apply_spectral_function(f, &x.iter().zip(&y).map(|(p, q)| alpha * p + q).collect::<Vec<_>>()).unwrap();
        let fx = b.apply_spectral_function(f, &x).unwrap();
        let fy = b.apply_spectral_function(f, &y).unwrap();
        let rhs: Vec<f64> = fx.iter().zip(&fy).map(|(p, q)| alpha * p + q).collect();
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * (1.0 + max_abs(&rhs)));
    }

    #[test]
    fn round_trip_random(seed in any::<u64>(), log_n in 2u32..9, dirichlet in any::<bool>()) {
        let kind = if dirichlet { BasisKind::Dirichlet } else { BasisKind::Periodic };
        let b = SpectralBasis::new(kind, 1 << log_n, 0.0, 10.0).unwrap();
        let v = random_field(seed, b.len());
        let back = b.inverse(&b.forward(&v).unwrap()).unwrap();
        prop_assert!(max_diff(&back, &v) <= 1e-13 * max_abs(&v));
    }
}

#[test]
fn mixed_boundary_grid_matches_kronecker() {
    let g = Grid2D::new(
        SpectralBasis::dirichlet(7, -1.0, 1.5).unwrap(),
        SpectralBasis::periodic(6, 0.0, 3.0).unwrap(),
    )
    .unwrap();
    let v = random_field(41, g.len());
    let dense = dense_apply(&second_derivative_matrix_2d(&g), &v);
    let fast = g.apply_spectral_function(|l| l, &v).unwrap();
    assert!(max_diff(&dense, &fast) <= 1e-10 * max_abs(&dense));
    let w = random_field(42, g.len());
    let f = |l: f64| (0.3 * l).cos();
    let (a, b) = g
        .apply_block(
            &Block2::from_fn(&g, |l| [f(l), 0.0, 0.0, f(l)]).unwrap(),
            &v,
            &w,
        )
        .unwrap();
    let m = spectral_function_matrix_2d(&g, f);
    assert!(max_diff(&a, &dense_apply(&m, &v)) <= 1e-12);
    assert!(max_diff(&b, &dense_apply(&m, &w)) <= 1e-12);
}
