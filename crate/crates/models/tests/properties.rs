mod common;

use common::*;
use epavf_models::*;
use epavf_spectral::BasisKind;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kgs_epavf_family_conserves_energy(seed in 0u64..1000, eps in 0.1f64..1.0, tau in 0.01f64..0.3, beta in 0.2f64..2.0) {
        let grid = grid1(BasisKind::Periodic, 32, -6.0, 6.0);
        let m = KgsModel::new(grid, KgsParams::new(beta, eps).unwrap());
        let s = random_kgs_state(&m, seed);
        let h0 = m.energy(&s);
        for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
            let mut sv = m.solver(scheme, tau, cfg()).unwrap();
            let mut y = s.clone();
            sv.step(&mut y).unwrap();
            prop_assert!((m.energy(&y) - h0).abs() <= 1e-11 * (1.0 + h0.abs()), "{} {}", scheme, m.energy(&y) - h0);
        }
    }

    #[test]
    fn kgz_epavf_family_conserves_energy(seed in 0u64..1000, eps in 0.1f64..1.0, tau in 0.01f64..0.3) {
        let grid = grid1(BasisKind::Dirichlet, 33, -6.0, 6.0);
        let m = KgzModel::new(grid, KgzParams::new(eps).unwrap()).unwrap();
        let s = random_kgz_state(&m, seed);
        let h0 = m.energy(&s);
        for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
            let mut sv = m.solver(scheme, tau, cfg()).unwrap();
            let mut y = s.clone();
            sv.step(&mut y).unwrap();
            prop_assert!((m.energy(&y) - h0).abs() <= 1e-11 * (1.0 + h0.abs()), "{} {}", scheme, m.energy(&y) - h0);
        }
    }

    #[test]
    fn kgz_adjoint_inverts_forward(seed in 0u64..1000, eps in 0.2f64..1.0, tau in 0.01f64..0.2) {
        let grid = grid1(BasisKind::Dirichlet, 33, -6.0, 6.0);
        let m = KgzModel::new(grid, KgzParams::new(eps).unwrap()).unwrap();
        let s = random_kgz_state(&m, seed);
        let (a, _) = m.epavf_step(&m.propagators(tau).unwrap(), &s, &fp()).unwrap();
        let (r, _) = m.epavf_adjoint_step(&m.propagators(-tau).unwrap(), &a, &fp()).unwrap();
        prop_assert!(r.max_abs_diff(&s) <= 1e-12);
    }

    #[test]
    fn mode_tables_satisfy_property5(a in -50.0f64..0.0, b in 0.0f64..50.0, tau in -0.5f64..0.5) {
        let block = LinearBlock { s: 1.0, l1: vec![-b], l2: vec![a] };
        prop_assert!(property5_residual(&block, tau).unwrap() <= 1e-12 * (1.0 + tau.abs() * (a * b).abs().sqrt()));
    }
}
