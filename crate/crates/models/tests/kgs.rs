mod common;

use std::f64::consts::{PI, SQRT_2};

use common::*;
use epavf_core::{dense_propagators, epavf_adjoint_step, epavf_c_step, epavf_step, expm_phi, DgSpec, HamiltonianSystem};
use epavf_models::*;
use epavf_spectral::{BasisKind, SpectralSpace};
use nalgebra::DMatrix;

fn example1_model(h: f64, eps: f64) -> KgsModel {
    let grid = Preset::KgsExample1.grid(h, None).unwrap();
    KgsModel::new(grid, KgsParams::new(1.0, eps).unwrap())
}

#[test]
fn init_examples() {
    let m = example1_model(0.5, 0.5);
    let s = kgs_example1(&m);
    let mid = m.grid().points().iter().position(|&(x, _)| x == 0.0).unwrap();
    assert_eq!(s.q[mid], 0.5);
    assert_eq!(s.p[mid], 0.5);
    assert!((s.v[mid] - 4.0 / SQRT_2).abs() < 1e-15);
    assert!((s.v[mid] - 2.8284).abs() < 1e-4);
    let z = m.init(|x, _| (x.cos(), 0.0), |_, _| 1.0, |_, _| 0.0);
    assert!(z.v.iter().all(|&v| v == 0.0));
}

#[test]
fn energy_of_simple_states() {
    let m = example1_model(0.5, 1.0);
    assert_eq!(m.energy(&KgsState::zeros(m.len())), 0.0);
    let c = 0.7;
    let mut s = KgsState::zeros(m.len());
    s.u = vec![c; m.len()];
    assert!((m.energy(&s) - 0.5 * c * c * 64.0).abs() < 1e-12);
}

#[test]
fn example1_energy_matches_continuous_functional() {
    for eps in [1.0, 0.5] {
        let m = example1_model(0.125, eps);
        let h_disc = m.energy(&kgs_example1(&m));
        let e2 = eps * eps;
        let density = |x: f64| {
            let s = 1.0 / (x * x).cosh();
            let q = 0.5 * s;
            let qx = -0.5 * s * (x * x).tanh() * 2.0 * x;
            let g = (-x * x).exp();
            let u = 0.5 * g;
            let ux = -x * g;
            let v = g / SQRT_2 / e2;
            0.5 * (u * u / e2 + e2 * v * v + ux * ux) + 2.0 * qx * qx - 2.0 * q * q * u
        };
        let h_cont = simpson(density, -32.0, 32.0, 1_000_000);
        assert!(
            ((h_disc - h_cont) / h_cont).abs() <= 1e-8,
            "eps {eps}: {h_disc} vs {h_cont}"
        );
    }
}

#[test]
fn energy_matches_generic_hamiltonian() {
    let grid = grid1(BasisKind::Periodic, 32, -4.0, 4.0);
    let m = KgsModel::new(grid, KgsParams::new(0.7, 0.6).unwrap());
    let s = random_kgs_state(&m, 3);
    let generic = m.system().energy(&s.to_blocks()) * m.grid().weight();
    assert!((m.energy(&s) - generic).abs() <= 1e-12 * generic.abs().max(1.0));
}

#[test]
fn propagator_tables() {
    let grid = grid1(BasisKind::Periodic, 64, -32.0, 32.0);
    let m = KgsModel::new(grid, KgsParams::new(1.0, 0.5).unwrap());
    let p = m.propagators(0.1).unwrap();
    assert_eq!(p.tau_phi1.m11[0], 0.1);
    assert_eq!(p.tau_phi1.m12[0], 0.0);
    assert_eq!(p.tau_phi1.m21[0], 0.0);
    assert_eq!(p.exp1.m12[0], 0.0);
    for b in m.blocks() {
        assert!(property5_residual(b, 0.1).unwrap() <= 1e-12);
    }
    let lam = m.grid().lambda();
    for k in [1, 5, 32] {
        let th = 0.1 * lam[k];
        assert!((p.exp1.m11[k] - th.cos()).abs() < 1e-15);
        assert!((p.exp1.m12[k] + th.sin()).abs() < 1e-15);
        assert!((p.tau_phi1.m12[k] + 0.2 * (0.5 * th).sin().powi(2) / th).abs() < 1e-16);
        let w = (1.0 - 0.25 * lam[k]).sqrt() / 0.25;
        assert!((p.exp2.m21[k] + w * (0.1 * w).sin()).abs() < 1e-12 * w);
        assert!((p.exp2.m12[k] - (0.1 * w).sin() / w).abs() < 1e-15);
        assert!((p.tau_phi2.m21[k] - ((0.1 * w).cos() - 1.0)).abs() < 1e-14);
        assert!((p.tau_phi2.m12[k] - (1.0 - (0.1 * w).cos()) / (w * w)).abs() < 1e-15);
    }
    let tiny = m.propagators(1e-12).unwrap();
    for b in [&tiny.exp1, &tiny.exp2] {
        assert!(b.m11.iter().chain(&b.m22).all(|v| (v - 1.0).abs() < 1e-12));
    }
}

#[test]
fn mode_tables_match_dense_exponential() {
    let grid = grid1(BasisKind::Periodic, 16, -3.0, 3.0);
    let m = KgsModel::new(grid, KgsParams::new(1.3, 0.4).unwrap());
    let tau = 0.07;
    for b in m.blocks() {
        for k in 0..b.len() {
            let (a, bb) = b.generator(k);
            let v = DMatrix::from_row_slice(2, 2, &[0.0, tau * a, tau * bb, 0.0]);
            let (e, p) = expm_phi(&v).unwrap();
            let (ce, cp) = exp_phi_entries(a, bb, tau).unwrap();
            let scale = 1.0 + v.amax();
            for (i, (r, c)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                assert!((e[(r, c)] - ce[i]).abs() <= 1e-13 * scale);
                assert!((p[(r, c)] - cp[i]).abs() <= 1e-13 * scale);
            }
        }
    }
}

#[test]
fn free_schrodinger_rotation() {
    let (beta, tau, k) = (0.8, 0.3, 3.0);
    let grid = grid1(BasisKind::Periodic, 32, 0.0, 2.0 * PI);
    let m = KgsModel::new(grid, KgsParams::new(beta, 1.0).unwrap());
    let s = m.init(|x, _| ((k * x).cos(), (k * x).sin()), |_, _| 0.0, |_, _| 0.0);
    let props = m.propagators(tau).unwrap();
    let (next, it) = m.epavf_step(&props, &s, &fp()).unwrap();
    assert_eq!(it, 1);
    let xs: Vec<f64> = m.grid().points().iter().map(|p| p.0).collect();
    for (j, &x) in xs.iter().enumerate() {
        let ph = k * x - beta * k * k * tau;
        assert!((next.q[j] - ph.cos()).abs() < 1e-13);
        assert!((next.p[j] - ph.sin()).abs() < 1e-13);
    }
}

#[test]
fn adjoint_with_zero_density_is_free_wave() {
    let grid = grid1(BasisKind::Periodic, 32, -8.0, 8.0);
    let m = KgsModel::new(grid, KgsParams::new(1.0, 0.5).unwrap());
    let mut s = random_kgs_state(&m, 11);
    s.q.iter_mut().chain(s.p.iter_mut()).for_each(|v| *v = 0.0);
    let props = m.propagators(0.2).unwrap();
    let (next, _) = m.epavf_adjoint_step(&props, &s, &fp()).unwrap();
    let (u, v) = m.grid().apply_block(&props.exp2, &s.u, &s.v).unwrap();
    assert!(max_diff(&next.u, &u) < 1e-14 && max_diff(&next.v, &v) < 1e-14);
}

#[test]
fn one_step_energy_conservation_example1() {
    let m = example1_model(0.5, 1.0);
    let s = kgs_example1(&m);
    let h0 = m.energy(&s);
    for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
        let mut solver = m.solver(scheme, 0.1, cfg()).unwrap();
        let mut y = s.clone();
        for _ in 0..5 {
            let before = m.energy(&y);
            solver.step(&mut y).unwrap();
            assert!((m.energy(&y) - before).abs() <= 1e-11 * (1.0 + h0.abs()), "{scheme}");
        }
    }
}

#[test]
fn energy_conserved_for_small_eps() {
    let grid = grid1(BasisKind::Periodic, 64, -16.0, 16.0);
    for eps in [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125] {
        let m = KgsModel::new(grid.clone(), KgsParams::new(1.0, eps).unwrap());
        let s = kgs_example1(&m);
        let h0 = m.energy(&s);
        for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
            let mut solver = m.solver(scheme, 0.01, cfg()).unwrap();
            let mut y = s.clone();
            for _ in 0..10 {
                let before = m.energy(&y);
                solver.step(&mut y).unwrap();
                assert!(
                    ((m.energy(&y) - before) / h0).abs() <= 1e-10,
                    "{scheme} eps {eps}"
                );
            }
        }
    }
}

#[test]
fn baselines_conserve_energy() {
    let m = example1_model(0.5, 1.0);
    let s = kgs_example1(&m);
    for scheme in [Scheme::Eavf, Scheme::Avf, Scheme::Pavf, Scheme::PavfAdjoint, Scheme::PavfC] {
        let mut solver = m.solver(scheme, 0.025, cfg()).unwrap();
        let mut y = s.clone();
        for _ in 0..4 {
            let before = m.energy(&y);
            solver.step(&mut y).unwrap();
            assert!((m.energy(&y) - before).abs() <= 1e-10 * before.abs().max(1.0), "{scheme}");
        }
    }
}

#[test]
fn round_trips() {
    let grid = grid1(BasisKind::Periodic, 64, -16.0, 16.0);
    let m = KgsModel::new(grid, KgsParams::new(1.0, 0.5).unwrap());
    let s = kgs_example1(&m);
    let tau = 0.05;
    let (fwd, back) = (m.propagators(tau).unwrap(), m.propagators(-tau).unwrap());
    let (a, _) = m.epavf_adjoint_step(&fwd, &s, &fp()).unwrap();
    let (r, _) = m.epavf_step(&back, &a, &fp()).unwrap();
    assert!(r.max_abs_diff(&s) <= 1e-13);
    let (a, _) = m.epavf_step(&fwd, &s, &fp()).unwrap();
    let (r, _) = m.epavf_adjoint_step(&back, &a, &fp()).unwrap();
    assert!(r.max_abs_diff(&s) <= 1e-13);
    let (hf, hb) = (m.propagators(0.5 * tau).unwrap(), m.propagators(-0.5 * tau).unwrap());
    let (a, _) = m.epavf_c_step(&hf, &s, &fp()).unwrap();
    let (r, _) = m.epavf_c_step(&hb, &a, &fp()).unwrap();
    assert!(r.max_abs_diff(&s) <= 1e-10);
}

#[test]
fn matches_generic_core_on_dense_system() {
    let grid = grid1(BasisKind::Periodic, 16, -4.0, 4.0);
    let m = KgsModel::new(grid, KgsParams::new(1.0, 0.7).unwrap());
    let dense = kgs_dense_system(&m).unwrap();
    let tau = 0.05;
    let props = dense_propagators(dense.components(), tau).unwrap();
    let half = dense_propagators(dense.components(), 0.5 * tau).unwrap();
    let spec = DgSpec::forward(2);
    let (p, ph) = (m.propagators(tau).unwrap(), m.propagators(0.5 * tau).unwrap());
    let s0 = random_kgs_state(&m, 5);
    for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
        let mut fast = s0.clone();
        let mut slow = s0.to_blocks();
        for _ in 0..10 {
            fast = match scheme {
                Scheme::Epavf => m.epavf_step(&p, &fast, &fp()),
                Scheme::EpavfAdjoint => m.epavf_adjoint_step(&p, &fast, &fp()),
                _ => m.epavf_c_step(&ph, &fast, &fp()),
            }
            .unwrap()
            .0;
            slow = match scheme {
                Scheme::Epavf => epavf_step(&dense, &props, &slow, &spec, &cfg()),
                Scheme::EpavfAdjoint => epavf_adjoint_step(&dense, &props, &slow, &spec, &cfg()),
                _ => epavf_c_step(&dense, &half, &slow, &spec, &cfg()),
            }
            .unwrap()
            .state;
        }
        let d = fast.max_abs_diff(&KgsState::from_blocks(&slow).unwrap());
        assert!(d <= 1e-11, "{scheme}: {d:e}");
    }
}

#[test]
fn core_route_matches_direct_route() {
    let grid = grid1(BasisKind::Periodic, 32, -8.0, 8.0);
    let m = KgsModel::new(grid, KgsParams::new(1.0, 0.5).unwrap());
    let s0 = random_kgs_state(&m, 9);
    for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC] {
        let mut direct = m.solver(scheme, 0.05, cfg()).unwrap();
        let route = CoreRoute::new(m.grid(), m.blocks(), scheme, 0.05, cfg()).unwrap();
        let (mut a, mut b) = (s0.clone(), s0.to_blocks());
        for _ in 0..5 {
            direct.step(&mut a).unwrap();
            b = route.step(&m.system(), &b).unwrap().state;
        }
        assert!(a.max_abs_diff(&KgsState::from_blocks(&b).unwrap()) <= 1e-12, "{scheme}");
    }
}

#[test]
fn consistency_in_tau() {
    let m = example1_model(0.5, 1.0);
    let s = kgs_example1(&m);
    let mut ds = Vec::new();
    for tau in [1e-3, 1e-4] {
        let mut solver = m.solver(Scheme::EpavfC, tau, cfg()).unwrap();
        let mut y = s.clone();
        solver.step(&mut y).unwrap();
        ds.push(y.max_abs_diff(&s));
    }
    let ratio = ds[0] / ds[1];
    assert!((9.0..11.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn self_convergence_order_two() {
    let m = example1_model(0.25, 1.0);
    let s = kgs_example1(&m);
    let solve = |tau: f64| {
        let mut solver = m.solver(Scheme::EpavfC, tau, cfg()).unwrap();
        run(&mut solver, s.clone(), step_count(1.0, tau).unwrap(), 0).unwrap().state
    };
    let sols: Vec<KgsState> = [0.05, 0.025, 0.0125, 0.00625].iter().map(|&t| solve(t)).collect();
    let errs: Vec<f64> = sols.windows(2).map(|w| w[0].max_abs_diff(&w[1])).collect();
    for e in errs.windows(2) {
        let rate = (e[0] / e[1]).log2();
        assert!((rate - 2.0).abs() <= 0.1, "rate {rate}");
    }
}
