mod common;

use common::*;
use epavf_models::*;
use epavf_spectral::{BasisKind, Grid2D, SpectralBasis, SpectralGrid, SpectralSpace};

fn grid_xy(kx: BasisKind, nx: usize, ky: BasisKind, ny: usize, (a, b): (f64, f64), (c, d): (f64, f64)) -> SpectralGrid {
    SpectralGrid::TwoD(
        Grid2D::new(
            SpectralBasis::new(kx, nx, a, b).unwrap(),
            SpectralBasis::new(ky, ny, c, d).unwrap(),
        )
        .unwrap(),
    )
}

/// Max deviation of every y-row of a 2D field from the 1D field.
fn row_gap(two: &[f64], one: &[f64]) -> f64 {
    two.chunks(one.len()).map(|row| max_diff(row, one)).fold(0.0, f64::max)
}

#[test]
fn kgs_y_constant_fields_follow_1d() {
    let (a, b) = (-8.0, 8.0);
    let eps = 0.5;
    let one = KgsModel::new(grid1(BasisKind::Periodic, 64, a, b), KgsParams::new(1.0, eps).unwrap());
    let two = KgsModel::new(
        grid_xy(BasisKind::Periodic, 64, BasisKind::Periodic, 8, (a, b), (-2.0, 2.0)),
        KgsParams::new(1.0, eps).unwrap(),
    );
    let psi = |x: f64, _: f64| (0.5 / x.cosh(), 0.3 * (-x * x).exp());
    let u0 = |x: f64, _: f64| 0.5 * (-x * x).exp();
    let u1 = |x: f64, _: f64| (0.5 * x).sin() * (-x * x).exp();
    let (s1, s2) = (one.init(psi, u0, u1), two.init(psi, u0, u1));
    assert!(((two.energy(&s2) - 4.0 * one.energy(&s1)) / one.energy(&s1)).abs() < 1e-12);
    for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC, Scheme::Eavf] {
        let (mut r1, mut r2) = (one.solver(scheme, 0.05, cfg()).unwrap(), two.solver(scheme, 0.05, cfg()).unwrap());
        let (mut y1, mut y2) = (s1.clone(), s2.clone());
        for _ in 0..10 {
            r1.step(&mut y1).unwrap();
            r2.step(&mut y2).unwrap();
        }
        let gap = [(&y2.q, &y1.q), (&y2.p, &y1.p), (&y2.u, &y1.u), (&y2.v, &y1.v)]
            .iter()
            .map(|(t, o)| row_gap(t, o))
            .fold(0.0, f64::max);
        assert!(gap <= 1e-12, "{scheme}: {gap:e}");
    }
}

#[test]
fn kgz_y_constant_fields_follow_1d() {
    let (a, b) = (-8.0, 8.0);
    let eps = 0.5;
    let one = KgzModel::new(grid1(BasisKind::Dirichlet, 64, a, b), KgzParams::new(eps).unwrap()).unwrap();
    let two = KgzModel::new(
        grid_xy(BasisKind::Dirichlet, 64, BasisKind::Periodic, 8, (a, b), (-2.0, 2.0)),
        KgzParams::new(eps).unwrap(),
    )
    .unwrap();
    let e0 = |x: f64, _: f64| (0.5 * x).sin() * (-x * x).exp();
    let e1 = |x: f64, _: f64| 0.5 * (-x * x).exp();
    let m0 = |x: f64, _: f64| 1.0 / (x * x).cosh();
    let m1 = |x: f64, _: f64| (x / 3.0).cos() * (-x * x).exp();
    let (s1, s2) = (one.init(e0, e1, m0, m1), two.init(e0, e1, m0, m1));
    assert!(row_gap(&s2.n, &s1.n) < 1e-13);
    assert!(((two.energy(&s2) - 4.0 * one.energy(&s1)) / one.energy(&s1)).abs() < 1e-12);
    for scheme in [Scheme::Epavf, Scheme::EpavfAdjoint, Scheme::EpavfC, Scheme::Cisp, Scheme::Disp] {
        let (mut r1, mut r2) = (one.solver(scheme, 0.05, cfg()).unwrap(), two.solver(scheme, 0.05, cfg()).unwrap());
        let (mut y1, mut y2) = (s1.clone(), s2.clone());
        for _ in 0..10 {
            r1.step(&mut y1).unwrap();
            r2.step(&mut y2).unwrap();
        }
        let gap = [(&y2.e, &y1.e), (&y2.f, &y1.f), (&y2.m, &y1.m), (&y2.n, &y1.n)]
            .iter()
            .map(|(t, o)| row_gap(t, o))
            .fold(0.0, f64::max);
        assert!(gap <= 1e-12, "{scheme}: {gap:e}");
    }
}

#[test]
fn energy_conserved_in_2d() {
    let domain = Some((-4.0, 4.0));
    let kgs = KgsModel::new(Preset::KgsExample2.grid(0.25, domain).unwrap(), KgsParams::new(1.0, 0.5).unwrap());
    let s = kgs_example2(&kgs);
    let h0 = kgs.energy(&s);
    let mut sv = kgs.solver(Scheme::EpavfC, 0.1, cfg()).unwrap();
    let out = run(&mut sv, s, 20, 1).unwrap();
    let worst = relative_energy_errors(&out.energies).iter().fold(0.0_f64, |m, e| m.max(e.1));
    assert!(worst <= 1e-11, "kgs {worst:e} (H0 {h0})");

    let kgz = KgzModel::new(Preset::KgzExample4.grid(0.25, domain).unwrap(), KgzParams::new(0.5).unwrap()).unwrap();
    let s = kgz_example4(&kgz);
    let mut sv = kgz.solver(Scheme::EpavfC, 0.1, cfg()).unwrap();
    let out = run(&mut sv, s, 20, 1).unwrap();
    let worst = relative_energy_errors(&out.energies).iter().fold(0.0_f64, |m, e| m.max(e.1));
    assert!(worst <= 1e-11, "kgz {worst:e}");
}

#[test]
fn presets_build_in_2d() {
    for p in [Preset::KgsExample2, Preset::KgzExample4] {
        assert_eq!(p.dimension(), 2);
        let g = p.grid(1.0, Some((-4.0, 4.0))).unwrap();
        assert_eq!(g.dimension(), 2);
    }
    let g = Preset::KgzExample4.grid(1.0, Some((-4.0, 4.0))).unwrap();
    assert_eq!(g.len(), 49);
}
