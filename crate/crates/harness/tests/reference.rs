use std::time::Duration;

use epavf_core::FixedPointConfig;
use epavf_harness::*;
use epavf_models::Preset;

fn kgs(h: f64) -> Problem {
    Problem::new(ModelSpec::Kgs1d, Preset::KgsExample1, 1.0, h, None).unwrap()
}

fn kgz(h: f64) -> Problem {
    Problem::new(ModelSpec::Kgz1d, Preset::KgzExample3, 1.0, h, None).unwrap()
}

fn spec(problem: Problem, tau: f64, t_end: f64) -> ReferenceSpec {
    ReferenceSpec {
        problem,
        tau,
        t_end,
        solver: FixedPointConfig::default(),
    }
}

fn max_gap(a: &Snapshot, b: &Snapshot) -> f64 {
    a.fields
        .iter()
        .flat_map(|f| {
            let g = b.get(&f.name).unwrap();
            f.values.iter().zip(g).map(|(x, y)| (x - y).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn zero_time_reference_is_the_initial_data() {
    for p in [kgs(0.5), kgz(0.5)] {
        let r = generate_reference(&spec(p, 1e-3, 0.0), None).unwrap();
        assert_eq!(r.snapshot, initial_snapshot(&p).unwrap());
        assert_eq!(r.provenance.t_end, 0.0);
    }
}

#[test]
fn regeneration_from_provenance_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    for p in [kgs(0.5), kgz(0.5)] {
        let r = generate_reference(&spec(p, 1e-3, 0.1), None).unwrap();
        let path = dir.path().join(Reference::file_name(&r.provenance));
        r.save(&path).unwrap();
        let loaded = Reference::load(&path).unwrap();
        assert_eq!(loaded, r);
        let again = generate_reference(&ReferenceSpec::from_provenance(&loaded.provenance).unwrap(), None).unwrap();
        assert_eq!(again.snapshot, loaded.snapshot);
        assert_eq!(again.provenance.scheme, "epavf-c");
        assert_eq!(again.provenance.code_version, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn reference_is_converged_in_tau() {
    // Halving the desk reference step moves the solution by far less than the
    // smallest error the tables resolve.
    for p in [kgs(0.5), kgz(0.5)] {
        let a = generate_reference(&spec(p, DESK_TAU_REF, 1.0), None).unwrap();
        let b = generate_reference(&spec(p, DESK_TAU_REF / 2.0, 1.0), None).unwrap();
        let gap = max_gap(&a.snapshot, &b.snapshot);
        assert!(gap <= 1e-10, "{}: {gap:e}", p.model);
    }
}

#[test]
fn restriction_picks_coincident_points() {
    let fine = generate_reference(&spec(kgs(0.25), 1e-3, 0.0), None).unwrap();
    let coarse = fine.restrict_to(&kgs(0.5)).unwrap();
    assert_eq!(coarse, initial_snapshot(&kgs(0.5)).unwrap());

    // N is obtained by a spectral solve on each grid, so it only agrees to
    // spectral accuracy.
    let fine = generate_reference(&spec(kgz(0.25), 1e-3, 0.0), None).unwrap();
    let coarse = fine.restrict_to(&kgz(0.5)).unwrap();
    let direct = initial_snapshot(&kgz(0.5)).unwrap();
    for name in ["E", "F", "M"] {
        assert_eq!(coarse.get(name), direct.get(name), "{name}");
    }
    let n_gap = coarse.get("N").unwrap().iter().zip(direct.get("N").unwrap()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(n_gap < 1e-6, "{n_gap:e}");

    let d = Some((-4.0, 4.0));
    let p2 = |h| Problem::new(ModelSpec::Kgs2d, Preset::KgsExample2, 1.0, h, d).unwrap();
    let fine = generate_reference(&spec(p2(0.25), 1e-3, 0.0), None).unwrap();
    assert_eq!(fine.restrict_to(&p2(0.5)).unwrap(), initial_snapshot(&p2(0.5)).unwrap());
}

#[test]
fn restriction_rejects_misaligned_grids() {
    let r = generate_reference(&spec(kgs(0.5), 1e-3, 0.0), None).unwrap();
    assert!(matches!(r.restrict_to(&kgs(0.25)), Err(HarnessError::ReferenceMismatch(_))));
}

#[test]
fn paper_exact_reference_sits_on_the_run_grid() {
    let ReferenceSource::Generate { h, tau } = ReferenceSource::paper_exact() else {
        panic!()
    };
    assert_eq!((h, tau), (Some(1.0 / 32.0), 2.5e-6));
    let fine = generate_reference(&spec(kgs(1.0 / 32.0), 1e-3, 0.0), None).unwrap();
    assert_eq!(fine.restrict_to(&kgs(0.125)).unwrap(), initial_snapshot(&kgs(0.125)).unwrap());
}

#[test]
fn file_sources_are_matched_by_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let solver = FixedPointConfig::default();
    for eps in [1.0, 0.5] {
        let p = Problem { eps, ..kgs(0.5) };
        let r = generate_reference(&spec(p, 1e-3, 0.05), None).unwrap();
        r.save(&dir.path().join(Reference::file_name(&r.provenance))).unwrap();
    }
    let src: ReferenceSource = dir.path().to_str().unwrap().parse().unwrap();
    let p = Problem { eps: 0.5, ..kgs(0.5) };
    let r = src.resolve(&p, 0.05, &solver, None).unwrap();
    assert_eq!(r.provenance.eps, 0.5);
    assert!(matches!(
        src.resolve(&p, 1.0, &solver, None),
        Err(HarnessError::MissingReference(_))
    ));
    assert!(matches!(
        src.resolve(&kgz(0.5), 0.05, &solver, None),
        Err(HarnessError::MissingReference(_))
    ));
    assert_eq!("auto".parse::<ReferenceSource>().unwrap(), ReferenceSource::desk());
}

#[test]
fn schema_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = generate_reference(&spec(kgs(0.5), 1e-3, 0.0), None).unwrap();
    r.provenance.schema_version = REFERENCE_SCHEMA_VERSION + 1;
    let path = dir.path().join("old.json");
    r.save(&path).unwrap();
    assert!(matches!(Reference::load(&path), Err(HarnessError::ReferenceMismatch(_))));
    let missing = dir.path().join("none.json");
    let err = Reference::load(&missing).unwrap_err();
    assert!(err.to_string().contains("none.json"));
}

#[test]
fn budget_aborts_with_progress() {
    let err = generate_reference(&spec(kgs(0.5), 1e-4, 1.0), Some(Duration::ZERO)).unwrap_err();
    match err {
        HarnessError::Budget { done, total } => assert_eq!((done, total), (0, 10_000)),
        e => panic!("{e}"),
    }
    let err = generate_reference(&spec(kgs(0.5), 1e-5, 1.0), Some(Duration::from_millis(50))).unwrap_err();
    match err {
        HarnessError::Budget { done, total } => assert!(done > 0 && done < total && done % 1000 == 0),
        e => panic!("{e}"),
    }
}
