use super::*;
use crate::diagmetric::bottleneck_at;
use crate::filtration::dowker_source_filtration;
use crate::homology::diagram_equal;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn standard_arenas() {
    for k in 0..=4 {
        let a = Arena::standard(10.0, 20, k, 0.2).unwrap();
        assert_eq!(a.holes().len(), k);
        assert_eq!(a.step(), 0.5);
        let free = a.allowed_points().len();
        assert!(free <= 400);
        if k == 0 {
            assert_eq!(free, 400);
        }
    }
    assert!(Arena::standard(10.0, 20, 5, 0.2).is_err());
    assert!(Arena::standard(10.0, 20, 1, 0.3).is_err());
    let wall = Arena::new(
        10.0,
        4,
        vec![Hole { x: 5.0, y: 5.0, radius: 5.0 }],
    );
    assert!(wall.is_err());
}

#[test]
fn trajectory_is_replayable_and_stays_allowed() {
    let a = Arena::standard(10.0, 20, 4, 0.2).unwrap();
    let t1 = simulate_trajectory(&a, 2000, None, &mut rng(1)).unwrap();
    let t2 = simulate_trajectory(&a, 2000, None, &mut rng(1)).unwrap();
    assert_eq!(t1, t2);
    assert_eq!(t1.len(), 2000);
    assert!(t1.iter().all(|&p| a.is_allowed(p)));
    for w in t1.windows(2) {
        let d = w[0].0.abs_diff(w[1].0) + w[0].1.abs_diff(w[1].1);
        assert_eq!(d, 1);
    }
    let zero = Arena::standard(10.0, 20, 0, 0.2).unwrap();
    let z = simulate_trajectory(&zero, 50, Some((0, 0)), &mut rng(2)).unwrap();
    assert_eq!(z[0], (0, 0));
    assert_eq!(z, simulate_trajectory(&zero, 50, Some((0, 0)), &mut rng(2)).unwrap());
}

#[test]
fn start_in_hole_is_rejected() {
    let a = Arena::standard(10.0, 20, 1, 0.2).unwrap();
    assert!(!a.is_allowed((4, 4)));
    assert!(matches!(
        simulate_trajectory(&a, 10, Some((4, 4)), &mut rng(0)),
        Err(Error::InvalidArena(_))
    ));
}

#[test]
fn coverage_is_a_direct_count() {
    let a = Arena::standard(10.0, 20, 4, 0.2).unwrap();
    let traj = simulate_trajectory(&a, 2000, None, &mut rng(3)).unwrap();
    let distinct: std::collections::BTreeSet<_> = traj.iter().collect();
    let c = coverage(&a, &traj);
    assert_eq!(c, distinct.len() as f64 / a.allowed_points().len() as f64);
    assert!(c > 0.5, "coverage {c}");
}

#[test]
fn place_fields_avoid_holes() {
    let a = Arena::standard(10.0, 20, 4, 0.2).unwrap();
    let f1 = scatter_place_fields(&a, 200, 0.5, &mut rng(4)).unwrap();
    let f2 = scatter_place_fields(&a, 200, 0.5, &mut rng(4)).unwrap();
    assert_eq!(f1, f2);
    assert!(f1.iter().all(|f| a.is_free(f.x, f.y)));
    assert!(scatter_place_fields(&a, 0, 0.5, &mut rng(4)).is_err());
}

#[test]
fn place_fields_roughly_uniform() {
    // chi-square over the four quadrants of the hole-free arena
    let a = Arena::standard(10.0, 20, 0, 0.2).unwrap();
    let f = scatter_place_fields(&a, 4000, 0.5, &mut rng(5)).unwrap();
    let mut counts = [0f64; 4];
    for p in &f {
        counts[(p.x >= 5.0) as usize + 2 * (p.y >= 5.0) as usize] += 1.0;
    }
    let chi: f64 = counts.iter().map(|c| (c - 1000.0).powi(2) / 1000.0).sum();
    assert!(chi < 16.27, "chi-square {chi}");
}

#[test]
fn rasters_by_geometry() {
    let positions = [(1.0, 1.0), (1.4, 1.0), (2.0, 1.0)];
    let fields = [
        PlaceField { x: 1.0, y: 1.0, radius: 0.5 },
        PlaceField { x: 5.0, y: 5.0, radius: 100.0 },
        PlaceField { x: 9.0, y: 9.0, radius: 0.5 },
    ];
    let r = compute_rasters(&positions, &fields);
    assert_eq!(
        r.rows(),
        &[
            vec![true, true, false],
            vec![true, true, true],
            vec![false, false, false]
        ]
    );
}

fn brute_force_counts(r: &Raster, w: usize) -> Vec<Vec<u64>> {
    let n = r.cells();
    let mut out = vec![vec![0; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // 1-indexed times as in the definition
            for t in 2..=r.steps() {
                for s in 1..t {
                    if t - s <= w && r.fires(j, t - 1) && r.fires(i, s - 1) {
                        *cell += 1;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn alternating_cells() {
    let steps = 20;
    let r = Raster::new(vec![
        (0..steps).map(|t| t % 2 == 0).collect(),
        (0..steps).map(|t| t % 2 == 1).collect(),
    ])
    .unwrap();
    let n = delayed_coactivity(&r, 5);
    assert_eq!(n, brute_force_counts(&r, 5));
    // cell 0 fires at even t; cell 1 follows at odd delays 1, 3, 5
    let expect_01: u64 = (0..steps).step_by(2).map(|s| [1, 3, 5].iter().filter(|&&d| s + d < steps).count() as u64).sum();
    assert_eq!(n[0][1], expect_01);
    let expect_00: u64 = (0..steps).step_by(2).map(|s| [2, 4].iter().filter(|&&d| s + d < steps).count() as u64).sum();
    assert_eq!(n[0][0], expect_00);
}

#[test]
fn counts_match_brute_force_on_random_rasters() {
    let mut g = rng(6);
    for _ in 0..50 {
        let cells = g.gen_range(1..6);
        let steps = g.gen_range(1..40);
        let rows = (0..cells)
            .map(|_| (0..steps).map(|_| g.gen_bool(0.3)).collect())
            .collect();
        let r = Raster::new(rows).unwrap();
        let w = g.gen_range(1..7);
        assert_eq!(delayed_coactivity(&r, w), brute_force_counts(&r, w));
    }
}

#[test]
fn induced_network_columns() {
    let mut g = rng(7);
    let rows: Vec<Vec<bool>> = (0..6)
        .map(|i| (0..300).map(|_| i != 5 && g.gen_bool(0.2)).collect())
        .collect();
    let r = Raster::new(rows).unwrap();
    let x = induce_network(&r, 5).unwrap();
    for j in 0..5 {
        let s: f64 = (0..6).map(|i| 1.0 - x.weight(i, j)).sum();
        assert!((s - 1.0).abs() < 1e-12, "column {j} sums to {s}");
    }
    assert!((0..6).all(|i| x.weight(i, 5) == 1.0));
    assert!(induce_network(&r, 0).is_err());
}

#[test]
fn trial_is_deterministic_and_dual() {
    let cfg = ExperimentConfig::smoke(9);
    let a = run_trial(&cfg, 2, 0).unwrap();
    let b = run_trial(&cfg, 2, 0).unwrap();
    assert_eq!(a.network, b.network);
    assert_eq!(a.diagram, b.diagram);
    assert!(a.label.starts_with("env-2-"));
    let src = compute_persistence(&dowker_source_filtration(&a.network.transpose(), 2), 1).unwrap();
    assert!(diagram_equal(&src, &a.diagram));
    let t = compute_persistence(&dowker_sink_filtration(&a.network.transpose(), 2), 1).unwrap();
    assert_eq!(bottleneck_at(&t, &a.diagram, 1), 0.0);
}

#[test]
fn smoke_experiment() {
    let cfg = ExperimentConfig::smoke(10);
    let r1 = run_experiment(&cfg).unwrap();
    assert_eq!(r1.trials.len(), 5);
    assert_eq!(r1.dendrogram.merges.len(), 4);
    assert!(r1.separation.is_none());
    let r2 = run_experiment(&cfg).unwrap();
    assert_eq!(r1.matrix.to_csv(), r2.matrix.to_csv());
    assert_eq!(r1.artifacts(), r2.artifacts());
    let names: Vec<String> = r1.artifacts().into_iter().map(|(p, _)| p).collect();
    assert!(names.contains(&"manifest.json".to_string()));
    assert!(names.contains(&"trials/h4-t000.dgm.csv".to_string()));
}

#[test]
fn config_json_and_validation() {
    let cfg: ExperimentConfig = serde_json::from_str(r#"{"steps": 100, "seed": 3}"#).unwrap();
    assert_eq!(cfg.steps, 100);
    assert_eq!(cfg.fields_min, 40);
    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"stpes": 1}"#).is_err());
    let bad = ExperimentConfig {
        fields_min: 10,
        fields_max: 5,
        ..ExperimentConfig::desk(0)
    };
    assert!(bad.validate().is_err());
    assert_eq!(ExperimentConfig::full(1).fields_max, 200);
}
