//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use netph_core::filtration::{cech_circle_complex, dowker_source_filtration, rips_filtration};
use netph_core::hippocampus::{run_experiment, ExperimentConfig};
use netph_core::relationlab::{are_contiguous, SimplicialMap};
use netph_core::validate::{run_suite, swap_witness, Suite, ValidateOptions};
use netph_core::{
    betti_numbers, compute_persistence, dowker_sink_filtration, network_distance_correspondences,
    network_distance_maps, Network, PersistenceDiagram, SearchBudget, Simplex,
    SimplicialComplex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20160523;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec())
}

fn complex(simplices: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::new(simplices.iter().map(|v| s(v)).collect()).unwrap()
}

fn fig2() -> Network {
    Network::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![-1.0, 1.0, 2.0],
            vec![1.0, 0.0, 2.0],
            vec![1.0, 2.0, 0.0],
        ],
    )
    .unwrap()
}

fn criterion_1() -> Outcome {
    let x = fig2();
    let sink = dowker_sink_filtration(&x, 2);
    let source = dowker_source_filtration(&x, 2);
    // a = 0, b = 1, c = 2
    let vertices: &[&[usize]] = &[&[0], &[1], &[2]];
    let full: &[&[usize]] = &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]];
    let sink_table = |d: f64| -> SimplicialComplex {
        if d < -1.0 {
            complex(&[])
        } else if d < 0.0 {
            complex(&[&[0]])
        } else if d < 1.0 {
            complex(vertices)
        } else {
            complex(full)
        }
    };
    let source_table = |d: f64| -> SimplicialComplex {
        if d < -1.0 {
            complex(&[])
        } else if d < 0.0 {
            complex(&[&[0]])
        } else if d < 1.0 {
            complex(vertices)
        } else if d < 2.0 {
            complex(&[&[0], &[1], &[2], &[0, 1], &[0, 2]])
        } else {
            complex(full)
        }
    };
    for d in [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
        if sink.complex_at(d) != sink_table(d) {
            return fail(format!("sink complex differs at delta = {d}"));
        }
        if source.complex_at(d) != source_table(d) {
            return fail(format!("source complex differs at delta = {d}"));
        }
    }
    pass("sink and source snapshots match at 8 values")
}

fn criterion_2() -> Outcome {
    let x = swap_witness();
    let y = x.pair_swap("a", "c").unwrap();
    let fx = dowker_sink_filtration(&x, 2);
    let fy = dowker_sink_filtration(&y, 2);
    for i in -4..=18 {
        let d = i as f64 / 2.0;
        let bx = betti_numbers(&fx.complex_at(d), 1)[1];
        let by = betti_numbers(&fy.complex_at(d), 1)[1];
        let expect_y = usize::from((3.0..4.0).contains(&d));
        if bx != 0 || by != expect_y {
            return fail(format!("delta = {d}: b1(X) = {bx}, b1(Y) = {by}"));
        }
    }
    let dx = compute_persistence(&fx, 1).unwrap();
    let dy = compute_persistence(&fy, 1).unwrap();
    if dx.dim(1) == dy.dim(1) {
        return fail("Dowker dim-1 diagrams of X and Y agree");
    }
    let rx = compute_persistence(&rips_filtration(&x, 2), 1).unwrap();
    let ry = compute_persistence(&rips_filtration(&y, 2), 1).unwrap();
    if rx != ry || !rx.dim(1).is_empty() {
        return fail("Rips diagrams differ or have dimension-1 points");
    }
    pass(format!("Dgm1 Dowker: X {:?}, Y {:?}; Rips dim 1 empty", dx.pairs(1), dy.pairs(1)))
}

fn cycle_diagram(n: usize, top: usize) -> PersistenceDiagram {
    let f = dowker_sink_filtration(&Network::cycle(n).unwrap(), top + 1);
    compute_persistence(&f, top).unwrap()
}

fn criterion_3() -> Outcome {
    for n in 3..=10 {
        let got = cycle_diagram(n, 1).pairs(1);
        let expect = vec![(1.0, n.div_ceil(2) as f64)];
        if got != expect {
            return fail(format!("G_{n}: {got:?} != {expect:?}"));
        }
    }
    pass("n = 3..10")
}

fn criterion_4() -> Outcome {
    for n in [4, 6, 8] {
        let got = cycle_diagram(n, 2).pairs(2);
        let h = (n / 2) as f64;
        let expect = vec![(h, h + 1.0); n / 2 - 1];
        if got != expect {
            return fail(format!("G_{n} dim 2: {got:?} != {expect:?}"));
        }
    }
    for n in [3, 5, 7] {
        let got = cycle_diagram(n, 2).pairs(2);
        if !got.is_empty() {
            return fail(format!("G_{n} dim 2 not empty: {got:?}"));
        }
    }
    let got = cycle_diagram(6, 4).pairs(4);
    if got != vec![(4.0, 5.0)] {
        return fail(format!("G_6 dim 4: {got:?}"));
    }
    pass("dims 2 and 4 as stated")
}

/// Odd-dimension values exactly as written in the criterion.
fn criterion_5() -> Outcome {
    let cases: [(usize, Vec<(f64, f64)>); 3] = [
        (5, vec![(3.0, 4.0)]),
        (6, vec![(4.0, 5.0)]),
        (7, vec![(4.0, 6.0)]),
    ];
    let mut wrong = Vec::new();
    for (n, expect) in cases {
        let got = cycle_diagram(n, 3).pairs(3);
        if got != expect {
            wrong.push(format!("G_{n} dim 3: computed {got:?}, criterion states {expect:?}"));
        }
    }
    // the set M_1 for n = 7, from its defining inequalities 7/2 < m < 14/3
    let m1: Vec<usize> = (1..7).filter(|&m| 2 * m > 7 && 3 * m < 14).collect();
    if m1 != vec![4, 5] {
        wrong.push(format!("M_1 for n = 7 is {m1:?}, criterion states [4, 5]"));
    }
    if wrong.is_empty() {
        pass("n = 5, 6, 7")
    } else {
        fail(wrong.join("; "))
    }
}

/// Odd-dimension diagrams from the closed form `(min M_l, ceil(n(l+1)/(l+2)))`.
fn criterion_5_formula() -> Outcome {
    for n in 3..=8 {
        let got = cycle_diagram(n, 3).pairs(3);
        let m: Vec<usize> = (1..n).filter(|&m| m * 2 > n && m * 3 < 2 * n).collect();
        let expect = match m.first() {
            Some(&a) => vec![(a as f64, (2 * n).div_ceil(3) as f64)],
            None => vec![],
        };
        if got != expect {
            return fail(format!("G_{n} dim 3: {got:?} != {expect:?}"));
        }
    }
    pass("n = 3..8 match (min M_1, ceil(2n/3)), empty when M_1 is empty")
}

fn suite(s: Suite, seed: u64) -> Outcome {
    let report = run_suite(s, &ValidateOptions { seed, cases: None, corrupt_oracle: false }).unwrap();
    let first = report.failures.first().cloned().unwrap_or_default();
    if report.passed() {
        pass(format!("{} cases, 0 failures", report.cases))
    } else {
        fail(format!("{} failures of {}: {first}", report.failures.len(), report.cases))
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let budget = SearchBudget::default();
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let nx = rng.gen_range(1..=4);
        let ny = rng.gen_range(1..=4);
        let x = Network::random(&mut rng, nx, -1.0, 2.0);
        let y = Network::random(&mut rng, ny, -1.0, 2.0);
        let a = network_distance_maps(&x, &y, &budget).unwrap().distance;
        let b = network_distance_correspondences(&x, &y, &budget).unwrap();
        worst = worst.max((a - b).abs());
        if (a - b).abs() > 1e-12 {
            return fail(format!("case {case}: maps {a} vs correspondences {b}"));
        }
    }
    pass(format!("100 pairs, max difference {worst:e}"))
}

fn criterion_9() -> Outcome {
    for n in 3..=10 {
        let f = dowker_sink_filtration(&Network::cycle(n).unwrap(), n - 1);
        for k in 0..=n {
            let cech = cech_circle_complex(n, k as f64 / (2 * n) as f64, None).unwrap();
            if cech != f.complex_at(k as f64) {
                return fail(format!("n = {n}, k = {k}"));
            }
        }
    }
    pass("n = 3..10, k = 0..n")
}

fn criterion_12() -> Outcome {
    let claims = suite(Suite::Contiguity, SEED);
    if !claims.ok {
        return claims;
    }
    // negative controls
    let edge = SimplicialComplex::full_simplex(&[0, 1], None);
    let points = complex(&[&[0], &[1]]);
    let to0 = SimplicialMap::constant([0, 1], 0);
    let to1 = SimplicialMap::constant([0, 1], 1);
    let hollow = complex(&[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2]]);
    let rot = SimplicialMap::from_fn([0, 1, 2], |v| (v + 1) % 3);
    let rot2 = SimplicialMap::from_fn([0, 1, 2], |v| (v + 2) % 3);
    let controls = [
        are_contiguous(&to0, &to1, &edge, &points).unwrap(),
        are_contiguous(&rot, &rot2, &hollow, &hollow).unwrap(),
    ];
    if controls.iter().any(|&c| c) {
        return fail("a negative control was reported contiguous");
    }
    pass(format!("{}; 2 negative controls rejected", claims.detail))
}

fn criterion_13() -> Outcome {
    let cfg = ExperimentConfig::desk(SEED);
    let result = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(format!("experiment failed: {e}")),
    };
    let uncovered = result.trials.iter().filter(|t| !t.covered).count();
    let Some(sep) = result.separation else {
        return fail("classes 0 and 4 missing");
    };
    let detail = format!(
        "within {:.4} vs between {:.4} for 0 and 4 holes; {} of {} trials below coverage {}",
        sep.within_mean,
        sep.between_mean,
        uncovered,
        result.trials.len(),
        cfg.coverage_threshold
    );
    if sep.separated() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn main() {
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 Fig 2 case tables", Duration::from_secs(1), Box::new(criterion_1)),
        ("2 pair-swap example", Duration::from_secs(1), Box::new(criterion_2)),
        ("3 cycle networks, dim 1", Duration::from_secs(10), Box::new(criterion_3)),
        ("4 cycle networks, even dims", Duration::from_secs(60), Box::new(criterion_4)),
        ("5 cycle networks, odd dims (stated values)", Duration::from_secs(120), Box::new(criterion_5)),
        ("5 cycle networks, odd dims (closed form)", Duration::from_secs(120), Box::new(criterion_5_formula)),
        ("6 sink/source duality", Duration::MAX, Box::new(|| suite(Suite::Duality, SEED))),
        ("7 stability", Duration::from_secs(300), Box::new(|| suite(Suite::Stability, SEED))),
        ("8 map-pair vs correspondence distance", Duration::MAX, Box::new(criterion_8)),
        ("9 Cech/Dowker equality", Duration::MAX, Box::new(criterion_9)),
        ("10 transformation laws", Duration::MAX, Box::new(|| suite(Suite::Invariance, SEED))),
        ("11 functorial Dowker homology", Duration::MAX, Box::new(|| suite(Suite::Fdt, SEED))),
        ("12 contiguity", Duration::MAX, Box::new(criterion_12)),
        ("13 hippocampal desk scale", Duration::from_secs(300), Box::new(criterion_13)),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let mut out = run();
        let took = start.elapsed();
        if took > limit {
            out = fail(format!("{} (took {took:?}, limit {limit:?})", out.detail));
        }
        if !out.ok {
            failed += 1;
        }
        println!(
            "criterion {name}: {} [{:.3}s] {}",
            if out.ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.detail
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion check(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
