//! Randomized and exhaustive checks of the structural theorems on small
//! instances. Each suite is a deterministic function of its seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagmetric::bottleneck_at;
use crate::error::{Error, Result};
use crate::filtration::{
    cech_circle_complex, dowker_sink_filtration, dowker_source_filtration, rips_filtration,
    Relation,
};
use crate::homology::{compute_persistence, diagram_equal, PersistenceDiagram};
use crate::network::{network_distance_correspondences, Network, SearchBudget};
use crate::relationlab::{functorial_contiguity, verify_fdt_pair, ChoiceRule, DowkerMaps};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cycle,
    Duality,
    Stability,
    Fdt,
    Cech,
    Invariance,
    Contiguity,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Cycle,
        Suite::Duality,
        Suite::Stability,
        Suite::Fdt,
        Suite::Cech,
        Suite::Invariance,
        Suite::Contiguity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cycle => "cycle",
            Suite::Duality => "duality",
            Suite::Stability => "stability",
            Suite::Fdt => "fdt",
            Suite::Cech => "cech",
            Suite::Invariance => "invariance",
            Suite::Contiguity => "contiguity",
        }
    }

    /// Number of random cases when none is given.
    pub fn default_cases(self) -> usize {
        match self {
            Suite::Duality | Suite::Stability => 200,
            Suite::Fdt | Suite::Invariance => 100,
            Suite::Contiguity => 25,
            Suite::Cycle | Suite::Cech => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub seed: u64,
    pub cases: Option<usize>,
    /// Replace each suite's oracle with a wrong one; every suite must then fail.
    pub corrupt_oracle: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} cases, {} failures)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures.len()
        )?;
        for msg in self.failures.iter().take(10) {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

/// Diagram of the cycle network `G_n` in dimension `dim` predicted by the
/// closed forms for cycle networks, as sorted `(birth, death)` points.
pub fn cycle_diagram_prediction(n: usize, dim: usize) -> Vec<(f64, f64)> {
    if dim == 0 {
        let mut out = vec![(0.0, 1.0); n - 1];
        out.push((0.0, f64::INFINITY));
        return out;
    }
    let l = dim / 2;
    if dim % 2 == 0 {
        if n % (l + 1) != 0 {
            return Vec::new();
        }
        let k = n * l / (l + 1);
        if k > n - 2 {
            return Vec::new();
        }
        vec![(k as f64, (k + 1) as f64); n / (l + 1) - 1]
    } else {
        // m with n l / (l + 1) < m < n (l + 1) / (l + 2)
        let first = (n * l) / (l + 1) + 1;
        let bound = n * (l + 1);
        if first * (l + 2) >= bound {
            return Vec::new();
        }
        vec![(first as f64, bound.div_ceil(l + 2) as f64)]
    }
}

fn random_network(rng: &mut ChaCha8Rng, max_n: usize, lo: f64, hi: f64) -> Network {
    let n = rng.gen_range(1..=max_n);
    Network::random(rng, n, lo, hi)
}

fn random_relation(rng: &mut ChaCha8Rng, max: usize) -> Relation {
    loop {
        let nr = rng.gen_range(1..=max);
        let nc = rng.gen_range(1..=max);
        let p = rng.gen_range(0.2..0.7);
        let r = Relation::random(rng, nr, nc, p);
        if !r.is_empty() {
            return r;
        }
    }
}

fn grow(rng: &mut ChaCha8Rng, r: &Relation) -> Relation {
    let mut out = r.clone();
    for x in 0..r.nrows() {
        for y in 0..r.ncols() {
            if rng.gen_bool(0.25) {
                out.set(x, y, true);
            }
        }
    }
    out
}

/// Example network whose Dowker diagrams change under a pair swap.
pub fn swap_witness() -> Network {
    Network::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![0.0, 6.0, 4.0],
            vec![1.0, 0.0, 5.0],
            vec![2.0, 3.0, 0.0],
        ],
    )
    .expect("valid network")
}

fn sorted_points(d: &PersistenceDiagram, k: usize) -> Vec<(f64, f64)> {
    d.pairs(k)
}

pub fn run_suite(suite: Suite, opts: &ValidateOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cases = opts.cases.unwrap_or(suite.default_cases());
    let bad = opts.corrupt_oracle;
    let mut failures = Vec::new();
    let mut count = 0;
    match suite {
        Suite::Cycle => {
            for n in 3..=10 {
                let top = if n <= 8 { 4 } else { 1 };
                let f = dowker_sink_filtration(&Network::cycle(n)?, top + 1);
                let dgm = compute_persistence(&f, top)?;
                for k in 0..=top {
                    count += 1;
                    let mut expect = cycle_diagram_prediction(n, k);
                    if bad {
                        expect.push((0.0, 1.0));
                    }
                    expect.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                    let got = sorted_points(&dgm, k);
                    if got != expect {
                        failures.push(format!("G_{n} dim {k}: got {got:?}, expected {expect:?}"));
                    }
                }
            }
        }
        Suite::Duality => {
            for case in 0..cases {
                let x = random_network(&mut rng, 6, -1.0, 2.0);
                let other = if bad { x.shifted(1.0) } else { x.clone() };
                let si = compute_persistence(&dowker_sink_filtration(&x, 2), 1)?;
                let so = compute_persistence(&dowker_source_filtration(&other, 2), 1)?;
                count += 1;
                if !diagram_equal(&si, &so) {
                    failures.push(format!("case {case}: sink and source diagrams differ"));
                }
            }
        }
        Suite::Stability => {
            let budget = SearchBudget::default();
            for case in 0..cases {
                let x = random_network(&mut rng, 4, -1.0, 2.0);
                let y = random_network(&mut rng, 4, -1.0, 2.0);
                let dn = if bad {
                    -1.0
                } else {
                    network_distance_correspondences(&x, &y, &budget)?
                };
                count += 1;
                let builders: [(&str, fn(&Network, usize) -> _); 3] = [
                    ("rips", rips_filtration),
                    ("dowker-sink", dowker_sink_filtration),
                    ("dowker-source", dowker_source_filtration),
                ];
                for (name, build) in builders {
                    let dx = compute_persistence(&build(&x, 2), 1)?;
                    let dy = compute_persistence(&build(&y, 2), 1)?;
                    for k in 0..=1 {
                        let db = bottleneck_at(&dx, &dy, k);
                        if db > 2.0 * dn + 1e-9 {
                            failures.push(format!(
                                "case {case} {name} dim {k}: d_B = {db} > 2 d_N = {}",
                                2.0 * dn
                            ));
                        }
                    }
                }
            }
        }
        Suite::Fdt => {
            for case in 0..cases {
                let r = random_relation(&mut rng, 6);
                let r2 = grow(&mut rng, &r);
                let mut rep = verify_fdt_pair(&r, &r2, 2)?;
                if bad {
                    rep.rank_f[0] += 1;
                }
                count += 1;
                if !rep.passed() {
                    failures.push(format!("case {case}: {rep:?}"));
                }
            }
        }
        Suite::Cech => {
            for n in 3..=10 {
                let f = dowker_sink_filtration(&Network::cycle(n)?, n - 1);
                for k in 0..=n {
                    count += 1;
                    let cech = cech_circle_complex(n, k as f64 / (2 * n) as f64, None)?;
                    let delta = if bad { k as f64 + 1.0 } else { k as f64 };
                    if cech != f.complex_at(delta) {
                        failures.push(format!("n = {n}, k = {k}: complexes differ"));
                    }
                }
            }
        }
        Suite::Invariance => {
            for case in 0..cases {
                let x = random_network(&mut rng, 6, -1.0, 2.0);
                let n = x.size();
                let (a, b) = if n >= 2 {
                    let a = rng.gen_range(0..n);
                    (a, (a + rng.gen_range(1..n)) % n)
                } else {
                    (0, 0)
                };
                let swapped = x.pair_swap_indices(a, b);
                count += 1;
                let reference = if bad { x.shifted(1.0) } else { x.clone() };
                let rips = rips_filtration(&reference, 2);
                for (name, other) in [
                    ("symmetrized", x.max_symmetrize()),
                    ("transposed", x.transpose()),
                    ("swapped", swapped.clone()),
                ] {
                    if rips_filtration(&other, 2) != rips {
                        failures.push(format!("case {case}: Rips filtration changed when {name}"));
                    }
                }
                // dimension 0 survives swaps once self-weights are minimal
                let low = x.with_minimal_diagonal();
                let low_swapped = low.pair_swap_indices(a, b);
                let low_ref = if bad { low.shifted(1.0) } else { low.clone() };
                let d0 = compute_persistence(&dowker_sink_filtration(&low_ref, 1), 0)?;
                let d0s = compute_persistence(&dowker_sink_filtration(&low_swapped, 1), 0)?;
                if !diagram_equal(&d0, &d0s) {
                    failures.push(format!("case {case}: Dowker dim 0 changed under a pair swap"));
                }
                let si = compute_persistence(&dowker_sink_filtration(&reference, 2), 1)?;
                let so_t = compute_persistence(&dowker_source_filtration(&x.transpose(), 2), 1)?;
                if !diagram_equal(&si, &so_t) {
                    failures.push(format!("case {case}: sink(X) != source(transpose X)"));
                }
            }
            count += 1;
            let x = swap_witness();
            let y = x.pair_swap("a", "c")?;
            let dx = compute_persistence(&dowker_sink_filtration(&x, 2), 1)?;
            let dy = compute_persistence(&dowker_sink_filtration(&y, 2), 1)?;
            if (dx.dim(1) == dy.dim(1)) != bad {
                failures.push("pair swap witness: dimension 1 Dowker diagrams agree".into());
            }
        }
        Suite::Contiguity => {
            let mut attempts = 0;
            while count < cases {
                attempts += 1;
                if attempts > 100 * cases.max(1) {
                    return Err(Error::InvalidConfig(
                        "could not draw relations within the subdivision budget".into(),
                    ));
                }
                let r = random_relation(&mut rng, 4);
                let maps = match DowkerMaps::new(&r, ChoiceRule::LeastIndex) {
                    Err(e) if e.is_budget() => continue,
                    other => other?,
                };
                count += 1;
                let items = maps.contiguity_items()?;
                let r2 = grow(&mut rng, &r);
                let functorial = functorial_contiguity(&r, &r2, ChoiceRule::LeastIndex)?;
                let expect = !bad;
                for (i, ok) in items.iter().chain(&functorial).enumerate() {
                    if *ok != expect {
                        failures.push(format!("relation {r:?}: statement {} does not hold", i + 1));
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        suite,
        cases: count,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictions_match_known_cases() {
        assert_eq!(cycle_diagram_prediction(4, 1), vec![(1.0, 2.0)]);
        assert_eq!(cycle_diagram_prediction(7, 1), vec![(1.0, 4.0)]);
        assert_eq!(cycle_diagram_prediction(6, 2), vec![(3.0, 4.0); 2]);
        assert!(cycle_diagram_prediction(5, 2).is_empty());
        assert_eq!(cycle_diagram_prediction(6, 4), vec![(4.0, 5.0)]);
        assert_eq!(cycle_diagram_prediction(5, 3), vec![(3.0, 4.0)]);
        assert!(cycle_diagram_prediction(6, 3).is_empty());
        assert_eq!(cycle_diagram_prediction(7, 3), vec![(4.0, 5.0)]);
    }

    #[test]
    fn dimension_zero_can_change_under_swap_with_large_self_weights() {
        let x = Network::from_rows(vec![
            vec![3.0, 2.0, 3.0],
            vec![3.0, 3.0, 1.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let y = x.pair_swap_indices(1, 2);
        let dx = compute_persistence(&dowker_sink_filtration(&x, 1), 0).unwrap();
        let dy = compute_persistence(&dowker_sink_filtration(&y, 1), 0).unwrap();
        assert_eq!(dx.pairs(0), vec![(0.0, f64::INFINITY), (1.0, 2.0)]);
        assert_eq!(dy.pairs(0), vec![(0.0, 2.0), (0.0, f64::INFINITY)]);
        let lx = x.with_minimal_diagonal();
        let ly = y.with_minimal_diagonal();
        assert_eq!(
            compute_persistence(&dowker_sink_filtration(&lx, 1), 0).unwrap(),
            compute_persistence(&dowker_sink_filtration(&ly, 1), 0).unwrap()
        );
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn suites_pass_and_corruption_is_caught() {
        for suite in Suite::ALL {
            let cases = Some(match suite {
                Suite::Stability => 5,
                _ => 10,
            });
            let ok = run_suite(suite, &ValidateOptions { seed: 1, cases, corrupt_oracle: false }).unwrap();
            assert!(ok.passed(), "{ok}");
            let broken = run_suite(suite, &ValidateOptions { seed: 1, cases, corrupt_oracle: true }).unwrap();
            assert!(!broken.passed(), "{suite} ignores a corrupted oracle");
        }
    }
}
