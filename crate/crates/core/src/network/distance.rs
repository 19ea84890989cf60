//! Distortion of relations and maps, and exact network distance by
//! exhaustive search.
//!
//! Both exact searches are exponential and guarded by [`SearchBudget`];
//! exceeding a budget is an error, never an approximation.

use super::Network;
use crate::error::{Error, Result};

/// A set of node index pairs `(x, y)` between two networks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Correspondence { pairs }
    }

    /// The identity correspondence on an `n`-node network.
    pub fn diagonal(n: usize) -> Self {
        Correspondence::new((0..n).map(|i| (i, i)).collect())
    }

    /// True when the pairs project onto all of `0..nx` and all of `0..ny`.
    pub fn is_correspondence(&self, nx: usize, ny: usize) -> bool {
        let mut rows = vec![false; nx];
        let mut cols = vec![false; ny];
        for &(x, y) in &self.pairs {
            if x >= nx || y >= ny {
                return false;
            }
            rows[x] = true;
            cols[y] = true;
        }
        rows.into_iter().chain(cols).all(|c| c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Upper bound on `|Y|^|X| * |X|^|Y|` map pairs.
    pub max_map_pairs: u128,
    /// Upper bound on `|X| * |Y|`; the correspondence search space is `2^(|X||Y|)`.
    pub max_correspondence_cells: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_map_pairs: 100_000_000,
            max_correspondence_cells: 16,
        }
    }
}

/// Which of the two co-distortion terms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codirection {
    /// `max_{x,y} |w_X(x, psi(y)) - w_Y(phi(x), y)|`
    XY,
    /// `max_{x,y} |w_Y(y, phi(x)) - w_X(psi(y), x)|`
    YX,
}

pub fn distortion_of_relation(x: &Network, y: &Network, r: &Correspondence) -> Result<f64> {
    if r.pairs.is_empty() {
        return Err(Error::EmptyRelation);
    }
    if let Some(&(a, b)) = r.pairs.iter().find(|&&(a, b)| a >= x.size() || b >= y.size()) {
        return Err(Error::InvalidRelation(format!("pair ({a}, {b}) out of range")));
    }
    let mut worst = 0.0f64;
    for &(a, b) in &r.pairs {
        for &(a2, b2) in &r.pairs {
            worst = worst.max((x.weight(a, a2) - y.weight(b, b2)).abs());
        }
    }
    Ok(worst)
}

/// `max_{x,x'} |w_X(x,x') - w_Y(phi(x), phi(x'))|`; `phi[i]` is the image of node `i`.
pub fn map_distortion(x: &Network, y: &Network, phi: &[usize]) -> f64 {
    debug_assert_eq!(phi.len(), x.size());
    let n = x.size();
    let mut worst = 0.0f64;
    for i in 0..n {
        let (xi, yi) = (x.row(i), y.row(phi[i]));
        for j in 0..n {
            worst = worst.max((xi[j] - yi[phi[j]]).abs());
        }
    }
    worst
}

pub fn codistortion(
    x: &Network,
    y: &Network,
    phi: &[usize],
    psi: &[usize],
    direction: Codirection,
) -> f64 {
    codistortion_bounded(x, y, phi, psi, direction, f64::INFINITY)
}

/// Like [`codistortion`] but stops as soon as the running maximum reaches `cap`.
fn codistortion_bounded(
    x: &Network,
    y: &Network,
    phi: &[usize],
    psi: &[usize],
    direction: Codirection,
    cap: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for (a, &pa) in phi.iter().enumerate() {
        for (b, &pb) in psi.iter().enumerate() {
            let d = match direction {
                Codirection::XY => (x.weight(a, pb) - y.weight(pa, b)).abs(),
                Codirection::YX => (y.weight(b, pa) - x.weight(pb, a)).abs(),
            };
            if d > worst {
                worst = d;
                if worst >= cap {
                    return worst;
                }
            }
        }
    }
    worst
}

/// Result of the map-pair search: `distance` is half the optimal four-term max.
#[derive(Debug, Clone, PartialEq)]
pub struct MapPairOptimum {
    pub distance: f64,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

/// All maps `0..n -> 0..m` in lexicographic order (first coordinate most significant).
fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; n];
    for _ in 0..total {
        out.push(cur.clone());
        for k in (0..n).rev() {
            cur[k] += 1;
            if cur[k] < m {
                break;
            }
            cur[k] = 0;
        }
    }
    out
}

/// Exact network distance as half the minimum over map pairs `(phi, psi)` of
/// `max(dis(phi), dis(psi), C_XY, C_YX)`. Ties keep the lexicographically
/// first pair (phi outer, psi inner).
pub fn network_distance_maps(
    x: &Network,
    y: &Network,
    budget: &SearchBudget,
) -> Result<MapPairOptimum> {
    let (nx, ny) = (x.size(), y.size());
    let required = (ny as u128)
        .checked_pow(nx as u32)
        .and_then(|a| (nx as u128).checked_pow(ny as u32).and_then(|b| a.checked_mul(b)))
        .unwrap_or(u128::MAX);
    if required > budget.max_map_pairs {
        return Err(Error::BudgetExceeded {
            what: "map-pair search",
            required,
            budget: budget.max_map_pairs,
        });
    }
    let phis = all_maps(nx, ny);
    let psis = all_maps(ny, nx);
    let dis_phi: Vec<f64> = phis.iter().map(|p| map_distortion(x, y, p)).collect();
    let dis_psi: Vec<f64> = psis.iter().map(|p| map_distortion(y, x, p)).collect();

    let mut best = f64::INFINITY;
    let mut best_pair = (0usize, 0usize);
    for (i, phi) in phis.iter().enumerate() {
        if dis_phi[i] >= best {
            continue;
        }
        for (j, psi) in psis.iter().enumerate() {
            let mut cost = dis_phi[i].max(dis_psi[j]);
            if cost >= best {
                continue;
            }
            cost = cost.max(codistortion_bounded(x, y, phi, psi, Codirection::XY, best));
            if cost >= best {
                continue;
            }
            cost = cost.max(codistortion_bounded(x, y, phi, psi, Codirection::YX, best));
            if cost < best {
                best = cost;
                best_pair = (i, j);
            }
        }
    }
    Ok(MapPairOptimum {
        distance: 0.5 * best,
        phi: phis[best_pair.0].clone(),
        psi: psis[best_pair.1].clone(),
    })
}

/// Exact network distance as half the minimum distortion over all
/// correspondences, by branch-and-bound over subsets of `X x Y`.
///
/// Independent of the map-pair formulation; the two must agree.
pub fn network_distance_correspondences(
    x: &Network,
    y: &Network,
    budget: &SearchBudget,
) -> Result<f64> {
    let (nx, ny) = (x.size(), y.size());
    let cells = nx * ny;
    if cells > budget.max_correspondence_cells {
        return Err(Error::BudgetExceeded {
            what: "correspondence search",
            required: 1u128.checked_shl(cells as u32).unwrap_or(u128::MAX),
            budget: 1u128
                .checked_shl(budget.max_correspondence_cells as u32)
                .unwrap_or(u128::MAX),
        });
    }
    // cost[p][q] for cells p = (x, y), q = (x', y'): |w_X(x,x') - w_Y(y,y')|
    let cost: Vec<Vec<f64>> = (0..cells)
        .map(|p| {
            (0..cells)
                .map(|q| {
                    let (a, b) = (p / ny, p % ny);
                    let (a2, b2) = (q / ny, q % ny);
                    (x.weight(a, a2) - y.weight(b, b2)).abs()
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        cost: &'a [Vec<f64>],
        nx: usize,
        ny: usize,
        chosen: Vec<usize>,
        row_hits: Vec<usize>,
        col_hits: Vec<usize>,
        best: f64,
    }

    impl Search<'_> {
        fn run(&mut self, cell: usize, dis: f64) {
            if dis >= self.best {
                return;
            }
            let cells = self.nx * self.ny;
            // A row is complete once we move past its last cell.
            if cell > 0 && cell.is_multiple_of(self.ny) && self.row_hits[cell / self.ny - 1] == 0 {
                return;
            }
            if cell == cells {
                if self.col_hits.iter().all(|&c| c > 0) {
                    self.best = dis;
                }
                return;
            }
            let (a, b) = (cell / self.ny, cell % self.ny);

            let mut with = dis.max(self.cost[cell][cell]);
            for &q in &self.chosen {
                with = with.max(self.cost[cell][q]).max(self.cost[q][cell]);
            }
            self.chosen.push(cell);
            self.row_hits[a] += 1;
            self.col_hits[b] += 1;
            self.run(cell + 1, with);
            self.chosen.pop();
            self.row_hits[a] -= 1;
            self.col_hits[b] -= 1;

            self.run(cell + 1, dis);
        }
    }

    let mut search = Search {
        cost: &cost,
        nx,
        ny,
        chosen: Vec::with_capacity(cells),
        row_hits: vec![0; nx],
        col_hits: vec![0; ny],
        best: f64::INFINITY,
    };
    search.run(0, 0.0);
    Ok(0.5 * search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single(w: f64) -> Network {
        Network::from_rows(vec![vec![w]]).unwrap()
    }

    /// Plain subset enumeration over all nonempty relations.
    fn brute_force_correspondences(x: &Network, y: &Network) -> f64 {
        let (nx, ny) = (x.size(), y.size());
        let cells = nx * ny;
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << cells) {
            let pairs: Vec<_> = (0..cells)
                .filter(|c| mask >> c & 1 == 1)
                .map(|c| (c / ny, c % ny))
                .collect();
            let r = Correspondence::new(pairs);
            if r.is_correspondence(nx, ny) {
                best = best.min(distortion_of_relation(x, y, &r).unwrap());
            }
        }
        0.5 * best
    }

    #[test]
    fn relation_distortion_examples() {
        let g3 = Network::cycle(3).unwrap();
        let diag = Correspondence::diagonal(3);
        assert_eq!(distortion_of_relation(&g3, &g3, &diag).unwrap(), 0.0);

        let mut rows = g3.rows();
        rows[1][2] += 0.5;
        let perturbed = Network::from_rows(rows).unwrap();
        assert_eq!(distortion_of_relation(&g3, &perturbed, &diag).unwrap(), 0.5);

        let r = Correspondence::new(vec![(0, 0)]);
        assert_eq!(distortion_of_relation(&single(0.0), &single(3.0), &r).unwrap(), 3.0);
        assert!(matches!(
            distortion_of_relation(&g3, &g3, &Correspondence::new(vec![])),
            Err(Error::EmptyRelation)
        ));
    }

    #[test]
    fn map_distortion_examples() {
        let g3 = Network::cycle(3).unwrap();
        assert_eq!(map_distortion(&g3, &g3, &[0, 1, 2]), 0.0);
        let y = Network::from_rows(vec![vec![0.7, 1.0], vec![3.0, 4.0]]).unwrap();
        let c = y.weight(1, 1);
        let expected = [0.0f64, 1.0, 2.0]
            .iter()
            .map(|w| (w - c).abs())
            .fold(0.0, f64::max);
        assert_eq!(map_distortion(&g3, &y, &[1, 1, 1]), expected);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = Network::random(&mut rng, 3, -1.0, 2.0);
            let y = Network::random(&mut rng, 3, -1.0, 2.0);
            let phi: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let mut oracle = 0.0f64;
            for a in 0..3 {
                for b in 0..3 {
                    oracle = oracle.max((x.weight(a, b) - y.weight(phi[a], phi[b])).abs());
                }
            }
            assert_eq!(map_distortion(&x, &y, &phi), oracle);
        }
    }

    #[test]
    fn codistortion_examples() {
        let g = Network::cycle(4).unwrap();
        let id = [0, 1, 2, 3];
        assert_eq!(codistortion(&g, &g, &id, &id, Codirection::XY), 0.0);
        assert_eq!(codistortion(&g, &g, &id, &id, Codirection::YX), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let x = Network::random(&mut rng, 3, -1.0, 2.0);
            let y = Network::random(&mut rng, 3, -1.0, 2.0);
            let phi: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let psi: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let (mut xy, mut yx) = (0.0f64, 0.0f64);
            for a in 0..3 {
                for b in 0..3 {
                    xy = xy.max((x.weight(a, psi[b]) - y.weight(phi[a], b)).abs());
                    yx = yx.max((y.weight(b, phi[a]) - x.weight(psi[b], a)).abs());
                }
            }
            assert_eq!(codistortion(&x, &y, &phi, &psi, Codirection::XY), xy);
            assert_eq!(codistortion(&x, &y, &phi, &psi, Codirection::YX), yx);

            let (xs, ys) = (x.max_symmetrize(), y.max_symmetrize());
            assert_eq!(
                codistortion(&xs, &ys, &phi, &psi, Codirection::XY),
                codistortion(&ys, &xs, &psi, &phi, Codirection::YX)
            );
        }
    }

    #[test]
    fn network_distance_examples() {
        let b = SearchBudget::default();
        let g3 = Network::cycle(3).unwrap();
        let opt = network_distance_maps(&g3, &g3, &b).unwrap();
        assert_eq!(opt.distance, 0.0);
        assert_eq!(network_distance_maps(&g3, &g3.transpose(), &b).unwrap().distance, 0.0);
        let s = network_distance_maps(&single(0.0), &single(3.0), &b).unwrap();
        assert_eq!(s.distance, 1.5);
        assert_eq!((s.phi, s.psi), (vec![0], vec![0]));

        let two_a = Network::from_rows(vec![vec![0., 1.], vec![1., 0.]]).unwrap();
        let two_b = Network::from_rows(vec![vec![0., 2.], vec![2., 0.]]).unwrap();
        assert_eq!(brute_force_correspondences(&two_a, &two_b), 0.5);
        assert_eq!(network_distance_correspondences(&two_a, &two_b, &b).unwrap(), 0.5);
        assert_eq!(network_distance_correspondences(&g3, &g3, &b).unwrap(), 0.0);
    }

    #[test]
    fn identity_is_first_optimum() {
        // Ties resolve to the first pair in lexicographic order.
        let x = Network::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let opt = network_distance_maps(&x, &x, &SearchBudget::default()).unwrap();
        assert_eq!(opt.distance, 0.0);
        assert_eq!((opt.phi, opt.psi), (vec![0, 0], vec![0, 0]));
    }

    #[test]
    fn budgets_are_enforced() {
        let big = Network::cycle(6).unwrap();
        let b = SearchBudget::default();
        assert!(network_distance_maps(&big, &big, &b).unwrap_err().is_budget());
        assert!(network_distance_correspondences(&big, &big, &b)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn branch_and_bound_matches_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b = SearchBudget::default();
        for _ in 0..60 {
            let nx = rng.gen_range(1..=3);
            let ny = rng.gen_range(1..=4);
            let x = Network::random(&mut rng, nx, -1.0, 2.0);
            let y = Network::random(&mut rng, ny, -1.0, 2.0);
            let fast = network_distance_correspondences(&x, &y, &b).unwrap();
            assert_eq!(fast, brute_force_correspondences(&x, &y));
        }
    }

    #[test]
    fn maps_and_correspondences_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b = SearchBudget::default();
        for _ in 0..60 {
            let nx = rng.gen_range(1..=4);
            let ny = rng.gen_range(1..=4);
            let x = Network::random(&mut rng, nx, -1.0, 2.0);
            let y = Network::random(&mut rng, ny, -1.0, 2.0);
            let m = network_distance_maps(&x, &y, &b).unwrap().distance;
            let c = network_distance_correspondences(&x, &y, &b).unwrap();
            assert!((m - c).abs() <= 1e-12, "{m} vs {c}");
        }
    }

    #[test]
    fn pseudometric_on_small_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let b = SearchBudget::default();
        let d = |p: &Network, q: &Network| network_distance_correspondences(p, q, &b).unwrap();
        for _ in 0..30 {
            let n: Vec<Network> = (0..3)
                .map(|_| {
                    let k = rng.gen_range(1..=3);
                    Network::random(&mut rng, k, 0.0, 3.0)
                })
                .collect();
            assert_eq!(d(&n[0], &n[1]), d(&n[1], &n[0]));
            assert!(d(&n[0], &n[2]) <= d(&n[0], &n[1]) + d(&n[1], &n[2]) + 1e-12);
            assert_eq!(d(&n[0], &n[0]), 0.0);
        }
    }

    #[test]
    fn transpose_distance_bounded_by_asymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let b = SearchBudget::default();
        for _ in 0..30 {
            let x = Network::random(&mut rng, 3, -1.0, 2.0);
            let mut asym = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    asym = asym.max((x.weight(i, j) - x.weight(j, i)).abs());
                }
            }
            let d = network_distance_maps(&x, &x.transpose(), &b).unwrap().distance;
            assert!(d <= 0.5 * asym + 1e-12);
        }
    }
}
