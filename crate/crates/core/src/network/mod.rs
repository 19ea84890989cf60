//! Weighted directed networks.
//!
//! A network is a finite node set with an arbitrary real weight for every
//! ordered pair of nodes, diagonal included. No symmetry, triangle
//! inequality, zero diagonal or sign constraint is assumed. The order of
//! the label list is the total order on nodes used by every downstream
//! construction (simplex orientation, least-vertex maps, tie breaking).

mod distance;
mod io;

pub use distance::{
    codistortion, distortion_of_relation, map_distortion, network_distance_correspondences,
    network_distance_maps, Codirection, Correspondence, MapPairOptimum, SearchBudget,
};
pub use io::NetworkFormat;

use rand::Rng;
use std::collections::HashSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    /// Row-major, `weights[i * n + j]` is the weight from node `i` to node `j`.
    weights: Vec<f64>,
}

impl Network {
    /// Builds a network from labels and a row-major square matrix.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if rows.len() != n {
            return Err(Error::NotSquare(format!(
                "{} rows for {n} labels",
                rows.len()
            )));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NotSquare(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        let weights: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_flat(labels, weights)
    }

    /// Builds a network with labels `x1, ..., xn`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = default_labels(rows.len());
        Self::new(labels, rows)
    }

    pub(crate) fn from_flat(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        debug_assert_eq!(weights.len(), n * n);
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(pos) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteWeight {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Network { labels, weights })
    }

    /// The directed cycle network on `n` nodes: `w(x_i, x_j) = (j - i) mod n`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        let weights = (0..n)
            .flat_map(|i| (0..n).map(move |j| ((j + n - i) % n) as f64))
            .collect();
        Self::from_flat(default_labels(n), weights)
    }

    /// Random network with weights drawn uniformly from `[lo, hi)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Self {
        let weights = (0..n * n).map(|_| rng.gen_range(lo..hi)).collect();
        Self::from_flat(default_labels(n), weights).expect("random weights are finite")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn weight(&self, from: usize, to: usize) -> f64 {
        self.weights[from * self.size() + to]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.size();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.size()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn map_weights(&self, f: impl Fn(usize, usize) -> f64) -> Network {
        let n = self.size();
        let weights = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| f(i, j));
        Network {
            labels: self.labels.clone(),
            weights: weights.collect(),
        }
    }

    /// Reverses every edge: `w'(i, j) = w(j, i)`.
    pub fn transpose(&self) -> Network {
        self.map_weights(|i, j| self.weight(j, i))
    }

    /// `w'(i, j) = max(w(i, j), w(j, i))`.
    pub fn max_symmetrize(&self) -> Network {
        self.map_weights(|i, j| self.weight(i, j).max(self.weight(j, i)))
    }

    /// Exchanges the two directed weights between `z` and `z2`; everything
    /// else, diagonals included, is left alone.
    pub fn pair_swap(&self, z: &str, z2: &str) -> Result<Network> {
        if z == z2 {
            return Err(Error::SwapSameNode(z.to_string()));
        }
        let a = self.index_of(z)?;
        let b = self.index_of(z2)?;
        Ok(self.pair_swap_indices(a, b))
    }

    pub fn pair_swap_indices(&self, a: usize, b: usize) -> Network {
        let mut out = self.clone();
        let n = self.size();
        out.weights.swap(a * n + b, b * n + a);
        out
    }

    /// Adds `c` to every weight.
    pub fn shifted(&self, c: f64) -> Network {
        self.map_weights(|i, j| self.weight(i, j) + c)
    }

    /// Affine min-max rescaling of all entries (diagonal included) into
    /// `[0, 1]`. A constant network maps to all zeros.
    pub fn normalized_unit(&self) -> Network {
        let (lo, hi) = self
            .weights
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
                (lo.min(w), hi.max(w))
            });
        let span = hi - lo;
        if span <= 0.0 {
            return self.map_weights(|_, _| 0.0);
        }
        self.map_weights(|i, j| ((self.weight(i, j) - lo) / span).clamp(0.0, 1.0))
    }

    /// Rounds every weight up to the next multiple of `step`, which is the
    /// filtration seen when complexes are only sampled on a `step` grid.
    pub fn snapped_up(&self, step: f64) -> Network {
        self.map_weights(|i, j| {
            let k = (self.weight(i, j) / step - 1e-9).ceil();
            k * step
        })
    }

    /// Lowers each self-weight to the smallest weight in its row and
    /// column, so every node enters a Dowker filtration at its own
    /// self-weight.
    pub fn with_minimal_diagonal(&self) -> Network {
        let n = self.size();
        self.map_weights(|i, j| {
            if i != j {
                return self.weight(i, j);
            }
            (0..n).fold(f64::INFINITY, |m, k| m.min(self.weight(i, k)).min(self.weight(k, i)))
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.weight(i, j) == self.weight(j, i)))
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn fig2() -> Network {
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

    fn arb_network(max_n: usize) -> impl Strategy<Value = Network> {
        (1..=max_n)
            .prop_flat_map(|n| proptest::collection::vec(-5.0f64..5.0, n * n))
            .prop_map(|w| {
                let n = (w.len() as f64).sqrt() as usize;
                Network::from_flat(default_labels(n), w).unwrap()
            })
    }

    #[test]
    fn transpose_fig2() {
        let t = fig2().transpose();
        assert_eq!(t.weight(0, 2), 1.0);
        assert_eq!(t.weight(2, 0), 2.0);
        assert_eq!(t.labels(), fig2().labels());
    }

    #[test]
    fn symmetrize_fig2() {
        let s = fig2().max_symmetrize();
        assert_eq!(s.weight(0, 2), 2.0);
        assert_eq!(s.weight(2, 0), 2.0);
        assert!(s.is_symmetric());
    }

    #[test]
    fn cycle_three() {
        let g = Network::cycle(3).unwrap();
        assert_eq!(g.rows(), vec![vec![0., 1., 2.], vec![2., 0., 1.], vec![1., 2., 0.]]);
        let g4 = Network::cycle(4).unwrap();
        assert_eq!(g4.weight(0, 2), 2.0);
        assert_eq!(g4.weight(2, 0), 2.0);
        assert!(matches!(Network::cycle(2), Err(Error::CycleTooSmall(2))));
    }

    #[test]
    fn cycle_rows_are_shifts() {
        for n in 3..12 {
            let g = Network::cycle(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(g.weight(i, j), g.weight(0, (j + n - i) % n));
                    if i != j {
                        assert_eq!(g.weight(i, j) + g.weight(j, i), n as f64);
                    }
                }
            }
        }
    }

    #[test]
    fn swap_errors() {
        let x = fig2();
        assert!(matches!(x.pair_swap("a", "a"), Err(Error::SwapSameNode(_))));
        assert!(matches!(x.pair_swap("a", "q"), Err(Error::UnknownLabel(_))));
        let sym = x.max_symmetrize();
        assert_eq!(sym.pair_swap("a", "c").unwrap(), sym);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Network::from_rows(vec![]), Err(Error::EmptyNetwork)));
        assert!(matches!(
            Network::new(vec!["a".into(), "a".into()], vec![vec![0., 0.], vec![0., 0.]]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            Network::from_rows(vec![vec![0., 1.], vec![0.]]),
            Err(Error::NotSquare(_))
        ));
        assert!(matches!(
            Network::from_rows(vec![vec![0., f64::INFINITY], vec![0., 0.]]),
            Err(Error::NonFiniteWeight { row: 0, col: 1 })
        ));
    }

    #[test]
    fn normalization_and_snapping() {
        let x = fig2().normalized_unit();
        assert_eq!(x.weight(0, 0), 0.0);
        assert_eq!(x.weight(0, 2), 1.0);
        assert_eq!(x.weight(1, 1), 1.0 / 3.0);
        let s = Network::from_rows(vec![vec![0.011, 0.02], vec![0.0, 0.5]])
            .unwrap()
            .snapped_up(0.01);
        assert_eq!(s.weight(0, 0), 0.02);
        assert_eq!(s.weight(0, 1), 0.02);
        assert_eq!(s.weight(1, 0), 0.0);
    }

    proptest! {
        #[test]
        fn transpose_is_involution(x in arb_network(6)) {
            prop_assert_eq!(x.transpose().transpose(), x);
        }

        #[test]
        fn symmetrize_idempotent_and_transpose_blind(x in arb_network(6)) {
            let s = x.max_symmetrize();
            prop_assert_eq!(s.max_symmetrize(), s.clone());
            prop_assert_eq!(x.transpose().max_symmetrize(), s);
        }

        #[test]
        fn swap_is_involution(x in arb_network(6), a in 0usize..6, b in 0usize..6) {
            let n = x.size();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            prop_assert_eq!(x.pair_swap_indices(a, b).pair_swap_indices(a, b), x);
        }
    }
}
