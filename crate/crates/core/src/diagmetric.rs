//! Bottleneck distance, distance matrices and single-linkage dendrograms.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homology::{DiagramPoint, PersistenceDiagram};

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn to_diagonal(p: &DiagramPoint) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Bipartite graph on `left x right` with a perfect matching test.
struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    owner: Vec<Option<usize>>,
    seen: Vec<bool>,
}

impl<'a> Matcher<'a> {
    fn perfect(adj: &'a [Vec<usize>], nright: usize) -> bool {
        let mut m = Matcher {
            adj,
            owner: vec![None; nright],
            seen: vec![false; nright],
        };
        (0..adj.len()).all(|u| {
            m.seen.iter_mut().for_each(|s| *s = false);
            m.augment(u)
        })
    }

    fn augment(&mut self, u: usize) -> bool {
        for &v in &self.adj[u] {
            if self.seen[v] {
                continue;
            }
            self.seen[v] = true;
            if self.owner[v].is_none_or(|w| self.augment(w)) {
                self.owner[v] = Some(u);
                return true;
            }
        }
        false
    }
}

/// Whether the finite points admit a matching of cost at most `t`.
fn feasible(a: &[DiagramPoint], b: &[DiagramPoint], t: f64) -> bool {
    let (m, n) = (a.len(), b.len());
    // left: a_0..a_m, then diagonal copies of b; right: b_0..b_n, then diagonal copies of a
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(m + n);
    for (i, p) in a.iter().enumerate() {
        let mut row: Vec<usize> = (0..n).filter(|&j| linf(p, &b[j]) <= t).collect();
        if to_diagonal(p) <= t {
            row.push(n + i);
        }
        adj.push(row);
    }
    for (j, q) in b.iter().enumerate() {
        let mut row = Vec::with_capacity(m + 1);
        if to_diagonal(q) <= t {
            row.push(j);
        }
        row.extend(n..n + m);
        adj.push(row);
    }
    Matcher::perfect(&adj, n + m)
}

/// Bottleneck distance between two single-dimension diagrams.
///
/// Points at `+inf` can only be matched among themselves; if their counts
/// differ the distance is `+inf`. The finite part is solved exactly by
/// binary search over the candidate costs.
pub fn bottleneck_distance(a: &[DiagramPoint], b: &[DiagramPoint]) -> f64 {
    let (ea, fa): (Vec<DiagramPoint>, Vec<DiagramPoint>) = a.iter().partition(|p| p.is_essential());
    let (eb, fb): (Vec<DiagramPoint>, Vec<DiagramPoint>) = b.iter().partition(|p| p.is_essential());
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    let mut ba: Vec<f64> = ea.iter().map(|p| p.birth).collect();
    let mut bb: Vec<f64> = eb.iter().map(|p| p.birth).collect();
    ba.sort_by(f64::total_cmp);
    bb.sort_by(f64::total_cmp);
    let essential = ba
        .iter()
        .zip(&bb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let mut candidates: Vec<f64> = vec![0.0];
    candidates.extend(fa.iter().chain(&fb).map(to_diagonal));
    for p in &fa {
        candidates.extend(fb.iter().map(|q| linf(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the largest candidate always works: everything goes to the diagonal
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&fa, &fb, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    essential.max(candidates[lo])
}

/// Bottleneck distance in dimension `dim` of two full diagrams.
pub fn bottleneck_at(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> f64 {
    bottleneck_distance(a.dim(dim), b.dim(dim))
}

fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

/// Labeled symmetric matrix of pairwise distances. `+inf` entries are
/// allowed as a sentinel for incomparable items.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare(format!(
                "distance matrix needs {n} rows of {n} entries"
            )));
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "distance matrix diagonal entry {i} is {}",
                    d[i][i]
                )));
            }
            for j in 0..n {
                if d[i][j].is_nan() || d[i][j] < 0.0 || d[i][j] != d[j][i] {
                    return Err(Error::InvalidConfig(format!(
                        "distance matrix entry ({i}, {j}) is not a symmetric nonnegative value"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { labels, d })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.d
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Header row of labels, then one row of values per label.
    pub fn to_csv(&self) -> String {
        let mut out = self.labels.join(",");
        out.push('\n');
        for row in &self.d {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let labels: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let mut d = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(j, cell)| {
                    cell.trim().parse::<f64>().map_err(|_| {
                        Error::parse(
                            "distance matrix",
                            format!("row {i}, column {j}: cannot parse {cell:?}"),
                        )
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            d.push(row);
        }
        DistanceMatrix::new(labels, d)
    }
}

/// Pairwise bottleneck distances in dimension `dim`, labeled `0..n`.
pub fn bottleneck_matrix(ds: &[PersistenceDiagram], dim: usize) -> DistanceMatrix {
    let n = ds.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| bottleneck_at(&ds[i], &ds[j], dim))
        .collect();
    let mut d = vec![vec![0.0; n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        d[i][j] = v;
        d[j][i] = v;
    }
    DistanceMatrix {
        labels: (0..n).map(|i| i.to_string()).collect(),
        d,
    }
}

/// One agglomeration step: clusters `a < b` join into `new_id` at `height`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub height: f64,
    pub a: usize,
    pub b: usize,
    pub new_id: usize,
}

impl Serialize for Merge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.height, self.a, self.b, self.new_id).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Merge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (height, a, b, new_id) = <(f64, usize, usize, usize)>::deserialize(d)?;
        Ok(Merge {
            height,
            a,
            b,
            new_id,
        })
    }
}

/// Merge tree over labeled leaves. Leaves have ids `0..n`; the `k`-th
/// merge creates id `n + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dendrogram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Flat clustering from all merges at height `<= h`. Each leaf gets the
    /// index of its cluster, numbered in order of first appearance.
    pub fn cut(&self, h: f64) -> Vec<usize> {
        let n = self.leaves.len();
        let mut parent: Vec<usize> = (0..n + self.merges.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for m in self.merges.iter().take_while(|m| m.height <= h) {
            parent[m.a] = m.new_id;
            parent[m.b] = m.new_id;
        }
        let mut names = std::collections::HashMap::new();
        (0..n)
            .map(|leaf| {
                let root = find(&mut parent, leaf);
                let next = names.len();
                *names.entry(root).or_insert(next)
            })
            .collect()
    }
}

/// Single-linkage clustering. At each step the two active clusters at the
/// smallest distance merge; ties go to the smallest `(a, b)` id pair.
pub fn single_linkage(d: &DistanceMatrix) -> Result<Dendrogram> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            if !d.get(i, j).is_finite() {
                return Err(Error::InfiniteDistance {
                    a: d.labels[i].clone(),
                    b: d.labels[j].clone(),
                });
            }
        }
    }
    // active[k] = (cluster id, distances to every other active cluster by slot)
    let mut ids: Vec<usize> = (0..n).collect();
    let mut dist: Vec<Vec<f64>> = d.d.clone();
    let mut alive = vec![true; n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for j in (i + 1..n).filter(|&j| alive[j]) {
                let (a, b) = if ids[i] < ids[j] { (ids[i], ids[j]) } else { (ids[j], ids[i]) };
                let cand = (dist[i][j], a, b, i, j);
                let better = match best {
                    None => true,
                    Some((h, ba, bb, _, _)) => {
                        cand.0 < h || (cand.0 == h && (a, b) < (ba, bb))
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (height, a, b, i, j) = best.expect("two active clusters");
        for s in 0..n {
            let v = dist[i][s].min(dist[j][s]);
            dist[i][s] = v;
            dist[s][i] = v;
        }
        dist[i][i] = 0.0;
        alive[j] = false;
        ids[i] = n + k;
        merges.push(Merge {
            height,
            a,
            b,
            new_id: n + k,
        });
    }
    Ok(Dendrogram {
        leaves: d.labels.clone(),
        merges,
    })
}
