//! Filtered complexes built from networks and relations.
//!
//! Births are exact critical values computed from the input weights, never
//! snapped to a grid:
//!
//! * Dowker sink: `min_{x'} max_{x in s} w(x, x')`, the least `delta` at
//!   which the simplex has a common `delta`-sink;
//! * Dowker source: `min_{x'} max_{x in s} w(x', x)`;
//! * Rips: `max_{x, x' in s} w(x, x')` over ordered pairs, diagonal included.

use std::fmt;

use rand::Rng;

use crate::complex::{
    filtration_cmp, subsets_up_to, FilteredComplex, FilteredSimplex, Simplex, SimplicialComplex,
};
use crate::error::{Error, Result};
use crate::network::Network;

/// Default dimension cap for network filtrations (enough for `H_0` and `H_1`).
pub const DEFAULT_MAX_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    Rips,
    DowkerSink,
    DowkerSource,
}

impl FiltrationKind {
    pub fn build(self, x: &Network, max_dim: usize) -> FilteredComplex {
        match self {
            FiltrationKind::Rips => rips_filtration(x, max_dim),
            FiltrationKind::DowkerSink => dowker_sink_filtration(x, max_dim),
            FiltrationKind::DowkerSource => dowker_source_filtration(x, max_dim),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FiltrationKind::Rips => "rips",
            FiltrationKind::DowkerSink => "dowker-sink",
            FiltrationKind::DowkerSource => "dowker-source",
        }
    }
}

impl std::str::FromStr for FiltrationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rips" => Ok(FiltrationKind::Rips),
            "dowker-sink" | "dowker" | "sink" => Ok(FiltrationKind::DowkerSink),
            "dowker-source" | "source" => Ok(FiltrationKind::DowkerSource),
            other => Err(Error::InvalidConfig(format!("unknown filtration `{other}`"))),
        }
    }
}

/// Depth-first enumeration of all vertex subsets of size `<= max_dim + 1`,
/// threading a per-simplex state from parent to child.
fn enumerate_filtration<S>(
    n: usize,
    max_dim: usize,
    root: impl Fn(usize) -> S,
    extend: impl Fn(&S, &[usize], usize) -> S,
    birth: impl Fn(&S) -> f64,
) -> FilteredComplex {
    fn rec<S>(
        n: usize,
        cap: usize,
        verts: &mut Vec<usize>,
        state: &S,
        out: &mut Vec<FilteredSimplex>,
        extend: &impl Fn(&S, &[usize], usize) -> S,
        birth: &impl Fn(&S) -> f64,
    ) {
        let last = *verts.last().expect("nonempty");
        for v in last + 1..n {
            let child = extend(state, verts, v);
            verts.push(v);
            out.push(FilteredSimplex {
                simplex: Simplex::from_sorted(verts.clone()),
                birth: birth(&child),
            });
            if verts.len() < cap {
                rec(n, cap, verts, &child, out, extend, birth);
            }
            verts.pop();
        }
    }

    let cap = max_dim + 1;
    let mut out = Vec::new();
    for v in 0..n {
        let s = root(v);
        out.push(FilteredSimplex {
            simplex: Simplex::vertex(v),
            birth: birth(&s),
        });
        if cap > 1 {
            let mut verts = vec![v];
            rec(n, cap, &mut verts, &s, &mut out, &extend, &birth);
        }
    }
    out.sort_by(filtration_cmp);
    // The complex is complete whenever the cap reaches the full simplex.
    let skeleton = if max_dim + 1 >= n { None } else { Some(max_dim) };
    FilteredComplex::from_sorted_unchecked(out, skeleton)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Dowker sink filtration: `s` is present at `delta` when some node `x'`
/// has `w(x, x') <= delta` for every `x` in `s`.
pub fn dowker_sink_filtration(x: &Network, max_dim: usize) -> FilteredComplex {
    enumerate_filtration(
        x.size(),
        max_dim,
        |v| x.row(v).to_vec(),
        |state, _, v| {
            state
                .iter()
                .zip(x.row(v))
                .map(|(a, b)| a.max(*b))
                .collect::<Vec<f64>>()
        },
        |state| min_of(state),
    )
}

/// Dowker source filtration: `s` is present at `delta` when some node `x'`
/// has `w(x', x) <= delta` for every `x` in `s`.
pub fn dowker_source_filtration(x: &Network, max_dim: usize) -> FilteredComplex {
    let n = x.size();
    enumerate_filtration(
        n,
        max_dim,
        |v| (0..n).map(|src| x.weight(src, v)).collect::<Vec<f64>>(),
        |state, _, v| {
            state
                .iter()
                .enumerate()
                .map(|(src, a)| a.max(x.weight(src, v)))
                .collect::<Vec<f64>>()
        },
        |state| min_of(state),
    )
}

/// Rips filtration of a network; self-weights take part in the max.
pub fn rips_filtration(x: &Network, max_dim: usize) -> FilteredComplex {
    enumerate_filtration(
        x.size(),
        max_dim,
        |v| x.weight(v, v),
        |&prev, verts, v| {
            verts.iter().fold(prev.max(x.weight(v, v)), |acc, &u| {
                acc.max(x.weight(u, v)).max(x.weight(v, u))
            })
        },
        |&b| b,
    )
}

/// All simplices born at or before `delta`.
pub fn complex_at(f: &FilteredComplex, delta: f64) -> SimplicialComplex {
    f.complex_at(delta)
}

/// A binary relation between ordered sets `0..nrows` and `0..ncols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    nrows: usize,
    ncols: usize,
    incidence: Vec<bool>,
}

impl Relation {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidRelation("ragged incidence matrix".into()));
        }
        Ok(Relation {
            nrows,
            ncols,
            incidence: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let incidence = (0..nrows)
            .flat_map(|x| (0..ncols).map(move |y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Relation {
            nrows,
            ncols,
            incidence,
        }
    }

    pub fn full(nrows: usize, ncols: usize) -> Self {
        Self::from_fn(nrows, ncols, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |x, y| x == y)
    }

    /// `R_{delta,X} = {(x, x') : w(x, x') <= delta}`.
    pub fn from_network(x: &Network, delta: f64) -> Self {
        let n = x.size();
        Self::from_fn(n, n, |a, b| x.weight(a, b) <= delta)
    }

    /// Each pair is included independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, nrows: usize, ncols: usize, p: f64) -> Self {
        let incidence = (0..nrows * ncols).map(|_| rng.gen_bool(p)).collect();
        Relation {
            nrows,
            ncols,
            incidence,
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.incidence[x * self.ncols + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.incidence[x * self.ncols + y] = value;
    }

    pub fn is_empty(&self) -> bool {
        !self.incidence.iter().any(|&b| b)
    }

    pub fn pair_count(&self) -> usize {
        self.incidence.iter().filter(|&&b| b).count()
    }

    pub fn transpose(&self) -> Relation {
        Relation::from_fn(self.ncols, self.nrows, |y, x| self.get(x, y))
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && self
                .incidence
                .iter()
                .zip(&other.incidence)
                .all(|(&a, &b)| !a || b)
    }

    /// Columns related to `x`.
    pub fn row_set(&self, x: usize) -> Vec<usize> {
        (0..self.ncols).filter(|&y| self.get(x, y)).collect()
    }

    /// Rows related to `y`.
    pub fn col_set(&self, y: usize) -> Vec<usize> {
        (0..self.nrows).filter(|&x| self.get(x, y)).collect()
    }

    /// Text format: `nrows ncols` on the first line, then one row of `0`/`1`
    /// entries per line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("relation", "empty input"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse("relation", "bad header")))
            .collect::<Result<_>>()?;
        let [nrows, ncols] = dims[..] else {
            return Err(Error::parse("relation", "header must be `nrows ncols`"));
        };
        let mut rows = Vec::with_capacity(nrows);
        for (i, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::parse(
                        "relation",
                        format!("row {i}: entry `{other}` is not 0 or 1"),
                    )),
                })
                .collect::<Result<Vec<bool>>>()?;
            if row.len() != ncols {
                return Err(Error::parse(
                    "relation",
                    format!("row {i} has {} entries, expected {ncols}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != nrows {
            return Err(Error::parse(
                "relation",
                format!("expected {nrows} rows, found {}", rows.len()),
            ));
        }
        Ok(Relation::from_fn(nrows, ncols, |x, y| rows[x][y]))
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.nrows, self.ncols)?;
        for x in 0..self.nrows {
            let row: Vec<&str> = (0..self.ncols)
                .map(|y| if self.get(x, y) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Simplices `s` of rows admitting a common related column, up to `max_dim`.
fn witness_complex(r: &Relation, max_dim: Option<usize>) -> SimplicialComplex {
    fn rec(
        r: &Relation,
        start: usize,
        cap: usize,
        verts: &mut Vec<usize>,
        witnesses: &[usize],
        out: &mut Vec<Simplex>,
    ) {
        for x in start..r.nrows() {
            let next: Vec<usize> = witnesses.iter().copied().filter(|&y| r.get(x, y)).collect();
            if next.is_empty() {
                continue;
            }
            verts.push(x);
            out.push(Simplex::from_sorted(verts.clone()));
            if verts.len() < cap {
                rec(r, x + 1, cap, verts, &next, out);
            }
            verts.pop();
        }
    }
    let cap = max_dim.map_or(usize::MAX, |d| d + 1);
    let all: Vec<usize> = (0..r.ncols()).collect();
    let mut out = Vec::new();
    rec(r, 0, cap, &mut Vec::new(), &all, &mut out);
    SimplicialComplex::new(out).expect("witness complexes are closed under faces")
}

/// The Dowker pair `(E_R, F_R)`: `E_R` on rows, simplices sharing a related
/// column; `F_R` on columns, simplices sharing a related row.
pub fn dowker_pair_from_relation(
    r: &Relation,
    max_dim: Option<usize>,
) -> Result<(SimplicialComplex, SimplicialComplex)> {
    if r.is_empty() {
        return Err(Error::EmptyRelation);
    }
    Ok((witness_complex(r, max_dim), witness_complex(&r.transpose(), max_dim)))
}

/// Nerve of the closed arcs of radius `r` around the `n` points `i / n` on
/// the circle of circumference 1, up to `max_dim`. A set of points is a
/// simplex when it fits in a closed arc of length `2r`.
///
/// When `2rn` is within `1e-9` of an integer the comparison is done in exact
/// integer arithmetic.
pub fn cech_circle_complex(n: usize, r: f64, max_dim: Option<usize>) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::CycleTooSmall(n));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidConfig(format!("radius must be >= 0, got {r}")));
    }
    let scaled = 2.0 * r * n as f64;
    let rounded = scaled.round();
    let fits: Box<dyn Fn(usize) -> bool> = if (scaled - rounded).abs() <= 1e-9 {
        let k = rounded as usize;
        Box::new(move |span: usize| span <= k)
    } else {
        Box::new(move |span: usize| (span as f64) <= scaled + 1e-12)
    };
    let cap = max_dim.map_or(n, |d| d + 1);
    let points: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    subsets_up_to(&points, cap, &mut |s| {
        // Arc length (in steps of 1/n) of the shortest arc containing s.
        let mut max_gap = n - s[s.len() - 1] + s[0];
        for w in s.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        if fits(n - max_gap) {
            out.push(Simplex::from_sorted(s.to_vec()));
        }
    });
    SimplicialComplex::new(out)
}
