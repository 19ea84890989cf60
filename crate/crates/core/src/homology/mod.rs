//! Simplicial homology and persistence over the two-element field.
//!
//! Persistence uses the standard left-to-right column reduction with
//! lowest-one pivots. Columns are processed one dimension at a time from
//! the top down so that columns already known to be positive can be
//! cleared; this does not change the pairing.

mod diagram;

pub use diagram::{diagram_equal, DiagramPoint, PersistenceDiagram};

use std::collections::HashMap;

use crate::complex::{FilteredComplex, FilteredSimplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Symmetric difference of two sorted index lists, stored in `a`.
pub(crate) fn add_column(a: &mut Vec<usize>, b: &[usize]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

/// Boundary matrix of a complex in a fixed simplex order. Column `j` holds
/// the (sorted) positions of the codimension-one faces of simplex `j`.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl BoundaryMatrix {
    /// Builds from simplices listed in an order where faces precede cofaces.
    pub fn from_ordered<'a>(simplices: impl IntoIterator<Item = &'a Simplex>) -> Result<Self> {
        let simplices: Vec<&Simplex> = simplices.into_iter().collect();
        let index: HashMap<&Simplex, usize> =
            simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut columns = Vec::with_capacity(simplices.len());
        let mut dims = Vec::with_capacity(simplices.len());
        for (j, s) in simplices.iter().enumerate() {
            let mut col = Vec::with_capacity(s.dim() + 1);
            for face in s.boundary() {
                match index.get(&face) {
                    Some(&i) if i < j => col.push(i),
                    _ => return Err(Error::NotClosed(format!("{face} must precede {s}"))),
                }
            }
            col.sort_unstable();
            columns.push(col);
            dims.push(s.dim());
        }
        Ok(BoundaryMatrix { columns, dims })
    }

    pub fn from_filtration(f: &FilteredComplex) -> Result<Self> {
        Self::from_ordered(f.simplices().iter().map(|fs| &fs.simplex))
    }

    pub fn from_complex(k: &SimplicialComplex) -> Result<Self> {
        Self::from_ordered(k.simplices())
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// True when the boundary of every boundary vanishes.
    pub fn boundary_squared_vanishes(&self) -> bool {
        self.columns.iter().all(|col| {
            let mut acc = Vec::new();
            for &i in col {
                add_column(&mut acc, &self.columns[i]);
            }
            acc.is_empty()
        })
    }
}

/// Reduced matrix `R = D V` restricted to columns of dimension `<= top_dim`.
#[derive(Debug, Clone)]
pub struct Reduction {
    r: Vec<Vec<usize>>,
    v: Option<Vec<Vec<usize>>>,
    /// `pivot_of[row] = Some(col)` when reduced column `col` has lowest one `row`.
    pivot_of: Vec<Option<usize>>,
    dims: Vec<usize>,
    top_dim: usize,
}

impl Reduction {
    pub fn new(d: &BoundaryMatrix, top_dim: usize, track_v: bool) -> Self {
        Self::with_clearing(d, top_dim, track_v, true)
    }

    pub fn with_clearing(d: &BoundaryMatrix, top_dim: usize, track_v: bool, clearing: bool) -> Self {
        let n = d.columns.len();
        let mut r: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut v: Option<Vec<Vec<usize>>> = track_v.then(|| (0..n).map(|j| vec![j]).collect());
        let mut pivot_of: Vec<Option<usize>> = vec![None; n];
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top_dim + 1];
        for (j, &k) in d.dims.iter().enumerate() {
            if k <= top_dim {
                by_dim[k].push(j);
            }
        }
        for k in (0..=top_dim).rev() {
            for &j in &by_dim[k] {
                // Clearing: a simplex that is already a pivot is positive.
                if clearing && pivot_of[j].is_some() {
                    continue;
                }
                let mut col = d.columns[j].clone();
                while let Some(&low) = col.last() {
                    match pivot_of[low] {
                        Some(i) => {
                            add_column(&mut col, &r[i]);
                            if let Some(v) = v.as_mut() {
                                let vi = v[i].clone();
                                add_column(&mut v[j], &vi);
                            }
                        }
                        None => break,
                    }
                }
                if let Some(&low) = col.last() {
                    pivot_of[low] = Some(j);
                }
                r[j] = col;
            }
        }
        Reduction {
            r,
            v,
            pivot_of,
            dims: d.dims.clone(),
            top_dim,
        }
    }

    /// Pairs `(birth_index, death_index)`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pivot_of
            .iter()
            .enumerate()
            .filter_map(|(row, col)| col.map(|c| (row, c)))
    }

    /// Simplices of dimension `< top_dim` that are neither pivots nor
    /// reduced to a nonzero column: the essential classes.
    pub fn essential(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.r.len()).filter(move |&j| {
            self.dims[j] < self.top_dim && self.r[j].is_empty() && self.pivot_of[j].is_none()
        })
    }

    pub fn r_column(&self, j: usize) -> &[usize] {
        &self.r[j]
    }

    pub fn v_column(&self, j: usize) -> Option<&[usize]> {
        self.v.as_ref().map(|v| v[j].as_slice())
    }

    pub fn pivot_of(&self, row: usize) -> Option<usize> {
        self.pivot_of[row]
    }
}

/// Persistence diagram of a filtration in dimensions `0..=max_hom_dim`.
///
/// Unpaired simplices give points dying at `+inf`; zero-length pairs are
/// dropped. The filtration must hold every simplex up to dimension
/// `max_hom_dim + 1`, otherwise deaths would be silently lost.
pub fn compute_persistence(f: &FilteredComplex, max_hom_dim: usize) -> Result<PersistenceDiagram> {
    let needed = max_hom_dim + 1;
    if f.complete_through() < needed {
        return Err(Error::SkeletonTooSmall {
            requested: needed,
            available: f.complete_through(),
        });
    }
    diagram_in_order(f.simplices(), max_hom_dim, true)
}

/// Persistence of simplices in the given order, which must list faces
/// before cofaces with nondecreasing births. No skeleton check.
pub fn diagram_in_order(
    simplices: &[FilteredSimplex],
    max_hom_dim: usize,
    clearing: bool,
) -> Result<PersistenceDiagram> {
    let needed = max_hom_dim + 1;
    let d = BoundaryMatrix::from_ordered(simplices.iter().map(|fs| &fs.simplex))?;
    let red = Reduction::with_clearing(&d, needed, false, clearing);
    let births: Vec<f64> = simplices.iter().map(|fs| fs.birth).collect();
    let mut dgm = PersistenceDiagram::empty(max_hom_dim);
    for (b, dth) in red.pairs() {
        let k = d.dims[b];
        if k <= max_hom_dim {
            dgm.push(k, births[b], births[dth]);
        }
    }
    for j in red.essential() {
        let k = d.dims[j];
        if k <= max_hom_dim {
            dgm.push(k, births[j], f64::INFINITY);
        }
    }
    dgm.sort();
    Ok(dgm)
}

/// Rank over the two-element field of a matrix given by sparse columns.
pub fn z2_rank(columns: &[Vec<usize>], nrows: usize) -> usize {
    // Dense bit-packed Gaussian elimination; kept separate from the
    // persistence reduction.
    let words = nrows.div_ceil(64).max(1);
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; nrows];
    let mut rank = 0;
    for col in columns {
        let mut bits = vec![0u64; words];
        for &r in col {
            bits[r / 64] ^= 1 << (r % 64);
        }
        while let Some(top) = (0..words).rev().find(|&w| bits[w] != 0) {
            let bit = top * 64 + 63 - bits[top].leading_zeros() as usize;
            match &pivots[bit] {
                Some(p) => {
                    for (b, q) in bits.iter_mut().zip(p) {
                        *b ^= q;
                    }
                }
                None => {
                    pivots[bit] = Some(bits);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Betti numbers `b_0, ..., b_up_to` of a complex over the two-element field.
pub fn betti_numbers(k: &SimplicialComplex, up_to: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<usize>> = Vec::new();
    let mut local: Vec<usize> = Vec::with_capacity(k.len());
    for (i, s) in k.iter().enumerate() {
        if by_dim.len() <= s.dim() {
            by_dim.resize(s.dim() + 1, Vec::new());
        }
        local.push(by_dim[s.dim()].len());
        by_dim[s.dim()].push(i);
    }
    // rank of the boundary map from dimension d to d - 1
    let rank = |d: usize| -> usize {
        if d == 0 || d >= by_dim.len() {
            return 0;
        }
        let cols: Vec<Vec<usize>> = by_dim[d]
            .iter()
            .map(|&i| {
                k.simplices()[i]
                    .boundary()
                    .map(|f| local[k.index_of(&f).expect("closed complex")])
                    .collect()
            })
            .collect();
        z2_rank(&cols, by_dim[d - 1].len())
    };
    let ranks: Vec<usize> = (0..=up_to + 1).map(rank).collect();
    (0..=up_to)
        .map(|d| {
            let n = by_dim.get(d).map_or(0, Vec::len);
            n - ranks[d] - ranks[d + 1]
        })
        .collect()
}

/// Rank of `H_k(K) -> H_k(L)` induced by the inclusion `K ⊆ L`.
///
/// Runs persistence on the two-step filtration (`K` at 0, `L \ K` at 1) and
/// counts dimension-`k` classes born at 0 that survive past 1.
pub fn induced_map_rank(k: &SimplicialComplex, l: &SimplicialComplex, dim: usize) -> Result<usize> {
    let f = FilteredComplex::two_step(k, l, 0.0, 1.0)?;
    let dgm = compute_persistence(&f, dim)?;
    Ok(dgm
        .dim(dim)
        .iter()
        .filter(|p| p.birth == 0.0 && p.is_essential())
        .count())
}

/// A basis of `H_k(K)` with coordinates for arbitrary cycles.
///
/// The cycle space is spanned by vectors with distinct lowest simplices:
/// reduced boundaries of `(k+1)`-simplices, plus one cycle representative
/// per essential `k`-simplex. The essential ones are the homology
/// generators; reducing a cycle against this basis reads off its class.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    dim: usize,
    /// Basis vector with a given lowest index, and whether it is a generator.
    by_low: HashMap<usize, (Vec<usize>, Option<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl HomologyBasis {
    pub fn new(k: &SimplicialComplex, dim: usize) -> Result<Self> {
        let d = BoundaryMatrix::from_complex(k)?;
        let red = Reduction::new(&d, dim + 1, true);
        let mut by_low = HashMap::new();
        let mut generators = Vec::new();
        for j in 0..d.dims.len() {
            if d.dims[j] != dim {
                continue;
            }
            if let Some(c) = red.pivot_of(j) {
                by_low.insert(j, (red.r_column(c).to_vec(), None));
            } else if red.r_column(j).is_empty() {
                let cycle = red.v_column(j).expect("tracking V").to_vec();
                by_low.insert(j, (cycle.clone(), Some(generators.len())));
                generators.push(cycle);
            }
        }
        Ok(HomologyBasis {
            dim,
            by_low,
            generators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Generator cycles as sorted lists of simplex ids.
    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Coordinates of the class of a cycle (a sorted list of simplex ids).
    pub fn coordinates(&self, cycle: &[usize]) -> Result<Vec<bool>> {
        let mut z = cycle.to_vec();
        let mut coords = vec![false; self.generators.len()];
        while let Some(&low) = z.last() {
            let (vec, gen) = self
                .by_low
                .get(&low)
                .ok_or_else(|| Error::InvalidFiltration("chain is not a cycle".into()))?;
            add_column(&mut z, vec);
            if let Some(g) = gen {
                coords[*g] ^= true;
            }
        }
        Ok(coords)
    }
}

/// Rank of a dense boolean matrix given as columns.
pub fn bool_matrix_rank(columns: &[Vec<bool>]) -> usize {
    let nrows = columns.first().map_or(0, Vec::len);
    let sparse: Vec<Vec<usize>> = columns
        .iter()
        .map(|c| (0..nrows).filter(|&i| c[i]).collect())
        .collect();
    z2_rank(&sparse, nrows)
}
