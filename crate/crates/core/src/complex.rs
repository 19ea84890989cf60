//! Simplices, finite simplicial complexes and filtered complexes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A nonempty, strictly increasing list of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts and deduplicates `vertices`. Panics on an empty list.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a simplex needs at least one vertex");
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    #[inline]
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// Codimension-one faces, the `i`-th omitting vertex `i`.
    pub fn boundary(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        (0..if k > 1 { k } else { 0 }).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Every nonempty face, the simplex itself included.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Simplex::new(v)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Canonical order for unfiltered simplices: dimension, then lexicographic.
pub fn canonical_cmp(a: &Simplex, b: &Simplex) -> Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.cmp(b))
}

/// A finite simplicial complex stored in canonical order, with an index.
///
/// The position of a simplex in [`simplices`](Self::simplices) is its id;
/// barycentric subdivision uses these ids as vertex names, so the order is
/// a linear extension of face inclusion.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Validates face closure; duplicates are merged.
    pub fn new(simplices: Vec<Simplex>) -> Result<Self> {
        let c = Self::build(simplices);
        for s in &c.simplices {
            if let Some(missing) = s.boundary().find(|f| !c.index.contains_key(f)) {
                return Err(Error::NotClosed(format!("{missing} is a face of {s}")));
            }
        }
        Ok(c)
    }

    /// Closes the given simplices under faces.
    pub fn from_maximal<I: IntoIterator<Item = Simplex>>(generators: I) -> Self {
        let mut all = std::collections::HashSet::new();
        for g in generators {
            if all.contains(&g) {
                continue;
            }
            for f in g.faces() {
                all.insert(f);
            }
        }
        Self::build(all.into_iter().collect())
    }

    fn build(mut simplices: Vec<Simplex>) -> Self {
        simplices.sort_by(canonical_cmp);
        simplices.dedup();
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        SimplicialComplex { simplices, index }
    }

    pub fn empty() -> Self {
        Self::build(Vec::new())
    }

    /// All nonempty subsets of `vertices` of size at most `max_dim + 1`.
    pub fn full_simplex(vertices: &[usize], max_dim: Option<usize>) -> Self {
        let cap = max_dim.map_or(vertices.len(), |d| d + 1);
        let mut out = Vec::new();
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        subsets_up_to(&sorted, cap, &mut |s| out.push(Simplex::from_sorted(s.to_vec())));
        Self::build(out)
    }

    #[inline]
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices
            .iter()
            .take_while(|s| s.dim() == 0)
            .map(|s| s.0[0])
            .collect()
    }

    pub fn count_in_dim(&self, k: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == k).count()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        Self::build(self.simplices.iter().filter(|s| s.dim() <= k).cloned().collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Simplex> {
        self.simplices.iter()
    }
}

impl<'a> IntoIterator for &'a SimplicialComplex {
    type Item = &'a Simplex;
    type IntoIter = std::slice::Iter<'a, Simplex>;
    fn into_iter(self) -> Self::IntoIter {
        self.simplices.iter()
    }
}

/// Calls `visit` with every nonempty subset of the sorted slice `items` of
/// size at most `cap`, in lexicographic DFS order.
pub(crate) fn subsets_up_to(items: &[usize], cap: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], start: usize, cap: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        for i in start..items.len() {
            cur.push(items[i]);
            visit(cur);
            if cur.len() < cap {
                rec(items, i + 1, cap, cur, visit);
            }
            cur.pop();
        }
    }
    if cap > 0 {
        rec(items, 0, cap, &mut Vec::new(), visit);
    }
}

/// A simplex together with the parameter at which it enters a filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub birth: f64,
}

/// Filtration order: birth, then dimension, then lexicographic vertices.
pub fn filtration_cmp(a: &FilteredSimplex, b: &FilteredSimplex) -> Ordering {
    a.birth
        .total_cmp(&b.birth)
        .then_with(|| canonical_cmp(&a.simplex, &b.simplex))
}

/// A finite filtered simplicial complex in canonical filtration order.
///
/// `skeleton` records the dimension cap used at construction: `Some(d)`
/// means simplices above dimension `d` may have been left out, `None`
/// means the complex is complete.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    simplices: Vec<FilteredSimplex>,
    skeleton: Option<usize>,
}

impl FilteredComplex {
    /// Sorts into canonical order and validates the filtration invariants:
    /// finite births, no duplicates, face closure, monotone births.
    pub fn new(mut simplices: Vec<FilteredSimplex>, skeleton: Option<usize>) -> Result<Self> {
        simplices.sort_by(filtration_cmp);
        let fc = FilteredComplex {
            simplices,
            skeleton,
        };
        fc.validate()?;
        Ok(fc)
    }

    pub(crate) fn from_sorted_unchecked(
        simplices: Vec<FilteredSimplex>,
        skeleton: Option<usize>,
    ) -> Self {
        debug_assert!(simplices
            .windows(2)
            .all(|w| filtration_cmp(&w[0], &w[1]) != Ordering::Greater));
        FilteredComplex {
            simplices,
            skeleton,
        }
    }

    /// Births from a map; used by two-step filtrations `K` at `lo`, `L \ K` at `hi`.
    pub fn two_step(k: &SimplicialComplex, l: &SimplicialComplex, lo: f64, hi: f64) -> Result<Self> {
        if !k.is_subcomplex_of(l) {
            return Err(Error::NotSubcomplex);
        }
        let simplices = l
            .iter()
            .map(|s| FilteredSimplex {
                simplex: s.clone(),
                birth: if k.contains(s) { lo } else { hi },
            })
            .collect();
        Self::new(simplices, None)
    }

    /// Every simplex at a single birth value.
    pub fn constant(k: &SimplicialComplex, birth: f64) -> Self {
        let mut simplices: Vec<_> = k
            .iter()
            .map(|s| FilteredSimplex {
                simplex: s.clone(),
                birth,
            })
            .collect();
        simplices.sort_by(filtration_cmp);
        FilteredComplex {
            simplices,
            skeleton: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut births: HashMap<&Simplex, f64> = HashMap::with_capacity(self.simplices.len());
        for fs in &self.simplices {
            if !fs.birth.is_finite() {
                return Err(Error::InvalidFiltration(format!(
                    "{} has non-finite birth",
                    fs.simplex
                )));
            }
            if births.insert(&fs.simplex, fs.birth).is_some() {
                return Err(Error::InvalidFiltration(format!(
                    "{} listed twice",
                    fs.simplex
                )));
            }
        }
        for fs in &self.simplices {
            for face in fs.simplex.boundary() {
                match births.get(&face) {
                    None => {
                        return Err(Error::InvalidFiltration(format!(
                            "{face} is a face of {} but is missing",
                            fs.simplex
                        )))
                    }
                    Some(&b) if b > fs.birth => {
                        return Err(Error::InvalidFiltration(format!(
                            "{face} born at {b} after its coface {} at {}",
                            fs.simplex, fs.birth
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn skeleton(&self) -> Option<usize> {
        self.skeleton
    }

    /// Highest dimension for which every simplex is present.
    pub fn complete_through(&self) -> usize {
        self.skeleton.unwrap_or(usize::MAX)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(|fs| fs.simplex.dim()).max()
    }

    /// Largest birth value; the complex is constant from here on.
    pub fn stabilization_value(&self) -> Option<f64> {
        self.simplices.last().map(|fs| fs.birth)
    }

    /// The sublevel complex: every simplex with birth `<= delta`.
    pub fn complex_at(&self, delta: f64) -> SimplicialComplex {
        SimplicialComplex::build(
            self.simplices
                .iter()
                .take_while(|fs| fs.birth <= delta)
                .map(|fs| fs.simplex.clone())
                .collect(),
        )
    }

    pub fn birth_of(&self, s: &Simplex) -> Option<f64> {
        self.simplices
            .iter()
            .find(|fs| &fs.simplex == s)
            .map(|fs| fs.birth)
    }

    /// Text dump, one `birth dim v0 v1 ... vk` line per simplex, in filtration order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for fs in &self.simplices {
            out.push_str(&format!("{} {}", fs.birth, fs.simplex.dim()));
            for v in fs.simplex.vertices() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut simplices = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |d: &str| Error::parse("filtration", format!("line {}: {d}", ln + 1));
            let mut toks = line.split_whitespace();
            let birth: f64 = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad birth"))?;
            let dim: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad dimension"))?;
            let verts = toks
                .map(|t| t.parse::<usize>().map_err(|_| bad("bad vertex")))
                .collect::<Result<Vec<_>>>()?;
            if verts.len() != dim + 1 {
                return Err(bad("vertex count does not match dimension"));
            }
            let s = Simplex::new(verts);
            if s.dim() != dim {
                return Err(bad("repeated vertex"));
            }
            simplices.push(FilteredSimplex { simplex: s, birth });
        }
        Self::new(simplices, None)
    }
}
