use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A `(birth, death)` pair; `death` is `+inf` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> Self {
        DiagramPoint { birth, death }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

pub(crate) fn point_cmp(a: &DiagramPoint, b: &DiagramPoint) -> Ordering {
    a.birth
        .total_cmp(&b.birth)
        .then_with(|| a.death.total_cmp(&b.death))
}

/// Persistence diagram per homological dimension, each a sorted multiset
/// (repeated entries encode multiplicity). Zero-length pairs are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    dims: Vec<Vec<DiagramPoint>>,
}

impl PersistenceDiagram {
    /// An empty diagram covering dimensions `0..=max_dim`.
    pub fn empty(max_dim: usize) -> Self {
        PersistenceDiagram {
            dims: vec![Vec::new(); max_dim + 1],
        }
    }

    /// Adds a point unless it has zero persistence.
    pub fn push(&mut self, dim: usize, birth: f64, death: f64) {
        if !(birth < death) {
            return;
        }
        if self.dims.len() <= dim {
            self.dims.resize(dim + 1, Vec::new());
        }
        self.dims[dim].push(DiagramPoint { birth, death });
    }

    pub(crate) fn sort(&mut self) {
        for d in &mut self.dims {
            d.sort_by(point_cmp);
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = (usize, f64, f64)>) -> Self {
        let mut dgm = PersistenceDiagram::default();
        for (k, b, d) in points {
            dgm.push(k, b, d);
        }
        dgm.sort();
        dgm
    }

    /// Points in dimension `k`, sorted; empty past the computed range.
    pub fn dim(&self, k: usize) -> &[DiagramPoint] {
        self.dims.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of dimensions stored (`max_dim + 1`).
    pub fn dims(&self) -> usize {
        self.dims.len()
    }

    pub fn essential_count(&self, k: usize) -> usize {
        self.dim(k).iter().filter(|p| p.is_essential()).count()
    }

    /// `(birth, death)` pairs in dimension `k`, handy for assertions.
    pub fn pairs(&self, k: usize) -> Vec<(f64, f64)> {
        self.dim(k).iter().map(|p| (p.birth, p.death)).collect()
    }

    /// CSV with header `dim,birth,death`; `+inf` deaths are written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for (k, pts) in self.dims.iter().enumerate() {
            for p in pts {
                let death = if p.is_essential() {
                    "inf".to_string()
                } else {
                    format!("{}", p.death)
                };
                writeln!(out, "{k},{},{death}", p.birth).expect("string write");
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["dim", "birth", "death"] {
            return Err(Error::parse("diagram", "header must be `dim,birth,death`"));
        }
        let mut dgm = PersistenceDiagram::default();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::parse("diagram", format!("row {}: bad {what}", i + 1));
            let dim: usize = rec[0].parse().map_err(|_| bad("dim"))?;
            let birth: f64 = rec[1].parse().map_err(|_| bad("birth"))?;
            let death: f64 = match &rec[2] {
                "inf" | "+inf" | "Infinity" => f64::INFINITY,
                s => s.parse().map_err(|_| bad("death"))?,
            };
            if !birth.is_finite() || death.is_nan() || death == f64::NEG_INFINITY {
                return Err(bad("value"));
            }
            if birth > death {
                return Err(bad("point (birth after death)"));
            }
            if dgm.dims.len() <= dim {
                dgm.dims.resize(dim + 1, Vec::new());
            }
            dgm.push(dim, birth, death);
        }
        dgm.sort();
        Ok(dgm)
    }
}

/// Exact multiset equality of two diagrams in every dimension.
pub fn diagram_equal(a: &PersistenceDiagram, b: &PersistenceDiagram) -> bool {
    let dims = a.dims().max(b.dims());
    (0..dims).all(|k| a.dim(k) == b.dim(k))
}
