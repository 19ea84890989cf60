//! Dowker complexes of relations, nerves of covers, barycentric subdivision
//! and the simplicial maps relating them, all checked at the level of
//! simplicial homology.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{FilteredComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtration::{dowker_pair_from_relation, Relation};
use crate::homology::{
    add_column, betti_numbers, compute_persistence, diagram_equal, induced_map_rank,
    HomologyBasis,
};

/// Largest host complex (in simplices) that may be subdivided twice.
pub const SECOND_SUBDIVISION_BUDGET: usize = 50;

/// A vertex map between two complexes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialMap {
    map: BTreeMap<usize, usize>,
}

impl SimplicialMap {
    pub fn new(map: BTreeMap<usize, usize>) -> Self {
        SimplicialMap { map }
    }

    pub fn from_fn(vertices: impl IntoIterator<Item = usize>, f: impl Fn(usize) -> usize) -> Self {
        SimplicialMap {
            map: vertices.into_iter().map(|v| (v, f(v))).collect(),
        }
    }

    pub fn constant(vertices: impl IntoIterator<Item = usize>, target: usize) -> Self {
        Self::from_fn(vertices, |_| target)
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.map.get(&v).copied()
    }

    pub fn as_map(&self) -> &BTreeMap<usize, usize> {
        &self.map
    }

    /// Image vertex set of a simplex.
    pub fn image(&self, s: &Simplex) -> Result<Simplex> {
        s.vertices()
            .iter()
            .map(|&v| {
                self.get(v)
                    .ok_or_else(|| Error::NotSimplicial(format!("vertex {v} is not mapped")))
            })
            .collect::<Result<Vec<usize>>>()
            .map(Simplex::new)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        let map = self
            .map
            .iter()
            .map(|(&v, &w)| {
                g.get(w)
                    .map(|u| (v, u))
                    .ok_or_else(|| Error::NotSimplicial(format!("vertex {w} is not mapped")))
            })
            .collect::<Result<_>>()?;
        Ok(SimplicialMap { map })
    }

    /// Checks that every simplex of `k` lands on a simplex of `l`.
    pub fn check_simplicial(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> Result<()> {
        for s in k {
            let img = self.image(s)?;
            if !l.contains(&img) {
                return Err(Error::NotSimplicial(format!("{s} maps to {img}, not a simplex")));
            }
        }
        Ok(())
    }

    pub fn is_simplicial(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> bool {
        self.check_simplicial(k, l).is_ok()
    }

    /// Inclusion `K ⊆ L` as the identity on vertices.
    pub fn inclusion(k: &SimplicialComplex) -> SimplicialMap {
        Self::from_fn(k.vertices(), |v| v)
    }
}

/// `f` and `g` are contiguous when `f(σ) ∪ g(σ)` is a simplex of `l` for
/// every simplex `σ` of `k`. Both maps must be simplicial.
pub fn are_contiguous(
    f: &SimplicialMap,
    g: &SimplicialMap,
    k: &SimplicialComplex,
    l: &SimplicialComplex,
) -> Result<bool> {
    f.check_simplicial(k, l)?;
    g.check_simplicial(k, l)?;
    for s in k {
        if !l.contains(&f.image(s)?.union(&g.image(s)?)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First barycentric subdivision. The vertex `i` of the subdivision is the
/// `i`-th simplex of the base complex; simplices are inclusion chains.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub base: SimplicialComplex,
}

impl Subdivision {
    /// The base simplex named by a subdivision vertex.
    pub fn simplex_of(&self, v: usize) -> &Simplex {
        &self.base.simplices()[v]
    }
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let n = k.len();
    // proper cofaces of each simplex; ids are a linear extension of inclusion
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, tau) in k.iter().enumerate() {
        for f in tau.faces() {
            if f != *tau {
                cofaces[k.index_of(&f).expect("closed complex")].push(t);
            }
        }
    }
    for c in &mut cofaces {
        c.sort_unstable();
    }
    fn extend(
        last: usize,
        chain: &mut Vec<usize>,
        cofaces: &[Vec<usize>],
        out: &mut Vec<Simplex>,
    ) {
        for &t in &cofaces[last] {
            chain.push(t);
            out.push(Simplex::from_sorted(chain.clone()));
            extend(t, chain, cofaces, out);
            chain.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut chain = vec![s];
        out.push(Simplex::from_sorted(chain.clone()));
        extend(s, &mut chain, &cofaces, &mut out);
    }
    Subdivision {
        complex: SimplicialComplex::new(out).expect("chains are closed under faces"),
        base: k.clone(),
    }
}

/// The map from the subdivision back to the base sending a simplex to its
/// least vertex.
pub fn least_vertex_map(sd: &Subdivision) -> SimplicialMap {
    SimplicialMap::from_fn(0..sd.base.len(), |i| sd.simplex_of(i).vertices()[0])
}

/// Subdivision of a simplicial map `f: K -> L`, as a map `sd K -> sd L`.
pub fn subdivide_map(f: &SimplicialMap, from: &Subdivision, to: &Subdivision) -> Result<SimplicialMap> {
    let mut map = BTreeMap::new();
    for (i, s) in from.base.iter().enumerate() {
        let img = f.image(s)?;
        let j = to
            .base
            .index_of(&img)
            .ok_or_else(|| Error::NotSimplicial(format!("{s} maps to {img}, not a simplex")))?;
        map.insert(i, j);
    }
    Ok(SimplicialMap { map })
}

/// Which related column a simplex of `E_R` is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChoiceRule {
    #[default]
    LeastIndex,
    GreatestIndex,
}

/// The map `sd E_R -> F_R` sending a simplex of rows to a column related to
/// all of them. `e_sd` must be the subdivision of `E_R`.
pub fn sink_assignment_map(r: &Relation, e_sd: &Subdivision, rule: ChoiceRule) -> Result<SimplicialMap> {
    if r.is_empty() {
        return Err(Error::EmptyRelation);
    }
    let mut map = BTreeMap::new();
    for (i, s) in e_sd.base.iter().enumerate() {
        let mut common = (0..r.ncols()).filter(|&y| s.vertices().iter().all(|&x| r.get(x, y)));
        let y = match rule {
            ChoiceRule::LeastIndex => common.next(),
            ChoiceRule::GreatestIndex => common.next_back(),
        }
        .ok_or_else(|| Error::NotSimplicial(format!("{s} has no common column")))?;
        map.insert(i, y);
    }
    Ok(SimplicialMap { map })
}

/// A cover of a host complex by subcomplexes, each tagged with an index.
#[derive(Debug, Clone)]
pub struct Cover {
    host: SimplicialComplex,
    indices: Vec<usize>,
    members: Vec<SimplicialComplex>,
}

impl Cover {
    /// Every member must be a subcomplex of `host`, and together they must
    /// contain every simplex of `host`. Indices must be distinct.
    pub fn new(
        host: SimplicialComplex,
        indices: Vec<usize>,
        members: Vec<SimplicialComplex>,
    ) -> Result<Self> {
        if indices.len() != members.len() {
            return Err(Error::InvalidCover("one index per member required".into()));
        }
        if indices.iter().collect::<BTreeSet<_>>().len() != indices.len() {
            return Err(Error::InvalidCover("duplicate member index".into()));
        }
        for (i, m) in indices.iter().zip(&members) {
            if !m.is_subcomplex_of(&host) {
                return Err(Error::InvalidCover(format!("member {i} leaves the host")));
            }
        }
        for s in &host {
            if !members.iter().any(|m| m.contains(s)) {
                return Err(Error::InvalidCover(format!("{s} is not covered")));
            }
        }
        Ok(Cover {
            host,
            indices,
            members,
        })
    }

    pub fn host(&self) -> &SimplicialComplex {
        &self.host
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn members(&self) -> &[SimplicialComplex] {
        &self.members
    }

    /// Every member is the full simplex on its vertex set.
    pub fn is_cover_of_simplices(&self) -> bool {
        self.members
            .iter()
            .all(|m| *m == SimplicialComplex::full_simplex(&m.vertices(), None))
    }
}

/// Nerve on the cover's index labels: a set of indices spans a simplex when
/// the members share a vertex.
pub fn nerve(c: &Cover) -> SimplicialComplex {
    let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&i, m) in c.indices.iter().zip(&c.members) {
        for v in m.vertices() {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    SimplicialComplex::from_maximal(by_vertex.into_values().map(Simplex::new))
}

/// Cover of `F_R` by the full simplices on the row sets of `R`, indexed by
/// the rows that relate to something.
pub fn cover_from_relation(r: &Relation) -> Result<Cover> {
    let (_, f) = dowker_pair_from_relation(r, None)?;
    let mut indices = Vec::new();
    let mut members = Vec::new();
    for x in 0..r.nrows() {
        let row = r.row_set(x);
        if !row.is_empty() {
            indices.push(x);
            members.push(SimplicialComplex::full_simplex(&row, None));
        }
    }
    Cover::new(f, indices, members)
}

/// Relation between host vertices (rows `0..=max vertex`) and member
/// positions (columns): `(v, i)` holds when `v` lies in member `i`. Its
/// `E_R` is the host and its `F_R` the nerve, relabeled by position.
pub fn relation_from_cover(c: &Cover) -> Result<Relation> {
    if !c.is_cover_of_simplices() {
        return Err(Error::NotCoverOfSimplices);
    }
    let nrows = c.host.vertices().last().map_or(0, |v| v + 1);
    let members: Vec<Vec<usize>> = c.members.iter().map(SimplicialComplex::vertices).collect();
    Ok(Relation::from_fn(nrows, members.len(), |v, i| {
        members[i].binary_search(&v).is_ok()
    }))
}

/// Matrix over the two-element field of the map `H_k(K) -> H_k(L)` induced
/// by a simplicial map, in the generator bases of both sides. Entry
/// `[j][i]` is the coefficient of target generator `i` in the image of
/// source generator `j`.
pub fn induced_homology_matrix(
    f: &SimplicialMap,
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    dim: usize,
) -> Result<Vec<Vec<bool>>> {
    f.check_simplicial(k, l)?;
    let src = HomologyBasis::new(k, dim)?;
    let dst = HomologyBasis::new(l, dim)?;
    src.generators()
        .iter()
        .map(|cycle| {
            let mut image: Vec<usize> = Vec::new();
            for &sid in cycle {
                let img = f.image(&k.simplices()[sid])?;
                if img.dim() == dim {
                    add_column(&mut image, &[l.index_of(&img).expect("checked simplicial")]);
                }
            }
            dst.coordinates(&image)
        })
        .collect()
}

/// Outcome of checking the functorial Dowker statement on `R ⊆ R'` at the
/// level of homology in dimensions `0..=max_hom_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdtReport {
    pub betti_e: Vec<usize>,
    pub betti_f: Vec<usize>,
    pub betti_e_prime: Vec<usize>,
    pub betti_f_prime: Vec<usize>,
    pub rank_e: Vec<usize>,
    pub rank_f: Vec<usize>,
    pub diagrams_equal: bool,
}

impl FdtReport {
    pub fn passed(&self) -> bool {
        self.betti_e == self.betti_f
            && self.betti_e_prime == self.betti_f_prime
            && self.rank_e == self.rank_f
            && self.diagrams_equal
    }
}

pub fn verify_fdt_pair(r: &Relation, r_prime: &Relation, max_hom_dim: usize) -> Result<FdtReport> {
    if !r.is_subset_of(r_prime) {
        return Err(Error::InclusionViolated);
    }
    let cap = Some(max_hom_dim + 1);
    let (e, f) = dowker_pair_from_relation(r, cap)?;
    let (e2, f2) = dowker_pair_from_relation(r_prime, cap)?;
    let mut rank_e = Vec::new();
    let mut rank_f = Vec::new();
    for k in 0..=max_hom_dim {
        rank_e.push(induced_map_rank(&e, &e2, k)?);
        rank_f.push(induced_map_rank(&f, &f2, k)?);
    }
    let de = compute_persistence(&FilteredComplex::two_step(&e, &e2, 0.0, 1.0)?, max_hom_dim)?;
    let df = compute_persistence(&FilteredComplex::two_step(&f, &f2, 0.0, 1.0)?, max_hom_dim)?;
    Ok(FdtReport {
        betti_e: betti_numbers(&e, max_hom_dim),
        betti_f: betti_numbers(&f, max_hom_dim),
        betti_e_prime: betti_numbers(&e2, max_hom_dim),
        betti_f_prime: betti_numbers(&f2, max_hom_dim),
        rank_e,
        rank_f,
        diagrams_equal: diagram_equal(&de, &df),
    })
}

/// The complexes and maps of one relation: `E = E_R`, `F = F_R`, their
/// first and second subdivisions, least-vertex maps `Φ` and sink
/// assignments `Ψ`.
#[derive(Debug, Clone)]
pub struct DowkerMaps {
    pub e: SimplicialComplex,
    pub f: SimplicialComplex,
    pub e1: Subdivision,
    pub f1: Subdivision,
    pub e2: Subdivision,
    pub f2: Subdivision,
    /// `E^(1) -> E`
    pub phi_e: SimplicialMap,
    /// `F^(1) -> F`
    pub phi_f: SimplicialMap,
    /// `E^(2) -> E^(1)`
    pub phi_e1: SimplicialMap,
    /// `F^(2) -> F^(1)`
    pub phi_f1: SimplicialMap,
    /// `F^(1) -> E`
    pub psi_e: SimplicialMap,
    /// `E^(1) -> F`
    pub psi_f: SimplicialMap,
    /// `F^(2) -> E^(1)`, the subdivision of `psi_e`
    pub psi_e1: SimplicialMap,
    /// `E^(2) -> F^(1)`, the subdivision of `psi_f`
    pub psi_f1: SimplicialMap,
}

fn check_budget(k: &SimplicialComplex) -> Result<()> {
    if k.len() > SECOND_SUBDIVISION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "simplices in a twice-subdivided host",
            required: k.len() as u128,
            budget: SECOND_SUBDIVISION_BUDGET as u128,
        });
    }
    Ok(())
}

impl DowkerMaps {
    pub fn new(r: &Relation, rule: ChoiceRule) -> Result<Self> {
        let (e, f) = dowker_pair_from_relation(r, None)?;
        check_budget(&e)?;
        check_budget(&f)?;
        let e1 = barycentric_subdivision(&e);
        let f1 = barycentric_subdivision(&f);
        let e2 = barycentric_subdivision(&e1.complex);
        let f2 = barycentric_subdivision(&f1.complex);
        let psi_f = sink_assignment_map(r, &e1, rule)?;
        let psi_e = sink_assignment_map(&r.transpose(), &f1, rule)?;
        let psi_f1 = subdivide_map(&psi_f, &e2, &f1)?;
        let psi_e1 = subdivide_map(&psi_e, &f2, &e1)?;
        Ok(DowkerMaps {
            phi_e: least_vertex_map(&e1),
            phi_f: least_vertex_map(&f1),
            phi_e1: least_vertex_map(&e2),
            phi_f1: least_vertex_map(&f2),
            psi_e,
            psi_f,
            psi_e1,
            psi_f1,
            e,
            f,
            e1,
            f1,
            e2,
            f2,
        })
    }

    /// The four contiguity statements relating `Φ` and `Ψ`, in order:
    /// `E^(2) -> E`, `F^(2) -> F`, `F^(2) -> E`, `E^(2) -> F`.
    pub fn contiguity_items(&self) -> Result<[bool; 4]> {
        let (e2, f2) = (&self.e2.complex, &self.f2.complex);
        Ok([
            are_contiguous(
                &self.phi_e1.then(&self.phi_e)?,
                &self.psi_f1.then(&self.psi_e)?,
                e2,
                &self.e,
            )?,
            are_contiguous(
                &self.phi_f1.then(&self.phi_f)?,
                &self.psi_e1.then(&self.psi_f)?,
                f2,
                &self.f,
            )?,
            are_contiguous(
                &self.phi_f1.then(&self.psi_e)?,
                &self.psi_e1.then(&self.phi_e)?,
                f2,
                &self.e,
            )?,
            are_contiguous(
                &self.phi_e1.then(&self.psi_f)?,
                &self.psi_f1.then(&self.phi_f)?,
                e2,
                &self.f,
            )?,
        ])
    }
}

/// The two naturality statements for `R ⊆ R'`, as maps `F_R^(1) -> E_R'`
/// and `F_R^(1) -> F_R'`.
pub fn functorial_contiguity(r: &Relation, r_prime: &Relation, rule: ChoiceRule) -> Result<[bool; 2]> {
    if !r.is_subset_of(r_prime) {
        return Err(Error::InclusionViolated);
    }
    let (e, f) = dowker_pair_from_relation(r, None)?;
    let (e_p, f_p) = dowker_pair_from_relation(r_prime, None)?;
    let f1 = barycentric_subdivision(&f);
    let f1_p = barycentric_subdivision(&f_p);
    let iota_e = SimplicialMap::inclusion(&e);
    let iota_f = SimplicialMap::inclusion(&f);
    let iota_f1 = subdivide_map(&iota_f, &f1, &f1_p)?;
    let psi_e = sink_assignment_map(&r.transpose(), &f1, rule)?;
    let psi_e_p = sink_assignment_map(&r_prime.transpose(), &f1_p, rule)?;
    let phi_f = least_vertex_map(&f1);
    let phi_f_p = least_vertex_map(&f1_p);
    Ok([
        are_contiguous(&psi_e.then(&iota_e)?, &iota_f1.then(&psi_e_p)?, &f1.complex, &e_p)?,
        are_contiguous(&phi_f.then(&iota_f)?, &iota_f1.then(&phi_f_p)?, &f1.complex, &f_p)?,
    ])
}
