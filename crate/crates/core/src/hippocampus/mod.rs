//! Simulated place-cell recordings in arenas with circular holes, the
//! directed networks they induce, and the classification pipeline built on
//! Dowker persistence of those networks.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagmetric::{bottleneck_matrix, single_linkage, Dendrogram, DistanceMatrix};
use crate::error::{Error, Result};
use crate::filtration::dowker_sink_filtration;
use crate::homology::{compute_persistence, PersistenceDiagram};
use crate::network::Network;

/// A circular forbidden zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl Hole {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (x - self.x).hypot(y - self.y) <= self.radius
    }
}

/// Square arena `[0, L]^2` sampled by a `g x g` grid of cell centers
/// `((i + 0.5) L / g, (j + 0.5) L / g)`; one walk step moves one grid cell.
#[derive(Debug, Clone)]
pub struct Arena {
    side: f64,
    grid: usize,
    holes: Vec<Hole>,
    allowed: Vec<bool>,
}

/// Grid point `(i, j)`, column then row.
pub type GridPoint = (usize, usize);

impl Arena {
    pub fn new(side: f64, grid: usize, holes: Vec<Hole>) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) || grid == 0 {
            return Err(Error::InvalidArena(format!(
                "side {side} and grid {grid} must be positive"
            )));
        }
        for h in &holes {
            if !(h.radius > 0.0)
                || h.x - h.radius < 0.0
                || h.y - h.radius < 0.0
                || h.x + h.radius > side
                || h.y + h.radius > side
            {
                return Err(Error::InvalidArena(format!(
                    "hole at ({}, {}) of radius {} does not fit in the arena",
                    h.x, h.y, h.radius
                )));
            }
        }
        let mut arena = Arena {
            side,
            grid,
            holes,
            allowed: Vec::new(),
        };
        arena.allowed = (0..grid * grid)
            .map(|k| {
                let (x, y) = arena.position((k % grid, k / grid));
                !arena.holes.iter().any(|h| h.contains(x, y))
            })
            .collect();
        arena.check_connected()?;
        Ok(arena)
    }

    /// The standard arena with the first `holes` of four holes of radius
    /// `hole_frac * side`, centered in the four quadrants.
    pub fn standard(side: f64, grid: usize, holes: usize, hole_frac: f64) -> Result<Self> {
        if holes > 4 {
            return Err(Error::InvalidArena(format!("at most 4 holes, got {holes}")));
        }
        let centers = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)];
        let holes = centers[..holes]
            .iter()
            .map(|&(cx, cy)| Hole {
                x: cx * side,
                y: cy * side,
                radius: hole_frac * side,
            })
            .collect();
        Arena::new(side, grid, holes)
    }

    fn check_connected(&self) -> Result<()> {
        let points = self.allowed_points();
        let Some(&start) = points.first() else {
            return Err(Error::InvalidArena("no allowed grid point".into()));
        };
        let mut seen = vec![false; self.grid * self.grid];
        seen[start.1 * self.grid + start.0] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(p) = queue.pop_front() {
            for q in self.moves(p) {
                let k = q.1 * self.grid + q.0;
                if !seen[k] {
                    seen[k] = true;
                    count += 1;
                    queue.push_back(q);
                }
            }
        }
        if count != points.len() {
            return Err(Error::InvalidArena(
                "allowed grid points are not connected".into(),
            ));
        }
        Ok(())
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn step(&self) -> f64 {
        self.side / self.grid as f64
    }

    pub fn position(&self, p: GridPoint) -> (f64, f64) {
        let h = self.step();
        ((p.0 as f64 + 0.5) * h, (p.1 as f64 + 0.5) * h)
    }

    pub fn is_allowed(&self, p: GridPoint) -> bool {
        p.0 < self.grid && p.1 < self.grid && self.allowed[p.1 * self.grid + p.0]
    }

    /// A point in the square and outside every hole.
    pub fn is_free(&self, x: f64, y: f64) -> bool {
        (0.0..=self.side).contains(&x)
            && (0.0..=self.side).contains(&y)
            && !self.holes.iter().any(|h| h.contains(x, y))
    }

    pub fn allowed_points(&self) -> Vec<GridPoint> {
        (0..self.grid * self.grid)
            .filter(|&k| self.allowed[k])
            .map(|k| (k % self.grid, k / self.grid))
            .collect()
    }

    /// Allowed axis moves from `p`, in the order right, left, up, down.
    pub fn moves(&self, p: GridPoint) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(4);
        let (i, j) = p;
        let candidates = [
            (i.checked_add(1), Some(j)),
            (i.checked_sub(1), Some(j)),
            (Some(i), j.checked_add(1)),
            (Some(i), j.checked_sub(1)),
        ];
        for c in candidates {
            if let (Some(a), Some(b)) = c {
                if self.is_allowed((a, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Random walk of `steps` positions (the start counts as the first). Each
/// step picks uniformly among the allowed axis moves. Without an explicit
/// start, the walk starts at a uniformly chosen allowed grid point.
pub fn simulate_trajectory<R: Rng + ?Sized>(
    arena: &Arena,
    steps: usize,
    start: Option<GridPoint>,
    rng: &mut R,
) -> Result<Vec<GridPoint>> {
    let start = match start {
        Some(p) if arena.is_allowed(p) => p,
        Some(p) => {
            return Err(Error::InvalidArena(format!(
                "start {p:?} is outside the arena or inside a hole"
            )))
        }
        None => {
            let pts = arena.allowed_points();
            pts[rng.gen_range(0..pts.len())]
        }
    };
    let mut traj = Vec::with_capacity(steps);
    let mut cur = start;
    for t in 0..steps {
        if t > 0 {
            let mv = arena.moves(cur);
            if mv.is_empty() {
                return Err(Error::InvalidArena(format!("no allowed move from {cur:?}")));
            }
            cur = mv[rng.gen_range(0..mv.len())];
        }
        traj.push(cur);
    }
    Ok(traj)
}

/// Fraction of allowed grid points visited by a trajectory.
pub fn coverage(arena: &Arena, traj: &[GridPoint]) -> f64 {
    let mut seen = vec![false; arena.grid * arena.grid];
    for &(i, j) in traj {
        seen[j * arena.grid + i] = true;
    }
    let allowed = arena.allowed.iter().filter(|&&a| a).count();
    let visited = seen.iter().zip(&arena.allowed).filter(|(s, a)| **s && **a).count();
    visited as f64 / allowed as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaceField {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

/// `n` fields with centers uniform over the free region (rejection sampling).
pub fn scatter_place_fields<R: Rng + ?Sized>(
    arena: &Arena,
    n: usize,
    radius: f64,
    rng: &mut R,
) -> Result<Vec<PlaceField>> {
    if n == 0 {
        return Err(Error::InvalidConfig("need at least one place field".into()));
    }
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(0.0..arena.side);
        let y = rng.gen_range(0.0..arena.side);
        if arena.is_free(x, y) {
            out.push(PlaceField { x, y, radius });
        }
    }
    Ok(out)
}

/// Binary firing record, one row per cell and one column per time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    rows: Vec<Vec<bool>>,
}

impl Raster {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let t = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != t) {
            return Err(Error::InvalidConfig("raster rows differ in length".into()));
        }
        Ok(Raster { rows })
    }

    pub fn cells(&self) -> usize {
        self.rows.len()
    }

    pub fn steps(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn fires(&self, cell: usize, t: usize) -> bool {
        self.rows[cell][t]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}

/// A cell fires at time `t` when the position lies within its field.
pub fn compute_rasters(positions: &[(f64, f64)], fields: &[PlaceField]) -> Raster {
    Raster {
        rows: fields
            .iter()
            .map(|f| {
                positions
                    .iter()
                    .map(|&(x, y)| (x - f.x).hypot(y - f.y) <= f.radius)
                    .collect()
            })
            .collect(),
    }
}

/// `N[i][j]`: pairs of times `s < t <= s + w` with cell `i` firing at `s`
/// and cell `j` at `t`.
pub fn delayed_coactivity(r: &Raster, w: usize) -> Vec<Vec<u64>> {
    let n = r.cells();
    let active: Vec<Vec<usize>> = (0..r.steps())
        .map(|t| (0..n).filter(|&i| r.fires(i, t)).collect())
        .collect();
    let mut counts = vec![vec![0u64; n]; n];
    for t in 1..r.steps() {
        for s in t.saturating_sub(w)..t {
            for &i in &active[s] {
                for &j in &active[t] {
                    counts[i][j] += 1;
                }
            }
        }
    }
    counts
}

/// `w(i, j) = 1 - N[i][j] / sum_i N[i][j]`. A column with no counts gets
/// weight 1 throughout.
pub fn induce_network(r: &Raster, w: usize) -> Result<Network> {
    if w == 0 {
        return Err(Error::InvalidConfig("delay window must be at least 1".into()));
    }
    if r.cells() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let counts = delayed_coactivity(r, w);
    let n = r.cells();
    let colsum: Vec<u64> = (0..n).map(|j| (0..n).map(|i| counts[i][j]).sum()).collect();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if colsum[j] == 0 {
                        1.0
                    } else {
                        1.0 - counts[i][j] as f64 / colsum[j] as f64
                    }
                })
                .collect()
        })
        .collect();
    Network::from_rows(rows)
}

/// Parameters of the arena classification experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub side: f64,
    pub grid: usize,
    pub hole_radius_frac: f64,
    pub field_radius_frac: f64,
    /// Hole counts of the arena classes.
    pub classes: Vec<usize>,
    pub trials_per_class: usize,
    pub steps: usize,
    pub fields_min: usize,
    pub fields_max: usize,
    pub window: usize,
    pub coverage_threshold: f64,
    /// Round weights up to multiples of this step before persistence.
    pub snap: Option<f64>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::desk(0)
    }
}

impl ExperimentConfig {
    pub fn desk(seed: u64) -> Self {
        ExperimentConfig {
            side: 10.0,
            grid: 20,
            hole_radius_frac: 0.2,
            field_radius_frac: 0.05,
            classes: vec![0, 1, 2, 3, 4],
            trials_per_class: 4,
            steps: 2000,
            fields_min: 40,
            fields_max: 60,
            window: 5,
            coverage_threshold: 0.5,
            snap: None,
            seed,
        }
    }

    pub fn full(seed: u64) -> Self {
        ExperimentConfig {
            trials_per_class: 20,
            steps: 5000,
            fields_min: 150,
            fields_max: 200,
            ..ExperimentConfig::desk(seed)
        }
    }

    pub fn smoke(seed: u64) -> Self {
        ExperimentConfig {
            trials_per_class: 1,
            steps: 400,
            fields_min: 12,
            fields_max: 16,
            ..ExperimentConfig::desk(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.classes.is_empty() || self.trials_per_class == 0 {
            return bad("need at least one class and one trial".into());
        }
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if self.fields_min == 0 || self.fields_min > self.fields_max {
            return bad(format!(
                "field count range [{}, {}] is empty or contains 0",
                self.fields_min, self.fields_max
            ));
        }
        if self.window == 0 {
            return bad("window must be at least 1".into());
        }
        if !(self.field_radius_frac > 0.0) {
            return bad("field radius must be positive".into());
        }
        if let Some(s) = self.snap {
            if !(s > 0.0 && s.is_finite()) {
                return bad(format!("snap step must be positive, got {s}"));
            }
        }
        for &h in &self.classes {
            self.arena(h)?;
        }
        Ok(())
    }

    pub fn arena(&self, holes: usize) -> Result<Arena> {
        Arena::standard(self.side, self.grid, holes, self.hole_radius_frac)
    }

    /// RNG of one trial: the master seed with a stream per (class, trial).
    pub fn trial_rng(&self, holes: usize, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(Self::stream(holes, trial));
        rng
    }

    pub fn stream(holes: usize, trial: usize) -> u64 {
        ((holes as u64) << 32) | trial as u64
    }
}

/// Everything produced by one trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub label: String,
    pub holes: usize,
    pub trial: usize,
    pub stream: u64,
    pub coverage: f64,
    pub covered: bool,
    pub network: Network,
    pub diagram: PersistenceDiagram,
}

pub fn run_trial(cfg: &ExperimentConfig, holes: usize, trial: usize) -> Result<TrialResult> {
    let arena = cfg.arena(holes)?;
    let mut rng = cfg.trial_rng(holes, trial);
    let n_fields = rng.gen_range(cfg.fields_min..=cfg.fields_max);
    let traj = simulate_trajectory(&arena, cfg.steps, None, &mut rng)?;
    let fields = scatter_place_fields(&arena, n_fields, cfg.field_radius_frac * cfg.side, &mut rng)?;
    let positions: Vec<(f64, f64)> = traj.iter().map(|&p| arena.position(p)).collect();
    let raster = compute_rasters(&positions, &fields);
    let mut network = induce_network(&raster, cfg.window)?.normalized_unit();
    if let Some(step) = cfg.snap {
        network = network.snapped_up(step);
    }
    let diagram = compute_persistence(&dowker_sink_filtration(&network, 2), 1)?;
    let cov = coverage(&arena, &traj);
    Ok(TrialResult {
        label: format!("env-{holes}-{n_fields}"),
        holes,
        trial,
        stream: ExperimentConfig::stream(holes, trial),
        coverage: cov,
        covered: cov >= cfg.coverage_threshold,
        network,
        diagram,
    })
}

/// Mean bottleneck distance within the two classes (pooled) and between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub class_a: usize,
    pub class_b: usize,
    pub within_mean: f64,
    pub between_mean: f64,
}

impl Separation {
    pub fn separated(&self) -> bool {
        self.within_mean < self.between_mean
    }
}

pub fn separation(
    trials: &[TrialResult],
    d: &DistanceMatrix,
    class_a: usize,
    class_b: usize,
) -> Option<Separation> {
    let (mut within, mut nw, mut between, mut nb) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..trials.len() {
        for j in i + 1..trials.len() {
            let (a, b) = (trials[i].holes, trials[j].holes);
            let v = d.get(i, j);
            if a == b && (a == class_a || a == class_b) {
                within += v;
                nw += 1;
            } else if (a, b) == (class_a, class_b) || (a, b) == (class_b, class_a) {
                between += v;
                nb += 1;
            }
        }
    }
    (nw > 0 && nb > 0).then(|| Separation {
        class_a,
        class_b,
        within_mean: within / nw as f64,
        between_mean: between / nb as f64,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialResult>,
    pub matrix: DistanceMatrix,
    pub dendrogram: Dendrogram,
    /// Classes 0 and 4 when both are present.
    pub separation: Option<Separation>,
}

#[derive(Serialize)]
struct ManifestTrial<'a> {
    label: &'a str,
    holes: usize,
    trial: usize,
    seed: u64,
    stream: u64,
    fields: usize,
    coverage: f64,
    covered: bool,
    files: [String; 2],
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    config: &'a ExperimentConfig,
    trials: Vec<ManifestTrial<'a>>,
    separation: Option<Separation>,
    matrix: &'a str,
    dendrogram: &'a str,
}

impl ExperimentResult {
    fn trial_stem(t: &TrialResult) -> String {
        format!("trials/h{}-t{:03}", t.holes, t.trial)
    }

    /// Output files as (relative path, contents), manifest last.
    pub fn artifacts(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut manifest_trials = Vec::new();
        for t in &self.trials {
            let stem = Self::trial_stem(t);
            let net = format!("{stem}.network.json");
            let dgm = format!("{stem}.dgm.csv");
            out.push((net.clone(), t.network.to_json_string()));
            out.push((dgm.clone(), t.diagram.to_csv()));
            manifest_trials.push(ManifestTrial {
                label: &t.label,
                holes: t.holes,
                trial: t.trial,
                seed: self.config.seed,
                stream: t.stream,
                fields: t.network.size(),
                coverage: t.coverage,
                covered: t.covered,
                files: [net, dgm],
            });
        }
        out.push(("matrix.csv".into(), self.matrix.to_csv()));
        out.push(("dendrogram.json".into(), self.dendrogram.to_json()));
        let manifest = Manifest {
            version: env!("CARGO_PKG_VERSION"),
            config: &self.config,
            trials: manifest_trials,
            separation: self.separation,
            matrix: "matrix.csv",
            dendrogram: "dendrogram.json",
        };
        out.push((
            "manifest.json".into(),
            serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        ));
        out
    }
}

/// Runs every trial (in parallel on the current rayon pool), then the
/// bottleneck matrix in dimension 1 and its single-linkage dendrogram.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .classes
        .iter()
        .flat_map(|&h| (0..cfg.trials_per_class).map(move |t| (h, t)))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|&(h, t)| run_trial(cfg, h, t))
        .collect::<Result<Vec<_>>>()?;
    let diagrams: Vec<PersistenceDiagram> = trials.iter().map(|t| t.diagram.clone()).collect();
    let matrix = bottleneck_matrix(&diagrams, 1)
        .with_labels(trials.iter().map(|t| t.label.clone()).collect())?;
    let dendrogram = single_linkage(&matrix)?;
    let separation = separation(&trials, &matrix, 0, 4);
    Ok(ExperimentResult {
        config: cfg.clone(),
        trials,
        matrix,
        dendrogram,
        separation,
    })
}

#[cfg(test)]
mod tests;
