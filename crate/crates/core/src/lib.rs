//! Persistent homology of weighted directed networks.
//!
//! Networks are finite node sets with arbitrary real weights on ordered
//! pairs. From a network this crate builds Rips and Dowker (sink and source)
//! filtrations, computes their persistence diagrams over the two-element
//! field, compares diagrams with the bottleneck distance and networks with
//! the exact network distance, and ships the small-instance checks and the
//! simulated place-cell experiment used to exercise all of it.

pub mod complex;
pub mod diagmetric;
pub mod error;
pub mod filtration;
pub mod hippocampus;
pub mod homology;
pub mod network;
pub mod relationlab;
pub mod validate;

pub use complex::{FilteredComplex, FilteredSimplex, Simplex, SimplicialComplex};
pub use diagmetric::{
    bottleneck_at, bottleneck_distance, bottleneck_matrix, single_linkage, Dendrogram,
    DistanceMatrix, Merge,
};
pub use error::{Error, Result};
pub use filtration::{
    cech_circle_complex, complex_at, dowker_pair_from_relation, dowker_sink_filtration,
    dowker_source_filtration, rips_filtration, FiltrationKind, Relation,
};
pub use homology::{
    betti_numbers, compute_persistence, diagram_equal, induced_map_rank, DiagramPoint,
    HomologyBasis, PersistenceDiagram,
};
pub use hippocampus::{run_experiment, ExperimentConfig, ExperimentResult};
pub use network::{
    network_distance_correspondences, network_distance_maps, Network, NetworkFormat,
    SearchBudget,
};
pub use relationlab::{
    are_contiguous, barycentric_subdivision, cover_from_relation, nerve, relation_from_cover,
    verify_fdt_pair, ChoiceRule, Cover, FdtReport, SimplicialMap,
};
pub use validate::{run_suite, Suite, SuiteReport, ValidateOptions};
