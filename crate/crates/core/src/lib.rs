//! Representational similarity between neural-network activation matrices and
//! how well each similarity metric separates labeled model families.
//!
//! The pipeline is: load activation matrices ([`data`]), score every model pair
//! under a metric ([`metrics`]), then measure family separability of the
//! resulting similarity matrix with d′, silhouette and ROC-AUC
//! ([`separability`]).

pub mod data;
pub mod error;
pub mod metrics;
pub mod numerics;
pub mod separability;
pub mod synth;
pub mod transport;

pub use data::{
    center_columns, load_activation_matrix, load_manifest, ActivationMatrix, Metric, ModelRecord,
    SimilarityMatrix,
};
pub use error::{Error, Result};
pub use metrics::{pairwise_similarity, pairwise_similarity_from_matrices, MetricConfig, RdmDissimilarity, ScoreAggregation};
pub use numerics::{LinearMap, OrthogonalMap};
pub use separability::{build_report, SeparabilityReport};
pub use transport::{brute_force_transport, solve_transport, TransportPlan};
