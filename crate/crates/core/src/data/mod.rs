//! Domain types, manifest parsing and activation-matrix file I/O.

mod activation;
mod manifest;
pub mod npy;
mod similarity;

pub use activation::{center_columns, load_activation_matrix, parse_csv, to_csv, ActivationMatrix};
pub use manifest::{check_manifest, load_manifest, manifest_to_json, parse_manifest, ModelRecord};
pub use similarity::{Metric, SimilarityMatrix};
