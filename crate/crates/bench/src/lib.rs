//! Shared workloads for the criterion benches.

use repsep::synth::{synthetic_families, SyntheticConfig, SyntheticSet};

/// A small family set sized like the acceptance workload.
pub fn workload(units: usize, stimuli: usize) -> SyntheticSet {
    synthetic_families(&SyntheticConfig {
        families: 2,
        models_per_family: 2,
        stimuli,
        units,
        noise: 0.5,
        permute_units: true,
        seed: 7,
    })
}
