//! Synthetic model families for tests, benchmarks and toy corpora.
//!
//! Each family draws one Gaussian stimuli × units base matrix; each model adds
//! independent Gaussian noise to its family base and (optionally) shuffles its
//! unit order, which none of the metrics should notice.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{ActivationMatrix, ModelRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub families: usize,
    pub models_per_family: usize,
    pub stimuli: usize,
    pub units: usize,
    /// Standard deviation of per-model noise relative to the unit-variance base.
    pub noise: f64,
    pub permute_units: bool,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            families: 4,
            models_per_family: 5,
            stimuli: 100,
            units: 20,
            noise: 0.3,
            permute_units: true,
            seed: 0,
        }
    }
}

/// A generated model set. Record paths are `<model_id>.npy`, relative.
#[derive(Debug, Clone)]
pub struct SyntheticSet {
    pub models: Vec<ActivationMatrix>,
    pub records: Vec<ModelRecord>,
}

pub fn family_name(f: usize) -> String {
    format!("family_{}", (b'a' + (f % 26) as u8) as char)
}

pub fn synthetic_families(config: &SyntheticConfig) -> SyntheticSet {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (m, n) = (config.stimuli, config.units);
    let gauss = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };

    let mut models = Vec::new();
    let mut records = Vec::new();
    for f in 0..config.families {
        let base = DMatrix::from_fn(m, n, |_, _| gauss(&mut rng));
        for k in 0..config.models_per_family {
            let noisy = DMatrix::from_fn(m, n, |i, j| base[(i, j)] + config.noise * gauss(&mut rng));
            let data = if config.permute_units {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                DMatrix::from_fn(m, n, |i, j| noisy[(i, perm[j])])
            } else {
                noisy
            };
            let id = format!("{}_{k}", family_name(f));
            records.push(ModelRecord::new(&id, family_name(f), format!("{id}.npy")));
            models.push(ActivationMatrix::new(id, data).expect("gaussian draws are finite"));
        }
    }
    SyntheticSet { models, records }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_determinism() {
        let cfg = SyntheticConfig {
            families: 2,
            models_per_family: 3,
            stimuli: 7,
            units: 4,
            ..Default::default()
        };
        let a = synthetic_families(&cfg);
        let b = synthetic_families(&cfg);
        assert_eq!(a.models, b.models);
        assert_eq!(a.models.len(), 6);
        assert_eq!(a.records[3].family, "family_b");
        assert_eq!(a.models[0].data().shape(), (7, 4));
    }
}
