use nalgebra::DMatrix;

use super::{centered, MetricConfig, RdmDissimilarity};
use crate::data::ActivationMatrix;
use crate::error::{Error, Result};
use crate::numerics::{average_ranks, pearson, spearman};

/// Stimulus-by-stimulus dissimilarity matrix for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm {
    pub model_id: String,
    pub matrix: DMatrix<f64>,
}

impl Rdm {
    /// Strictly-lower-triangle entries, row by row.
    pub fn lower_triangle(&self) -> Vec<f64> {
        let m = self.matrix.nrows();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for a in 1..m {
            for b in 0..a {
                out.push(self.matrix[(a, b)]);
            }
        }
        out
    }
}

pub fn compute_rdm(x: &ActivationMatrix, config: &MetricConfig) -> Result<Rdm> {
    let x = centered(x);
    let data = x.data();
    let m = data.nrows();
    if m < 3 {
        return Err(Error::TooFewSamples(format!(
            "RDM of `{}` needs at least 3 stimuli, got {m}",
            x.model_id()
        )));
    }
    let rows: Vec<Vec<f64>> = data.row_iter().map(|r| r.iter().copied().collect()).collect();
    let mut matrix = DMatrix::zeros(m, m);
    for a in 1..m {
        for b in 0..a {
            let d = match config.rdm_dissimilarity {
                RdmDissimilarity::Euclidean => rows[a]
                    .iter()
                    .zip(&rows[b])
                    .map(|(p, q)| (p - q) * (p - q))
                    .sum::<f64>()
                    .sqrt(),
                RdmDissimilarity::CorrelationDistance => 1.0 - pearson(&rows[a], &rows[b])?,
            };
            matrix[(a, b)] = d;
            matrix[(b, a)] = d;
        }
    }
    Ok(Rdm {
        model_id: x.model_id().to_string(),
        matrix,
    })
}

/// Spearman correlation between the off-diagonal entries of two RDMs.
pub fn rsa_score(x_i: &ActivationMatrix, x_j: &ActivationMatrix, config: &MetricConfig) -> Result<f64> {
    super::check_stimuli(x_i, x_j)?;
    let a = compute_rdm(x_i, config)?;
    let b = compute_rdm(x_j, config)?;
    spearman(&a.lower_triangle(), &b.lower_triangle())
}

/// Average ranks of an RDM's lower triangle, cached by the pairwise engine so
/// each model is ranked once.
pub(super) fn rdm_ranks(x: &ActivationMatrix, config: &MetricConfig) -> Result<Vec<f64>> {
    Ok(average_ranks(&compute_rdm(x, config)?.lower_triangle()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tests::{random_activation, random_orthogonal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euclidean_entries() {
        let x = ActivationMatrix::from_rows("a", &[vec![0., 0.], vec![3., 4.], vec![0., 0.]]).unwrap();
        let rdm = compute_rdm(&x, &MetricConfig::default()).unwrap();
        assert!((rdm.matrix[(0, 1)] - 5.0).abs() < 1e-12);
        assert_eq!(rdm.matrix[(0, 2)], 0.0);
        for i in 0..3 {
            assert_eq!(rdm.matrix[(i, i)], 0.0);
        }
        assert_eq!(rdm.matrix, rdm.matrix.transpose());
    }

    #[test]
    fn too_few_stimuli() {
        let x = ActivationMatrix::from_rows("a", &[vec![0.], vec![1.]]).unwrap();
        assert!(matches!(compute_rdm(&x, &MetricConfig::default()), Err(Error::TooFewSamples(_))));
    }

    #[test]
    fn orthogonal_invariance_of_euclidean_rdm() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x = random_activation(&mut rng, "x", 4, 3);
        let q = random_orthogonal(&mut rng, 3);
        let xq = x.map_data(x.data() * q).unwrap();
        let cfg = MetricConfig::default();
        let a = compute_rdm(&x, &cfg).unwrap();
        let b = compute_rdm(&xq, &cfg).unwrap();
        assert!((a.matrix - b.matrix).amax() < 1e-8);
        assert!((rsa_score(&x, &xq, &cfg).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rsa_identity_and_reversal() {
        let cfg = MetricConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let x = random_activation(&mut rng, "x", 6, 4);
        assert!((rsa_score(&x, &x, &cfg).unwrap() - 1.0).abs() < 1e-12);

        // Stimuli at 0, 1, 3 give lower-triangle distances (1, 3, 2), ranks
        // (1, 3, 2). Stimuli at 0, 3, 0.5 give (3, 0.5, 2.5), ranks (3, 1, 2),
        // which is the exact reversal 4 - r.
        let a = ActivationMatrix::from_rows("a", &[vec![0., 0.], vec![1., 0.], vec![3., 0.]]).unwrap();
        let b = ActivationMatrix::from_rows("b", &[vec![0., 0.], vec![3., 0.], vec![0.5, 0.]]).unwrap();
        assert!((rsa_score(&a, &b, &cfg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_distance_mode() {
        let cfg = MetricConfig {
            rdm_dissimilarity: RdmDissimilarity::CorrelationDistance,
            ..MetricConfig::default()
        };
        let x = ActivationMatrix::from_rows(
            "a",
            &[vec![1., 2., 3.], vec![2., 4., 6.5], vec![3., 1., 0.]],
        )
        .unwrap();
        let rdm = compute_rdm(&x, &cfg).unwrap();
        assert!(rdm.matrix.iter().all(|v| *v >= 0.0 && *v <= 2.0));
    }

    #[test]
    fn stimulus_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_activation(&mut rng, "a", 5, 2);
        let b = random_activation(&mut rng, "b", 6, 2);
        assert!(matches!(rsa_score(&a, &b, &MetricConfig::default()), Err(Error::DimensionMismatch(_))));
    }
}
