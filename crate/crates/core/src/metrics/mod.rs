//! The four representational-similarity metrics and the pairwise engine that
//! turns a model set into a [`SimilarityMatrix`].

mod alignment;
mod rdm;

use std::borrow::Cow;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use alignment::{
    alignment_correlation, linear_predictivity_score, procrustes_score, softmatch, softmatch_score,
    unit_cost_matrix, SoftMatch,
};
pub use rdm::{compute_rdm, rsa_score, Rdm};

use crate::data::{center_columns, load_activation_matrix, ActivationMatrix, Metric, ModelRecord, SimilarityMatrix};
use crate::error::{Error, Result};
use crate::numerics::{pearson, pseudo_inverse};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RdmDissimilarity {
    /// Euclidean distance between stimulus rows.
    #[default]
    Euclidean,
    /// One minus the Pearson correlation between stimulus rows.
    CorrelationDistance,
}

/// How a target/prediction matrix pair is reduced to one correlation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreAggregation {
    /// Pearson correlation over all entries of the (column-centered) matrices.
    #[default]
    Flattened,
    /// Per-target-unit Pearson correlation, averaged over units.
    MeanPerUnit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    pub rdm_dissimilarity: RdmDissimilarity,
    pub score_aggregation: ScoreAggregation,
}

pub(crate) fn centered(x: &ActivationMatrix) -> Cow<'_, ActivationMatrix> {
    if x.centered() {
        Cow::Borrowed(x)
    } else {
        Cow::Owned(center_columns(x))
    }
}

pub(crate) fn check_stimuli(a: &ActivationMatrix, b: &ActivationMatrix) -> Result<()> {
    if a.stimuli() != b.stimuli() {
        return Err(Error::DimensionMismatch(format!(
            "`{}` has {} stimuli but `{}` has {}",
            a.model_id(),
            a.stimuli(),
            b.model_id(),
            b.stimuli()
        )));
    }
    Ok(())
}

/// Directional score of `metric` with `x_i` as source and `x_j` as target.
pub fn score(metric: Metric, x_i: &ActivationMatrix, x_j: &ActivationMatrix, config: &MetricConfig) -> Result<f64> {
    let s = match metric {
        Metric::Rsa => rsa_score(x_i, x_j, config)?,
        Metric::Softmatch => softmatch_score(x_i, x_j, config)?,
        Metric::Procrustes => procrustes_score(x_i, x_j, config)?,
        Metric::LinearPredictivity => linear_predictivity_score(x_i, x_j, config)?,
    };
    Ok(s.clamp(-1.0, 1.0))
}

/// Loads, centers and checks a model set for stimulus-count agreement.
pub fn load_models(records: &[ModelRecord]) -> Result<Vec<ActivationMatrix>> {
    let mats = records
        .par_iter()
        .map(|r| {
            load_activation_matrix(&r.path).map(|m| center_columns(&m.with_model_id(r.model_id.clone())))
        })
        .collect::<Result<Vec<_>>>()?;
    check_stimulus_counts(&mats)?;
    Ok(mats)
}

fn check_stimulus_counts(mats: &[ActivationMatrix]) -> Result<()> {
    let Some(first) = mats.first() else {
        return Ok(());
    };
    let bad: Vec<String> = mats
        .iter()
        .filter(|m| m.stimuli() != first.stimuli())
        .map(|m| format!("`{}` ({})", m.model_id(), m.stimuli()))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "stimulus count differs from `{}` ({}): {}",
            first.model_id(),
            first.stimuli(),
            bad.join(", ")
        )))
    }
}

/// Loads every record and computes the symmetrized similarity matrix.
pub fn pairwise_similarity(records: &[ModelRecord], metric: Metric, config: &MetricConfig) -> Result<SimilarityMatrix> {
    let mats = load_models(records)?;
    pairwise_similarity_from_matrices(&mats, metric, config)
}

/// Symmetrized similarity matrix over already-loaded models.
pub fn pairwise_similarity_from_matrices(
    mats: &[ActivationMatrix],
    metric: Metric,
    config: &MetricConfig,
) -> Result<SimilarityMatrix> {
    Ok(symmetrize(&directional_similarity(mats, metric, config)?))
}

/// All ordered-pair scores `score(i→j)` with a unit diagonal, not symmetrized.
///
/// Pairs are evaluated in parallel on the current rayon pool; the result does
/// not depend on the pool size.
pub fn directional_similarity(
    mats: &[ActivationMatrix],
    metric: Metric,
    config: &MetricConfig,
) -> Result<SimilarityMatrix> {
    check_stimulus_counts(mats)?;
    let k = mats.len();
    let centered: Vec<ActivationMatrix> = mats.par_iter().map(center_columns).collect();
    let mut scores = DMatrix::identity(k, k);

    if metric == Metric::Rsa {
        // RSA is symmetric: rank each RDM once and correlate the ranks.
        let ranks = centered
            .par_iter()
            .map(|m| rdm::rdm_ranks(m, config))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let vals = pairs
            .par_iter()
            .map(|&(i, j)| pearson(&ranks[i], &ranks[j]).map(|v| v.clamp(-1.0, 1.0)))
            .collect::<Result<Vec<_>>>()?;
        for (&(i, j), v) in pairs.iter().zip(vals) {
            scores[(i, j)] = v;
            scores[(j, i)] = v;
        }
    } else if metric == Metric::LinearPredictivity {
        // One pseudoinverse per source model instead of one per ordered pair.
        let pinvs = centered
            .par_iter()
            .map(|m| pseudo_inverse(m.data()))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let vals = pairs
            .par_iter()
            .map(|&(i, j)| {
                let target = centered[j].data();
                let pred = centered[i].data() * (&pinvs[i] * target);
                alignment_correlation(target, &pred, target.ncols(), config.score_aggregation)
                    .map(|v| v.clamp(-1.0, 1.0))
            })
            .collect::<Result<Vec<_>>>()?;
        for (&(i, j), v) in pairs.iter().zip(vals) {
            scores[(i, j)] = v;
        }
    } else {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let vals = pairs
            .par_iter()
            .map(|&(i, j)| score(metric, &centered[i], &centered[j], config))
            .collect::<Result<Vec<_>>>()?;
        for (&(i, j), v) in pairs.iter().zip(vals) {
            scores[(i, j)] = v;
        }
    }

    Ok(SimilarityMatrix {
        metric,
        model_ids: mats.iter().map(|m| m.model_id().to_string()).collect(),
        scores,
        symmetrized: false,
    })
}

/// `(S + Sᵀ)/2`, exactly symmetric.
pub fn symmetrize(sim: &SimilarityMatrix) -> SimilarityMatrix {
    let k = sim.len();
    let s = &sim.scores;
    let scores = DMatrix::from_fn(k, k, |i, j| if i == j { s[(i, i)] } else { 0.5 * (s[(i, j)] + s[(j, i)]) });
    SimilarityMatrix {
        metric: sim.metric,
        model_ids: sim.model_ids.clone(),
        scores,
        symmetrized: true,
    }
}
