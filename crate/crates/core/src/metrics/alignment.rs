//! Mapping-based metrics: soft matching, Procrustes and linear predictivity.
//!
//! Each fits a map from the source model `x_i` to the target model `x_j` and
//! scores the correlation between the target and the mapped source.

use nalgebra::DMatrix;

use super::{centered, check_stimuli, MetricConfig, ScoreAggregation};
use crate::data::ActivationMatrix;
use crate::error::Result;
use crate::numerics::{least_squares, pearson, pearson_checked, procrustes_solve, zero_pad};
use crate::transport::{solve_transport, TransportPlan};

/// Correlation between the first `units` columns of `target` and `prediction`.
pub fn alignment_correlation(
    target: &DMatrix<f64>,
    prediction: &DMatrix<f64>,
    units: usize,
    aggregation: ScoreAggregation,
) -> Result<f64> {
    let t = target.columns(0, units);
    let p = prediction.columns(0, units);
    match aggregation {
        ScoreAggregation::Flattened => {
            let tv: Vec<f64> = t.iter().copied().collect();
            let pv: Vec<f64> = p.iter().copied().collect();
            pearson(&tv, &pv)
        }
        ScoreAggregation::MeanPerUnit => {
            let mut total = 0.0;
            for (tc, pc) in t.column_iter().zip(p.column_iter()) {
                let tc: Vec<f64> = tc.iter().copied().collect();
                let pc: Vec<f64> = pc.iter().copied().collect();
                total += pearson_checked(&tc, &pc)?.value;
            }
            Ok(total / units as f64)
        }
    }
}

/// Soft-matching result: the transport plan and the alignment score.
#[derive(Debug, Clone)]
pub struct SoftMatch {
    pub plan: TransportPlan,
    /// `Ni × Nj` operator whose column `v` is the plan column renormalized to
    /// sum to one.
    pub alignment: DMatrix<f64>,
    pub score: f64,
}

/// Squared Euclidean distances between unit columns of `a` and `b`.
pub fn unit_cost_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let na: Vec<f64> = a.column_iter().map(|c| c.norm_squared()).collect();
    let nb: Vec<f64> = b.column_iter().map(|c| c.norm_squared()).collect();
    let cross = a.transpose() * b;
    DMatrix::from_fn(a.ncols(), b.ncols(), |u, v| (na[u] + nb[v] - 2.0 * cross[(u, v)]).max(0.0))
}

pub fn softmatch(x_i: &ActivationMatrix, x_j: &ActivationMatrix, config: &MetricConfig) -> Result<SoftMatch> {
    check_stimuli(x_i, x_j)?;
    let (xi, xj) = (centered(x_i), centered(x_j));
    let (src, tgt) = (xi.data(), xj.data());
    let plan = solve_transport(&unit_cost_matrix(src, tgt))?;
    let mut alignment = plan.plan.clone();
    for mut col in alignment.column_iter_mut() {
        let s = col.sum();
        col /= s;
    }
    let aligned = src * &alignment;
    let score = alignment_correlation(tgt, &aligned, tgt.ncols(), config.score_aggregation)?;
    Ok(SoftMatch {
        plan,
        alignment,
        score,
    })
}

pub fn softmatch_score(x_i: &ActivationMatrix, x_j: &ActivationMatrix, config: &MetricConfig) -> Result<f64> {
    softmatch(x_i, x_j, config).map(|s| s.score)
}

/// Orthogonal alignment after zero-padding both sides to the wider unit
/// count. Padded target columns are left out of the score.
pub fn procrustes_score(x_i: &ActivationMatrix, x_j: &ActivationMatrix, config: &MetricConfig) -> Result<f64> {
    check_stimuli(x_i, x_j)?;
    let (xi, xj) = (centered(x_i), centered(x_j));
    let width = xi.units().max(xj.units());
    let src = zero_pad(&xi, width)?;
    let tgt = zero_pad(&xj, width)?;
    let r = procrustes_solve(src.data(), tgt.data())?;
    let pred = r.apply(src.data());
    alignment_correlation(tgt.data(), &pred, xj.units(), config.score_aggregation)
}

/// Correlation between the target and its minimum-norm least-squares
/// prediction from the source.
pub fn linear_predictivity_score(
    x_i: &ActivationMatrix,
    x_j: &ActivationMatrix,
    config: &MetricConfig,
) -> Result<f64> {
    check_stimuli(x_i, x_j)?;
    let (xi, xj) = (centered(x_i), centered(x_j));
    let map = least_squares(xi.data(), xj.data())?;
    let pred = map.apply(xi.data());
    alignment_correlation(xj.data(), &pred, xj.units(), config.score_aggregation)
}
