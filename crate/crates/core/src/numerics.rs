//! Numerical kernels shared by the metrics: correlations, ranking, minimum-norm
//! least squares, orthogonal Procrustes and zero-padding.

use nalgebra::{DMatrix, DVector};

use crate::data::ActivationMatrix;
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest are treated as zero.
pub const PINV_RCOND: f64 = 1e-10;

const SVD_MAX_ITER: usize = 10_000;

/// A correlation value plus a flag set when either input had zero variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    pub degenerate: bool,
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "correlation inputs have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples(format!(
            "correlation needs at least 2 observations, got {}",
            a.len()
        )));
    }
    Ok(())
}

/// Centered sum of squares, or `None` when the vector is numerically constant.
fn spread(v: &[f64], mean: f64) -> Option<f64> {
    let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = (1e-12 * scale).powi(2) * v.len() as f64;
    (ss > floor && ss > 0.0).then_some(ss)
}

/// Product-moment correlation with the degenerate-input flag.
pub fn pearson_checked(a: &[f64], b: &[f64]) -> Result<Correlation> {
    check_pair(a, b)?;
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (Some(sa), Some(sb)) = (spread(a, ma), spread(b, mb)) else {
        return Ok(Correlation {
            value: 0.0,
            degenerate: true,
        });
    };
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    Ok(Correlation {
        value: (cov / (sa.sqrt() * sb.sqrt())).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Pearson correlation; zero-variance input yields 0.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    pearson_checked(a, b).map(|c| c.value)
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && v[idx[end]] == v[idx[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &idx[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

pub fn spearman_checked(a: &[f64], b: &[f64]) -> Result<Correlation> {
    check_pair(a, b)?;
    pearson_checked(&average_ranks(a), &average_ranks(b))
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    spearman_checked(a, b).map(|c| c.value)
}

/// Unconstrained linear map `B` (target units × source units) with `Y ≈ X·Bᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<f64>);

impl LinearMap {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Applies the map to source activations: `X·Bᵀ`.
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        x * self.0.transpose()
    }
}

/// Orthogonal N×N map `R` with `RᵀR = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap(DMatrix<f64>);

impl OrthogonalMap {
    pub const TOLERANCE: f64 = 1e-8;

    /// Wraps `m` after checking orthogonality within [`Self::TOLERANCE`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("{}x{} map is not square", m.nrows(), m.ncols())));
        }
        let dev = orthogonality_error(&m);
        if dev > Self::TOLERANCE {
            return Err(Error::Shape(format!("map deviates from orthogonality by {dev:e}")));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `X·Rᵀ`.
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        x * self.0.transpose()
    }
}

/// Max absolute entry of `MᵀM − I`.
pub fn orthogonality_error(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    (m.transpose() * m - DMatrix::<f64>::identity(n, n)).amax()
}

fn check_finite(m: &DMatrix<f64>) -> Result<()> {
    for (j, col) in m.column_iter().enumerate() {
        if let Some(i) = col.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(())
}

/// Minimum-norm least-squares map from `x` (M×Ni) to `y` (M×Nj).
///
/// Solves `min ‖Y − X·Bᵀ‖²` through the SVD pseudoinverse of `X`, dropping
/// singular values below [`PINV_RCOND`] times the largest.
pub fn least_squares(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<LinearMap> {
    if x.nrows() != y.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "least squares: source has {} stimuli, target has {}",
            x.nrows(),
            y.nrows()
        )));
    }
    check_finite(x)?;
    check_finite(y)?;
    let pinv = pseudo_inverse(x)?;
    Ok(LinearMap((pinv * y).transpose()))
}

/// Moore–Penrose pseudoinverse with relative cutoff [`PINV_RCOND`].
pub fn pseudo_inverse(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let svd = x
        .clone()
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(Error::SvdFailure)?;
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let smax = svd.singular_values.max();
    let cutoff = smax * PINV_RCOND;
    let inv = DVector::from_iterator(
        svd.singular_values.len(),
        svd.singular_values
            .iter()
            .map(|&s| if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 }),
    );
    // V · diag(1/s) · Uᵀ
    let mut v = vt.transpose();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= inv[j];
    }
    Ok(v * u.transpose())
}

/// Orthogonal Procrustes: the `R ∈ O(N)` minimizing `‖Y − X·Rᵀ‖²`.
///
/// With `YᵀX = U·S·Vᵀ` the minimizer is `R = U·Vᵀ`.
pub fn procrustes_solve(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<OrthogonalMap> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "procrustes needs equal shapes, got {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    check_finite(x)?;
    check_finite(y)?;
    let cross = y.transpose() * x;
    let svd = cross
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(Error::SvdFailure)?;
    let r = svd.u.unwrap() * svd.v_t.unwrap();
    OrthogonalMap::new(r)
}

/// Appends zero columns so `x` has `target_units` columns.
pub fn zero_pad(x: &ActivationMatrix, target_units: usize) -> Result<ActivationMatrix> {
    let n = x.units();
    if target_units < n {
        return Err(Error::Shape(format!(
            "cannot pad {n} units down to {target_units}"
        )));
    }
    if target_units == n {
        return Ok(x.clone());
    }
    let data = x.data().clone().resize_horizontally(target_units, 0.0);
    Ok(ActivationMatrix::from_parts_unchecked(
        x.model_id().to_string(),
        data,
        x.centered(),
    ))
}
