use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four representational-similarity metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Rsa,
    Softmatch,
    Procrustes,
    LinearPredictivity,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Rsa,
        Metric::Softmatch,
        Metric::Procrustes,
        Metric::LinearPredictivity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Rsa => "rsa",
            Metric::Softmatch => "softmatch",
            Metric::Procrustes => "procrustes",
            Metric::LinearPredictivity => "linear_predictivity",
        }
    }

    /// Short name used for output file stems and command-line lists.
    pub fn short_name(self) -> &'static str {
        match self {
            Metric::LinearPredictivity => "linpred",
            m => m.as_str(),
        }
    }

    /// Human-readable label for figures.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Rsa => "RSA",
            Metric::Softmatch => "SoftMatch",
            Metric::Procrustes => "Procrustes",
            Metric::LinearPredictivity => "Linear Predictivity",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rsa" => Ok(Metric::Rsa),
            "softmatch" | "soft_matching" | "soft-matching" => Ok(Metric::Softmatch),
            "procrustes" => Ok(Metric::Procrustes),
            "linpred" | "linear_predictivity" | "linear-predictivity" => {
                Ok(Metric::LinearPredictivity)
            }
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// K×K matrix of metric scores over K models.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub metric: Metric,
    pub model_ids: Vec<String>,
    pub scores: DMatrix<f64>,
    pub symmetrized: bool,
}

#[derive(Serialize, Deserialize)]
struct SimilarityJson {
    metric: Metric,
    model_ids: Vec<String>,
    scores: Vec<Vec<f64>>,
    symmetrized: bool,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.model_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model_ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.model_ids.iter().position(|m| m == id)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[(i, j)]
    }

    /// Checks unit diagonal, range and (when flagged) exact symmetry.
    pub fn validate(&self) -> Result<()> {
        let k = self.model_ids.len();
        if self.scores.nrows() != k || self.scores.ncols() != k {
            return Err(Error::DimensionMismatch(format!(
                "{k} model ids but a {}x{} score matrix",
                self.scores.nrows(),
                self.scores.ncols()
            )));
        }
        for i in 0..k {
            if (self.scores[(i, i)] - 1.0).abs() > 1e-6 {
                return Err(Error::Shape(format!(
                    "self-similarity of `{}` is {}",
                    self.model_ids[i],
                    self.scores[(i, i)]
                )));
            }
            for j in 0..k {
                let s = self.scores[(i, j)];
                if !(-1.0..=1.0).contains(&s) {
                    return Err(Error::Shape(format!("score ({i},{j}) = {s} outside [-1, 1]")));
                }
                if self.symmetrized && s != self.scores[(j, i)] {
                    return Err(Error::Shape(format!("score ({i},{j}) is not symmetric")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = SimilarityJson {
            metric: self.metric,
            model_ids: self.model_ids.clone(),
            scores: self
                .scores
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            symmetrized: self.symmetrized,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("finite scores serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SimilarityJson = serde_json::from_str(text)?;
        let k = doc.model_ids.len();
        if doc.scores.len() != k || doc.scores.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "similarity matrix scores are not {k}x{k}"
            )));
        }
        let scores = DMatrix::from_fn(k, k, |i, j| doc.scores[i][j]);
        let out = Self {
            metric: doc.metric,
            model_ids: doc.model_ids,
            scores,
            symmetrized: doc.symmetrized,
        };
        out.validate()?;
        Ok(out)
    }

    /// CSV with a header row and a leading column of model ids.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model_id");
        for id in &self.model_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for (i, id) in self.model_ids.iter().enumerate() {
            out.push_str(id);
            for j in 0..self.model_ids.len() {
                out.push(',');
                out.push_str(&self.scores[(i, j)].to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn sample() -> SimilarityMatrix {
        SimilarityMatrix {
            metric: Metric::Procrustes,
            model_ids: vec!["a".into(), "b".into()],
            scores: dmatrix![1.0, 0.1 + 0.2; 0.1 + 0.2, 1.0],
            symmetrized: true,
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = sample();
        let back = SimilarityMatrix::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(s.to_json().contains("\"metric\": \"procrustes\""));
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "model_id,a,b");
        assert_eq!(lines[1], "a,1,0.30000000000000004");
    }

    #[test]
    fn metric_names() {
        for m in Metric::ALL {
            assert_eq!(m.as_str().parse::<Metric>().unwrap(), m);
            assert_eq!(m.short_name().parse::<Metric>().unwrap(), m);
        }
        assert!("cka".parse::<Metric>().is_err());
    }

    #[test]
    fn validate_rejects_asymmetry() {
        let mut s = sample();
        s.scores[(0, 1)] = 0.2;
        assert!(s.validate().is_err());
        s.symmetrized = false;
        assert!(s.validate().is_ok());
        s.scores[(1, 1)] = 0.9;
        assert!(s.validate().is_err());
    }
}
