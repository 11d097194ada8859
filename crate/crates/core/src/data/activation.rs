use std::path::Path;

use nalgebra::DMatrix;

use super::npy;
use crate::error::{Error, Result};

/// Stimuli × units activation table for one model.
///
/// Rows are stimuli, columns are units. Entries are always finite and stored
/// as `f64` regardless of the on-disk width.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationMatrix {
    model_id: String,
    data: DMatrix<f64>,
    centered: bool,
}

impl ActivationMatrix {
    /// Wraps `data`, checking the shape (at least 2 stimuli, 1 unit) and finiteness.
    pub fn new(model_id: impl Into<String>, data: DMatrix<f64>) -> Result<Self> {
        check_matrix(&data)?;
        Ok(Self {
            model_id: model_id.into(),
            data,
            centered: false,
        })
    }

    /// Builds a matrix from row vectors.
    pub fn from_rows(model_id: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::RaggedCsv {
                    row: i,
                    found: r.len(),
                    expected: n,
                });
            }
        }
        let data = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        Self::new(model_id, data)
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    /// Number of stimuli (rows).
    pub fn stimuli(&self) -> usize {
        self.data.nrows()
    }

    /// Number of units (columns).
    pub fn units(&self) -> usize {
        self.data.ncols()
    }

    pub fn with_model_id(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    /// Replaces the data while keeping the id. The result is not marked centered.
    pub fn map_data(&self, data: DMatrix<f64>) -> Result<Self> {
        Self::new(self.model_id.clone(), data)
    }

    pub(crate) fn from_parts_unchecked(model_id: String, data: DMatrix<f64>, centered: bool) -> Self {
        Self {
            model_id,
            data,
            centered,
        }
    }
}

fn check_matrix(data: &DMatrix<f64>) -> Result<()> {
    if data.nrows() < 2 || data.ncols() < 1 {
        return Err(Error::Shape(format!(
            "activation matrix must have at least 2 stimuli and 1 unit, got {}x{}",
            data.nrows(),
            data.ncols()
        )));
    }
    for j in 0..data.ncols() {
        for i in 0..data.nrows() {
            if !data[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Subtracts each column's mean. Idempotent; the result is flagged centered.
pub fn center_columns(x: &ActivationMatrix) -> ActivationMatrix {
    if x.centered {
        return x.clone();
    }
    let mut data = x.data.clone();
    let m = data.nrows() as f64;
    for mut col in data.column_iter_mut() {
        let mean = col.sum() / m;
        col.add_scalar_mut(-mean);
    }
    ActivationMatrix::from_parts_unchecked(x.model_id.clone(), data, true)
}

/// Loads an activation matrix from an `.npy` file or a headerless CSV file.
///
/// The format is chosen by the `.npy` extension first and then by sniffing the
/// NPY magic string, so CSV files may carry any extension. The model id is the
/// file stem.
pub fn load_activation_matrix(path: impl AsRef<Path>) -> Result<ActivationMatrix> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let data = if bytes.starts_with(npy::MAGIC) {
        npy::parse(&bytes).map_err(|e| annotate(path, e))?
    } else if path.extension().is_some_and(|e| e == "npy") {
        return Err(Error::Format {
            path: path.to_owned(),
            msg: "missing NPY magic string".into(),
        });
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::Format {
            path: path.to_owned(),
            msg: "CSV is not valid UTF-8".into(),
        })?;
        parse_csv(text).map_err(|e| annotate(path, e))?
    };
    ActivationMatrix::new(id, data).map_err(|e| annotate(path, e))
}

fn annotate(path: &Path, e: Error) -> Error {
    match e {
        Error::Format { .. } | Error::Io { .. } => e,
        other => Error::Format {
            path: path.to_owned(),
            msg: other.to_string(),
        },
    }
}

/// Parses headerless comma-separated reals, one stimulus per line.
pub fn parse_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                let f = f.trim();
                f.parse::<f64>().map_err(|_| {
                    Error::Shape(format!("line {}: cannot parse `{f}` as a number", lineno + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::RaggedCsv {
                    row: rows.len(),
                    found: row.len(),
                    expected: first.len(),
                });
            }
        }
        rows.push(row);
    }
    let n = rows.first().map_or(0, Vec::len);
    let data = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    check_matrix(&data)?;
    Ok(data)
}

/// Writes `x` as CSV using shortest round-trip decimal formatting.
pub fn to_csv(x: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&x[(i, j)].to_string());
        }
        out.push('\n');
    }
    out
}
