use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{Error, Result};

/// One model in a manifest: identity, family label and activation file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelRecord {
    pub model_id: String,
    pub family: String,
    pub path: PathBuf,
}

impl ModelRecord {
    pub fn new(model_id: impl Into<String>, family: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        Self {
            model_id: model_id.into(),
            family: family.into(),
            path: path.into(),
        }
    }
}

/// Reads a manifest file. Relative activation paths are resolved against the
/// manifest's own directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<ModelRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    parse_manifest(&text, base)
}

/// Parses manifest JSON text: `{"models": [{"id", "family", "path", "meta"?}, ...]}`.
///
/// Fails on the first violation; see [`check_manifest`] for a full listing.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ModelRecord>> {
    let (records, mut violations) = check_manifest(text, base);
    match violations.is_empty() {
        true => Ok(records),
        false => Err(violations.swap_remove(0)),
    }
}

/// Lenient pass over a manifest: every well-formed record plus every
/// violation found, in entry order.
pub fn check_manifest(text: &str, base: &Path) -> (Vec<ModelRecord>, Vec<Error>) {
    let doc: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return (Vec::new(), vec![Error::ManifestParse(e.to_string())]),
    };
    let Some(models) = doc.get("models").and_then(Value::as_array) else {
        return (
            Vec::new(),
            vec![Error::ManifestParse("missing top-level \"models\" array".into())],
        );
    };

    let mut seen = HashSet::new();
    let mut records = Vec::with_capacity(models.len());
    let mut violations = Vec::new();
    for (index, entry) in models.iter().enumerate() {
        let field = |name: &'static str| {
            entry
                .get(name)
                .and_then(Value::as_str)
                .filter(|v| name == "family" || !v.is_empty())
                .ok_or(Error::ManifestField { index, field: name })
        };
        let (id, family, rel) = match (field("id"), field("family"), field("path")) {
            (Ok(id), Ok(family), Ok(rel)) => (id, family, rel),
            (id, family, rel) => {
                violations.extend([id.err(), family.err(), rel.err()].into_iter().flatten());
                continue;
            }
        };
        if family.is_empty() {
            violations.push(Error::EmptyFamily {
                index,
                id: id.to_string(),
            });
            continue;
        }
        if !seen.insert(id.to_string()) {
            violations.push(Error::DuplicateModelId {
                index,
                id: id.to_string(),
            });
            continue;
        }
        records.push(ModelRecord::new(id, family, resolve(base, rel)));
    }
    (records, violations)
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    let mut out = base.to_path_buf();
    for c in p.components() {
        match c {
            std::path::Component::CurDir => {}
            std::path::Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// Renders records as manifest JSON; paths are written as given.
pub fn manifest_to_json(records: &[ModelRecord]) -> String {
    let models: Vec<Value> = records
        .iter()
        .map(|r| {
            serde_json::json!({
                "id": r.model_id,
                "family": r.family,
                "path": r.path.to_string_lossy(),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "models": models })).unwrap();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_entries_in_order() {
        let text = r#"{"models": [
            {"id": "b", "family": "cnn_sup", "path": "b.npy"},
            {"id": "a", "family": "trans_unsup", "path": "a.csv", "meta": {"hub": "x"}}
        ]}"#;
        let recs = parse_manifest(text, Path::new("/d")).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].model_id, "b");
        assert_eq!(recs[1].model_id, "a");
        assert_eq!(recs[1].family, "trans_unsup");
    }

    #[test]
    fn duplicate_id_named() {
        let text = r#"{"models": [
            {"id": "resnet50", "family": "f", "path": "x"},
            {"id": "resnet50", "family": "g", "path": "y"}
        ]}"#;
        let err = parse_manifest(text, Path::new("")).unwrap_err();
        assert!(matches!(&err, Error::DuplicateModelId { index: 1, id } if id == "resnet50"));
        assert!(err.to_string().contains("resnet50"));
    }

    #[test]
    fn relative_path_resolution() {
        let text = r#"{"models": [{"id": "vit", "family": "f", "path": "./acts/vit.npy"}]}"#;
        let recs = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(recs[0].path, PathBuf::from("/data/acts/vit.npy"));
    }

    #[test]
    fn missing_field_reports_index() {
        let text = r#"{"models": [{"id": "a", "family": "f", "path": "x"}, {"id": "b", "path": "y"}]}"#;
        let err = parse_manifest(text, Path::new("")).unwrap_err();
        assert!(matches!(err, Error::ManifestField { index: 1, field: "family" }));
    }

    #[test]
    fn empty_family_rejected() {
        let text = r#"{"models": [{"id": "a", "family": "", "path": "x"}]}"#;
        assert!(matches!(
            parse_manifest(text, Path::new("")),
            Err(Error::EmptyFamily { index: 0, .. })
        ));
    }

    #[test]
    fn check_lists_every_violation() {
        let text = r#"{"models": [
            {"id": "a", "family": "f", "path": "x"},
            {"id": "a", "family": "f", "path": "y"},
            {"family": "f"},
            {"id": "c", "family": "", "path": "z"}
        ]}"#;
        let (recs, errs) = check_manifest(text, Path::new(""));
        assert_eq!(recs.len(), 1);
        assert_eq!(errs.len(), 4);
        assert!(matches!(errs[0], Error::DuplicateModelId { index: 1, .. }));
        assert!(matches!(errs[1], Error::ManifestField { index: 2, field: "id" }));
        assert!(matches!(errs[2], Error::ManifestField { index: 2, field: "path" }));
        assert!(matches!(errs[3], Error::EmptyFamily { index: 3, .. }));
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(
            parse_manifest("{\"models\": [", Path::new("")),
            Err(Error::ManifestParse(_))
        ));
        assert!(matches!(
            parse_manifest("{}", Path::new("")),
            Err(Error::ManifestParse(_))
        ));
    }
}
