//! Run configuration: a JSON file whose fields can be overridden by flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use repsep::{Metric, MetricConfig, RdmDissimilarity, ScoreAggregation};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct Export {
    pub json: bool,
    pub csv: bool,
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub metrics: Vec<Metric>,
    pub metric_config: MetricConfig,
    pub output_dir: PathBuf,
    pub jobs: usize,
    /// Reserved; the pipeline is deterministic and draws no random numbers.
    pub seed: u64,
    pub export: Export,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    manifest: String,
    #[serde(default)]
    metrics: Option<Vec<String>>,
    #[serde(default)]
    rdm_dissimilarity: RdmDissimilarity,
    #[serde(default)]
    score_aggregation: ScoreAggregation,
    #[serde(default = "default_output")]
    output_dir: String,
    #[serde(default = "default_jobs")]
    jobs: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    export: RawExport,
    #[serde(default)]
    #[allow(dead_code)]
    meta: Option<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawExport {
    json: bool,
    csv: bool,
    svg: bool,
}

impl Default for RawExport {
    fn default() -> Self {
        Self {
            json: true,
            csv: true,
            svg: false,
        }
    }
}

fn default_output() -> String {
    "out".into()
}

fn default_jobs() -> usize {
    1
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub metrics: Option<Vec<Metric>>,
    pub output_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub svg: bool,
}

pub fn parse_metric_list(s: &str) -> Result<Vec<Metric>> {
    let mut out: Vec<Metric> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Metric = part.parse().map_err(anyhow::Error::msg)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base, overrides).with_context(|| format!("in config {}", path.display()))
    }

    /// Parses config text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path, overrides: &Overrides) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let metrics = match (&overrides.metrics, raw.metrics) {
            (Some(m), _) => m.clone(),
            (None, Some(list)) => parse_metric_list(&list.join(","))?,
            (None, None) => Metric::ALL.to_vec(),
        };
        if metrics.is_empty() {
            bail!("metric set is empty");
        }
        let jobs = overrides.jobs.unwrap_or(raw.jobs);
        if jobs == 0 {
            bail!("jobs must be at least 1");
        }
        let output_dir = overrides
            .output_dir
            .clone()
            .unwrap_or_else(|| base.join(&raw.output_dir));
        Ok(Self {
            manifest: base.join(&raw.manifest),
            metrics,
            metric_config: MetricConfig {
                rdm_dissimilarity: raw.rdm_dissimilarity,
                score_aggregation: raw.score_aggregation,
            },
            output_dir,
            jobs,
            seed: raw.seed,
            export: Export {
                json: raw.export.json,
                csv: raw.export.csv,
                svg: raw.export.svg || overrides.svg,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_resolution() {
        let c = RunConfig::parse(r#"{"manifest": "m.json"}"#, Path::new("/cfg"), &Overrides::default()).unwrap();
        assert_eq!(c.manifest, PathBuf::from("/cfg/m.json"));
        assert_eq!(c.output_dir, PathBuf::from("/cfg/out"));
        assert_eq!(c.metrics, Metric::ALL.to_vec());
        assert_eq!(c.jobs, 1);
        assert!(c.export.json && c.export.csv && !c.export.svg);
    }

    #[test]
    fn flags_win() {
        let text = r#"{"manifest": "m.json", "metrics": ["rsa", "procrustes"], "jobs": 2,
                       "rdm_dissimilarity": "correlation_distance"}"#;
        let o = Overrides {
            metrics: Some(vec![Metric::LinearPredictivity]),
            output_dir: Some("/elsewhere".into()),
            jobs: Some(8),
            svg: true,
        };
        let c = RunConfig::parse(text, Path::new(""), &o).unwrap();
        assert_eq!(c.metrics, vec![Metric::LinearPredictivity]);
        assert_eq!(c.output_dir, PathBuf::from("/elsewhere"));
        assert_eq!(c.jobs, 8);
        assert!(c.export.svg);
        assert_eq!(c.metric_config.rdm_dissimilarity, RdmDissimilarity::CorrelationDistance);
    }

    #[test]
    fn rejects_bad_configs() {
        let none = Overrides::default();
        assert!(RunConfig::parse(r#"{"manifest": "m", "metrics": []}"#, Path::new(""), &none).is_err());
        assert!(RunConfig::parse(r#"{"manifest": "m", "metrics": ["cka"]}"#, Path::new(""), &none).is_err());
        assert!(RunConfig::parse(r#"{"manifest": "m", "jobs": 0}"#, Path::new(""), &none).is_err());
        assert!(RunConfig::parse(r#"{"manifest": "m", "bogus": 1}"#, Path::new(""), &none).is_err());
    }

    #[test]
    fn metric_list_aliases() {
        assert_eq!(
            parse_metric_list("rsa,softmatch,procrustes,linpred").unwrap(),
            Metric::ALL.to_vec()
        );
        assert_eq!(parse_metric_list("rsa, rsa").unwrap(), vec![Metric::Rsa]);
    }
}
