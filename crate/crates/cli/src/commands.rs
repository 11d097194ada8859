use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use repsep::data::check_manifest;
use repsep::metrics::{directional_similarity, load_models, symmetrize};
use repsep::{build_report, load_activation_matrix, load_manifest, SeparabilityReport, SimilarityMatrix};

use crate::config::RunConfig;
use crate::figures::{heatmap_svg, roc_svg, Measure};
use crate::output::OutputSet;

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")
}

/// Checks a manifest and its activation files, printing one row per model.
/// Returns whether everything passed; every violation is reported.
pub fn validate(manifest: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(manifest)
        .with_context(|| format!("reading manifest {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let (records, mut problems): (_, Vec<String>) = {
        let (r, errs) = check_manifest(&text, base);
        (r, errs.iter().map(ToString::to_string).collect())
    };

    let shapes: Vec<Option<(usize, usize)>> = records
        .iter()
        .map(|r| match load_activation_matrix(&r.path) {
            Ok(m) => Some((m.stimuli(), m.units())),
            Err(e) => {
                problems.push(format!("model `{}`: {e}", r.model_id));
                None
            }
        })
        .collect();

    // The most common stimulus count is taken as the reference; ties go to
    // the count seen first.
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for (m, _) in shapes.iter().flatten() {
        match counts.iter_mut().find(|(v, _)| v == m) {
            Some((_, c)) => *c += 1,
            None => counts.push((*m, 1)),
        }
    }
    let reference = counts
        .iter()
        .fold(None::<(usize, usize)>, |best, &(v, c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((v, c)),
        })
        .map(|(v, _)| v);

    println!("{:<32} {:>8} {:>8}  {:<20} status", "model_id", "M", "N", "family");
    for (r, shape) in records.iter().zip(&shapes) {
        let (m, n, status) = match shape {
            Some((m, n)) if Some(*m) != reference => {
                problems.push(format!(
                    "model `{}` has {m} stimuli, expected {}",
                    r.model_id,
                    reference.unwrap()
                ));
                (m.to_string(), n.to_string(), "stimulus count mismatch")
            }
            Some((m, n)) => (m.to_string(), n.to_string(), "ok"),
            None => ("-".into(), "-".into(), "unreadable"),
        };
        println!("{:<32} {:>8} {:>8}  {:<20} {status}", r.model_id, m, n, r.family);
    }
    for p in &problems {
        eprintln!("error: {p}");
    }
    if problems.is_empty() {
        println!("{} model(s) OK", records.len());
    }
    Ok(problems.is_empty())
}

/// Computes one symmetrized similarity matrix per configured metric.
pub fn similarity(config: &RunConfig) -> Result<Vec<std::path::PathBuf>> {
    let records = load_manifest(&config.manifest)
        .with_context(|| format!("loading manifest {}", config.manifest.display()))?;
    if records.is_empty() {
        bail!("manifest {} lists no models", config.manifest.display());
    }
    let pool = pool(config.jobs)?;
    let mut out = OutputSet::default();
    pool.install(|| -> Result<()> {
        let models = load_models(&records)?;
        for &metric in &config.metrics {
            log::info!("computing {metric} over {} models", models.len());
            let sim = symmetrize(&directional_similarity(&models, metric, &config.metric_config)?);
            let stem = metric.short_name();
            if config.export.json {
                out.add(config.output_dir.join(format!("{stem}.json")), sim.to_json());
            }
            if config.export.csv {
                out.add(config.output_dir.join(format!("{stem}.csv")), sim.to_csv());
            }
        }
        Ok(())
    })?;
    out.commit(&config.output_dir)
}

/// Separability reports (and optional figures) from previously written
/// similarity matrices.
pub fn separability(config: &RunConfig) -> Result<Vec<std::path::PathBuf>> {
    let records = load_manifest(&config.manifest)
        .with_context(|| format!("loading manifest {}", config.manifest.display()))?;
    let mut reports: BTreeMap<usize, SeparabilityReport> = BTreeMap::new();
    for (k, &metric) in config.metrics.iter().enumerate() {
        let path = config.output_dir.join(format!("{}.json", metric.short_name()));
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading similarity matrix {}", path.display()))?;
        let sim = SimilarityMatrix::from_json(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if sim.metric != metric {
            return Err(anyhow!("{} holds {} scores, expected {metric}", path.display(), sim.metric));
        }
        let report = build_report(&sim, &records).with_context(|| format!("analysing {}", path.display()))?;
        reports.insert(k, report);
    }

    let mut out = OutputSet::default();
    let dir = &config.output_dir;
    let mut summary = String::from("metric,dprime_mean,dprime_pooled,dprime_infinite_count,silhouette_mean,auc_mean,global_auc\n");
    for report in reports.values() {
        let stem = report.metric.short_name();
        if config.export.json {
            out.add(dir.join(format!("{stem}_separability.json")), report.to_json());
        }
        if config.export.csv {
            out.add(dir.join(format!("{stem}_separability.csv")), report.to_csv());
        }
        if config.export.svg {
            for m in Measure::ALL {
                out.add(
                    dir.join(format!("{stem}_{}_heatmap.svg", m.file_stem())),
                    heatmap_svg(report, m),
                );
            }
            out.add(
                dir.join(format!("{stem}_roc.svg")),
                roc_svg(
                    &format!("{}: global ROC", report.metric.label()),
                    &[(report.metric.label(), &report.roc, report.global_auc)],
                ),
            );
        }
        let s = &report.summary;
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            report.metric,
            s.dprime_mean,
            s.dprime_pooled,
            s.dprime_infinite_count,
            s.silhouette_mean,
            s.auc_mean,
            report.global_auc
        ));
    }
    if config.export.csv {
        out.add(dir.join("separability_summary.csv"), summary);
    }
    if config.export.svg {
        let curves: Vec<_> = reports
            .values()
            .map(|r| (r.metric.label(), r.roc.as_slice(), r.global_auc))
            .collect();
        out.add(dir.join("roc_overlay.svg"), roc_svg("Global ROC by metric", &curves));
    }
    for p in out.paths() {
        log::debug!("pending output {}", p.display());
    }
    out.commit(dir)
}
