//! Family-separability measures over a similarity matrix: d′, silhouette and
//! ROC-AUC, plus their aggregation into per-family-pair tables.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::{Metric, ModelRecord, SimilarityMatrix};
use crate::error::{Error, Result};
use crate::metrics::symmetrize;
use crate::numerics::average_ranks;

/// Pooled standard deviations below this count as zero.
pub const ZERO_SPREAD: f64 = 1e-15;

/// Similarity samples for one family pair. No self-pairs are included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairSample {
    pub within_a: Vec<f64>,
    pub within_b: Vec<f64>,
    pub between: Vec<f64>,
}

impl PairSample {
    /// Gathers the samples from `sim` for the models at indices `a` and `b`.
    ///
    /// `between` is sorted so that swapping `a` and `b` yields the same list.
    pub fn from_similarity(sim: &SimilarityMatrix, a: &[usize], b: &[usize]) -> Self {
        let mut between: Vec<f64> = a
            .iter()
            .flat_map(|&i| b.iter().map(move |&j| sim.get(i, j)))
            .collect();
        between.sort_by(f64::total_cmp);
        Self {
            within_a: within(sim, a),
            within_b: within(sim, b),
            between,
        }
    }
}

fn within(sim: &SimilarityMatrix, members: &[usize]) -> Vec<f64> {
    let mut out = Vec::new();
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            out.push(sim.get(i, j));
        }
    }
    out
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// `(μ_within − μ_between) / sqrt(0.5·(σ²_within + σ²_between))` with
/// population variances.
///
/// A zero pooled spread gives 0 when the means agree and ±∞ otherwise.
pub fn dprime_directional(within: &[f64], between: &[f64]) -> Result<f64> {
    if within.is_empty() || between.is_empty() {
        return Err(Error::TooFewSamples(format!(
            "d-prime needs nonempty samples, got {} within and {} between",
            within.len(),
            between.len()
        )));
    }
    let (mw, vw) = mean_var(within);
    let (mb, vb) = mean_var(between);
    let diff = mw - mb;
    let pooled = (0.5 * (vw + vb)).sqrt();
    if pooled < ZERO_SPREAD {
        return Ok(if diff.abs() <= ZERO_SPREAD {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        });
    }
    Ok(diff / pooled)
}

/// Bidirectional d′ for a family pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDPrime {
    pub value: f64,
    /// Only one family had enough members to define its direction.
    pub single_direction: bool,
    /// The two directions were infinite with opposite signs.
    pub conflicting_infinite: bool,
}

/// Mean of the two directional d′ values (family A's within pairs vs the
/// between pairs, and family B's).
pub fn dprime_pair(sample: &PairSample) -> Result<PairDPrime> {
    let da = (!sample.within_a.is_empty())
        .then(|| dprime_directional(&sample.within_a, &sample.between))
        .transpose()?;
    let db = (!sample.within_b.is_empty())
        .then(|| dprime_directional(&sample.within_b, &sample.between))
        .transpose()?;
    match (da, db) {
        (Some(a), Some(b)) => {
            let conflicting = a.is_infinite() && b.is_infinite() && a.signum() != b.signum();
            Ok(PairDPrime {
                value: if conflicting { 0.0 } else { (a + b) / 2.0 },
                single_direction: false,
                conflicting_infinite: conflicting,
            })
        }
        (Some(v), None) | (None, Some(v)) => Ok(PairDPrime {
            value: v,
            single_direction: true,
            conflicting_infinite: false,
        }),
        (None, None) => Err(Error::TooFewSamples(
            "d-prime needs a family with at least 2 members".into(),
        )),
    }
}

fn family_indices(sim: &SimilarityMatrix, ids: &[impl AsRef<str>]) -> Result<Vec<usize>> {
    ids.iter()
        .map(|id| {
            sim.index_of(id.as_ref())
                .ok_or_else(|| Error::Unlabeled(id.as_ref().to_string()))
        })
        .collect()
}

/// Mean silhouette of two families, averaged over both directions, with
/// distance `1 − similarity`.
pub fn silhouette_pair(sim: &SimilarityMatrix, family_a: &[impl AsRef<str>], family_b: &[impl AsRef<str>]) -> Result<f64> {
    let a = family_indices(sim, family_a)?;
    let b = family_indices(sim, family_b)?;
    silhouette_indices(sim, &a, &b)
}

fn silhouette_indices(sim: &SimilarityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooFewSamples(format!(
            "silhouette needs at least 2 members per family, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok((silhouette_side(sim, a, b) + silhouette_side(sim, b, a)) / 2.0)
}

fn silhouette_side(sim: &SimilarityMatrix, own: &[usize], other: &[usize]) -> f64 {
    let dist = |i: usize, j: usize| 1.0 - sim.get(i, j);
    let total: f64 = own
        .iter()
        .map(|&i| {
            let a = own.iter().filter(|&&j| j != i).map(|&j| dist(i, j)).sum::<f64>()
                / (own.len() - 1) as f64;
            let b = other.iter().map(|&j| dist(i, j)).sum::<f64>() / other.len() as f64;
            silhouette_value(a, b)
        })
        .sum();
    total / own.len() as f64
}

/// `(b − a) / max(a, b)`, or 0 when both distances are zero.
pub fn silhouette_value(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m <= 0.0 {
        0.0
    } else {
        ((b - a) / m).clamp(-1.0, 1.0)
    }
}

/// Area under the ROC curve and the curve itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Roc {
    pub auc: f64,
    /// `(false-positive rate, true-positive rate)` from `(0, 0)` to `(1, 1)`.
    pub points: Vec<(f64, f64)>,
}

/// ROC-AUC with positives expected to score higher than negatives.
///
/// The AUC is the Mann–Whitney rank statistic with average ranks for ties, so
/// a tied positive/negative pair counts one half. The curve has one point per
/// distinct score, thresholding from the highest score down.
pub fn roc_auc(positives: &[f64], negatives: &[f64]) -> Result<Roc> {
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::TooFewSamples(format!(
            "ROC-AUC needs positives and negatives, got {} and {}",
            positives.len(),
            negatives.len()
        )));
    }
    let (np, nn) = (positives.len() as f64, negatives.len() as f64);
    let all: Vec<f64> = positives.iter().chain(negatives).copied().collect();
    let ranks = average_ranks(&all);
    let rank_sum: f64 = ranks[..positives.len()].iter().sum();
    let auc = (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);

    let mut scored: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = 0;
    while k < scored.len() {
        let threshold = scored[k].0;
        while k < scored.len() && scored[k].0 == threshold {
            if scored[k].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        points.push((fp as f64 / nn, tp as f64 / np));
    }
    Ok(Roc { auc, points })
}

/// Trapezoid area under a list of ROC points.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

/// Separability values for one unordered family pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub a: String,
    pub b: String,
    #[serde(with = "sentinel")]
    pub dprime: f64,
    pub silhouette: f64,
    pub auc: f64,
    #[serde(default)]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Mean d′ over family pairs, excluding infinite values.
    #[serde(with = "sentinel")]
    pub dprime_mean: f64,
    /// d′ of all within-family pairs against all between-family pairs.
    #[serde(with = "sentinel")]
    pub dprime_pooled: f64,
    /// Number of family pairs left out of `dprime_mean` for being infinite.
    pub dprime_infinite_count: usize,
    pub silhouette_mean: f64,
    pub auc_mean: f64,
}

/// Per-family-pair separability table plus the global ROC for one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub metric: Metric,
    pub families: Vec<String>,
    pub pairs: Vec<PairEntry>,
    pub global_auc: f64,
    pub roc: Vec<[f64; 2]>,
    pub summary: Summary,
}

impl SeparabilityReport {
    /// The entry for a family pair, in either order.
    pub fn pair(&self, a: &str, b: &str) -> Option<&PairEntry> {
        self.pairs
            .iter()
            .find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Flat table with one row per family pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,a,b,dprime,silhouette,auc,flags\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.metric,
                p.a,
                p.b,
                sentinel::to_text(p.dprime),
                p.silhouette,
                p.auc,
                p.flags.join(";")
            ));
        }
        out
    }
}

/// Builds the family-pair table and global ROC for `sim`, taking family
/// labels from `records`.
///
/// Families appear in order of first appearance among the matrix's models.
/// An unsymmetrized matrix is symmetrized first.
pub fn build_report(sim: &SimilarityMatrix, records: &[ModelRecord]) -> Result<SeparabilityReport> {
    let sim = if sim.symmetrized { sim.clone() } else { symmetrize(sim) };
    let labels: HashMap<&str, &str> = records
        .iter()
        .map(|r| (r.model_id.as_str(), r.family.as_str()))
        .collect();

    let mut families: Vec<String> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, id) in sim.model_ids.iter().enumerate() {
        let fam = labels.get(id.as_str()).ok_or_else(|| Error::Unlabeled(id.clone()))?;
        match families.iter().position(|f| f == fam) {
            Some(k) => members[k].push(i),
            None => {
                families.push(fam.to_string());
                members.push(vec![i]);
            }
        }
    }
    if families.len() < 2 {
        return Err(Error::DegenerateFamilies(format!(
            "need at least 2 families, found {}",
            families.len()
        )));
    }
    if let Some(k) = members.iter().position(|m| m.len() < 2) {
        return Err(Error::DegenerateFamilies(format!(
            "family `{}` has {} member(s); every family needs at least 2",
            families[k],
            members[k].len()
        )));
    }

    let mut pairs = Vec::new();
    for a in 0..families.len() {
        for b in a + 1..families.len() {
            let sample = PairSample::from_similarity(&sim, &members[a], &members[b]);
            let d = dprime_pair(&sample)?;
            let positives: Vec<f64> = sample.within_a.iter().chain(&sample.within_b).copied().collect();
            let auc = roc_auc(&positives, &sample.between)?.auc;
            let mut flags = Vec::new();
            if d.value.is_infinite() {
                flags.push("dprime_infinite".to_string());
            }
            if d.single_direction {
                flags.push("dprime_single_direction".to_string());
            }
            if d.conflicting_infinite {
                flags.push("dprime_conflicting_infinite".to_string());
            }
            pairs.push(PairEntry {
                a: families[a].clone(),
                b: families[b].clone(),
                dprime: d.value,
                silhouette: silhouette_indices(&sim, &members[a], &members[b])?,
                auc,
                flags,
            });
        }
    }

    let family_of: Vec<usize> = {
        let mut f = vec![0; sim.len()];
        for (k, m) in members.iter().enumerate() {
            for &i in m {
                f[i] = k;
            }
        }
        f
    };
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for i in 0..sim.len() {
        for j in i + 1..sim.len() {
            if family_of[i] == family_of[j] {
                pos.push(sim.get(i, j));
            } else {
                neg.push(sim.get(i, j));
            }
        }
    }
    let global = roc_auc(&pos, &neg)?;

    let finite: Vec<f64> = pairs.iter().map(|p| p.dprime).filter(|d| d.is_finite()).collect();
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let summary = Summary {
        dprime_mean: mean(&finite),
        dprime_pooled: dprime_directional(&pos, &neg)?,
        dprime_infinite_count: pairs.len() - finite.len(),
        silhouette_mean: mean(&pairs.iter().map(|p| p.silhouette).collect::<Vec<_>>()),
        auc_mean: mean(&pairs.iter().map(|p| p.auc).collect::<Vec<_>>()),
    };

    Ok(SeparabilityReport {
        metric: sim.metric,
        families,
        pairs,
        global_auc: global.auc,
        roc: global.points.iter().map(|&(x, y)| [x, y]).collect(),
        summary,
    })
}

/// Serializes non-finite values as the strings `"inf"`, `"-inf"` and `"nan"`.
mod sentinel {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn to_text(v: f64) -> String {
        if v == f64::INFINITY {
            "inf".into()
        } else if v == f64::NEG_INFINITY {
            "-inf".into()
        } else if v.is_nan() {
            "nan".into()
        } else {
            v.to_string()
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&to_text(*v))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad number `{other}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Direct transcription of the d′ formula, kept apart from the library path.
    fn dprime_oracle(w: &[f64], b: &[f64]) -> f64 {
        let mw = w.iter().sum::<f64>() / w.len() as f64;
        let mb = b.iter().sum::<f64>() / b.len() as f64;
        let vw = w.iter().map(|x| (x - mw) * (x - mw)).sum::<f64>() / w.len() as f64;
        let vb = b.iter().map(|x| (x - mb) * (x - mb)).sum::<f64>() / b.len() as f64;
        (mw - mb) / (0.5 * (vw + vb)).sqrt()
    }

    fn sim_from(ids: &[&str], s: DMatrix<f64>) -> SimilarityMatrix {
        SimilarityMatrix {
            metric: Metric::Rsa,
            model_ids: ids.iter().map(|s| s.to_string()).collect(),
            scores: s,
            symmetrized: true,
        }
    }

    #[test]
    fn dprime_examples() {
        let v = dprime_directional(&[0.9, 0.8], &[0.1, 0.2]).unwrap();
        assert!((dprime_oracle(&[0.9, 0.8], &[0.1, 0.2]) - 14.0).abs() < 1e-9);
        assert!((v - 14.0).abs() < 1e-9);
        assert_eq!(dprime_directional(&[0.3, 0.6, 0.1], &[0.3, 0.6, 0.1]).unwrap(), 0.0);
        assert_eq!(dprime_directional(&[0.5, 0.5], &[0.2, 0.2]).unwrap(), f64::INFINITY);
        assert_eq!(dprime_directional(&[0.2, 0.2], &[0.5, 0.5]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(dprime_directional(&[0.4], &[0.4]).unwrap(), 0.0);
        assert!(dprime_directional(&[], &[0.1]).is_err());
    }

    #[test]
    fn dprime_pair_examples() {
        let s = PairSample {
            within_a: vec![0.9, 0.8],
            within_b: vec![0.9, 0.8],
            between: vec![0.1, 0.2],
        };
        let d = dprime_pair(&s).unwrap();
        assert_eq!(d.value, dprime_directional(&s.within_a, &s.between).unwrap());

        let s = PairSample {
            within_a: vec![0.9, 0.8],
            within_b: vec![0.7, 0.6],
            between: vec![0.1, 0.2],
        };
        assert!((dprime_oracle(&[0.7, 0.6], &[0.1, 0.2]) - 10.0).abs() < 1e-9);
        let d = dprime_pair(&s).unwrap();
        assert!((d.value - 12.0).abs() < 1e-9);
        assert!(!d.single_direction);

        // families of sizes 2 and 1
        let s = PairSample {
            within_a: vec![0.9],
            within_b: vec![],
            between: vec![0.1, 0.2],
        };
        let d = dprime_pair(&s).unwrap();
        assert!(d.single_direction);
        assert_eq!(d.value, dprime_directional(&[0.9], &[0.1, 0.2]).unwrap());

        let s = PairSample {
            within_a: vec![0.9],
            within_b: vec![0.9, 0.8],
            between: vec![0.5, 0.5],
        };
        assert_eq!(dprime_pair(&s).unwrap().value, f64::INFINITY);
    }

    #[test]
    fn silhouette_examples() {
        let ids = ["a1", "a2", "b1", "b2"];
        // perfect clustering
        let s = sim_from(&ids, DMatrix::from_fn(4, 4, |i, j| if i / 2 == j / 2 { 1.0 } else { 0.0 }));
        assert_eq!(silhouette_pair(&s, &["a1", "a2"], &["b1", "b2"]).unwrap(), 1.0);
        // a(i) = 0.2, b(i) = 0.8
        let s = sim_from(
            &ids,
            DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else if i / 2 == j / 2 { 0.8 } else { 0.2 }),
        );
        let v = silhouette_pair(&s, &["a1", "a2"], &["b1", "b2"]).unwrap();
        assert!((v - 0.75).abs() < 1e-12);
        // everything equally similar
        let s = sim_from(&ids, DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.4 }));
        assert_eq!(silhouette_pair(&s, &["a1", "a2"], &["b1", "b2"]).unwrap(), 0.0);
        assert!(silhouette_pair(&s, &["a1"], &["b1", "b2"]).is_err());
        assert!(matches!(silhouette_pair(&s, &["zz", "a1"], &["b1", "b2"]), Err(Error::Unlabeled(_))));
    }

    #[test]
    fn auc_examples() {
        let r = roc_auc(&[0.9, 0.4], &[0.6, 0.1]).unwrap();
        assert_eq!(r.auc, 0.75);
        assert_eq!(r.points, vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]);
        assert_eq!(trapezoid_area(&r.points), 0.75);
        assert_eq!(roc_auc(&[0.9, 0.8], &[0.1, 0.2]).unwrap().auc, 1.0);
        let same = [0.3, 0.5, 0.5, 0.9];
        let r = roc_auc(&same, &same).unwrap();
        assert_eq!(r.auc, 0.5);
        assert_eq!(trapezoid_area(&r.points), 0.5);
        assert!(roc_auc(&[], &[0.1]).is_err());
    }

    #[test]
    fn auc_counts_pairs() {
        // independent pair-enumeration check
        let pos = [0.3, 0.7, 0.7, 0.2, 0.95];
        let neg = [0.1, 0.7, 0.5, 0.25];
        let mut credit = 0.0;
        for p in pos {
            for n in neg {
                credit += if p > n { 1.0 } else if p == n { 0.5 } else { 0.0 };
            }
        }
        let expected = credit / 20.0;
        let r = roc_auc(&pos, &neg).unwrap();
        assert!((r.auc - expected).abs() < 1e-15);
        assert!((trapezoid_area(&r.points) - expected).abs() < 1e-15);
    }

    fn two_by_two() -> (SimilarityMatrix, Vec<ModelRecord>) {
        let s = nalgebra::dmatrix![
            1.0, 0.9, 0.2, 0.3;
            0.9, 1.0, 0.1, 0.25;
            0.2, 0.1, 1.0, 0.7;
            0.3, 0.25, 0.7, 1.0
        ];
        let sim = sim_from(&["a1", "a2", "b1", "b2"], s);
        let recs = vec![
            ModelRecord::new("a1", "A", "x"),
            ModelRecord::new("a2", "A", "x"),
            ModelRecord::new("b1", "B", "x"),
            ModelRecord::new("b2", "B", "x"),
        ];
        (sim, recs)
    }

    #[test]
    fn report_matches_operations() {
        let (sim, recs) = two_by_two();
        let r = build_report(&sim, &recs).unwrap();
        assert_eq!(r.families, vec!["A", "B"]);
        assert_eq!(r.pairs.len(), 1);
        let p = &r.pairs[0];
        let between = [0.2, 0.3, 0.1, 0.25];
        let d = (dprime_oracle(&[0.9], &between) + dprime_oracle(&[0.7], &between)) / 2.0;
        assert!((p.dprime - d).abs() < 1e-12);
        assert_eq!(p.auc, roc_auc(&[0.9, 0.7], &between).unwrap().auc);
        assert_eq!(p.auc, 1.0);
        assert_eq!(p.silhouette, silhouette_pair(&sim, &["a1", "a2"], &["b1", "b2"]).unwrap());
        assert_eq!(r.global_auc, 1.0);
        assert_eq!(r.roc.first(), Some(&[0.0, 0.0]));
        assert_eq!(r.roc.last(), Some(&[1.0, 1.0]));
        assert_eq!(r.pair("B", "A"), r.pair("A", "B"));
    }

    #[test]
    fn report_flat_similarities() {
        let ids = ["a1", "a2", "b1", "b2", "c1", "c2"];
        let sim = sim_from(&ids, DMatrix::from_fn(6, 6, |i, j| if i == j { 1.0 } else { 0.37 }));
        let recs: Vec<_> = ids.iter().map(|id| ModelRecord::new(*id, &id[..1], "x")).collect();
        let r = build_report(&sim, &recs).unwrap();
        assert_eq!(r.pairs.len(), 3);
        for p in &r.pairs {
            assert_eq!(p.dprime, 0.0);
            assert_eq!(p.silhouette, 0.0);
            assert_eq!(p.auc, 0.5);
        }
        assert_eq!(r.global_auc, 0.5);
    }

    #[test]
    fn report_json_round_trip_with_sentinels() {
        let ids = ["a1", "a2", "b1", "b2"];
        let sim = sim_from(
            &ids,
            DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else if i / 2 == j / 2 { 0.8 } else { 0.1 }),
        );
        let recs: Vec<_> = ids.iter().map(|id| ModelRecord::new(*id, &id[..1], "x")).collect();
        let r = build_report(&sim, &recs).unwrap();
        assert_eq!(r.pairs[0].dprime, f64::INFINITY);
        assert_eq!(r.summary.dprime_infinite_count, 1);
        let text = r.to_json();
        assert!(text.contains("\"inf\""));
        assert_eq!(SeparabilityReport::from_json(&text).unwrap(), r);
        assert!(r.to_csv().lines().nth(1).unwrap().contains(",inf,"));
    }

    #[test]
    fn report_errors() {
        let (sim, mut recs) = two_by_two();
        recs.pop();
        assert!(matches!(build_report(&sim, &recs), Err(Error::Unlabeled(id)) if id == "b2"));
        let (sim, mut recs) = two_by_two();
        recs[3].family = "C".into();
        assert!(matches!(build_report(&sim, &recs), Err(Error::DegenerateFamilies(_))));
        let (sim, mut recs) = two_by_two();
        for r in &mut recs {
            r.family = "A".into();
        }
        assert!(matches!(build_report(&sim, &recs), Err(Error::DegenerateFamilies(_))));
    }
}
