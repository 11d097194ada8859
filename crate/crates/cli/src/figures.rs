//! Deterministic SVG figures: family-pair heatmaps and ROC curves.

use std::fmt::Write;

use repsep::SeparabilityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    DPrime,
    Silhouette,
    Auc,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::DPrime, Measure::Silhouette, Measure::Auc];

    pub fn file_stem(self) -> &'static str {
        match self {
            Measure::DPrime => "dprime",
            Measure::Silhouette => "silhouette",
            Measure::Auc => "auc",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Measure::DPrime => "d-prime",
            Measure::Silhouette => "silhouette",
            Measure::Auc => "ROC-AUC",
        }
    }

    fn value(self, report: &SeparabilityReport, a: &str, b: &str) -> Option<f64> {
        let p = report.pair(a, b)?;
        Some(match self {
            Measure::DPrime => p.dprime,
            Measure::Silhouette => p.silhouette,
            Measure::Auc => p.auc,
        })
    }

    /// Lower and upper ends of the color ramp.
    fn domain(self, values: &[f64]) -> (f64, f64) {
        let finite = values.iter().copied().filter(|v| v.is_finite());
        match self {
            Measure::Auc => (0.5, 1.0),
            Measure::Silhouette => (finite.fold(0.0, f64::min), finite_max(values, 1.0)),
            Measure::DPrime => (finite.fold(0.0, f64::min), finite_max(values, 2.0)),
        }
    }
}

fn finite_max(values: &[f64], floor: f64) -> f64 {
    values.iter().copied().filter(|v| v.is_finite()).fold(floor, f64::max)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Sequential white-to-blue ramp, `t` in `[0, 1]`.
fn ramp(t: f64) -> String {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(247.0, 8.0), lerp(251.0, 48.0), lerp(255.0, 107.0))
}

fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "∞".into()
    } else if v == f64::NEG_INFINITY {
        "−∞".into()
    } else {
        format!("{v:.2}")
    }
}

const CELL: f64 = 64.0;
const LEFT: f64 = 130.0;
const TOP: f64 = 50.0;

/// Family × family grid for one measure. Every off-diagonal cell is a
/// `rect.cell`; the undefined diagonal is left white.
pub fn heatmap_svg(report: &SeparabilityReport, measure: Measure) -> String {
    let fams = &report.families;
    let k = fams.len() as f64;
    let values: Vec<f64> = fams
        .iter()
        .flat_map(|a| fams.iter().filter_map(move |b| (a != b).then(|| measure.value(report, a, b)).flatten()))
        .collect();
    let (lo, hi) = measure.domain(&values);
    let width = LEFT + k * CELL + 20.0;
    let height = TOP + k * CELL + 110.0;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-size="15" text-anchor="middle">{}: {}</text>"#,
        width / 2.0,
        escape(report.metric.label()),
        measure.title()
    )
    .unwrap();
    for (r, a) in fams.iter().enumerate() {
        let y = TOP + r as f64 * CELL;
        writeln!(
            s,
            r#"<text class="row-label" x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + CELL / 2.0 + 4.0,
            escape(a)
        )
        .unwrap();
        for (c, b) in fams.iter().enumerate() {
            let x = LEFT + c as f64 * CELL;
            if r == c {
                writeln!(
                    s,
                    r##"<rect class="diag" x="{x:.1}" y="{y:.1}" width="{CELL:.1}" height="{CELL:.1}" fill="#ffffff" stroke="#dddddd"/>"##
                )
                .unwrap();
                continue;
            }
            let v = measure.value(report, a, b).unwrap_or(f64::NAN);
            let t = if v.is_infinite() {
                if v > 0.0 { 1.0 } else { 0.0 }
            } else {
                (v - lo) / (hi - lo)
            };
            let fill = ramp(t);
            let ink = if t > 0.55 { "#ffffff" } else { "#000000" };
            writeln!(
                s,
                r##"<rect class="cell" data-a="{}" data-b="{}" x="{x:.1}" y="{y:.1}" width="{CELL:.1}" height="{CELL:.1}" fill="{fill}" stroke="#ffffff"/>"##,
                escape(a),
                escape(b)
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" fill="{ink}">{}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0 + 4.0,
                format_value(v)
            )
            .unwrap();
        }
    }
    let base = TOP + k * CELL + 8.0;
    for (c, b) in fams.iter().enumerate() {
        let x = LEFT + c as f64 * CELL + CELL / 2.0;
        writeln!(
            s,
            r#"<text class="col-label" x="{x:.1}" y="{base:.1}" font-size="11" text-anchor="end" transform="rotate(-45 {x:.1} {base:.1})">{}</text>"#,
            escape(b)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{LEFT:.1}" y="{:.1}" font-size="10">color scale {} (white) to {} (dark)</text>"#,
        height - 10.0,
        format_value(lo),
        format_value(hi)
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

const PALETTE: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];
const PLOT: f64 = 320.0;
const PAD: f64 = 50.0;

/// One ROC curve per entry as `path.roc`, with the chance diagonal and a
/// legend giving each curve's AUC.
pub fn roc_svg(title: &str, curves: &[(&str, &[[f64; 2]], f64)]) -> String {
    let size = PLOT + 2.0 * PAD;
    let legend_h = 18.0 * curves.len() as f64 + 10.0;
    let height = size + legend_h;
    let px = |x: f64| PAD + x * PLOT;
    let py = |y: f64| PAD + (1.0 - y) * PLOT;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{height:.0}" viewBox="0 0 {size:.0} {height:.0}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        size / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r##"<rect x="{PAD:.1}" y="{PAD:.1}" width="{PLOT:.1}" height="{PLOT:.1}" fill="none" stroke="#000000"/>"##
    )
    .unwrap();
    writeln!(
        s,
        r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#999999" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    )
    .unwrap();
    for t in [0.0, 0.5, 1.0] {
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{t:.1}</text>"#,
            px(t),
            py(0.0) + 14.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{t:.1}</text>"#,
            px(0.0) - 4.0,
            py(t) + 3.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">false positive rate</text>"#,
        px(0.5),
        py(0.0) + 30.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{:.1}" font-size="11" text-anchor="middle" transform="rotate(-90 14 {:.1})">true positive rate</text>"#,
        py(0.5),
        py(0.5)
    )
    .unwrap();

    for (k, (label, points, auc)) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2}", if i == 0 { "M" } else { " L" }, px(p[0]), py(p[1]));
        }
        writeln!(
            s,
            r#"<path class="roc" data-label="{}" d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            escape(label)
        )
        .unwrap();
        let ly = size + 18.0 * k as f64;
        writeln!(
            s,
            r#"<line x1="{PAD:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            PAD + 20.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{} (AUC {auc:.4})</text>"#,
            PAD + 26.0,
            ly + 4.0,
            escape(label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
