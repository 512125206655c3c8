//! Human-readable reports and SVG charts.
//!
//! ASCII and HTML reports render the same pre-formatted cells, so the two
//! always show identical numbers. Charts are plain SVG polylines over the
//! class-id axis and are drawn only from values already present in the TSVs.

use std::fmt::Write as _;

use crate::null_model::SwapReport;
use crate::significance::SignificanceProfile;

pub const REPORT_COLUMNS: [&str; 10] = [
    "class", "count", "freq", "mean_rand", "sd_rand", "z", "p_over", "p_under", "sp", "label",
];

/// Cells of the report table, rows sorted by |Z| descending with undefined
/// scores last.
pub fn report_cells(profile: &SignificanceProfile) -> Vec<[String; 10]> {
    let mut rows: Vec<_> = profile.rows.iter().collect();
    rows.sort_by(|a, b| {
        let key = |z: Option<f64>| z.map_or(f64::NEG_INFINITY, f64::abs);
        key(b.z.value())
            .total_cmp(&key(a.z.value()))
            .then(a.export_id.cmp(&b.export_id))
    });
    rows.into_iter()
        .map(|r| {
            [
                r.export_id.to_string(),
                format!("{:.3}", r.count),
                format!("{:.3}", r.frequency),
                format!("{:.3}", r.mean_random),
                format!("{:.3}", r.sd_random),
                format!("{:.3}", r.z),
                format!("{:.3}", r.p_over),
                format!("{:.3}", r.p_under),
                format!("{:.3}", r.sp),
                r.label.as_str().to_string(),
            ]
        })
        .collect()
}

pub struct ReportContext<'a> {
    pub profile: &'a SignificanceProfile,
    pub vertices: usize,
    pub arcs: usize,
    pub replicas: usize,
    pub swaps: SwapReport,
    pub enumeration: String,
    pub cutoff: f64,
}

fn summary_lines(ctx: &ReportContext) -> Vec<String> {
    vec![
        format!("dataset: {}", ctx.profile.dataset),
        format!("vertices: {}  arcs: {}", ctx.vertices, ctx.arcs),
        format!("subgraph size: {}  enumeration: {}", ctx.profile.k, ctx.enumeration),
        format!(
            "random networks: {}  swap success: {}/{} ({:.3})",
            ctx.replicas,
            ctx.swaps.successful,
            ctx.swaps.attempted,
            ctx.swaps.success_ratio()
        ),
        format!("cutoff: {}", ctx.cutoff),
    ]
}

pub fn ascii_report(ctx: &ReportContext) -> String {
    let cells = report_cells(ctx.profile);
    let mut widths: Vec<usize> = REPORT_COLUMNS.iter().map(|c| c.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut s = String::new();
    for line in summary_lines(ctx) {
        let _ = writeln!(s, "{line}");
    }
    s.push('\n');
    let fmt_row = |cols: &[&str]| {
        cols.iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(s, "{}", fmt_row(&REPORT_COLUMNS));
    let _ = writeln!(
        s,
        "{}",
        widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ")
    );
    for row in &cells {
        let cols: Vec<&str> = row.iter().map(String::as_str).collect();
        let _ = writeln!(s, "{}", fmt_row(&cols));
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn html_report(ctx: &ReportContext) -> String {
    let mut s = String::new();
    s.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
    let _ = writeln!(s, "<title>Subgraph significance: {}</title>", escape(&ctx.profile.dataset));
    s.push_str(
        "<style>body{font-family:sans-serif}table{border-collapse:collapse}\
         td,th{border:1px solid #999;padding:2px 8px;text-align:right}\
         tr.MOTIF{background:#e3f2e1}tr.ANTI-MOTIF{background:#f7e1e1}</style>\n</head>\n<body>\n",
    );
    s.push_str("<ul>\n");
    for line in summary_lines(ctx) {
        let _ = writeln!(s, "<li>{}</li>", escape(&line));
    }
    s.push_str("</ul>\n<table>\n<tr>");
    for c in REPORT_COLUMNS {
        let _ = write!(s, "<th>{c}</th>");
    }
    s.push_str("</tr>\n");
    for row in report_cells(ctx.profile) {
        let _ = write!(s, "<tr class=\"{}\">", row[9]);
        for c in &row {
            let _ = write!(s, "<td>{}</td>", escape(c));
        }
        s.push_str("</tr>\n");
    }
    s.push_str("</table>\n</body>\n</html>\n");
    s
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log10,
}

/// One polyline; `None` points are skipped and split the line.
pub struct Series {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

pub struct LineChart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x_ticks: &'a [u32],
    pub series: &'a [Series],
    pub scale: Scale,
    pub note: Option<String>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

impl LineChart<'_> {
    pub fn to_svg(&self) -> String {
        const W: f64 = 760.0;
        const H: f64 = 420.0;
        const L: f64 = 70.0;
        const R: f64 = 150.0;
        const T: f64 = 40.0;
        const B: f64 = 60.0;
        let pw = W - L - R;
        let ph = H - T - B;

        let tf = |v: f64| match self.scale {
            Scale::Linear => v,
            Scale::Log10 => v.log10(),
        };
        let pts: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.values.iter().flatten().copied())
            .map(tf)
            .collect();
        let (mut lo, mut hi) = pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        let ticks: Vec<f64> = match self.scale {
            Scale::Linear => {
                if self.y_label.starts_with("SP") || lo < 0.0 {
                    lo = lo.min(0.0);
                    hi = hi.max(0.0);
                }
                if hi - lo < 1e-12 {
                    hi = lo + 1.0;
                }
                let step = nice_step(hi - lo);
                lo = (lo / step).floor() * step;
                hi = (hi / step).ceil() * step;
                let n = ((hi - lo) / step).round() as i64;
                (0..=n).map(|i| lo + i as f64 * step).collect()
            }
            Scale::Log10 => {
                lo = lo.floor();
                hi = hi.ceil().max(lo + 1.0);
                (lo as i64..=hi as i64).map(|e| e as f64).collect()
            }
        };
        let nx = self.x_ticks.len().max(2);
        let x_at = |i: usize| L + pw * i as f64 / (nx - 1) as f64;
        let y_at = |v: f64| T + ph * (1.0 - (v - lo) / (hi - lo));

        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"11\">"
        );
        let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            L + pw / 2.0,
            escape(self.title)
        );
        for &t in &ticks {
            let y = y_at(t);
            let label = match self.scale {
                Scale::Linear => format!("{}", (t * 1e9).round() / 1e9),
                Scale::Log10 => format!("1e{}", t as i64),
            };
            let _ = writeln!(
                s,
                "<line x1=\"{L}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>",
                L + pw,
                L - 6.0,
                y + 4.0
            );
        }
        if self.scale == Scale::Linear && lo < 0.0 && hi > 0.0 {
            let y = y_at(0.0);
            let _ = writeln!(s, "<line x1=\"{L}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#666\"/>", L + pw);
        }
        let label_every = (self.x_ticks.len() / 26).max(1);
        for (i, id) in self.x_ticks.iter().enumerate() {
            if i % label_every == 0 {
                let _ = writeln!(
                    s,
                    "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{id}</text>",
                    x_at(i),
                    T + ph + 16.0
                );
            }
        }
        let _ = writeln!(
            s,
            "<rect x=\"{L}\" y=\"{T}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#333\"/>"
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            L + pw / 2.0,
            H - 22.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            s,
            "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>",
            T + ph / 2.0,
            T + ph / 2.0,
            escape(self.y_label)
        );

        for (si, series) in self.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let mut segment: Vec<String> = Vec::new();
            let flush = |seg: &mut Vec<String>, s: &mut String| {
                if seg.len() > 1 {
                    let _ = writeln!(
                        s,
                        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>",
                        seg.join(" ")
                    );
                }
                seg.clear();
            };
            for (i, v) in series.values.iter().enumerate() {
                match v {
                    Some(v) => {
                        let (x, y) = (x_at(i), y_at(tf(*v)));
                        segment.push(format!("{x:.2},{y:.2}"));
                        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"{color}\"/>");
                    }
                    None => flush(&mut segment, &mut s),
                }
            }
            flush(&mut segment, &mut s);
            let ly = T + 14.0 + 16.0 * si as f64;
            let _ = writeln!(
                s,
                "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                L + pw + 10.0,
                L + pw + 30.0,
                L + pw + 36.0,
                ly + 4.0,
                escape(&series.name)
            );
        }
        if let Some(note) = &self.note {
            let _ = writeln!(s, "<text x=\"{L}\" y=\"{:.2}\" fill=\"#555\">{}</text>", H - 6.0, escape(note));
        }
        s.push_str("</svg>\n");
        s
    }
}

/// SP polylines, one per dataset.
pub fn tsp_chart(profiles: &[SignificanceProfile]) -> String {
    let ids = profiles.first().map(|p| p.export_ids()).unwrap_or_default();
    let series: Vec<Series> = profiles
        .iter()
        .map(|p| Series {
            name: p.dataset.clone(),
            values: p.rows.iter().map(|r| Some(r.sp)).collect(),
        })
        .collect();
    let k = profiles.first().map_or(3, |p| p.k);
    LineChart {
        title: if k == 3 { "Triad significance profile" } else { "Subgraph significance profile" },
        x_label: "class id",
        y_label: "SP (normalized Z-score)",
        x_ticks: &ids,
        series: &series,
        scale: Scale::Linear,
        note: None,
    }
    .to_svg()
}

/// Class frequencies; on the log scale zero frequencies are dropped and
/// listed in a note.
pub fn frequency_chart(profiles: &[SignificanceProfile], scale: Scale) -> String {
    let ids = profiles.first().map(|p| p.export_ids()).unwrap_or_default();
    let mut dropped: Vec<String> = Vec::new();
    let series: Vec<Series> = profiles
        .iter()
        .map(|p| Series {
            name: p.dataset.clone(),
            values: p
                .rows
                .iter()
                .map(|r| {
                    if scale == Scale::Log10 && r.frequency <= 0.0 {
                        dropped.push(format!("{}:{}", p.dataset, r.export_id));
                        None
                    } else {
                        Some(r.frequency)
                    }
                })
                .collect(),
        })
        .collect();
    let note = (!dropped.is_empty()).then(|| format!("zero-count classes omitted: {}", dropped.join(", ")));
    LineChart {
        title: match scale {
            Scale::Linear => "Subgraph frequencies (linear scale)",
            Scale::Log10 => "Subgraph frequencies (log scale)",
        },
        x_label: "class id",
        y_label: "frequency",
        x_ticks: &ids,
        series: &series,
        scale,
        note,
    }
    .to_svg()
}

pub fn correlation_tsv(profiles: &[SignificanceProfile], matrix: &[Vec<f64>]) -> String {
    let mut s = String::from("dataset");
    for p in profiles {
        let _ = write!(s, "\t{}", p.dataset);
    }
    s.push('\n');
    for (p, row) in profiles.iter().zip(matrix) {
        s.push_str(&p.dataset);
        for v in row {
            let _ = write!(s, "\t{v}");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::significance::{ClassSignificance, MotifLabel, ZScore};

    fn profile(name: &str, zs: &[Option<f64>], freqs: &[f64]) -> SignificanceProfile {
        SignificanceProfile {
            dataset: name.into(),
            k: 3,
            rows: zs
                .iter()
                .zip(freqs)
                .enumerate()
                .map(|(i, (z, f))| ClassSignificance {
                    export_id: i as u32 + 1,
                    count: f * 10.0,
                    frequency: *f,
                    mean_random: 1.0,
                    sd_random: 0.5,
                    z: z.map_or(ZScore::Undefined, ZScore::Finite),
                    p_over: 0.5,
                    p_under: 0.5,
                    sp: z.unwrap_or(0.0) / 10.0,
                    label: MotifLabel::None,
                })
                .collect(),
        }
    }

    #[test]
    fn cells_sort_by_abs_z() {
        let p = profile("x", &[Some(1.0), None, Some(-5.0), Some(2.0)], &[0.1, 0.2, 0.3, 0.4]);
        let ids: Vec<String> = report_cells(&p).into_iter().map(|r| r[0].clone()).collect();
        assert_eq!(ids, ["3", "4", "1", "2"]);
        assert_eq!(report_cells(&p)[3][5], "n/a");
        assert_eq!(report_cells(&p)[0][5], "-5.000");
    }

    #[test]
    fn html_and_ascii_share_cells() {
        let p = profile("a<b", &[Some(1.25), Some(-0.5)], &[0.25, 0.75]);
        let ctx = ReportContext {
            profile: &p,
            vertices: 3,
            arcs: 2,
            replicas: 10,
            swaps: SwapReport { attempted: 6, successful: 3 },
            enumeration: "full".into(),
            cutoff: 0.01,
        };
        let ascii = ascii_report(&ctx);
        let html = html_report(&ctx);
        for row in report_cells(&p) {
            for cell in row {
                assert!(ascii.contains(&cell));
                assert!(html.contains(&format!("<td>{cell}</td>")));
            }
        }
        assert!(html.contains("a&lt;b"));
    }

    #[test]
    fn log_chart_drops_zeros() {
        let p = profile("d", &[Some(1.0), Some(2.0), Some(3.0)], &[0.5, 0.0, 0.5]);
        let svg = frequency_chart(std::slice::from_ref(&p), Scale::Log10);
        assert!(svg.contains("zero-count classes omitted: d:2"));
        assert_eq!(svg.matches("<circle").count(), 2);
        let svg = frequency_chart(std::slice::from_ref(&p), Scale::Linear);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(!svg.contains("omitted"));
    }

    #[test]
    fn tsp_chart_one_polyline_per_dataset() {
        let a = profile("a", &[Some(1.0), Some(-2.0), Some(0.5)], &[0.2, 0.3, 0.5]);
        let b = profile("b", &[Some(2.0), Some(-1.0), Some(0.0)], &[0.2, 0.3, 0.5]);
        let svg = tsp_chart(&[a, b]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg"));
    }
}
