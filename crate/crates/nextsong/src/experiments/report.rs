use std::fmt::Write as _;
use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::{write_summary_csv, EvalReport, PositionSummary};
use crate::experiments::ExperimentReport;

/// Write an experiment's per-position summaries as CSV and, when asked,
/// a boxplot panel figure as SVG.
///
/// The CSV is the canonical artifact: it follows the summary schema
/// exactly, so emitting the same report twice produces byte-identical
/// files. The SVG is a rendering convenience and only promises one count
/// annotation per panel and position.
pub fn emit_report(
    report: &ExperimentReport,
    csv_path: impl AsRef<Path>,
    svg_path: Option<&Path>,
) -> Result<()> {
    let csv_path = csv_path.as_ref();
    write_summary_csv(
        &report.sections,
        File::create(csv_path).map_err(|e| Error::io_at(csv_path, e))?,
    )?;
    if let Some(path) = svg_path {
        std::fs::write(path, render_svg(report)).map_err(|e| Error::io_at(path, e))?;
    }
    Ok(())
}

const PANEL_W: f64 = 380.0;
const PANEL_H: f64 = 270.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 48.0;
const MARGIN_B: f64 = 40.0;
const BANNER_H: f64 = 30.0;

/// Render one boxplot panel per evaluation section: a quartile box and
/// median tick per playlist position, the per-position record count
/// annotated along the top of each panel, and rank 1 (best) at the bottom
/// of the y axis.
pub fn render_svg(report: &ExperimentReport) -> String {
    let cols = report.sections.len().min(2).max(1);
    let rows = report.sections.len().div_ceil(cols);
    let width = cols as f64 * PANEL_W;
    let height = BANNER_H + rows as f64 * PANEL_H;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.2} {height:.2}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    let _ = write!(
        svg,
        "  <text class=\"banner\" x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" \
         font-size=\"14\">{} experiment: rank quartiles by playlist position \
         (seed {})</text>\n",
        width / 2.0,
        escape(&report.experiment),
        report.seed
    );
    for (i, section) in report.sections.iter().enumerate() {
        let tx = (i % cols) as f64 * PANEL_W;
        let ty = BANNER_H + (i / cols) as f64 * PANEL_H;
        let _ = write!(svg, "  <g transform=\"translate({tx:.2} {ty:.2})\">\n");
        render_panel(&mut svg, section);
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

fn render_panel(svg: &mut String, section: &EvalReport) {
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let v = section.vocab_size.max(2) as f64;
    // rank 1 sits on the x axis, the worst possible rank at the top
    let y_of = |rank: f64| MARGIN_T + plot_h - (rank - 1.0) / (v - 1.0) * plot_h;
    let n = section.summaries.len().max(1) as f64;
    let x_of = |i: usize| MARGIN_L + (i as f64 + 0.5) * plot_w / n;
    let box_w = (0.6 * plot_w / n).min(24.0);

    let _ = write!(
        svg,
        "    <text class=\"panel-title\" x=\"{:.2}\" y=\"18\" text-anchor=\"middle\" \
         font-size=\"12\">{} / {}</text>\n",
        MARGIN_L + plot_w / 2.0,
        escape(&section.model_name),
        escape(&section.condition)
    );
    // axes
    let _ = write!(
        svg,
        "    <line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n\
         \x20   <line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n",
        l = MARGIN_L,
        t = MARGIN_T,
        b = MARGIN_T + plot_h,
        r = MARGIN_L + plot_w,
    );
    for (rank, label) in [
        (1.0, "1".to_string()),
        ((v / 2.0).round(), format!("{}", (v / 2.0).round() as u64)),
        (v, format!("{}", v as u64)),
    ] {
        let y = y_of(rank);
        let _ = write!(
            svg,
            "    <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n\
             \x20   <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>\n",
            MARGIN_L - 4.0,
            MARGIN_L,
            MARGIN_L - 7.0,
            y + 4.0,
        );
    }

    for (i, summary) in section.summaries.iter().enumerate() {
        render_box(svg, summary, x_of(i), box_w, &y_of);
    }
}

fn render_box(
    svg: &mut String,
    s: &PositionSummary,
    cx: f64,
    box_w: f64,
    y_of: &impl Fn(f64) -> f64,
) {
    let (y_q1, y_med, y_q3) = (y_of(s.q1), y_of(s.median), y_of(s.q3));
    let _ = write!(
        svg,
        "    <rect x=\"{:.2}\" y=\"{y_q3:.2}\" width=\"{box_w:.2}\" height=\"{:.2}\" \
         fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n",
        cx - box_w / 2.0,
        y_q1 - y_q3,
    );
    let _ = write!(
        svg,
        "    <line x1=\"{:.2}\" y1=\"{y_med:.2}\" x2=\"{:.2}\" y2=\"{y_med:.2}\" \
         stroke=\"#08519c\" stroke-width=\"2\"/>\n",
        cx - box_w / 2.0,
        cx + box_w / 2.0,
    );
    // number of test playlists long enough to reach this position
    let _ = write!(
        svg,
        "    <text class=\"count\" x=\"{cx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
         font-size=\"9\">{}</text>\n",
        MARGIN_T - 8.0,
        s.count,
    );
    let _ = write!(
        svg,
        "    <text class=\"position\" x=\"{cx:.2}\" y=\"{:.2}\" \
         text-anchor=\"middle\">{}</text>\n",
        PANEL_H - MARGIN_B + 14.0,
        s.position,
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
