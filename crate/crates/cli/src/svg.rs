//! Minimal static SVG plotting: framed panels with auto-fit axes (5%
//! margin), polyline series and corner range labels. No timestamps, no
//! randomness, fixed-precision coordinates, so output is reproducible.

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub struct Series {
    pub points: Vec<(f64, f64)>,
    /// Index into the palette; dashed series are drawn gray.
    pub color: usize,
    pub dashed: bool,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const PANEL_W: f64 = 800.0;
const PANEL_H: f64 = 340.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 42.0;

fn data_range(panels: &[Panel], pick_x: bool) -> Vec<(f64, f64)> {
    panels
        .iter()
        .map(|panel| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for s in &panel.series {
                for &(x, y) in &s.points {
                    let v = if pick_x { x } else { y };
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if !lo.is_finite() || !hi.is_finite() {
                (0.0, 1.0)
            } else if lo == hi {
                (lo - 0.5, hi + 0.5)
            } else {
                let pad = 0.05 * (hi - lo);
                (lo - pad, hi + pad)
            }
        })
        .collect()
}

/// Renders stacked panels into one SVG document.
pub fn render(panels: &[Panel]) -> String {
    let total_h = PANEL_H * panels.len() as f64;
    let mut out = String::with_capacity(16 * 1024);
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PANEL_W}\" height=\"{total_h}\" \
         viewBox=\"0 0 {PANEL_W} {total_h}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let x_ranges = data_range(panels, true);
    let y_ranges = data_range(panels, false);

    for (idx, panel) in panels.iter().enumerate() {
        let top = idx as f64 * PANEL_H;
        let (x0, x1) = x_ranges[idx];
        let (y0, y1) = y_ranges[idx];
        let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (PANEL_W - MARGIN_L - MARGIN_R);
        let py = |y: f64| top + PANEL_H - MARGIN_B - (y - y0) / (y1 - y0) * (PANEL_H - MARGIN_T - MARGIN_B);

        out.push_str(&format!(
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n",
            MARGIN_L,
            top + MARGIN_T,
            PANEL_W - MARGIN_L - MARGIN_R,
            PANEL_H - MARGIN_T - MARGIN_B,
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_L + (PANEL_W - MARGIN_L - MARGIN_R) / 2.0,
            top + 20.0,
            panel.title,
        ));
        // Axis range labels.
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            MARGIN_L,
            top + PANEL_H - MARGIN_B + 16.0,
            format_sig(x0),
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            PANEL_W - MARGIN_R,
            top + PANEL_H - MARGIN_B + 16.0,
            format_sig(x1),
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            top + PANEL_H - MARGIN_B,
            format_sig(y0),
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            top + MARGIN_T + 10.0,
            format_sig(y1),
        ));
        // Axis titles.
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_L + (PANEL_W - MARGIN_L - MARGIN_R) / 2.0,
            top + PANEL_H - 8.0,
            panel.x_label,
        ));
        out.push_str(&format!(
            "<text x=\"14\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.3})\">{}</text>\n",
            top + PANEL_H / 2.0,
            top + PANEL_H / 2.0,
            panel.y_label,
        ));

        for s in &panel.series {
            let mut points = String::with_capacity(s.points.len() * 14);
            for &(x, y) in &s.points {
                points.push_str(&format!("{:.3},{:.3} ", px(x), py(y)));
            }
            let stroke = if s.dashed {
                "#999"
            } else {
                PALETTE[s.color % PALETTE.len()]
            };
            let dash = if s.dashed {
                " stroke-dasharray=\"5,4\""
            } else {
                ""
            };
            out.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.2\"{dash} points=\"{}\"/>\n",
                points.trim_end(),
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn format_sig(v: f64) -> String {
    format!("{v:.4}")
}
