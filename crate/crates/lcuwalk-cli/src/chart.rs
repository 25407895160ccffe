//! Minimal self-contained SVG line chart for sweep output. No dependencies;
//! log-log axes with queries against tau, one polyline per parameter group.

use std::fmt::Write;

pub struct Series {
    pub label: String,
    /// (tau, queries) points, tau ascending.
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910", "#17a589",
];

pub fn render(series: &[Series]) -> String {
    let (w, h) = (640.0, 420.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 30.0, 50.0);
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &all {
        let (lx, ly) = (x.max(1e-12).log10(), y.max(1e-12).log10());
        x_min = x_min.min(lx);
        x_max = x_max.max(lx);
        y_min = y_min.min(ly);
        y_max = y_max.max(ly);
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if (x_max - x_min).abs() < 1e-12 {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < 1e-12 {
        y_max = y_min + 1.0;
    }
    let px = |lx: f64| ml + (lx - x_min) / (x_max - x_min) * (w - ml - mr);
    let py = |ly: f64| h - mb - (ly - y_min) / (y_max - y_min) * (h - mt - mb);

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"monospace\" font-size=\"11\">\n"
    );
    let _ = write!(svg, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n");
    // axes
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr
    );
    let _ = write!(
        svg,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{0}\" stroke=\"black\"/>\n",
        h - mb
    );
    // decade ticks
    for dec in (x_min.floor() as i64)..=(x_max.ceil() as i64) {
        let x = px(dec as f64);
        if x < ml - 1.0 || x > w - mr + 1.0 {
            continue;
        }
        let _ = write!(
            svg,
            "<line x1=\"{x}\" y1=\"{0}\" x2=\"{x}\" y2=\"{1}\" stroke=\"#999\"/>\
             <text x=\"{x}\" y=\"{2}\" text-anchor=\"middle\">1e{dec}</text>\n",
            h - mb,
            h - mb + 5.0,
            h - mb + 18.0
        );
    }
    for dec in (y_min.floor() as i64)..=(y_max.ceil() as i64) {
        let y = py(dec as f64);
        if y < mt - 1.0 || y > h - mb + 1.0 {
            continue;
        }
        let _ = write!(
            svg,
            "<line x1=\"{0}\" y1=\"{y}\" x2=\"{ml}\" y2=\"{y}\" stroke=\"#999\"/>\
             <text x=\"{1}\" y=\"{2}\" text-anchor=\"end\">1e{dec}</text>\n",
            ml - 5.0,
            ml - 8.0,
            y + 4.0
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{0}\" y=\"{1}\" text-anchor=\"middle\">tau</text>\n",
        (ml + w - mr) / 2.0,
        h - 10.0
    );
    let _ = write!(
        svg,
        "<text x=\"15\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {0})\">oracle queries</text>\n",
        (mt + h - mb) / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", px(x.max(1e-12).log10()), py(y.max(1e-12).log10())))
            .collect();
        let _ = write!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        );
        let _ = write!(
            svg,
            "<text x=\"{0}\" y=\"{1}\" fill=\"{color}\">{2}</text>\n",
            w - mr - 160.0,
            mt + 14.0 * (i as f64 + 1.0),
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}
