//! Static SVG scatter plots of embedding coordinates.

use std::fmt::Write;

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Fill colors, cycled by cluster id.
pub const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd",
];

const PANEL: f64 = 420.0;
const MARGIN: f64 = 30.0;

/// Renders coordinates (1, 2) as one panel, and additionally (1, 3) as a
/// second panel when `panels == 2` and at least three coordinates exist.
pub fn render_scatter_svg(coords: ArrayView2<f64>, labels: Option<&[usize]>, panels: usize) -> Result<String> {
    let (n, r) = coords.dim();
    if r < 2 {
        return Err(Error::InvalidConfig(
            "scatter plots need at least two coordinates; export the spectrum instead".into(),
        ));
    }
    if let Some(l) = labels {
        if l.len() != n {
            return Err(Error::LengthMismatch { left: l.len(), right: n });
        }
    }
    if coords.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("plot coordinates"));
    }
    let pairs: Vec<(usize, usize)> = if panels >= 2 && r >= 3 {
        vec![(0, 1), (0, 2)]
    } else {
        vec![(0, 1)]
    };

    let width = pairs.len() as f64 * PANEL;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" viewBox="0 0 {width} {PANEL}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let x0 = p as f64 * PANEL;
        let (ax_min, ax_max) = range(coords.column(a).iter().copied());
        let (bx_min, bx_max) = range(coords.column(b).iter().copied());
        let inner = PANEL - 2.0 * MARGIN;
        writeln!(
            svg,
            r##"<g><rect x="{:.1}" y="{MARGIN:.1}" width="{inner:.1}" height="{inner:.1}" fill="none" stroke="#999"/>"##,
            x0 + MARGIN
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">coord {} vs coord {}</text>"#,
            x0 + PANEL / 2.0,
            MARGIN - 10.0,
            b + 1,
            a + 1
        )
        .unwrap();
        for i in 0..n {
            let px = x0 + MARGIN + inner * (coords[[i, a]] - ax_min) / (ax_max - ax_min);
            let py = MARGIN + inner * (1.0 - (coords[[i, b]] - bx_min) / (bx_max - bx_min));
            let color = labels.map_or(PALETTE[0], |l| PALETTE[l[i] % PALETTE.len()]);
            writeln!(svg, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{color}"/>"#).unwrap();
        }
        writeln!(svg, "</g>").unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// Padded range, never empty.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let pad = ((hi - lo) * 0.05).max(1e-9);
    (lo - pad, hi + pad)
}
