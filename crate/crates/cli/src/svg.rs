//! Minimal standalone SVG for section plots.

use std::fmt::Write as _;

use posmap_core::sections::{BoundaryCurve, CurveLabel};

pub struct Marker {
    pub name: String,
    pub x: f64,
    pub y: f64,
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn style(label: CurveLabel) -> &'static str {
    match label {
        CurveLabel::Source => "stroke:#000;stroke-dasharray:6 4",
        CurveLabel::ImageOfSource => "stroke:#1f5fbf;stroke-dasharray:2 3",
        CurveLabel::ImagePlane => "stroke:#000",
    }
}

pub fn render(curves: &[BoundaryCurve], markers: &[Marker]) -> String {
    let points: Vec<Vec<(f64, f64)>> = curves.iter().map(|c| c.cartesian()).collect();
    let extent = points
        .iter()
        .flatten()
        .chain(markers.iter().map(|m| (m.x, m.y)).collect::<Vec<_>>().iter())
        .fold(0.0f64, |acc, &(x, y)| acc.max(x.abs()).max(y.abs()))
        .max(1e-3)
        * 1.1;
    let scale = (SIZE / 2.0 - MARGIN) / extent;
    let px = |x: f64| SIZE / 2.0 + x * scale;
    let py = |y: f64| SIZE / 2.0 - y * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<g stroke="#bbb" stroke-width="1"><line x1="{m}" y1="{c}" x2="{e}" y2="{c}"/><line x1="{c}" y1="{m}" x2="{c}" y2="{e}"/></g>"##,
        m = MARGIN,
        e = SIZE - MARGIN,
        c = SIZE / 2.0
    );
    let step = tick_step(extent);
    let mut t = -(extent / step).floor() * step;
    while t <= extent {
        if t.abs() > step * 1e-6 {
            let _ = writeln!(
                s,
                r##"<line x1="{x}" y1="{a}" x2="{x}" y2="{b}" stroke="#888"/><line x1="{a2}" y1="{y}" x2="{b2}" y2="{y}" stroke="#888"/><text x="{x}" y="{lb}" font-size="10" text-anchor="middle">{t:.2}</text>"##,
                x = px(t),
                y = py(t),
                a = SIZE / 2.0 - 4.0,
                b = SIZE / 2.0 + 4.0,
                a2 = SIZE / 2.0 - 4.0,
                b2 = SIZE / 2.0 + 4.0,
                lb = SIZE / 2.0 + 16.0,
            );
        }
        t += step;
    }
    for (curve, pts) in curves.iter().zip(&points) {
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, px(x), py(y));
        }
        let _ = writeln!(
            s,
            r#"<path d="{d}Z" fill="none" style="{};stroke-width:1.5"><title>{}</title></path>"#,
            style(curve.label),
            curve.label.as_str()
        );
    }
    for m in markers {
        let (x, y) = (px(m.x), py(m.y));
        let _ = writeln!(
            s,
            r##"<g stroke="#c00" stroke-width="1.5"><line x1="{}" y1="{y}" x2="{}" y2="{y}"/><line x1="{x}" y1="{}" x2="{x}" y2="{}"/></g><text x="{}" y="{}" font-size="11" fill="#c00">{}</text>"##,
            x - 5.0,
            x + 5.0,
            y - 5.0,
            y + 5.0,
            x + 7.0,
            y - 7.0,
            m.name
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_step(extent: f64) -> f64 {
    let raw = extent / 4.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|f| f * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}
