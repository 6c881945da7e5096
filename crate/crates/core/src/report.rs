//! SVG rendering of shapes: reference bodies in outline, candidates filled
//! at half opacity.

use crate::polygon::{ConvexPolygon, Vec2};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 0.05;

/// One drawn layer.
pub struct Layer<'a> {
    pub polygon: &'a ConvexPolygon,
    pub fill: Option<&'a str>,
    pub stroke: &'a str,
}

impl<'a> Layer<'a> {
    pub fn outline(polygon: &'a ConvexPolygon) -> Self {
        Self { polygon, fill: None, stroke: "#000000" }
    }

    pub fn filled(polygon: &'a ConvexPolygon, color: &'a str) -> Self {
        Self { polygon, fill: Some(color), stroke: color }
    }
}

/// Standalone SVG document with all layers in a common frame, y pointing up.
pub fn svg(layers: &[Layer<'_>], title: &str) -> String {
    let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
    for l in layers {
        for v in l.polygon.vertices() {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
    }
    if layers.is_empty() {
        lo = Vec2::new(-1.0, -1.0);
        hi = Vec2::new(1.0, 1.0);
    }
    let span = (hi - lo).max().max(1e-12);
    let pad = MARGIN * span;
    let (x0, y1) = (lo.x - pad, hi.y + pad);
    let size = span + 2.0 * pad;
    let stroke = size / CANVAS;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"{x0:.6} {:.6} {size:.6} {size:.6}\">\n",
        -y1
    );
    s.push_str(&format!("  <title>{}</title>\n", escape(title)));
    s.push_str("  <g transform=\"scale(1,-1)\">\n");
    for l in layers {
        let fill = match l.fill {
            Some(c) => format!("fill=\"{c}\" fill-opacity=\"0.5\""),
            None => "fill=\"none\"".to_string(),
        };
        s.push_str(&format!(
            "    <path d=\"{}\" {fill} stroke=\"{}\" stroke-width=\"{stroke:.6}\"/>\n",
            l.polygon.svg_path(),
            l.stroke
        ));
    }
    s.push_str("  </g>\n</svg>\n");
    s
}

/// Reference body in outline with the candidate filled on top.
pub fn overlay(reference: &ConvexPolygon, candidate: &ConvexPolygon, title: &str) -> String {
    svg(&[Layer::outline(reference), Layer::filled(candidate, "#1f77b4")], title)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::rectangle;

    #[test]
    fn overlay_has_both_layers() {
        let out = overlay(&rectangle(-1.0, -1.0, 1.0, 1.0), &rectangle(-0.5, -0.5, 0.5, 0.5), "a < b");
        assert!(out.starts_with("<svg"));
        assert_eq!(out.matches("<path").count(), 2);
        assert!(out.contains("fill-opacity=\"0.5\""));
        assert!(out.contains("fill=\"none\""));
        assert!(out.contains("a &lt; b"));
    }
}
