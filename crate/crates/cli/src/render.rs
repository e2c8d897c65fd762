//! SVG output for fronts, graph fronts and surgery diagrams.
//!
//! At a crossing the strand with the algebraically larger slope is the under
//! strand and is drawn with a break.

use std::fmt::Write;

use legreal_core::front_model::{analyze, rational::to_f64, FrontDiagram, FrontPoint, FrontStrand};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub stroke_width: f64,
    pub cusp_size: f64,
    pub break_length: f64,
    pub shade_ribbon: bool,
    pub label_offset: (f64, f64),
    /// Pixels per unit.
    pub scale: f64,
    pub margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            stroke_width: 1.5,
            cusp_size: 2.0,
            break_length: 6.0,
            shade_ribbon: true,
            label_offset: (6.0, -6.0),
            scale: 24.0,
            margin: 24.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlay {
    pub vertices: Vec<FrontPoint>,
    /// Closed outlines drawn as shaded regions under the strands.
    pub shading: Vec<FrontStrand>,
    pub labels: Vec<(FrontPoint, String)>,
}

const PALETTE: [&str; 6] = ["#1f4e79", "#a23b2a", "#2e7d32", "#6a1b9a", "#b26a00", "#00796b"];

struct Frame {
    y0: f64,
    z1: f64,
    scale: f64,
    margin: f64,
}

impl Frame {
    fn map(&self, p: &FrontPoint) -> (f64, f64) {
        (self.margin + (to_f64(&p.y) - self.y0) * self.scale, self.margin + (self.z1 - to_f64(&p.z)) * self.scale)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(d: &FrontDiagram, style: &RenderStyle, overlay: &Overlay) -> String {
    let pts: Vec<&FrontPoint> = d
        .strands
        .iter()
        .flat_map(|s| s.points.iter())
        .chain(overlay.vertices.iter())
        .chain(overlay.shading.iter().flat_map(|s| s.points.iter()))
        .chain(overlay.labels.iter().map(|(p, _)| p))
        .collect();
    if pts.is_empty() {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1\" height=\"1\" viewBox=\"0 0 1 1\"></svg>\n".into();
    }
    let ys: Vec<f64> = pts.iter().map(|p| to_f64(&p.y)).collect();
    let zs: Vec<f64> = pts.iter().map(|p| to_f64(&p.z)).collect();
    let fold = |v: &[f64], f: fn(f64, f64) -> f64| v.iter().copied().reduce(f).unwrap_or(0.0);
    let (y0, y1, z0, z1) = (fold(&ys, f64::min), fold(&ys, f64::max), fold(&zs, f64::min), fold(&zs, f64::max));
    let frame = Frame { y0, z1, scale: style.scale, margin: style.margin };
    let w = 2.0 * style.margin + (y1 - y0) * style.scale;
    let h = 2.0 * style.margin + (z1 - z0) * style.scale;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
    if style.shade_ribbon {
        for s in &overlay.shading {
            let path: Vec<String> = s.points.iter().map(|p| frame.map(p)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(out, "<polygon points=\"{}\" fill=\"#c9d9ec\" fill-opacity=\"0.5\" stroke=\"none\"/>", path.join(" "))
                .unwrap();
        }
    }
    let a = analyze(d);
    for (si, s) in d.strands.iter().enumerate() {
        let colour = PALETTE[si % PALETTE.len()];
        for e in 0..s.edge_count() {
            let (p, q) = s.edge(e);
            let (pa, pb) = (frame.map(p), frame.map(q));
            let len = ((pb.0 - pa.0).powi(2) + (pb.1 - pa.1).powi(2)).sqrt().max(1e-9);
            let mut cuts: Vec<f64> = a
                .crossings
                .iter()
                .filter(|c| c.under.strand == si && c.under.edge == e)
                .map(|c| {
                    let m = frame.map(&c.point);
                    ((m.0 - pa.0).powi(2) + (m.1 - pa.1).powi(2)).sqrt() / len
                })
                .collect();
            cuts.sort_by(|x, y| x.total_cmp(y));
            let half = style.break_length / 2.0 / len;
            let mut t = 0.0;
            let mut pieces = vec![];
            for c in cuts {
                if c - half > t {
                    pieces.push((t, c - half));
                }
                t = t.max(c + half);
            }
            if t < 1.0 {
                pieces.push((t, 1.0));
            }
            for (t0, t1) in pieces {
                let at = |t: f64| (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1));
                let (u, v) = (at(t0), at(t1));
                writeln!(
                    out,
                    "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{colour}\" stroke-width=\"{:.2}\" stroke-linecap=\"round\"/>",
                    u.0, u.1, v.0, v.1, style.stroke_width
                )
                .unwrap();
            }
        }
        for &c in &s.cusps {
            let (x, y) = frame.map(&s.points[c]);
            writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" fill=\"{colour}\"/>", style.cusp_size).unwrap();
        }
    }
    for v in &overlay.vertices {
        let (x, y) = frame.map(v);
        writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" fill=\"black\"/>", 2.0 * style.cusp_size).unwrap();
    }
    for (p, text) in &overlay.labels {
        let (x, y) = frame.map(p);
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x + style.label_offset.0,
            y + style.label_offset.1,
            escape(text)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_diagram_is_valid_svg() {
        let s = render_svg(&FrontDiagram::default(), &RenderStyle::default(), &Overlay::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn under_strand_is_broken() {
        let a = FrontStrand::from_ints(&[(0, 0), (4, 4)], false);
        let b = FrontStrand::from_ints(&[(0, 4), (4, 0)], false);
        let d = FrontDiagram::from_strands(vec![a, b]);
        let s = render_svg(&d, &RenderStyle::default(), &Overlay::default());
        // slope 1 is under: two pieces; slope -1 is over: one piece
        assert_eq!(s.matches(PALETTE[0]).count(), 2);
        assert_eq!(s.matches(PALETTE[1]).count(), 1);
    }
}
