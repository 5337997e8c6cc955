//! Minimal SVG output: regions as arc paths, masks as row runs, points as dots.

use std::fmt::Write as _;

use crate::geom::{BBox, Orientation, Point};
use crate::grid::GridMask;
use crate::region::{ArcRegion, Edge};

pub struct Svg {
    view: BBox,
    scale: f64,
    body: String,
    legend: Vec<(String, String)>,
}

impl Svg {
    /// Canvas covering `view`, `width` pixels wide.
    pub fn new(view: BBox, width: f64) -> Self {
        let scale = width / view.width().max(1e-12);
        Svg { view, scale, body: String::new(), legend: Vec::new() }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.view.min.x) * self.scale, (self.view.max.y - p.y) * self.scale)
    }

    fn size(&self) -> (f64, f64) {
        (self.view.width() * self.scale, self.view.height() * self.scale)
    }

    fn entry(&mut self, label: &str, color: &str) {
        if !label.is_empty() {
            self.legend.push((label.to_string(), color.to_string()));
        }
    }

    /// Path data for the region's boundary loops.
    pub fn path_data(&self, r: &ArcRegion) -> String {
        let mut d = String::new();
        for lp in r.loops() {
            let Some(first) = lp.first() else { continue };
            let (x, y) = self.map(first.start());
            let _ = write!(d, "M{x:.3} {y:.3}");
            for e in lp {
                let (x, y) = self.map(e.end());
                match e {
                    Edge::Segment { .. } => {
                        let _ = write!(d, " L{x:.3} {y:.3}");
                    }
                    Edge::Arc(a) => {
                        // The y flip turns counter-clockwise arcs into SVG's negative sweep.
                        let sweep = if a.orientation == Orientation::Ccw { 0 } else { 1 };
                        let r = a.radius * self.scale;
                        let _ = write!(d, " A{r:.3} {r:.3} 0 0 {sweep} {x:.3} {y:.3}");
                    }
                }
            }
            d.push_str(" Z");
        }
        d
    }

    pub fn region(&mut self, r: &ArcRegion, fill: &str, stroke: &str, label: &str) {
        let d = self.path_data(r);
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="{fill}" fill-opacity="0.35" stroke="{stroke}" stroke-width="1.5" fill-rule="evenodd"/>"#
        );
        for p in r.isolated() {
            let (x, y) = self.map(*p);
            let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{stroke}"/>"#);
        }
        self.entry(label, stroke);
    }

    /// One rectangle per horizontal run of inside cells.
    pub fn mask(&mut self, m: &GridMask, fill: &str, label: &str) {
        let f = m.frame;
        let w = f.cell * self.scale;
        let _ = writeln!(self.body, r#"<g fill="{fill}" fill-opacity="0.6" shape-rendering="crispEdges">"#);
        for j in 0..f.height {
            let row = m.row(j);
            let mut i = 0;
            while i < f.width {
                if !row[i] {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < f.width && row[i] {
                    i += 1;
                }
                let c = f.center(start, j);
                let (x, y) = self.map(Point::new(c.x - 0.5 * f.cell, c.y + 0.5 * f.cell));
                let run = (i - start) as f64 * w;
                let _ = writeln!(self.body, r#"<rect x="{x:.3}" y="{y:.3}" width="{run:.3}" height="{w:.3}"/>"#);
            }
        }
        self.body.push_str("</g>\n");
        self.entry(label, fill);
    }

    pub fn points(&mut self, pts: &[Point], fill: &str, label: &str) {
        for p in pts {
            let (x, y) = self.map(*p);
            let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="{fill}" stroke="black" stroke-width="0.5"/>"#);
        }
        self.entry(label, fill);
    }

    pub fn finish(&self) -> String {
        let (w, h) = self.size();
        let total = h + 18.0 * self.legend.len() as f64 + 8.0;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{total:.0}\" viewBox=\"0 0 {w:.3} {total:.3}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        out += &self.body;
        for (k, (label, color)) in self.legend.iter().enumerate() {
            let y = h + 8.0 + 18.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<rect x="8" y="{y:.1}" width="12" height="12" fill="{color}"/><text x="26" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
                y + 10.5,
                escape(label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Disk;
    use crate::grid::GridFrame;

    #[test]
    fn ccw_arcs_use_negative_sweep() {
        let view = BBox::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        let svg = Svg::new(view, 200.0);
        let d = svg.path_data(&ArcRegion::disk(Disk::unit(Point::ORIGIN)));
        assert!(d.starts_with("M200.000 100.000"), "{d}");
        assert!(d.contains(" A100.000 100.000 0 0 0 "), "{d}");
    }

    #[test]
    fn mask_runs() {
        let view = BBox::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        let frame = GridFrame::new(view, 16).unwrap();
        let m = GridMask::from_fn(frame, |p| p.y < 0.5);
        let mut svg = Svg::new(view, 160.0);
        svg.mask(&m, "red", "half");
        let out = svg.finish();
        assert_eq!(out.matches("<rect x=").count(), 8 + 1);
        assert!(out.contains(">half</text>"));
    }
}
