use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geom::{dist, point_segment_distance, BBox, CircularArc, Point};

/// Boundary edge of an [`ArcRegion`](super::ArcRegion): a segment or an arc
/// shorter than a half turn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    Segment { start: Point, end: Point },
    Arc(CircularArc),
}

impl Edge {
    pub fn start(&self) -> Point {
        match self {
            Edge::Segment { start, .. } => *start,
            Edge::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Edge::Segment { end, .. } => *end,
            Edge::Arc(a) => a.end(),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Edge::Segment { start, end } => dist(*start, *end),
            Edge::Arc(a) => a.length(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            Edge::Segment { start, end } => start.lerp(*end, t),
            Edge::Arc(a) => a.point_at(t),
        }
    }

    /// Unit normal pointing to the left of the direction of travel.
    pub fn left_normal_at(&self, t: f64) -> Point {
        match self {
            Edge::Segment { start, end } => (*end - *start).normalized().unwrap_or_default().perp(),
            Edge::Arc(a) => a.tangent_at(t).perp(),
        }
    }

    pub fn reversed(&self) -> Edge {
        match self {
            Edge::Segment { start, end } => Edge::Segment { start: *end, end: *start },
            Edge::Arc(a) => Edge::Arc(a.reversed()),
        }
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        match self {
            Edge::Segment { start, end } => point_segment_distance(p, *start, *end),
            Edge::Arc(a) => a.distance_to(p),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            Edge::Segment { start, end } => BBox::of_points([*start, *end]),
            Edge::Arc(a) => a.bbox(),
        }
    }

    /// Signed angle swept by this edge as seen from `p`.
    ///
    /// For an arc this is the chord's angle, corrected by a full turn when
    /// `p` sits in the circular segment between chord and arc.
    pub fn winding_angle(&self, p: Point) -> f64 {
        let (a, b) = (self.start() - p, self.end() - p);
        let chord = a.cross(b).atan2(a.dot(b));
        match self {
            Edge::Segment { .. } => chord,
            Edge::Arc(arc) => {
                let s = self.start();
                let e = self.end();
                let r2 = arc.radius * arc.radius;
                if (p - arc.center).norm2() < r2 {
                    let side_p = (e - s).cross(p - s);
                    let side_c = (e - s).cross(arc.center - s);
                    if side_p * side_c < 0.0 || (side_c == 0.0 && side_p != 0.0) {
                        return chord + TAU * arc.orientation.sign();
                    }
                }
                chord
            }
        }
    }

    /// Contribution to the enclosed signed area (Green's theorem).
    pub fn area_term(&self) -> f64 {
        match self {
            Edge::Segment { start, end } => 0.5 * start.cross(*end),
            Edge::Arc(a) => {
                let (t1, t2) = (a.start_angle, a.end_angle);
                let (c, r) = (a.center, a.radius);
                0.5 * (r * r * (t2 - t1)
                    + r * (c.x * (t2.sin() - t1.sin()) - c.y * (t2.cos() - t1.cos())))
            }
        }
    }
}

/// Cuts `[start, start + sweep]` into arcs of at most a quarter turn.
pub(crate) fn split_arc(center: Point, radius: f64, start: f64, sweep: f64) -> Vec<CircularArc> {
    let pieces = ((sweep.abs() / (0.5 * PI)).ceil() as usize).max(1);
    let step = sweep / pieces as f64;
    (0..pieces)
        .map(|k| CircularArc::new_unchecked(center, radius, start + k as f64 * step, step))
        .collect()
}
