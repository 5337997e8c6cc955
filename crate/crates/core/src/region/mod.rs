//! Regions bounded by circular arcs and segments.
//!
//! An [`ArcRegion`] carries its oriented boundary loops (region on the left,
//! so outer loops run counter-clockwise and holes clockwise), any isolated
//! points, and optionally the [`Solid`] it was built from, which gives a
//! cheaper membership test than winding numbers.

mod arrangement;
mod disks;
mod edge;
mod flower;
mod solid;

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dist, BBox, Disk, Point, EPS_GEOM};
use crate::polygon::SimplePolygon;

pub use disks::{disk_intersection, disk_intersection_arcs, disk_intersection_vertices, BoundaryArc};
pub use edge::Edge;
pub(crate) use edge::split_arc;
pub use flower::{eval_flower, is_reduced_along_boundary, FlowerExpr};
pub use solid::Solid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcRegion {
    loops: Vec<Vec<Edge>>,
    isolated: Vec<Point>,
    solid: Option<Solid>,
}

impl ArcRegion {
    pub fn empty() -> Self {
        ArcRegion { loops: Vec::new(), isolated: Vec::new(), solid: Some(Solid::Empty) }
    }

    pub fn point(p: Point) -> Self {
        ArcRegion { loops: Vec::new(), isolated: vec![p], solid: Some(Solid::Point(p)) }
    }

    pub fn disk(d: Disk) -> Self {
        if d.radius <= 0.0 {
            return ArcRegion::point(d.center);
        }
        let arcs = split_arc(d.center, d.radius, 0.0, TAU).into_iter().map(Edge::Arc).collect();
        ArcRegion { loops: vec![arcs], isolated: Vec::new(), solid: Some(Solid::Disk(d)) }
    }

    pub fn polygon(poly: SimplePolygon) -> Self {
        let edges = poly.edges().map(|(start, end)| Edge::Segment { start, end }).collect();
        ArcRegion { loops: vec![edges], isolated: Vec::new(), solid: Some(Solid::Polygon(Arc::new(poly))) }
    }

    /// Region whose boundary is extracted from the arrangement of the
    /// solid's primitive boundaries.
    pub fn from_solid(solid: Solid) -> Self {
        let (loops, isolated) = arrangement::boundary_of(&solid);
        ArcRegion { loops, isolated, solid: Some(solid) }
    }

    /// Region from explicit boundary loops. Membership falls back to winding numbers.
    pub fn from_loops(loops: Vec<Vec<Edge>>, isolated: Vec<Point>) -> Self {
        ArcRegion { loops, isolated, solid: None }
    }

    pub(crate) fn from_parts(loops: Vec<Vec<Edge>>, isolated: Vec<Point>, solid: Solid) -> Self {
        ArcRegion { loops, isolated, solid: Some(solid) }
    }

    pub fn loops(&self) -> &[Vec<Edge>] {
        &self.loops
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.loops.iter().flatten()
    }

    pub fn isolated(&self) -> &[Point] {
        &self.isolated
    }

    pub fn solid(&self) -> Option<&Solid> {
        self.solid.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.iter().all(|l| l.is_empty()) && self.isolated.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    pub fn area(&self) -> f64 {
        self.edges().map(|e| e.area_term()).sum()
    }

    pub fn bbox(&self) -> BBox {
        let mut b = BBox::empty();
        for e in self.edges() {
            b = b.union(&e.bbox());
        }
        for p in &self.isolated {
            b.include(*p);
        }
        b
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        let e = self.edges().map(|e| e.distance_to(p)).fold(f64::INFINITY, f64::min);
        self.isolated.iter().map(|q| dist(p, *q)).fold(e, f64::min)
    }

    /// Closed membership decided from the boundary alone: points within
    /// `EPS_GEOM` of the boundary are inside, otherwise the winding number decides.
    pub fn contains(&self, p: Point) -> bool {
        if self.boundary_distance(p) <= EPS_GEOM {
            return true;
        }
        let w: f64 = self.edges().map(|e| e.winding_angle(p)).sum();
        (w / TAU).round() != 0.0
    }

    /// Membership through the cached solid when there is one.
    #[inline]
    pub fn contains_fast(&self, p: Point) -> bool {
        match &self.solid {
            Some(s) => s.contains(p, EPS_GEOM),
            None => self.contains(p),
        }
    }

    /// Boundary points where consecutive edges meet at an angle, plus isolated points.
    pub fn corners(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for l in &self.loops {
            let n = l.len();
            for i in 0..n {
                let (a, b) = (&l[i], &l[(i + 1) % n]);
                if dist(a.end(), b.start()) > 1e-7 {
                    out.push(a.end());
                    continue;
                }
                let ta = a.left_normal_at(1.0);
                let tb = b.left_normal_at(0.0);
                let same_carrier = match (a, b) {
                    (Edge::Arc(x), Edge::Arc(y)) => {
                        dist(x.center, y.center) < 1e-9 && (x.radius - y.radius).abs() < 1e-9
                    }
                    _ => false,
                };
                if !same_carrier && ta.cross(tb).abs() + (1.0 - ta.dot(tb)) > 1e-9 {
                    out.push(a.end());
                }
            }
        }
        out.extend(self.isolated.iter().copied());
        out
    }

    /// `n` boundary points spread by arc length, with a seeded phase.
    pub fn boundary_sample(&self, n: usize, seed: u64) -> Result<Vec<Point>> {
        let total = self.perimeter();
        if n == 0 {
            return Ok(Vec::new());
        }
        if total <= 0.0 {
            if self.isolated.is_empty() {
                return Err(Error::EmptyRegion);
            }
            return Ok((0..n).map(|k| self.isolated[k % self.isolated.len()]).collect());
        }
        let phase: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
        let step = total / n as f64;
        let edges: Vec<&Edge> = self.edges().collect();
        let mut out = Vec::with_capacity(n);
        let (mut idx, mut acc) = (0usize, 0.0);
        for k in 0..n {
            let target = (k as f64 + phase) * step;
            while idx + 1 < edges.len() && target > acc + edges[idx].length() {
                acc += edges[idx].length();
                idx += 1;
            }
            let len = edges[idx].length();
            let t = if len > 0.0 { ((target - acc) / len).clamp(0.0, 1.0) } else { 0.0 };
            out.push(edges[idx].point_at(t));
        }
        Ok(out)
    }

    /// Total length of boundary arcs carried by the given circle.
    pub fn arc_length_on(&self, circle: &Disk) -> f64 {
        self.edges()
            .filter_map(|e| match e {
                Edge::Arc(a)
                    if dist(a.center, circle.center) < 1e-9
                        && (a.radius - circle.radius).abs() < 1e-9 =>
                {
                    Some(a.length())
                }
                _ => None,
            })
            .sum()
    }

    /// Whether every loop closes up within `tol`.
    pub fn loops_closed(&self, tol: f64) -> bool {
        self.loops.iter().all(|l| {
            let n = l.len();
            (0..n).all(|i| dist(l[i].end(), l[(i + 1) % n].start()) <= tol)
        })
    }
}

/// Closed-set membership test.
pub fn region_contains(r: &ArcRegion, p: Point) -> bool {
    r.contains(p)
}

/// `n` boundary points of `r`, approximately equidistributed by arc length.
pub fn boundary_sample(r: &ArcRegion, n: usize, seed: u64) -> Result<Vec<Point>> {
    r.boundary_sample(n, seed)
}
