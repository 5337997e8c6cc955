//! Simple polygons: validation, closed point membership, exact segment and
//! arc containment, and seeded random generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    dist, point_segment_distance, segment_circle_params, segment_segment_params, BBox,
    CircularArc, Point, EPS_GEOM,
};

/// A simple polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for SimplePolygon {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        SimplePolygon::new(v)
    }
}

impl From<SimplePolygon> for Vec<Point> {
    fn from(p: SimplePolygon) -> Self {
        p.vertices
    }
}

impl SimplePolygon {
    /// Validates the vertex list and normalizes it to counter-clockwise order.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite coordinate".into()));
        }
        // Drop a repeated closing vertex and consecutive duplicates.
        vertices.dedup_by(|a, b| dist(*a, *b) <= EPS_GEOM);
        while vertices.len() > 1 && dist(vertices[0], *vertices.last().unwrap()) <= EPS_GEOM {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 distinct vertices".into()));
        }
        let area = signed_area(&vertices);
        if area.abs() <= EPS_GEOM {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let poly = SimplePolygon { vertices };
        if let Some((i, j)) = poly.find_self_intersection() {
            return Err(Error::InvalidPolygon(format!("edges {i} and {j} intersect")));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(self.vertices.iter().copied())
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| dist(a, b)).sum()
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(dist(v[i], v[j]));
            }
        }
        d
    }

    pub fn centroid(&self) -> Point {
        let mut c = Point::ORIGIN;
        let mut a = 0.0;
        for (p, q) in self.edges() {
            let w = p.cross(q);
            a += w;
            c = c + (p + q) * w;
        }
        c / (3.0 * a)
    }

    /// Indices of vertices with interior angle greater than a half turn.
    pub fn reflex_vertices(&self) -> Vec<usize> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| {
                let prev = self.vertices[(i + n - 1) % n];
                let cur = self.vertices[i];
                let next = self.vertices[(i + 1) % n];
                (cur - prev).cross(next - cur) < -EPS_GEOM
            })
            .collect()
    }

    fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            for j in i + 1..n {
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let hits = segment_segment_params(a, b, c, d);
                for (t, u) in hits {
                    if adjacent {
                        // Adjacent edges may only share their common vertex.
                        let shared = if j == i + 1 { t > 1.0 - 1e-9 && u < 1e-9 } else { t < 1e-9 && u > 1.0 - 1e-9 };
                        if !shared {
                            return Some((i, j));
                        }
                    } else {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed membership: boundary points (within `eps`) count as inside.
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        let mut inside = false;
        let n = self.vertices.len();
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside || self.edges().any(|(a, b)| point_segment_distance(p, a, b) <= eps)
    }

    /// Whether the closed segment `p..q` lies in the closed polygon.
    ///
    /// The segment is cut at every boundary contact; each open piece then
    /// lies entirely inside or entirely outside and is decided by its midpoint.
    pub fn contains_segment(&self, p: Point, q: Point) -> bool {
        let eps = EPS_GEOM * (1.0 + self.bbox().width().max(self.bbox().height()));
        if !self.contains(p, eps) || !self.contains(q, eps) {
            return false;
        }
        if dist(p, q) <= eps {
            return true;
        }
        let mut ts = vec![0.0, 1.0];
        for (a, b) in self.edges() {
            for (t, _) in segment_segment_params(p, q, a, b) {
                ts.push(t);
            }
        }
        sort_dedup(&mut ts);
        ts.windows(2).all(|w| self.contains(p.lerp(q, 0.5 * (w[0] + w[1])), eps))
    }

    /// Whether the closed arc lies in the closed polygon; same cutting scheme
    /// as [`SimplePolygon::contains_segment`].
    pub fn contains_arc(&self, arc: &CircularArc) -> bool {
        let eps = EPS_GEOM * (1.0 + self.bbox().width().max(self.bbox().height()));
        let mut ts = vec![0.0, 1.0];
        for (a, b) in self.edges() {
            for s in segment_circle_params(a, b, arc.center, arc.radius) {
                let hit = a.lerp(b, s);
                if let Some(t) = arc.param_of_angle((hit - arc.center).angle(), 1e-12) {
                    ts.push(t);
                }
            }
        }
        sort_dedup(&mut ts);
        ts.iter().all(|&t| self.contains(arc.point_at(t), eps))
            && ts.windows(2).all(|w| self.contains(arc.point_at(0.5 * (w[0] + w[1])), eps))
    }

    /// Arc-length sample of `n` boundary points with a seeded phase offset.
    pub fn boundary_points(&self, n: usize, seed: u64) -> Vec<Point> {
        if n == 0 {
            return Vec::new();
        }
        let total = self.perimeter();
        let phase: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
        let step = total / n as f64;
        let mut out = Vec::with_capacity(n);
        let mut edges = self.edges().peekable();
        let mut acc = 0.0;
        let mut k = 0;
        while k < n {
            let target = (k as f64 + phase) * step;
            let Some(&(a, b)) = edges.peek() else { break };
            let len = dist(a, b);
            if target <= acc + len {
                let t = if len > 0.0 { (target - acc) / len } else { 0.0 };
                out.push(a.lerp(b, t.clamp(0.0, 1.0)));
                k += 1;
            } else {
                acc += len;
                edges.next();
            }
        }
        while out.len() < n {
            out.push(self.vertices[0]);
        }
        out
    }

    pub fn scaled(&self, factor: f64, about: Point) -> SimplePolygon {
        SimplePolygon {
            vertices: self.vertices.iter().map(|p| about + (*p - about) * factor).collect(),
        }
    }

    pub fn translated(&self, by: Point) -> SimplePolygon {
        SimplePolygon { vertices: self.vertices.iter().map(|p| *p + by).collect() }
    }
}

pub(crate) fn sort_dedup(ts: &mut Vec<f64>) {
    ts.sort_by(|a, b| a.total_cmp(b));
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
}

pub fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Random simple polygon: uniform points in the unit square, untangled by
/// repeated 2-opt moves until no two edges cross.
pub fn random_simple_polygon(n: usize, seed: u64) -> SimplePolygon {
    let n = n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> =
            (0..n).map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>())).collect();
        if untangle(&mut pts, 10_000) {
            if let Ok(p) = SimplePolygon::new(pts) {
                return p;
            }
        }
    }
}

fn proper_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

fn untangle(pts: &mut [Point], max_moves: usize) -> bool {
    let n = pts.len();
    for _ in 0..max_moves {
        let mut moved = false;
        'outer: for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (pts[i], pts[i + 1]);
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if proper_cross(a, b, c, d) {
                    pts[i + 1..=j].reverse();
                    moved = true;
                    break 'outer;
                }
            }
        }
        if !moved {
            return true;
        }
    }
    false
}
