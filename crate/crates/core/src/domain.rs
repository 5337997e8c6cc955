//! The sets visibility and kernel computations run on.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{dist, spindle_centers, BBox, CircularArc, Point, SpindleCenters, EPS_GEOM};
use crate::grid::GridMask;
use crate::polygon::SimplePolygon;
use crate::region::{ArcRegion, Edge, Solid};
use crate::spindle::{mask_outline, spindle_within, ProbePattern};

/// Samples along a segment when no exact segment test exists.
pub const SEGMENT_SAMPLES: usize = 512;

/// A compact planar set with closed membership.
pub trait Domain: Sync {
    fn contains(&self, p: Point) -> bool;

    fn bbox(&self) -> BBox;

    /// `n` boundary points, deterministic given `seed`.
    fn boundary_points(&self, n: usize, seed: u64) -> Vec<Point>;

    /// Points where the boundary turns sharply.
    fn corners(&self) -> Vec<Point> {
        Vec::new()
    }

    /// Whether `[p, q]` lies in the set, from `samples` equally spaced points.
    fn contains_segment_sampled(&self, p: Point, q: Point, samples: usize) -> bool {
        let n = samples.max(2);
        (0..n).all(|k| self.contains(p.lerp(q, k as f64 / (n - 1) as f64)))
    }

    fn contains_segment(&self, p: Point, q: Point) -> bool {
        self.contains_segment_sampled(p, q, SEGMENT_SAMPLES)
    }

    /// Whether `spi_λ{x, y}` lies in the set, using `pattern` probes.
    fn contains_spindle_with(&self, x: Point, y: Point, lambda: f64, pattern: &ProbePattern) -> bool {
        spindle_within(|p| self.contains(p), x, y, lambda, pattern)
    }

    fn contains_spindle(&self, x: Point, y: Point, lambda: f64) -> bool {
        self.contains_spindle_with(x, y, lambda, &ProbePattern::default())
    }

    /// Up to `n` points of the set from a jittered grid over its bounding box.
    fn interior_samples(&self, n: usize, seed: u64) -> Vec<Point> {
        if n == 0 {
            return Vec::new();
        }
        let b = self.bbox();
        if b.is_empty() {
            return Vec::new();
        }
        // Refine the stratification until enough samples land inside thin shapes.
        let mut k = ((4 * n) as f64).sqrt().ceil() as usize;
        let mut hits = Vec::new();
        while hits.len() < n && k <= 512 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            hits.clear();
            for j in 0..k {
                for i in 0..k {
                    let p = Point::new(
                        b.min.x + (i as f64 + rng.gen::<f64>()) / k as f64 * b.width(),
                        b.min.y + (j as f64 + rng.gen::<f64>()) / k as f64 * b.height(),
                    );
                    if self.contains(p) {
                        hits.push(p);
                    }
                }
            }
            k *= 2;
        }
        if hits.len() <= n {
            return hits;
        }
        (0..n).map(|t| hits[t * hits.len() / n]).collect()
    }

    /// Largest distance between sampled boundary points and corners.
    fn diameter(&self) -> f64 {
        let mut pts = self.boundary_points(256, 0);
        pts.extend(self.corners());
        let mut d: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                d = d.max(dist(*p, *q));
            }
        }
        d
    }
}

impl Domain for ArcRegion {
    #[inline]
    fn contains(&self, p: Point) -> bool {
        self.contains_fast(p)
    }

    fn bbox(&self) -> BBox {
        ArcRegion::bbox(self)
    }

    fn boundary_points(&self, n: usize, seed: u64) -> Vec<Point> {
        self.boundary_sample(n, seed).unwrap_or_default()
    }

    fn corners(&self) -> Vec<Point> {
        ArcRegion::corners(self)
    }

    fn contains_segment_sampled(&self, p: Point, q: Point, samples: usize) -> bool {
        match self.solid() {
            Some(Solid::Polygon(poly)) => poly.contains_segment(p, q),
            _ => {
                let n = samples.max(2);
                (0..n).all(|k| self.contains_fast(p.lerp(q, k as f64 / (n - 1) as f64)))
            }
        }
    }

    /// Exact, as for polygons: the midpoint is inside and no boundary edge
    /// enters the open spindle.
    fn contains_spindle_with(&self, x: Point, y: Point, lambda: f64, pattern: &ProbePattern) -> bool {
        if let Some(Solid::Polygon(poly)) = self.solid() {
            return poly.as_ref().contains_spindle_with(x, y, lambda, pattern);
        }
        if dist(x, y) <= EPS_GEOM * lambda.max(1.0) {
            return self.contains_fast(x);
        }
        let (centers, mid) = match spindle_centers(x, y, lambda) {
            Ok(SpindleCenters::TwoCenters(a, b)) => ([a, b], x.midpoint(y)),
            Ok(SpindleCenters::OneCenter(c)) => ([c, c], c),
            Ok(SpindleCenters::Unbounded) | Err(_) => return false,
        };
        // A spindle shorter than a half turn lies in the disk on its chord.
        let (hub, reach) = if centers[0] == centers[1] { (mid, lambda) } else { (mid, 0.5 * dist(x, y)) };
        let eps = EPS_GEOM * (1.0 + lambda);
        self.contains_fast(mid)
            && !self.edges().any(|e| match e {
                Edge::Segment { start, end } => segment_meets_open_disks(*start, *end, &centers, lambda - eps),
                Edge::Arc(a) => {
                    (dist(a.center, hub) - a.radius).abs() < reach && arc_meets_open_disks(a, &centers, lambda - eps)
                }
            })
    }
}

impl Domain for SimplePolygon {
    #[inline]
    fn contains(&self, p: Point) -> bool {
        SimplePolygon::contains(self, p, EPS_GEOM)
    }

    fn bbox(&self) -> BBox {
        SimplePolygon::bbox(self)
    }

    fn boundary_points(&self, n: usize, seed: u64) -> Vec<Point> {
        SimplePolygon::boundary_points(self, n, seed)
    }

    fn corners(&self) -> Vec<Point> {
        self.vertices().to_vec()
    }

    /// Exact regardless of `samples`.
    fn contains_segment_sampled(&self, p: Point, q: Point, _samples: usize) -> bool {
        SimplePolygon::contains_segment(self, p, q)
    }

    /// Exact: the spindle lies in the polygon iff its midpoint does and no
    /// edge enters its interior.
    fn contains_spindle_with(&self, x: Point, y: Point, lambda: f64, _pattern: &ProbePattern) -> bool {
        if dist(x, y) <= EPS_GEOM * lambda.max(1.0) {
            return Domain::contains(self, x);
        }
        let (centers, mid) = match spindle_centers(x, y, lambda) {
            Ok(SpindleCenters::TwoCenters(a, b)) => ([a, b], x.midpoint(y)),
            Ok(SpindleCenters::OneCenter(c)) => ([c, c], c),
            Ok(SpindleCenters::Unbounded) | Err(_) => return false,
        };
        let b = SimplePolygon::bbox(self);
        let eps = EPS_GEOM * (1.0 + b.width().max(b.height()));
        SimplePolygon::contains(self, mid, eps)
            && !self.edges().any(|(p, q)| segment_meets_open_disks(p, q, &centers, lambda - eps))
    }

    fn diameter(&self) -> f64 {
        SimplePolygon::diameter(self)
    }
}

/// Whether the segment `[a, b]` meets the interior of `⋂ B(c, r)` over `centers`.
fn segment_meets_open_disks(a: Point, b: Point, centers: &[Point], r: f64) -> bool {
    let d = b - a;
    let dd = d.norm2();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for c in centers {
        let f = a - *c;
        let (half_b, k) = (d.dot(f), f.norm2() - r * r);
        if dd == 0.0 {
            if k >= 0.0 {
                return false;
            }
            continue;
        }
        let disc = half_b * half_b - dd * k;
        if disc <= 0.0 {
            return false;
        }
        let root = disc.sqrt();
        lo = lo.max((-half_b - root) / dd);
        hi = hi.min((-half_b + root) / dd);
        if lo >= hi {
            return false;
        }
    }
    true
}

/// Whether the arc meets the interior of `⋂ B(c, r)` over `centers`.
fn arc_meets_open_disks(arc: &CircularArc, centers: &[Point; 2], r: f64) -> bool {
    let lo = arc.start_angle.min(arc.end_angle);
    let rad = arc.radius;
    // Parameter intervals along the arc, as offsets from `lo`; each open
    // disk cuts one interval from the circle, so at most four pieces.
    let mut pieces: [(f64, f64); 4] = [(0.0, arc.sweep().abs()); 4];
    let mut count = 1;
    for (k, c) in centers.iter().enumerate() {
        if k == 1 && *c == centers[0] {
            break;
        }
        let v = *c - arc.center;
        let d = v.norm();
        if d + rad < r {
            continue;
        }
        if d >= rad + r || rad >= d + r {
            return false;
        }
        let h = ((rad * rad + d * d - r * r) / (2.0 * rad * d)).clamp(-1.0, 1.0).acos();
        let s0 = (v.angle() - h - lo).rem_euclid(TAU);
        let mut next = [(0.0, 0.0); 4];
        let mut n = 0;
        for &(a, b) in &pieces[..count] {
            for start in [s0, s0 - TAU] {
                let (a2, b2) = (a.max(start), b.min(start + 2.0 * h));
                if a2 < b2 && n < 4 {
                    next[n] = (a2, b2);
                    n += 1;
                }
            }
        }
        if n == 0 {
            return false;
        }
        (pieces, count) = (next, n);
    }
    true
}

/// A grid mask viewed as a set: the union of its inside cells, widened by
/// `slack` so that shapes touching cell centers are not cut by discretization.
#[derive(Clone, Debug)]
pub struct MaskDomain {
    pub mask: GridMask,
    widened: GridMask,
}

impl MaskDomain {
    pub fn new(mask: GridMask, slack: f64) -> Self {
        let widened = mask.dilate(slack);
        MaskDomain { mask, widened }
    }
}

impl Domain for MaskDomain {
    fn contains(&self, p: Point) -> bool {
        self.widened.at(p)
    }

    fn bbox(&self) -> BBox {
        BBox::of_points(self.mask.centers())
    }

    fn boundary_points(&self, n: usize, _seed: u64) -> Vec<Point> {
        let outline = mask_outline(&self.mask);
        if outline.len() <= n || n == 0 {
            return outline;
        }
        (0..n).map(|t| outline[t * outline.len() / n]).collect()
    }

    fn interior_samples(&self, n: usize, _seed: u64) -> Vec<Point> {
        let c: Vec<Point> = self.mask.centers().collect();
        if c.len() <= n || n == 0 {
            return c;
        }
        (0..n).map(|t| c[t * c.len() / n]).collect()
    }
}
