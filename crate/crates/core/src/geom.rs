//! Planar primitives and the tolerance model shared by every other module.
//!
//! Coordinates are plain `f64`. Incidence and equality predicates snap at
//! [`Tolerance::eps_geom`]; comparisons between rasterized sets use a band
//! measured in grid cells ([`Tolerance::eps_set_cells`]).

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default snapping distance for incidence predicates.
pub const EPS_GEOM: f64 = 1e-9;

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    /// Counter-clockwise rotation by a right angle.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

/// Euclidean distance.
#[inline]
pub fn dist(p: Point, q: Point) -> f64 {
    (p - q).norm()
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn new(min: Point, max: Point) -> Self {
        BBox { min, max }
    }

    pub fn empty() -> Self {
        BBox {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    pub fn of_points<I: IntoIterator<Item = Point>>(pts: I) -> Self {
        let mut b = BBox::empty();
        for p in pts {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: Point) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, o: &BBox) -> BBox {
        let mut b = *self;
        b.include(o.min);
        b.include(o.max);
        b
    }

    pub fn intersection(&self, o: &BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.max(o.min.x), self.min.y.max(o.min.y)),
            max: Point::new(self.max.x.min(o.max.x), self.max.y.min(o.max.y)),
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.min.x <= self.max.x && self.min.y <= self.max.y)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(self.max)
    }

    pub fn expand(&self, margin: f64) -> BBox {
        BBox {
            min: self.min - Point::new(margin, margin),
            max: self.max + Point::new(margin, margin),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Closed disk `B[center, radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn unit(center: Point) -> Self {
        Disk { center, radius: 1.0 }
    }

    #[inline]
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        let r = self.radius + eps;
        (p - self.center).norm2() <= r * r
    }

    pub fn bbox(&self) -> BBox {
        let r = Point::new(self.radius, self.radius);
        BBox::new(self.center - r, self.center + r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        }
    }
}

/// A circular arc subtending strictly less than a half turn.
///
/// `end_angle - start_angle` is positive for counter-clockwise arcs and
/// negative for clockwise ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub orientation: Orientation,
}

impl CircularArc {
    /// Builds an arc from a start angle and a signed sweep.
    pub fn new(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::BadRadius(radius));
        }
        if !(sweep.abs() < PI) {
            return Err(Error::PreconditionFailed(format!(
                "arc sweep {sweep} must be shorter than a half turn"
            )));
        }
        Ok(Self::new_unchecked(center, radius, start_angle, sweep))
    }

    pub(crate) fn new_unchecked(center: Point, radius: f64, start_angle: f64, sweep: f64) -> Self {
        CircularArc {
            center,
            radius,
            start_angle,
            end_angle: start_angle + sweep,
            orientation: if sweep >= 0.0 { Orientation::Ccw } else { Orientation::Cw },
        }
    }

    #[inline]
    pub fn sweep(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep().abs()
    }

    #[inline]
    pub fn point_at_angle(&self, theta: f64) -> Point {
        self.center + Point::from_angle(theta) * self.radius
    }

    /// Point at parameter `t` in `[0, 1]` along the arc.
    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.point_at_angle(self.start_angle + t * self.sweep())
    }

    pub fn start(&self) -> Point {
        self.point_at_angle(self.start_angle)
    }

    pub fn end(&self) -> Point {
        self.point_at_angle(self.end_angle)
    }

    /// Unit tangent at parameter `t`, in the direction of travel.
    pub fn tangent_at(&self, t: f64) -> Point {
        let theta = self.start_angle + t * self.sweep();
        Point::from_angle(theta).perp() * self.orientation.sign()
    }

    pub fn reversed(&self) -> Self {
        CircularArc::new_unchecked(self.center, self.radius, self.end_angle, -self.sweep())
    }

    /// Arc parameter of the direction `theta`, if it falls within the arc.
    pub fn param_of_angle(&self, theta: f64, slack: f64) -> Option<f64> {
        let sweep = self.sweep();
        let mut rel = (theta - self.start_angle) * self.orientation.sign();
        rel = rel.rem_euclid(TAU);
        let span = sweep.abs();
        if rel <= span + slack {
            Some(if span > 0.0 { (rel / span).min(1.0) } else { 0.0 })
        } else if rel >= TAU - slack {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        let v = p - self.center;
        if self.param_of_angle(v.angle(), 0.0).is_some() {
            (v.norm() - self.radius).abs()
        } else {
            dist(p, self.start()).min(dist(p, self.end()))
        }
    }

    pub fn bbox(&self) -> BBox {
        let mut b = BBox::of_points([self.start(), self.end()]);
        for k in 0..4 {
            let theta = k as f64 * FRAC_PI_2;
            if self.param_of_angle(theta, 0.0).is_some() {
                b.include(self.point_at_angle(theta));
            }
        }
        b
    }
}

/// Tolerance policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Snapping distance for incidence predicates, in length units.
    pub eps_geom: f64,
    /// Band for set-level comparisons, in grid cells.
    pub eps_set_cells: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_geom: EPS_GEOM, eps_set_cells: 1.5 }
    }
}

impl Tolerance {
    /// Set-comparison band in length units for a grid of the given cell size.
    pub fn eps_set(&self, cell_size: f64) -> f64 {
        self.eps_set_cells * cell_size
    }
}

/// Minimum enclosing disk of a finite point set, as `(radius, center)`.
///
/// Up to 12 points every pair and triple support set is enumerated. Larger
/// inputs use the randomized incremental algorithm with a fixed seed.
pub fn circumradius(points: &[Point]) -> Result<(f64, Point)> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = if points.len() <= 12 {
        enclosing_exhaustive(points)
    } else {
        enclosing_incremental(points, 0x5eed)
    };
    Ok((d.radius, d.center))
}

fn encloses_all(d: &Disk, points: &[Point]) -> bool {
    let tol = EPS_GEOM * (1.0 + d.radius);
    points.iter().all(|p| dist(*p, d.center) <= d.radius + tol)
}

fn enclosing_exhaustive(points: &[Point]) -> Disk {
    let mut best = Disk::new(points[0], 0.0);
    if encloses_all(&best, points) {
        return best;
    }
    best.radius = f64::INFINITY;
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = diameter_disk(points[i], points[j]);
            if c.radius < best.radius && encloses_all(&c, points) {
                best = c;
            }
            for k in j + 1..n {
                if let Some(c) = circumcircle(points[i], points[j], points[k]) {
                    if c.radius < best.radius && encloses_all(&c, points) {
                        best = c;
                    }
                }
            }
        }
    }
    best
}

fn enclosing_incremental(points: &[Point], seed: u64) -> Disk {
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let inside = |d: &Disk, p: Point| dist(p, d.center) <= d.radius * (1.0 + 1e-12) + EPS_GEOM;
    let mut c = Disk::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if inside(&c, pts[i]) {
            continue;
        }
        c = Disk::new(pts[i], 0.0);
        for j in 0..i {
            if inside(&c, pts[j]) {
                continue;
            }
            c = diameter_disk(pts[i], pts[j]);
            for k in 0..j {
                if inside(&c, pts[k]) {
                    continue;
                }
                if let Some(cc) = circumcircle(pts[i], pts[j], pts[k]) {
                    c = cc;
                }
            }
        }
    }
    c
}

fn diameter_disk(a: Point, b: Point) -> Disk {
    Disk::new(a.midpoint(b), 0.5 * dist(a, b))
}

/// Circle through three points; `None` when they are collinear.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<Disk> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d.abs() < 1e-300 || (d.abs() / (ab.norm2() + ac.norm2())) < 1e-14 {
        return None;
    }
    let ux = (ac.y * ab.norm2() - ab.y * ac.norm2()) / d;
    let uy = (ab.x * ac.norm2() - ac.x * ab.norm2()) / d;
    let off = Point::new(ux, uy);
    Some(Disk::new(a + off, off.norm()))
}

/// Result of locating the centers of the radius-`lambda` circles through two points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpindleCenters {
    TwoCenters(Point, Point),
    OneCenter(Point),
    Unbounded,
}

/// Centers of the radius-`lambda` circles passing through both `x` and `y`.
///
/// `c_plus` lies to the left of the directed segment `x -> y`.
pub fn spindle_centers(x: Point, y: Point, lambda: f64) -> Result<SpindleCenters> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::BadRadius(lambda));
    }
    let d = dist(x, y);
    if d > 2.0 * lambda + EPS_GEOM {
        return Ok(SpindleCenters::Unbounded);
    }
    let mid = x.midpoint(y);
    if (d - 2.0 * lambda).abs() <= EPS_GEOM {
        return Ok(SpindleCenters::OneCenter(mid));
    }
    let dir = (y - x).normalized().unwrap_or(Point::new(0.0, 1.0));
    let offset = (lambda * lambda - 0.25 * d * d).max(0.0).sqrt();
    let n = dir.perp();
    Ok(SpindleCenters::TwoCenters(mid + n * offset, mid - n * offset))
}

/// Endpoint test for an arc leaving a unit ball.
///
/// Given `x` outside `B[z, 1]` and an arc `mu` of radius at least one,
/// shorter than a quarter circle, starting at `x` and leaving at an angle of
/// at most a right angle with `x - z`, returns whether the far endpoint lies
/// outside `B[z, 1]`. Under the stated hypotheses the answer is always `true`.
pub fn arc_exit_predicate(z: Point, x: Point, mu: &CircularArc) -> Result<bool> {
    let fail = |m: &str| Err(Error::PreconditionFailed(m.to_string()));
    if dist(x, z) <= 1.0 {
        return fail("x must lie outside the unit ball around z");
    }
    if mu.radius < 1.0 {
        return fail("arc radius must be at least 1");
    }
    if mu.sweep().abs() >= FRAC_PI_2 {
        return fail("arc must be shorter than a quarter circle");
    }
    if dist(mu.start(), x) > 1e-7 * (1.0 + mu.radius) {
        return fail("arc must start at x");
    }
    if mu.sweep() != 0.0 && mu.tangent_at(0.0).dot(x - z) < 0.0 {
        return fail("arc must leave x at an angle of at most a right angle with x - z");
    }
    Ok(dist(mu.end(), z) > 1.0)
}

/// Intersection points of two circles. Tangent circles yield one point;
/// concentric circles yield none.
pub fn circle_circle(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<Point> {
    let v = c2 - c1;
    let d = v.norm();
    if d < 1e-14 {
        return Vec::new();
    }
    let tol = 1e-12 * (1.0 + r1 + r2);
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
        return Vec::new();
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    let u = v / d;
    let base = c1 + u * a;
    if h2 <= tol * (r1 + r2) {
        return vec![base];
    }
    let h = h2.sqrt();
    vec![base + u.perp() * h, base - u.perp() * h]
}

/// Parameters `t` in `[0, 1]` where the segment `a + t (b - a)` meets the circle.
pub fn segment_circle_params(a: Point, b: Point, c: Point, r: f64) -> Vec<f64> {
    let d = b - a;
    let f = a - c;
    let qa = d.norm2();
    if qa == 0.0 {
        return Vec::new();
    }
    let qb = 2.0 * f.dot(d);
    let qc = f.norm2() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    let tol = 1e-12 * qb.abs().max(qa).max(1.0);
    let mut out = Vec::new();
    if disc < -tol {
        return out;
    }
    let slack = 1e-12;
    if disc <= tol {
        let t = -qb / (2.0 * qa);
        if (-slack..=1.0 + slack).contains(&t) {
            out.push(t.clamp(0.0, 1.0));
        }
        return out;
    }
    let s = disc.sqrt();
    for t in [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)] {
        if (-slack..=1.0 + slack).contains(&t) {
            out.push(t.clamp(0.0, 1.0));
        }
    }
    out
}

/// Intersection parameters `(t, u)` of segments `a..b` and `c..d`, including
/// the endpoints of collinear overlaps.
pub fn segment_segment_params(a: Point, b: Point, c: Point, d: Point) -> Vec<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    let mut out = Vec::new();
    if scale == 0.0 {
        return out;
    }
    let slack = 1e-12;
    if denom.abs() > 1e-13 * scale {
        let t = (c - a).cross(s) / denom;
        let u = (c - a).cross(r) / denom;
        if (-slack..=1.0 + slack).contains(&t) && (-slack..=1.0 + slack).contains(&u) {
            out.push((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)));
        }
        return out;
    }
    // Parallel: only collinear overlaps matter.
    if ((c - a).cross(r)).abs() > 1e-12 * r.norm() * (1.0 + (c - a).norm()) {
        return out;
    }
    let rr = r.norm2();
    let ss = s.norm2();
    let mut push = |t: f64, u: f64| {
        if (-slack..=1.0 + slack).contains(&t) && (-slack..=1.0 + slack).contains(&u) {
            out.push((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)));
        }
    };
    push((c - a).dot(r) / rr, 0.0);
    push((d - a).dot(r) / rr, 1.0);
    push(0.0, (a - c).dot(s) / ss);
    push(1.0, (b - c).dot(s) / ss);
    out
}

/// Convex hull vertices in counter-clockwise order (monotone chain).
/// Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Distance from `p` to the segment `a..b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return dist(p, a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    dist(p, a + d * t)
}
