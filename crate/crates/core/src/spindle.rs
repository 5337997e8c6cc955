//! λ-spindles, ball hulls of finite point sets, hulls of unions, and a
//! sampled spindle-convexity test.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{circumradius, dist, spindle_centers, BBox, CircularArc, Disk, Point, SpindleCenters, EPS_GEOM};
use crate::grid::{GridFrame, GridMask};
use crate::region::{disk_intersection, disk_intersection_arcs, split_arc, ArcRegion, Edge, Solid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpindleShape {
    /// Bounded by an arc of the circle around `c_plus` and one around `c_minus`.
    Lens(CircularArc, CircularArc),
    Disk(Disk),
    Degenerate(Point),
    WholePlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spindle {
    pub x: Point,
    pub y: Point,
    pub lambda: f64,
    pub shape: SpindleShape,
}

/// `spi_λ{x, y}`: the intersection of all radius-λ disks containing `x` and `y`.
pub fn make_spindle(x: Point, y: Point, lambda: f64) -> Result<Spindle> {
    let shape = if dist(x, y) <= EPS_GEOM * lambda.max(1.0) && lambda > 0.0 {
        SpindleShape::Degenerate(x)
    } else {
        match spindle_centers(x, y, lambda)? {
            SpindleCenters::TwoCenters(cp, cm) => SpindleShape::Lens(minor_arc(cp, lambda, x, y), minor_arc(cm, lambda, x, y)),
            SpindleCenters::OneCenter(c) => SpindleShape::Disk(Disk::new(c, lambda)),
            SpindleCenters::Unbounded => SpindleShape::WholePlane,
        }
    };
    Ok(Spindle { x, y, lambda, shape })
}

fn minor_arc(c: Point, r: f64, x: Point, y: Point) -> CircularArc {
    let a0 = (x - c).angle();
    let sweep = ((y - c).angle() - a0 + PI).rem_euclid(2.0 * PI) - PI;
    CircularArc::new_unchecked(c, r, a0, sweep)
}

impl Spindle {
    /// Closed membership with `eps_geom` slack.
    pub fn contains(&self, p: Point) -> bool {
        match &self.shape {
            SpindleShape::Lens(a, b) => {
                let slack = EPS_GEOM * self.lambda.max(1.0);
                dist(p, a.center) <= a.radius + slack && dist(p, b.center) <= b.radius + slack
            }
            SpindleShape::Disk(d) => d.contains(p, EPS_GEOM * self.lambda.max(1.0)),
            SpindleShape::Degenerate(q) => dist(p, *q) <= EPS_GEOM * self.lambda.max(1.0),
            SpindleShape::WholePlane => true,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.shape != SpindleShape::WholePlane
    }

    /// The spindle as an arc region; `None` for the whole plane.
    pub fn to_region(&self) -> Option<ArcRegion> {
        match &self.shape {
            SpindleShape::Lens(a, b) => Some(disk_intersection(&[
                Disk::new(a.center, a.radius),
                Disk::new(b.center, b.radius),
            ])),
            SpindleShape::Disk(d) => Some(ArcRegion::disk(*d)),
            SpindleShape::Degenerate(p) => Some(ArcRegion::point(*p)),
            SpindleShape::WholePlane => None,
        }
    }

    /// Membership description; `Solid::Plane` for the whole plane.
    pub fn to_solid(&self) -> Solid {
        match &self.shape {
            SpindleShape::Lens(a, b) => Solid::Intersect(vec![
                Solid::Disk(Disk::new(a.center, a.radius)),
                Solid::Disk(Disk::new(b.center, b.radius)),
            ]),
            SpindleShape::Disk(d) => Solid::Disk(*d),
            SpindleShape::Degenerate(p) => Solid::Point(*p),
            SpindleShape::WholePlane => Solid::Plane,
        }
    }

    /// Boundary arcs (each shorter than a half turn); empty for degenerate spindles.
    pub fn boundary_arcs(&self) -> Vec<CircularArc> {
        match &self.shape {
            SpindleShape::Lens(a, b) => {
                let mut v = split_arc(a.center, a.radius, a.start_angle, a.sweep());
                v.extend(split_arc(b.center, b.radius, b.start_angle, b.sweep()));
                v
            }
            SpindleShape::Disk(d) => split_arc(d.center, d.radius, 0.0, 2.0 * PI),
            _ => Vec::new(),
        }
    }

    pub fn bbox(&self) -> Option<BBox> {
        match &self.shape {
            SpindleShape::WholePlane => None,
            SpindleShape::Degenerate(p) => Some(BBox::new(*p, *p)),
            SpindleShape::Disk(d) => Some(d.bbox()),
            SpindleShape::Lens(a, b) => Some(a.bbox().union(&b.bbox())),
        }
    }

    /// Horizontal extent of the spindle on the line `y = row_y`, if any.
    pub fn row_span(&self, row_y: f64) -> Option<(f64, f64)> {
        let span = |c: Point, r: f64| {
            let dy = row_y - c.y;
            let h2 = r * r - dy * dy;
            (h2 >= 0.0).then(|| {
                let h = h2.sqrt();
                (c.x - h, c.x + h)
            })
        };
        match &self.shape {
            SpindleShape::WholePlane => Some((f64::NEG_INFINITY, f64::INFINITY)),
            SpindleShape::Degenerate(p) => ((row_y - p.y).abs() <= EPS_GEOM).then_some((p.x, p.x)),
            SpindleShape::Disk(d) => span(d.center, d.radius),
            SpindleShape::Lens(a, b) => {
                let (l1, r1) = span(a.center, a.radius)?;
                let (l2, r2) = span(b.center, b.radius)?;
                let (l, r) = (l1.max(l2), r1.min(r2));
                (l <= r).then_some((l, r))
            }
        }
    }

    /// Marks every cell of `mask` whose center is in the spindle.
    pub fn paint(&self, mask: &mut GridMask) {
        let f = mask.frame;
        let Some(b) = self.bbox() else {
            *mask = GridMask::full(f);
            return;
        };
        let j0 = (((b.min.y - f.origin.y) / f.cell - 0.5).ceil()).max(0.0) as usize;
        let j1 = (((b.max.y - f.origin.y) / f.cell - 0.5).floor()).min(f.height as f64 - 1.0);
        if j1 < 0.0 {
            return;
        }
        for j in j0..=j1 as usize {
            let yc = f.origin.y + (j as f64 + 0.5) * f.cell;
            if let Some((l, r)) = self.row_span(yc) {
                let i0 = (((l - f.origin.x) / f.cell - 0.5 - 1e-9).ceil()).max(0.0) as usize;
                let i1 = ((r - f.origin.x) / f.cell - 0.5 + 1e-9).floor().min(f.width as f64 - 1.0);
                if i1 < 0.0 {
                    continue;
                }
                for i in i0..=i1 as usize {
                    mask.set(i, j, true);
                }
            }
        }
    }
}

/// Closed-set membership in a spindle.
pub fn spindle_contains(s: &Spindle, p: Point) -> bool {
    s.contains(p)
}

/// Probe layout used to test whether a whole spindle lies in a set.
///
/// Points sit on `nodes` Chebyshev stations along the axis `x..y`; at each
/// station the lens is crossed at the fractional offsets in `levels`, so the
/// boundary arcs (levels ±1) and the axis (level 0) are always covered.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbePattern {
    nodes: usize,
    levels: Vec<f64>,
    /// `cos(πk / (nodes - 1))` for each station.
    cos: Vec<f64>,
}

impl Default for ProbePattern {
    fn default() -> Self {
        ProbePattern::new(52, vec![1.0, -1.0, 0.5, -0.5, 0.0])
    }
}

impl ProbePattern {
    /// `nodes` stations along the axis, at each of the lateral `levels`
    /// (fractions of the half-width, the first one taken as the boundary).
    pub fn new(nodes: usize, levels: Vec<f64>) -> Self {
        let m = nodes.max(2);
        let cos = (0..m).map(|k| (PI * k as f64 / (m - 1) as f64).cos()).collect();
        ProbePattern { nodes: m, levels, cos }
    }

    pub fn with_nodes(nodes: usize) -> Self {
        ProbePattern::new(nodes, ProbePattern::default().levels)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Calls `f` on each probe of `spi_λ{x, y}`, boundary levels first,
    /// stopping at the first `false`. `None` when the spindle is the whole plane.
    pub fn all(&self, x: Point, y: Point, lambda: f64, mut f: impl FnMut(Point) -> bool) -> Option<bool> {
        let d = dist(x, y);
        if d > 2.0 * lambda * (1.0 + 1e-12) {
            return None;
        }
        if d <= EPS_GEOM {
            return Some(f(x));
        }
        let h = (0.5 * d).min(lambda);
        let mid = x.midpoint(y);
        let u = (y - x) / d;
        let n = u.perp();
        let base = (lambda * lambda - h * h).max(0.0).sqrt();
        let mut stations = [(0.0, 0.0); 128];
        let mut heap = Vec::new();
        let st: &mut [(f64, f64)] = if self.nodes <= stations.len() {
            &mut stations[..self.nodes]
        } else {
            heap.resize(self.nodes, (0.0, 0.0));
            &mut heap
        };
        for (slot, c) in st.iter_mut().zip(&self.cos) {
            let a = h * c;
            *slot = (a, (lambda * lambda - a * a).max(0.0).sqrt() - base);
        }
        for &lv in &self.levels {
            for &(a, w) in st.iter() {
                if w <= 0.0 && lv != self.levels[0] {
                    continue;
                }
                if !f(mid + u * a + n * (lv * w)) {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Probe points of `spi_λ{x, y}`, boundary levels first. `None` when the
    /// spindle is the whole plane.
    pub fn points(&self, x: Point, y: Point, lambda: f64) -> Option<Vec<Point>> {
        let mut out = Vec::with_capacity(self.nodes * self.levels.len());
        self.all(x, y, lambda, |p| {
            out.push(p);
            true
        })?;
        Some(out)
    }
}

/// Probe-based test that `spi_λ{x, y}` lies in the set described by `inside`.
pub fn spindle_within(inside: impl Fn(Point) -> bool, x: Point, y: Point, lambda: f64, pattern: &ProbePattern) -> bool {
    pattern.all(x, y, lambda, inside).unwrap_or(false)
}

/// Checks `spi_ν{x,y} ⊆ spi_λ{x,y}` on `probes` points drawn around the
/// larger spindle, half of them on its boundary.
pub fn spindle_monotonicity_check(x: Point, y: Point, lambda: f64, nu: f64, probes: usize, seed: u64) -> Result<bool> {
    if !(lambda > 0.0 && lambda < nu) {
        return Err(Error::PreconditionFailed(format!("need 0 < lambda < nu, got {lambda}, {nu}")));
    }
    let small = make_spindle(x, y, lambda)?;
    let big = make_spindle(x, y, nu)?;
    let Some(bb) = big.bbox() else {
        return Ok(true);
    };
    let bb = bb.expand(0.1 * nu + EPS_GEOM);
    let arcs = big.boundary_arcs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..probes {
        let p = if k % 2 == 0 && !arcs.is_empty() {
            arcs[rng.gen_range(0..arcs.len())].point_at(rng.gen())
        } else {
            Point::new(rng.gen_range(bb.min.x..=bb.max.x), rng.gen_range(bb.min.y..=bb.max.y))
        };
        if big.contains(p) && !small.contains(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spindle convex hull of a finite set, or the whole plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Hull {
    Region(HullRegion),
    WholePlane,
}

/// A ball hull: the intersection of the radius-λ disks centered at `centers`.
#[derive(Clone, Debug, PartialEq)]
pub struct HullRegion {
    pub centers: Vec<Point>,
    pub lambda: f64,
    /// Set when the hull is a single point.
    pub point: Option<Point>,
}

impl HullRegion {
    pub fn contains(&self, p: Point) -> bool {
        if let Some(q) = self.point {
            return dist(p, q) <= EPS_GEOM;
        }
        let r = self.lambda + EPS_GEOM;
        self.centers.iter().all(|c| (p - *c).norm2() <= r * r)
    }

    pub fn to_region(&self) -> ArcRegion {
        match self.point {
            Some(q) => ArcRegion::point(q),
            None => disk_intersection(&self.disks()),
        }
    }

    pub fn disks(&self) -> Vec<Disk> {
        self.centers.iter().map(|c| Disk::new(*c, self.lambda)).collect()
    }

    pub fn bbox(&self) -> BBox {
        if let Some(q) = self.point {
            return BBox::new(q, q);
        }
        let mut b = BBox::new(
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            Point::new(f64::INFINITY, f64::INFINITY),
        );
        for c in &self.centers {
            b = b.intersection(&Disk::new(*c, self.lambda).bbox());
        }
        b
    }

    /// Rasterizes the hull row by row (it is convex, so each row is one span).
    pub fn rasterize(&self, frame: GridFrame) -> GridMask {
        if let Some(q) = self.point {
            let mut m = GridMask::empty(frame);
            if let Some((i, j)) = frame.cell_of(q) {
                if dist(frame.center(i, j), q) <= EPS_GEOM {
                    m.set(i, j, true);
                }
            }
            return m;
        }
        let r2 = self.lambda * self.lambda;
        GridMask::from_rows(frame, |j, row| {
            let yc = frame.origin.y + (j as f64 + 0.5) * frame.cell;
            let (mut l, mut r) = (f64::NEG_INFINITY, f64::INFINITY);
            for c in &self.centers {
                let dy = yc - c.y;
                let h2 = r2 - dy * dy;
                if h2 < 0.0 {
                    return;
                }
                let h = h2.sqrt();
                l = l.max(c.x - h);
                r = r.min(c.x + h);
            }
            for (i, b) in row.iter_mut().enumerate() {
                let xc = frame.origin.x + (i as f64 + 0.5) * frame.cell;
                *b = xc >= l - EPS_GEOM && xc <= r + EPS_GEOM;
            }
        })
    }
}

impl Hull {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Hull::Region(h) => h.contains(p),
            Hull::WholePlane => true,
        }
    }

    pub fn rasterize(&self, frame: GridFrame) -> GridMask {
        match self {
            Hull::Region(h) => h.rasterize(frame),
            Hull::WholePlane => GridMask::full(frame),
        }
    }
}

/// Ball hull of `points`: the intersection of all radius-λ disks containing
/// them, or the whole plane when no such disk exists.
///
/// With `K = ⋂ B[p, λ]`, the hull is `⋂ B[v, λ]` over the vertices `v` of `K`.
pub fn spindle_hull_points(points: &[Point], lambda: f64) -> Result<Hull> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::BadRadius(lambda));
    }
    let mut pts: Vec<Point> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| dist(*p, *q) <= 1e-12) {
            pts.push(*p);
        }
    }
    if pts.len() == 1 {
        return Ok(Hull::Region(HullRegion { centers: Vec::new(), lambda, point: Some(pts[0]) }));
    }
    let (crad, c) = circumradius(&pts)?;
    let tol = EPS_GEOM * lambda.max(1.0);
    if crad > lambda + tol {
        return Ok(Hull::WholePlane);
    }
    if crad >= lambda - tol {
        return Ok(Hull::Region(HullRegion { centers: vec![c], lambda, point: None }));
    }
    let disks: Vec<Disk> = pts.iter().map(|p| Disk::new(*p, lambda)).collect();
    let (arcs, isolated) = disk_intersection_arcs(&disks);
    let mut centers: Vec<Point> = Vec::new();
    let mut push = |v: Point| {
        if !centers.iter().any(|q| dist(*q, v) < 1e-12) {
            centers.push(v);
        }
    };
    for a in &arcs {
        let d = disks[a.disk];
        push(d.center + Point::from_angle(a.start) * d.radius);
        push(d.center + Point::from_angle(a.start + a.sweep) * d.radius);
    }
    isolated.into_iter().for_each(&mut push);
    if centers.is_empty() {
        // Only reachable through rounding at crad ≈ λ.
        centers.push(c);
    }
    Ok(Hull::Region(HullRegion { centers, lambda, point: None }))
}

/// Smallest subset of `points` (by size, then lexicographically) of at most
/// `max_size` points whose ball hull contains `y`.
pub fn caratheodory_subset(points: &[Point], y: Point, lambda: f64, max_size: usize) -> Result<Option<Vec<usize>>> {
    let n = points.len();
    for size in 1..=max_size.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let sub: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
            if spindle_hull_points(&sub, lambda)?.contains(y) {
                return Ok(Some(idx));
            }
            // Next combination in lexicographic order.
            let Some(k) = (0..size).rev().find(|&k| idx[k] < n - size + k) else {
                break;
            };
            idx[k] += 1;
            for t in k + 1..size {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    Ok(None)
}

/// Sample counts per region for [`spindle_hull_union`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleDensity {
    pub boundary: usize,
    pub interior: usize,
}

impl Default for SampleDensity {
    fn default() -> Self {
        SampleDensity { boundary: 64, interior: 16 }
    }
}

/// Mask of the spindle hull of a union of spindle convex regions, built as
/// the union of spindles `spi{y, z}` over sampled points `y` of the hull so
/// far and `z` of the next region.
///
/// Boundary sampling is densified to one point per grid cell of perimeter so
/// gaps between neighbouring spindles stay below the cell size.
pub fn spindle_hull_union(
    regions: &[ArcRegion],
    lambda: f64,
    density: SampleDensity,
    frame: GridFrame,
    seed: u64,
) -> Result<GridMask> {
    if regions.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (k, r) in regions.iter().enumerate() {
        if !spindle_convexity_test(r, lambda, 200, seed.wrapping_add(k as u64)) {
            return Err(Error::NotSpindleConvex);
        }
    }
    let samples = |r: &ArcRegion, k: u64| -> Vec<Point> {
        let n = density.boundary.max((r.perimeter() / frame.cell).ceil() as usize);
        let mut pts = r.boundary_sample(n, seed.wrapping_add(k)).unwrap_or_default();
        pts.extend(r.corners());
        pts.extend(r.interior_samples(density.interior, seed.wrapping_add(k)));
        pts
    };
    let mut mask = GridMask::from_fn(frame, |p| regions[0].contains_fast(p));
    let mut ys = samples(&regions[0], 0);
    for (k, r) in regions.iter().enumerate().skip(1) {
        let zs = samples(r, k as u64);
        let mut next = mask.or(&GridMask::from_fn(frame, |p| r.contains_fast(p)))?;
        for y in &ys {
            for z in &zs {
                make_spindle(*y, *z, lambda)?.paint(&mut next);
            }
        }
        mask = next;
        if k + 1 < regions.len() {
            ys = mask_outline(&mask);
            ys.extend(zs);
        }
    }
    Ok(mask)
}

/// Leftmost and rightmost inside cell center of every row, plus the
/// bottom and top cells of every column.
pub(crate) fn mask_outline(m: &GridMask) -> Vec<Point> {
    let f = m.frame;
    let mut out = Vec::new();
    for j in 0..f.height {
        let row = m.row(j);
        if let (Some(a), Some(b)) = (row.iter().position(|v| *v), row.iter().rposition(|v| *v)) {
            out.push(f.center(a, j));
            if b != a {
                out.push(f.center(b, j));
            }
        }
    }
    for i in 0..f.width {
        let col = (0..f.height).filter(|&j| m.get(i, j));
        let (mut lo, mut hi) = (None, None);
        for j in col {
            lo.get_or_insert(j);
            hi = Some(j);
        }
        if let (Some(a), Some(b)) = (lo, hi) {
            out.push(f.center(i, a));
            if b != a {
                out.push(f.center(i, b));
            }
        }
    }
    out
}

/// Sampled test that every spindle of two points of `r` stays in `r`.
///
/// Half of the pairs join boundary points (where failures show first), the
/// rest join random interior points.
pub fn spindle_convexity_test<D: Domain + ?Sized>(r: &D, lambda: f64, pairs: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = r.boundary_points(pairs.max(8), seed);
    pool.extend(r.corners());
    let interior = r.interior_samples(pairs.max(8), seed ^ 0x9e37_79b9);
    if pool.is_empty() && interior.is_empty() {
        return true;
    }
    for k in 0..pairs {
        let pick = |rng: &mut ChaCha8Rng, from_boundary: bool| {
            let src = if (from_boundary && !pool.is_empty()) || interior.is_empty() { &pool } else { &interior };
            src[rng.gen_range(0..src.len())]
        };
        let (p, q) = if k % 2 == 0 {
            (pick(&mut rng, true), pick(&mut rng, true))
        } else {
            (pick(&mut rng, false), pick(&mut rng, k % 4 == 1))
        };
        if !r.contains_spindle(p, q, lambda) {
            return false;
        }
    }
    true
}

/// Arc edges of a spindle region as a flat list, for drawing.
pub fn spindle_outline(s: &Spindle) -> Vec<Edge> {
    s.boundary_arcs().into_iter().map(Edge::Arc).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::tests::l_shape;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn make_spindle_cases() {
        let s = make_spindle(Point::ORIGIN, Point::ORIGIN, 1.0).unwrap();
        assert_eq!(s.shape, SpindleShape::Degenerate(Point::ORIGIN));
        assert!(s.contains(Point::ORIGIN) && !s.contains(Point::new(0.01, 0.0)));

        let s = make_spindle(Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 1.0).unwrap();
        assert_eq!(s.shape, SpindleShape::Disk(Disk::new(Point::ORIGIN, 1.0)));

        let s = make_spindle(Point::new(-0.5, 0.0), Point::new(0.5, 0.0), 1.0).unwrap();
        assert!(matches!(s.shape, SpindleShape::Lens(..)));
        // Half-height of this lens is 1 - sqrt(3)/2 ≈ 0.1340.
        assert!(s.contains(Point::new(0.0, 0.133)));
        assert!(!s.contains(Point::new(0.0, 0.135)));
        assert!(!s.contains(Point::new(0.0, 0.14)));
        assert!(!s.contains(Point::new(0.0, 0.2)));
        assert!(s.contains(s.x) && s.contains(s.y) && s.contains(s.x.midpoint(s.y)));

        let s = make_spindle(Point::ORIGIN, Point::new(3.0, 0.0), 1.0).unwrap();
        assert!(!s.is_bounded() && s.contains(Point::new(100.0, -7.0)));
        assert!(make_spindle(Point::ORIGIN, Point::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn lens_region_matches_membership() {
        let s = make_spindle(Point::new(-0.3, 0.2), Point::new(0.6, -0.1), 0.8).unwrap();
        let r = s.to_region().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if r.boundary_distance(p) > 1e-9 {
                assert_eq!(r.contains(p), s.contains(p));
            }
        }
    }

    #[test]
    fn paint_matches_membership() {
        let s = make_spindle(Point::new(-0.4, 0.1), Point::new(0.5, 0.3), 1.0).unwrap();
        let frame = GridFrame::new(BBox::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0)), 64).unwrap();
        let mut m = GridMask::empty(frame);
        s.paint(&mut m);
        assert_eq!(m, GridMask::from_fn(frame, |p| s.contains(p)));
    }

    #[test]
    fn probes_lie_in_the_spindle_and_hit_the_boundary() {
        let (x, y) = (Point::new(0.1, 0.0), Point::new(0.9, 0.4));
        let s = make_spindle(x, y, 1.0).unwrap();
        let pts = ProbePattern::default().points(x, y, 1.0).unwrap();
        assert!(pts.len() >= 250);
        assert!(pts.iter().all(|p| s.contains(*p)));
        let on_boundary = pts.iter().filter(|p| s.to_region().unwrap().boundary_distance(**p) < 1e-9).count();
        assert!(on_boundary >= 100);
        assert!(ProbePattern::default().points(x, Point::new(5.0, 0.0), 1.0).is_none());
    }

    #[test]
    fn monotonicity_examples() {
        let x = Point::new(0.0, 0.0);
        let y = Point::new(1.0, 0.0);
        assert!(spindle_monotonicity_check(x, y, 1.0, 2.0, 1000, 1).unwrap());
        assert!(spindle_monotonicity_check(x, y, 1.0 - 1e-6, 1.0, 1000, 2).unwrap());
        assert!(spindle_monotonicity_check(x, Point::new(9.0, 0.0), 1.0, 2.0, 100, 3).unwrap());
        assert!(spindle_monotonicity_check(x, y, 2.0, 1.0, 10, 0).is_err());
    }

    #[test]
    fn hull_examples() {
        let p = Point::new(0.3, 0.4);
        match spindle_hull_points(&[p], 1.0).unwrap() {
            Hull::Region(h) => {
                assert!(h.contains(p) && !h.contains(p + Point::new(0.01, 0.0)));
                assert_eq!(h.to_region().isolated(), &[p]);
            }
            Hull::WholePlane => panic!(),
        }
        match spindle_hull_points(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0)], 1.0).unwrap() {
            Hull::Region(h) => {
                assert_eq!(h.centers.len(), 1);
                assert!(dist(h.centers[0], Point::ORIGIN) < 1e-12);
            }
            Hull::WholePlane => panic!(),
        }
        assert_eq!(spindle_hull_points(&[Point::ORIGIN, Point::new(2.5, 0.0)], 1.0).unwrap(), Hull::WholePlane);
        assert_eq!(spindle_hull_points(&[], 1.0), Err(Error::EmptyInput));
    }

    /// Intersection of `B[c, λ]` over a dense sample of centers `c` whose
    /// disk contains every point.
    fn sampled_center_oracle(points: &[Point], lambda: f64, p: Point) -> bool {
        let k = disk_intersection(&points.iter().map(|q| Disk::new(*q, lambda)).collect::<Vec<_>>());
        let mut centers = k.boundary_sample(2000, 1).unwrap();
        centers.extend(k.corners());
        centers.iter().all(|c| dist(*c, p) <= lambda + 1e-9)
    }

    #[test]
    fn equilateral_hull_matches_center_oracle() {
        let h = (3f64).sqrt() / 2.0;
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)];
        let hull = spindle_hull_points(&pts, 1.0).unwrap();
        let frame = GridFrame::new(BBox::new(Point::new(-0.5, -0.5), Point::new(1.5, 1.4)), 256).unwrap();
        let a = hull.rasterize(frame);
        let b = GridMask::from_fn(frame, |p| sampled_center_oracle(&pts, 1.0, p));
        assert!(crate::grid::mask_hausdorff(&a, &b).unwrap() <= 1.5 * frame.cell);
        assert!(pts.iter().all(|p| hull.contains(*p)));
    }

    #[test]
    fn hull_union_cases() {
        let frame = GridFrame::new(BBox::new(Point::new(-1.2, -1.2), Point::new(1.2, 1.2)), 96).unwrap();
        let y = Point::new(-0.4, 0.1);
        let z = Point::new(0.5, -0.2);
        let m = spindle_hull_union(&[ArcRegion::point(y), ArcRegion::point(z)], 1.0, SampleDensity::default(), frame, 0).unwrap();
        let s = make_spindle(y, z, 1.0).unwrap();
        let direct = GridMask::from_fn(frame, |p| s.contains(p));
        assert!(crate::grid::mask_hausdorff(&m, &direct).unwrap() <= 1.5 * frame.cell);

        let disk = ArcRegion::disk(Disk::new(Point::new(-0.2, 0.0), 0.5));
        let m = spindle_hull_union(&[disk.clone(), disk.clone()], 1.0, SampleDensity::default(), frame, 0).unwrap();
        let direct = GridMask::from_fn(frame, |p| disk.contains(p));
        assert!(crate::grid::mask_hausdorff(&m, &direct).unwrap() <= 1.5 * frame.cell);

        let tip = ArcRegion::point(Point::new(0.3, 0.0));
        let m = spindle_hull_union(&[disk.clone(), tip.clone()], 1.0, SampleDensity::default(), frame, 0).unwrap();
        let mut pts = disk.boundary_sample(400, 0).unwrap();
        pts.push(Point::new(0.3, 0.0));
        let oracle = spindle_hull_points(&pts, 1.0).unwrap().rasterize(frame);
        assert!(crate::grid::mask_hausdorff(&m, &oracle).unwrap() <= 1.5 * frame.cell);

        let l = ArcRegion::polygon(l_shape());
        assert_eq!(spindle_hull_union(&[l], 1.0, SampleDensity::default(), frame, 0), Err(Error::NotSpindleConvex));
    }

    #[test]
    fn convexity_examples() {
        assert!(spindle_convexity_test(&ArcRegion::disk(Disk::unit(Point::ORIGIN)), 1.0, 300, 1));
        let lens = make_spindle(Point::new(-0.5, 0.0), Point::new(0.5, 0.2), 1.0).unwrap().to_region().unwrap();
        assert!(spindle_convexity_test(&lens, 1.0, 300, 2));
        assert!(!spindle_convexity_test(&ArcRegion::polygon(l_shape()), 1.0, 300, 3));
        assert!(!spindle_convexity_test(&l_shape(), 1.0, 300, 3));
        let union = ArcRegion::from_solid(Solid::Union(vec![
            Solid::Disk(Disk::unit(Point::ORIGIN)),
            Solid::Disk(Disk::unit(Point::new(1.0, 0.0))),
        ]));
        assert!(!spindle_convexity_test(&union, 1.0, 300, 4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn segment_lies_in_spindle(ax in -1.0..1.0f64, ay in -1.0..1.0f64, bx in -1.0..1.0f64, by in -1.0..1.0f64, lambda in 0.6..3.0f64) {
            let s = make_spindle(Point::new(ax, ay), Point::new(bx, by), lambda).unwrap();
            for k in 0..=20 {
                prop_assert!(s.contains(s.x.lerp(s.y, k as f64 / 20.0)));
            }
        }

        #[test]
        fn hull_is_idempotent(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Point> = (0..rng.gen_range(2..8)).map(|_| Point::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6))).collect();
            let Hull::Region(h) = spindle_hull_points(&pts, 1.0).unwrap() else { return Ok(()); };
            let region = h.to_region();
            let again = spindle_hull_points(&region.boundary_sample(300, seed).unwrap(), 1.0).unwrap();
            let frame = GridFrame::new(BBox::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0)), 96).unwrap();
            let d = crate::grid::mask_hausdorff(&h.rasterize(frame), &again.rasterize(frame)).unwrap();
            prop_assert!(d <= 1.5 * frame.cell);
            for p in &pts {
                prop_assert!(h.contains(*p));
            }
        }

        #[test]
        fn caratheodory_subsets_exist(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Point> = (0..rng.gen_range(3..=8)).map(|_| Point::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6))).collect();
            let Hull::Region(h) = spindle_hull_points(&pts, 1.0).unwrap() else { return Ok(()); };
            let region = h.to_region();
            for y in region.interior_samples(5, seed) {
                prop_assert!(caratheodory_subset(&pts, y, 1.0, 3).unwrap().is_some());
            }
            for y in region.boundary_sample(5, seed).unwrap() {
                prop_assert!(caratheodory_subset(&pts, y, 1.0, 2).unwrap().is_some());
            }
        }
    }
}
