//! Linear and spindle visibility, visibility polygons and geodesics.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{dist, segment_segment_params, Point, EPS_GEOM};
use crate::grid::{GridFrame, GridMask};
use crate::polygon::SimplePolygon;
use crate::spindle::ProbePattern;

fn require_inside<D: Domain + ?Sized>(s: &D, pts: &[Point]) -> Result<()> {
    match pts.iter().find(|p| !s.contains(**p)) {
        Some(p) => Err(Error::OutsideDomain(*p)),
        None => Ok(()),
    }
}

/// `q ∈ st(p, S)`: the segment `[p, q]` lies in `S`. Exact for polygons,
/// otherwise decided on `samples` equally spaced points.
pub fn sees_linear<D: Domain + ?Sized>(s: &D, p: Point, q: Point, samples: usize) -> Result<bool> {
    require_inside(s, &[p, q])?;
    Ok(s.contains_segment_sampled(p, q, samples))
}

/// `q ∈ st_s(p, S)`: the spindle `spi_λ{p, q}` lies in `S`, decided on about
/// `samples` probes (exact for polygons).
pub fn sees_spindle<D: Domain + ?Sized>(s: &D, p: Point, q: Point, lambda: f64, samples: usize) -> Result<bool> {
    require_inside(s, &[p, q])?;
    Ok(s.contains_spindle_with(p, q, lambda, &ProbePattern::with_nodes(samples / 5)))
}

/// Visibility polygon of `p` in `s`, by casting rays at every vertex
/// direction and just to either side of it.
pub fn visibility_region_linear(s: &SimplePolygon, p: Point) -> Result<SimplePolygon> {
    if !s.contains(p, EPS_GEOM) {
        return Err(Error::OutsideDomain(p));
    }
    let scale = 1.0 + s.diameter();
    let far = 4.0 * scale + dist(p, s.bbox().center());
    let on_boundary = s.boundary_distance(p) <= EPS_GEOM * scale;
    let mut hits: Vec<(f64, Point)> = Vec::new();
    for &v in s.vertices() {
        if dist(v, p) <= EPS_GEOM * scale {
            continue;
        }
        let theta = (v - p).angle();
        for dt in [-1e-9, 0.0, 1e-9] {
            let dir = Point::from_angle(theta + dt);
            if !s.contains(p + dir * (1e-7 * scale), EPS_GEOM) {
                continue;
            }
            let end = p + dir * far;
            let mut best = f64::INFINITY;
            for (a, b) in s.edges() {
                for (t, _) in segment_segment_params(p, end, a, b) {
                    let d = t * far;
                    if d > 1e-9 * scale && d < best {
                        best = d;
                    }
                }
            }
            if best.is_finite() {
                let hit = if dt == 0.0 && (best - dist(p, v)).abs() <= 1e-9 * scale { v } else { p + dir * best };
                hits.push(((theta + dt).rem_euclid(TAU), hit));
            }
        }
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(dist(p, a.1).total_cmp(&dist(p, b.1))));
    let mut pts: Vec<Point> = hits.iter().map(|h| h.1).collect();
    if on_boundary && !pts.is_empty() {
        // p sits in the largest angular gap between consecutive rays.
        let n = hits.len();
        let gap = |k: usize| (hits[(k + 1) % n].0 - hits[k].0).rem_euclid(TAU);
        let k = (0..n).max_by(|&a, &b| gap(a).total_cmp(&gap(b))).unwrap();
        pts.insert(k + 1, p);
    }
    SimplePolygon::new(simplify(pts, 1e-10 * scale))
}

fn simplify(mut pts: Vec<Point>, tol: f64) -> Vec<Point> {
    pts.dedup_by(|a, b| dist(*a, *b) <= tol);
    while pts.len() > 1 && dist(pts[0], *pts.last().unwrap()) <= tol {
        pts.pop();
    }
    let mut changed = true;
    while changed && pts.len() > 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            let len = dist(a, c).max(tol);
            if ((b - a).cross(c - a)).abs() / len <= tol && (b - a).dot(c - b) >= 0.0 {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    pts
}

/// Cells whose center `c` satisfies `spi_λ{p, c} ⊆ S`.
pub fn spindle_visibility_mask<D: Domain + ?Sized>(s: &D, p: Point, lambda: f64, frame: GridFrame) -> Result<GridMask> {
    require_inside(s, &[p])?;
    let pattern = ProbePattern::default();
    Ok(GridMask::from_fn(frame, |c| s.contains(c) && s.contains_spindle_with(p, c, lambda, &pattern)))
}

/// Shortest path from `p` to `q` inside `s`, as a polyline whose interior
/// vertices are reflex vertices of `s`.
pub fn geodesic_path(s: &SimplePolygon, p: Point, q: Point) -> Result<Vec<Point>> {
    require_inside(s, &[p, q])?;
    if s.contains_segment(p, q) {
        return Ok(if dist(p, q) == 0.0 { vec![p] } else { vec![p, q] });
    }
    let mut nodes = vec![p, q];
    nodes.extend(s.reflex_vertices().into_iter().map(|i| s.vertices()[i]));
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if s.contains_segment(nodes[i], nodes[j]) {
                let w = dist(nodes[i], nodes[j]);
                adj[i].push((j, w));
                adj[j].push((i, w));
            }
        }
    }
    #[derive(PartialEq)]
    struct State(f64, usize);
    impl Eq for State {}
    impl Ord for State {
        fn cmp(&self, o: &Self) -> Ordering {
            o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
        }
    }
    impl PartialOrd for State {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    let mut best = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    best[0] = 0.0;
    heap.push(State(0.0, 0));
    while let Some(State(d, u)) = heap.pop() {
        if d > best[u] {
            continue;
        }
        if u == 1 {
            break;
        }
        for &(v, w) in &adj[u] {
            if d + w < best[v] {
                best[v] = d + w;
                prev[v] = u;
                heap.push(State(d + w, v));
            }
        }
    }
    if !best[1].is_finite() {
        return Err(Error::PreconditionFailed("no path between the points".into()));
    }
    let mut path = vec![q];
    let mut k = 1;
    while prev[k] != usize::MAX {
        k = prev[k];
        path.push(nodes[k]);
    }
    path.reverse();
    Ok(path)
}

pub fn path_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| dist(w[0], w[1])).sum()
}

/// Sampled check that `f` is geodesically convex in `s`: shortest paths
/// between `pairs` random points of `f` stay in `f`.
pub fn geodesic_convexity_check(s: &SimplePolygon, f: impl Fn(Point) -> bool, pairs: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = s.bbox();
    let draw = |rng: &mut ChaCha8Rng| {
        for _ in 0..10_000 {
            let p = Point::new(rng.gen_range(b.min.x..=b.max.x), rng.gen_range(b.min.y..=b.max.y));
            if s.contains(p, EPS_GEOM) && f(p) {
                return Some(p);
            }
        }
        None
    };
    for _ in 0..pairs {
        let (Some(p), Some(q)) = (draw(&mut rng), draw(&mut rng)) else {
            return true;
        };
        let Ok(path) = geodesic_path(s, p, q) else {
            return false;
        };
        for w in path.windows(2) {
            if !(0..=32).all(|k| f(w[0].lerp(w[1], k as f64 / 32.0))) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Disk;
    use crate::polygon::random_simple_polygon;
    use crate::polygon::tests::l_shape;
    use crate::region::ArcRegion;
    use crate::spindle::make_spindle;

    fn square() -> SimplePolygon {
        SimplePolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn linear_examples() {
        let sq = square();
        assert!(sees_linear(&sq, Point::new(0.1, 0.1), Point::new(0.9, 0.8), 0).unwrap());
        let l = l_shape();
        assert!(!sees_linear(&l, Point::new(1.8, 0.5), Point::new(0.5, 1.8), 0).unwrap());
        assert!(sees_linear(&l, Point::new(0.5, 0.5), Point::new(0.5, 0.5), 0).unwrap());
        assert_eq!(sees_linear(&l, Point::new(1.5, 1.5), Point::new(0.5, 0.5), 0), Err(Error::OutsideDomain(Point::new(1.5, 1.5))));
    }

    #[test]
    fn spindle_examples() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        assert!(sees_spindle(&disk, Point::new(-0.7, 0.1), Point::new(0.5, -0.6), 1.0, 256).unwrap());
        let (a, b) = (Point::new(-0.4, 0.0), Point::new(0.5, 0.1));
        let lens = make_spindle(a, b, 1.0).unwrap().to_region().unwrap();
        assert!(sees_spindle(&lens, a, b, 1.0, 256).unwrap());
        let strip = SimplePolygon::new(vec![
            Point::new(-0.6, -0.025),
            Point::new(0.6, -0.025),
            Point::new(0.6, 0.025),
            Point::new(-0.6, 0.025),
        ])
        .unwrap();
        let (p, q) = (Point::new(-0.5, 0.0), Point::new(0.5, 0.0));
        assert!(!sees_spindle(&strip, p, q, 1.0, 256).unwrap());
        assert!(!sees_spindle(&ArcRegion::polygon(strip), p, q, 1.0, 256).unwrap());
    }

    #[test]
    fn visibility_polygon_of_convex_is_itself() {
        let sq = square();
        let v = visibility_region_linear(&sq, Point::new(0.3, 0.6)).unwrap();
        assert!((v.area() - 1.0).abs() < 1e-9);
        let corner = visibility_region_linear(&sq, Point::new(0.0, 0.0)).unwrap();
        assert!((corner.area() - 1.0).abs() < 1e-9);
    }

    fn agrees_with_probes(s: &SimplePolygon, p: Point, seed: u64) {
        let v = visibility_region_linear(s, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = s.bbox();
        let mut checked = 0;
        while checked < 1000 {
            let q = Point::new(rng.gen_range(b.min.x..b.max.x), rng.gen_range(b.min.y..b.max.y));
            if !s.contains(q, 0.0) || v.boundary_distance(q) < 1e-6 || s.boundary_distance(q) < 1e-6 {
                continue;
            }
            checked += 1;
            assert_eq!(v.contains(q, 0.0), s.contains_segment(p, q), "{p} -> {q}");
        }
        assert!(v.contains(p, 1e-9));
    }

    #[test]
    fn visibility_polygon_l_shape_and_reflex_vertex() {
        let l = l_shape();
        agrees_with_probes(&l, Point::new(1.7, 0.5), 1);
        agrees_with_probes(&l, Point::new(1.0, 1.0), 2);
        agrees_with_probes(&l, Point::new(0.0, 0.0), 3);
    }

    #[test]
    fn visibility_polygons_of_random_polygons() {
        for seed in 0..30 {
            let s = random_simple_polygon(12, seed);
            let pts = Domain::interior_samples(&s, 3, seed);
            for p in pts {
                agrees_with_probes(&s, p, seed);
            }
        }
    }

    #[test]
    fn geodesic_examples() {
        let sq = square();
        let (p, q) = (Point::new(0.1, 0.1), Point::new(0.9, 0.9));
        assert_eq!(geodesic_path(&sq, p, q).unwrap(), vec![p, q]);
        let l = l_shape();
        let (p, q) = (Point::new(1.8, 0.5), Point::new(0.5, 1.8));
        let path = geodesic_path(&l, p, q).unwrap();
        assert_eq!(path, vec![p, Point::new(1.0, 1.0), q]);
        assert!(path_length(&path) > dist(p, q));
        assert_eq!(geodesic_path(&l, p, p).unwrap(), vec![p]);
    }

    #[test]
    fn geodesic_convexity_examples() {
        let l = l_shape();
        assert!(geodesic_convexity_check(&l, |p| l.contains(p, EPS_GEOM), 50, 1));
        let v = visibility_region_linear(&l, Point::new(1.7, 0.5)).unwrap();
        assert!(geodesic_convexity_check(&l, |p| v.contains(p, 1e-9), 50, 2));
        let two = |p: Point| dist(p, Point::new(1.7, 0.5)) <= 0.25 || dist(p, Point::new(0.5, 1.7)) <= 0.25;
        assert!(!geodesic_convexity_check(&l, two, 50, 3));
    }

    #[test]
    fn spindle_mask_of_disk_is_the_disk() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        let frame = GridFrame::new(disk.bbox().expand(0.1), 48).unwrap();
        let m = spindle_visibility_mask(&disk, Point::new(0.2, 0.3), 1.0, frame).unwrap();
        assert_eq!(m, GridMask::from_fn(frame, |c| disk.contains(c)));
    }
}
