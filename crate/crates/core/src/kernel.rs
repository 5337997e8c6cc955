//! Linear and spindle kernels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{convex_hull, dist, Disk, Point, Tolerance, EPS_GEOM};
use crate::grid::{mask_hausdorff, GridFrame, GridMask};
use crate::polygon::{signed_area, SimplePolygon};
use crate::region::{disk_intersection, is_reduced_along_boundary, ArcRegion, FlowerExpr};
use crate::spindle::{spindle_hull_points, ProbePattern};

/// Kernel of a polygon: the intersection of the inner half-planes of its
/// edges. `None` when empty or of zero area.
pub fn kernel_linear(s: &SimplePolygon) -> Option<SimplePolygon> {
    let b = s.bbox().expand(1.0);
    let mut poly = vec![b.min, Point::new(b.max.x, b.min.y), b.max, Point::new(b.min.x, b.max.y)];
    let scale = 1.0 + s.diameter();
    for (a, e) in s.edges() {
        let d = e - a;
        let side = |p: Point| d.cross(p - a) / d.norm();
        let mut next = Vec::with_capacity(poly.len() + 1);
        for k in 0..poly.len() {
            let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                next.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                next.push(p.lerp(q, sp / (sp - sq)));
            }
        }
        poly = next;
        if poly.len() < 3 {
            return None;
        }
    }
    if signed_area(&poly) <= EPS_GEOM * scale * scale {
        return None;
    }
    SimplePolygon::new(poly).ok()
}

/// The points every kernel candidate is tested against: corners first
/// (spike tips live there), then boundary samples, then interior samples.
pub fn oracle_targets<D: Domain + ?Sized>(s: &D, boundary_samples: usize, seed: u64) -> Vec<Point> {
    let mut q = s.corners();
    q.extend(s.boundary_points(boundary_samples, seed));
    q.extend(s.interior_samples((boundary_samples / 8).max(16), seed ^ 0x5151));
    q
}

/// Ground-truth spindle kernel on a grid: a cell is inside iff its center
/// lies in `S` and spindle-sees every target from [`oracle_targets`].
pub fn spindle_kernel_oracle<D: Domain + ?Sized>(
    s: &D,
    lambda: f64,
    frame: GridFrame,
    boundary_samples: usize,
    seed: u64,
) -> GridMask {
    let targets = oracle_targets(s, boundary_samples, seed);
    kernel_against(s, lambda, frame, &targets)
}

/// Cells of `S` that spindle-see all of `targets`.
pub fn kernel_against<D: Domain + ?Sized>(s: &D, lambda: f64, frame: GridFrame, targets: &[Point]) -> GridMask {
    let pattern = ProbePattern::default();
    let reach = 2.0 * lambda + EPS_GEOM;
    GridMask::from_rows(frame, |j, row| {
        // Testing the target that rejected the previous cell first only
        // changes how fast a cell is rejected, never the outcome.
        let mut killer = 0usize;
        for (i, cell) in row.iter_mut().enumerate() {
            let c = frame.center(i, j);
            if !s.contains(c) || targets.iter().any(|q| dist(c, *q) > reach) {
                continue;
            }
            let sees = |k: usize| s.contains_spindle_with(c, targets[k], lambda, &pattern);
            if !targets.is_empty() && !sees(killer) {
                continue;
            }
            match (0..targets.len()).find(|&k| k != killer && !sees(k)) {
                Some(k) => killer = k,
                None => *cell = true,
            }
        }
    })
}

/// Leftmost and rightmost cells of each row that `x` spindle-sees.
///
/// The ball hull of a set only depends on its convex hull vertices, and
/// those are among the row extremes, so this is all the formula needs.
fn visible_row_extremes<D: Domain + ?Sized>(s: &D, x: Point, lambda: f64, frame: GridFrame) -> Vec<Point> {
    let pattern = ProbePattern::default();
    let sees = |c: Point| s.contains(c) && dist(c, x) <= 2.0 * lambda && s.contains_spindle_with(x, c, lambda, &pattern);
    let rows: Vec<Vec<Point>> = (0..frame.height)
        .into_par_iter()
        .map(|j| {
            let mut out = Vec::new();
            let left = (0..frame.width).find(|&i| sees(frame.center(i, j)));
            if let Some(l) = left {
                out.push(frame.center(l, j));
                if let Some(r) = (l + 1..frame.width).rev().find(|&i| sees(frame.center(i, j))) {
                    out.push(frame.center(r, j));
                }
            }
            out
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Spindle hull of `st_s(x, S)` rasterized on `frame`.
pub fn visibility_hull_mask<D: Domain + ?Sized>(s: &D, x: Point, lambda: f64, frame: GridFrame) -> Result<GridMask> {
    let mut pts = visible_row_extremes(s, x, lambda, frame);
    pts.push(x);
    let hull = spindle_hull_points(&convex_hull(&pts), lambda)?;
    Ok(hull.rasterize(frame))
}

/// Kernel from the spindle Krasnosselsky formula
/// `ker_s S = ⋂_{x ∈ bd S} sconv(st_s(x, S))` over corners and
/// `boundary_samples` boundary points.
pub fn spindle_kernel_krasnosselsky<D: Domain + ?Sized>(
    s: &D,
    lambda: f64,
    frame: GridFrame,
    boundary_samples: usize,
    seed: u64,
) -> Result<GridMask> {
    let mut xs = s.corners();
    xs.extend(s.boundary_points(boundary_samples, seed));
    let mut acc = GridMask::full(frame);
    for x in xs {
        acc = acc.and(&visibility_hull_mask(s, x, lambda, frame)?)?;
    }
    Ok(acc)
}

/// Exact kernel of a flower reduced along its boundary: `⋂ B_i`.
pub fn flower_kernel_exact(expr: &FlowerExpr, disks: &[Disk]) -> Result<ArcRegion> {
    crate::region::eval_flower(expr, disks)?;
    if !is_reduced_along_boundary(expr, disks, &Tolerance::default()) {
        return Err(Error::NotReduced);
    }
    Ok(disk_intersection(disks))
}

/// Whether `x` looks like a spindle peak: no sampled `x'` within `radius`
/// sees a cell of `S` that `x` does not.
pub fn is_spindle_peak<D: Domain + ?Sized>(
    s: &D,
    x: Point,
    lambda: f64,
    radius: f64,
    probes: usize,
    seed: u64,
    frame: GridFrame,
) -> Result<bool> {
    if !s.contains(x) {
        return Err(Error::OutsideDomain(x));
    }
    let pattern = ProbePattern::default();
    let hidden: Vec<Point> = (0..frame.height)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..frame.width)
                .map(move |i| frame.center(i, j))
                .filter(|c| s.contains(*c) && !s.contains_spindle_with(x, *c, lambda, &pattern))
                .collect::<Vec<_>>()
        })
        .collect();
    if hidden.is_empty() {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nearby = Vec::with_capacity(probes);
    let mut attempts = 0;
    while nearby.len() < probes && attempts < 100 * probes.max(1) {
        attempts += 1;
        let r = radius * rng.gen::<f64>().sqrt();
        let p = x + Point::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * r;
        if s.contains(p) {
            nearby.push(p);
        }
    }
    let escapes = nearby
        .par_iter()
        .any(|xp| hidden.iter().any(|c| s.contains_spindle_with(*xp, *c, lambda, &pattern)));
    Ok(!escapes)
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalSubsetReport {
    #[serde(skip)]
    pub subsets: Vec<GridMask>,
    #[serde(skip)]
    pub intersection: GridMask,
    #[serde(skip)]
    pub kernel: GridMask,
    pub subset_sizes: Vec<usize>,
    pub kernel_cells: usize,
    pub intersection_cells: usize,
    pub contains_kernel: bool,
    pub hausdorff: f64,
}

/// Grows `seeds` greedy maximal spindle convex subsets of the cells of `S`
/// and compares their intersection with the oracle kernel.
///
/// Growth from a random start cell visits cells nearest first (ties in
/// row-major order) and keeps a cell when its spindle with every current
/// member stays in `S`.
pub fn verify_kernel_maximal_subsets<D: Domain + ?Sized>(
    s: &D,
    lambda: f64,
    seeds: usize,
    frame: GridFrame,
    seed: u64,
) -> Result<MaximalSubsetReport> {
    let inside = GridMask::from_fn(frame, |c| s.contains(c));
    let cells: Vec<(usize, usize)> = inside.cells().collect();
    if cells.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let kernel = spindle_kernel_oracle(s, lambda, frame, 256, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<usize> = (0..seeds.max(1)).map(|_| rng.gen_range(0..cells.len())).collect();
    let pattern = ProbePattern::default();
    let subsets: Vec<GridMask> = starts
        .par_iter()
        .map(|&start| {
            let (si, sj) = cells[start];
            let mut order: Vec<usize> = (0..cells.len()).collect();
            order.sort_by_key(|&k| {
                let (i, j) = cells[k];
                let (di, dj) = (i as i64 - si as i64, j as i64 - sj as i64);
                (di * di + dj * dj, j, i)
            });
            let mut members: Vec<Point> = Vec::new();
            let mut mask = GridMask::empty(frame);
            for k in order {
                let (i, j) = cells[k];
                let c = frame.center(i, j);
                if members.iter().all(|m| s.contains_spindle_with(*m, c, lambda, &pattern)) {
                    members.push(c);
                    mask.set(i, j, true);
                }
            }
            mask
        })
        .collect();
    let mut intersection = inside.clone();
    for m in &subsets {
        intersection = intersection.and(m)?;
    }
    let contains_kernel = kernel.is_subset_of(&intersection)?;
    let hausdorff = mask_hausdorff(&intersection, &kernel)?;
    Ok(MaximalSubsetReport {
        subset_sizes: subsets.iter().map(|m| m.count()).collect(),
        kernel_cells: kernel.count(),
        intersection_cells: intersection.count(),
        subsets,
        intersection,
        kernel,
        contains_kernel,
        hausdorff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BBox;
    use crate::polygon::tests::l_shape;
    use crate::spindle::make_spindle;

    fn frame_for(r: &ArcRegion, res: usize) -> GridFrame {
        GridFrame::new(r.bbox().expand(0.05), res).unwrap()
    }

    #[test]
    fn linear_kernel_examples() {
        let sq = SimplePolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert!((kernel_linear(&sq).unwrap().area() - 1.0).abs() < 1e-12);

        let k = kernel_linear(&l_shape()).unwrap();
        assert!((k.area() - 1.0).abs() < 1e-9);
        for v in l_shape().vertices() {
            assert!(l_shape().contains_segment(k.centroid(), *v));
        }

        // Two rooms joined by a thin corridor with offset doors: no point sees everything.
        let zig = SimplePolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(3.0, 2.0),
            Point::new(3.0, 3.0),
            Point::new(0.0, 3.0),
            Point::new(0.0, 2.5),
            Point::new(-2.0, 2.5),
            Point::new(-2.0, 0.5),
            Point::new(0.0, 0.5),
        ])
        .unwrap();
        assert!(kernel_linear(&zig).is_none());
    }

    #[test]
    fn oracle_of_spindle_convex_sets_is_the_set() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        let f = frame_for(&disk, 48);
        let k = spindle_kernel_oracle(&disk, 1.0, f, 64, 0);
        assert_eq!(k, GridMask::from_fn(f, |c| disk.contains(c)));

        let lens = make_spindle(Point::new(-0.6, 0.0), Point::new(0.6, 0.1), 1.0).unwrap().to_region().unwrap();
        let f = frame_for(&lens, 48);
        let k = spindle_kernel_oracle(&lens, 1.0, f, 64, 0);
        assert_eq!(k, GridMask::from_fn(f, |c| lens.contains(c)));
    }

    #[test]
    fn two_disk_flower_kernel_is_the_lens() {
        let disks = [Disk::unit(Point::ORIGIN), Disk::unit(Point::new(1.0, 0.0))];
        let flower = crate::region::eval_flower(&FlowerExpr::union_all(2), &disks).unwrap();
        let f = frame_for(&flower, 96);
        let oracle = spindle_kernel_oracle(&flower, 1.0, f, 128, 1);
        let lens = flower_kernel_exact(&FlowerExpr::union_all(2), &disks).unwrap();
        let exact = GridMask::from_fn(f, |c| lens.contains_fast(c));
        assert!(mask_hausdorff(&oracle, &exact).unwrap() <= 1.5 * f.cell);
        let formula = spindle_kernel_krasnosselsky(&flower, 1.0, f, 48, 1).unwrap();
        assert!(mask_hausdorff(&formula, &oracle).unwrap() <= 1.5 * f.cell);
    }

    #[test]
    fn flower_kernel_exact_cases() {
        let d = [Disk::unit(Point::new(0.3, 0.1))];
        let k = flower_kernel_exact(&FlowerExpr::Leaf(0), &d).unwrap();
        assert!((k.area() - std::f64::consts::PI).abs() < 1e-12);
        let tangent = [Disk::unit(Point::ORIGIN), Disk::unit(Point::new(2.0, 0.0))];
        assert_eq!(flower_kernel_exact(&FlowerExpr::intersect_all(2), &tangent), Err(Error::NotReduced));
    }

    #[test]
    fn peak_of_disk_and_off_kernel_point() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        let f = frame_for(&disk, 32);
        assert!(is_spindle_peak(&disk, Point::new(0.1, 0.2), 1.0, 0.1, 8, 0, f).unwrap());

        let disks = [Disk::unit(Point::ORIGIN), Disk::unit(Point::new(1.0, 0.0))];
        let flower = crate::region::eval_flower(&FlowerExpr::union_all(2), &disks).unwrap();
        let f = frame_for(&flower, 48);
        assert!(!is_spindle_peak(&flower, Point::new(-0.6, 0.0), 1.0, 0.15, 16, 0, f).unwrap());
        assert_eq!(
            is_spindle_peak(&flower, Point::new(5.0, 0.0), 1.0, 0.1, 4, 0, f),
            Err(Error::OutsideDomain(Point::new(5.0, 0.0)))
        );
    }

    #[test]
    fn maximal_subsets() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        let f = GridFrame::new(BBox::new(Point::new(-1.1, -1.1), Point::new(1.1, 1.1)), 24).unwrap();
        let r = verify_kernel_maximal_subsets(&disk, 1.0, 3, f, 0).unwrap();
        assert!(r.contains_kernel);
        assert!(r.subsets.iter().all(|m| *m == r.kernel));

        let disks = [Disk::unit(Point::ORIGIN), Disk::unit(Point::new(1.0, 0.0))];
        let flower = crate::region::eval_flower(&FlowerExpr::union_all(2), &disks).unwrap();
        let f = frame_for(&flower, 32);
        let r = verify_kernel_maximal_subsets(&flower, 1.0, 8, f, 0).unwrap();
        assert!(r.contains_kernel);
        let one = verify_kernel_maximal_subsets(&flower, 1.0, 1, f, 5).unwrap();
        assert!(one.contains_kernel && one.intersection == one.subsets[0]);
    }
}
