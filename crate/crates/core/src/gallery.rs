//! Single-guard solvers for finite treasure sets under linear and spindle
//! visibility, and the three-treasure condition.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{dist, segment_segment_params, Point, EPS_GEOM};
use crate::grid::{GridFrame, GridMask};
use crate::polygon::SimplePolygon;
use crate::visibility::{sees_linear, sees_spindle, spindle_visibility_mask, visibility_region_linear};

/// Probes for re-verifying a spindle guard.
pub const VERIFY_SAMPLES: usize = 260;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuardReport {
    pub guard: Option<Point>,
    /// A treasure triple without a common watcher, when the guard is missing.
    pub failing_triple: Option<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleReport {
    pub holds: bool,
    pub failing_triple: Option<[usize; 3]>,
}

fn require_inside<D: Domain + ?Sized>(s: &D, a: &[Point]) -> Result<()> {
    match a.iter().find(|p| !s.contains(**p)) {
        Some(p) => Err(Error::OutsideDomain(*p)),
        None => Ok(()),
    }
}

/// Index triples of `0..n` in lexicographic order; a single short tuple when `0 < n < 3`.
fn triples(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    if n < 3 {
        return vec![(0..n).collect()];
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn as_triple(t: &[usize]) -> [usize; 3] {
    [t[0], t.get(1).copied().unwrap_or(t[0]), t.get(2).copied().unwrap_or(t[0])]
}

/// A point of `⋂ regions`, searched among region vertices and pairwise edge
/// crossings (every vertex of the intersection is one of these), and
/// re-checked with `accept`.
fn common_point(regions: &[SimplePolygon], extra: &[Point], accept: impl Fn(Point) -> bool) -> Option<Point> {
    let scale = regions.iter().map(|r| r.diameter()).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let in_all = |p: Point| regions.iter().all(|r| r.contains(p, tol));
    let mut cands: Vec<Point> = extra.to_vec();
    for r in regions {
        cands.extend_from_slice(r.vertices());
    }
    for (k, r) in regions.iter().enumerate() {
        for o in &regions[k + 1..] {
            for (a, b) in r.edges() {
                for (c, d) in o.edges() {
                    cands.extend(segment_segment_params(a, b, c, d).into_iter().map(|(t, _)| a.lerp(b, t)));
                }
            }
        }
    }
    let valid: Vec<Point> = cands.into_iter().filter(|p| in_all(*p)).collect();
    if valid.is_empty() {
        return None;
    }
    let n = valid.len() as f64;
    let centroid = valid.iter().fold(Point::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
    // Prefer points away from region boundaries: the centroid, then
    // midpoints towards it, then the candidates themselves.
    let mut order = vec![centroid];
    let mut by_dist = valid.clone();
    by_dist.sort_by(|a, b| dist(*a, centroid).total_cmp(&dist(*b, centroid)).then(a.x.total_cmp(&b.x)).then(a.y.total_cmp(&b.y)));
    order.extend(by_dist.iter().map(|p| p.midpoint(centroid)));
    order.extend(by_dist);
    order.into_iter().find(|p| in_all(*p) && accept(*p))
}

/// A point of `s` seeing every treasure along segments, found by
/// intersecting visibility polygons.
pub fn guard_linear(s: &SimplePolygon, a: &[Point]) -> Result<GuardReport> {
    require_inside(s, a)?;
    if a.is_empty() {
        return Ok(GuardReport { guard: Some(s.interior_samples(1, 0).first().copied().unwrap_or(s.vertices()[0])), failing_triple: None });
    }
    let regions = a.iter().map(|p| visibility_region_linear(s, *p)).collect::<Result<Vec<_>>>()?;
    let guard = linear_common_watcher(s, a, &regions);
    let failing_triple = if guard.is_none() { triple_condition_linear(s, a)?.failing_triple } else { None };
    Ok(GuardReport { guard, failing_triple })
}

fn linear_common_watcher(s: &SimplePolygon, a: &[Point], regions: &[SimplePolygon]) -> Option<Point> {
    common_point(regions, a, |g| a.iter().all(|t| sees_linear(s, g, *t, 0).unwrap_or(false)))
}

/// Whether every three treasures have a common linear watcher.
pub fn triple_condition_linear(s: &SimplePolygon, a: &[Point]) -> Result<TripleReport> {
    require_inside(s, a)?;
    let regions = a.iter().map(|p| visibility_region_linear(s, *p)).collect::<Result<Vec<_>>>()?;
    let ts = triples(a.len());
    let found: Vec<bool> = ts
        .par_iter()
        .map(|t| {
            let sub_a: Vec<Point> = t.iter().map(|&k| a[k]).collect();
            let sub_r: Vec<SimplePolygon> = t.iter().map(|&k| regions[k].clone()).collect();
            linear_common_watcher(s, &sub_a, &sub_r).is_some()
        })
        .collect();
    let failing_triple = ts.iter().zip(&found).find(|(_, ok)| !**ok).map(|(t, _)| as_triple(t));
    Ok(TripleReport { holds: failing_triple.is_none(), failing_triple })
}

/// Cell of the largest component of `m` nearest the component's centroid.
pub fn component_center(m: &GridMask) -> Option<Point> {
    let comps = m.components();
    let comp = comps.first()?;
    let pts: Vec<Point> = comp.iter().map(|&(i, j)| m.frame.center(i, j)).collect();
    let c = pts.iter().fold(Point::ORIGIN, |acc, p| acc + *p) * (1.0 / pts.len() as f64);
    pts.into_iter().min_by(|p, q| dist(*p, c).total_cmp(&dist(*q, c)))
}

fn check_diameter<D: Domain + ?Sized>(s: &D, lambda: f64) -> Result<()> {
    let d = s.diameter();
    if d > 2.0 * lambda + EPS_GEOM {
        return Err(Error::DiameterExceeded(d));
    }
    Ok(())
}

fn spindle_masks<D: Domain + ?Sized>(s: &D, a: &[Point], lambda: f64, frame: GridFrame) -> Result<Vec<GridMask>> {
    a.par_iter().map(|p| spindle_visibility_mask(s, *p, lambda, frame)).collect()
}

fn sees_all<D: Domain + ?Sized>(s: &D, g: Point, a: &[Point], lambda: f64) -> bool {
    a.iter().all(|t| sees_spindle(s, g, *t, lambda, VERIFY_SAMPLES).unwrap_or(false))
}

/// Common spindle watcher from masks: the center of the largest component of
/// the intersection, re-verified, with `extra` candidates as a fallback.
fn spindle_watcher<D: Domain + ?Sized>(s: &D, a: &[Point], lambda: f64, masks: &[&GridMask], extra: &[Point]) -> Result<Option<Point>> {
    if a.len() == 1 {
        return Ok(Some(a[0]));
    }
    let mut m = masks[0].clone();
    for o in &masks[1..] {
        m = m.and(o)?;
    }
    if let Some(g) = component_center(&m) {
        if sees_all(s, g, a, lambda) {
            return Ok(Some(g));
        }
    }
    let mut cands: Vec<Point> = m.centers().collect();
    cands.extend_from_slice(extra);
    cands.extend_from_slice(a);
    Ok(cands.into_iter().find(|g| sees_all(s, *g, a, lambda)))
}

/// A point of `s` seeing every treasure along λ-spindles, or `None`.
///
/// The grid is refined up to twice when the triple condition holds and the
/// intersection of visibility masks comes out empty.
pub fn guard_spindle<D: Domain + ?Sized>(s: &D, a: &[Point], lambda: f64, frame: GridFrame) -> Result<GuardReport> {
    check_diameter(s, lambda)?;
    require_inside(s, a)?;
    if a.is_empty() {
        return Ok(GuardReport { guard: s.interior_samples(1, 0).first().copied(), failing_triple: None });
    }
    let mut frame = frame;
    for round in 0..3 {
        let masks = spindle_masks(s, a, lambda, frame)?;
        let refs: Vec<&GridMask> = masks.iter().collect();
        if let Some(g) = spindle_watcher(s, a, lambda, &refs, &[])? {
            return Ok(GuardReport { guard: Some(g), failing_triple: None });
        }
        let (tr, witnesses) = spindle_triples(s, a, lambda, &masks)?;
        if let Some(g) = witnesses.into_iter().find(|g| sees_all(s, *g, a, lambda)) {
            return Ok(GuardReport { guard: Some(g), failing_triple: None });
        }
        if !tr.holds || round == 2 || frame.width.max(frame.height) * 2 > 1024 {
            return Ok(GuardReport { guard: None, failing_triple: tr.failing_triple });
        }
        frame = GridFrame::new(frame.bbox(), 2 * frame.width.max(frame.height))?;
    }
    unreachable!()
}

fn spindle_triples<D: Domain + ?Sized>(s: &D, a: &[Point], lambda: f64, masks: &[GridMask]) -> Result<(TripleReport, Vec<Point>)> {
    let ts = triples(a.len());
    let found: Vec<Option<Point>> = ts
        .par_iter()
        .map(|t| {
            let sub_a: Vec<Point> = t.iter().map(|&k| a[k]).collect();
            let sub_m: Vec<&GridMask> = t.iter().map(|&k| &masks[k]).collect();
            spindle_watcher(s, &sub_a, lambda, &sub_m, &[])
        })
        .collect::<Result<_>>()?;
    let failing_triple = ts.iter().zip(&found).find(|(_, w)| w.is_none()).map(|(t, _)| as_triple(t));
    let witnesses = found.into_iter().flatten().collect();
    Ok((TripleReport { holds: failing_triple.is_none(), failing_triple }, witnesses))
}

/// Whether every three treasures have a common spindle watcher.
pub fn triple_condition_spindle<D: Domain + ?Sized>(s: &D, a: &[Point], lambda: f64, frame: GridFrame) -> Result<TripleReport> {
    check_diameter(s, lambda)?;
    require_inside(s, a)?;
    let masks = spindle_masks(s, a, lambda, frame)?;
    Ok(spindle_triples(s, a, lambda, &masks)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Disk;
    use crate::polygon::random_simple_polygon;
    use crate::region::{eval_flower, ArcRegion, FlowerExpr};

    fn poly(v: &[(f64, f64)]) -> SimplePolygon {
        SimplePolygon::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn u_shape() -> SimplePolygon {
        poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (2.0, 3.0), (2.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)])
    }

    /// Three unit-wide prongs of height 0.6 on a 5 by 1 base.
    fn comb() -> SimplePolygon {
        poly(&[
            (0.0, 0.0),
            (5.0, 0.0),
            (5.0, 1.6),
            (4.0, 1.6),
            (4.0, 1.0),
            (3.0, 1.0),
            (3.0, 1.6),
            (2.0, 1.6),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 1.6),
            (0.0, 1.6),
        ])
    }

    #[test]
    fn convex_polygon_has_guard() {
        let sq = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let a = [Point::new(0.1, 0.1), Point::new(0.9, 0.2), Point::new(0.5, 0.95), Point::new(0.0, 1.0)];
        let r = guard_linear(&sq, &a).unwrap();
        assert!(r.guard.is_some() && triple_condition_linear(&sq, &a).unwrap().holds);
        assert_eq!(guard_linear(&sq, &[Point::new(2.0, 0.0)]), Err(Error::OutsideDomain(Point::new(2.0, 0.0))));
    }

    #[test]
    fn comb_guard_agrees_with_grid_oracle() {
        let c = comb();
        let tips = [Point::new(0.5, 1.5), Point::new(2.5, 1.5), Point::new(4.5, 1.5)];
        let frame = GridFrame::new(c.bbox(), 96).unwrap();
        let oracle = |a: &[Point]| {
            GridMask::from_fn(frame, |p| c.contains(p, EPS_GEOM) && a.iter().all(|t| sees_linear(&c, p, *t, 0).unwrap()))
        };
        // Neighbouring tips share watchers in the base, all three do not.
        for pair in [[0, 1], [1, 2], [0, 2]] {
            let a = pair.map(|k| tips[k]);
            let g = guard_linear(&c, &a).unwrap().guard;
            assert_eq!(g.is_some(), !oracle(&a).is_empty());
            if let Some(g) = g {
                assert!(g.y < 1.0 && a.iter().all(|t| sees_linear(&c, g, *t, 0).unwrap()));
            }
        }
        let r = guard_linear(&c, &tips).unwrap();
        assert!(oracle(&tips).is_empty() && r.guard.is_none());
        assert_eq!(r.failing_triple, Some([0, 1, 2]));
    }

    #[test]
    fn u_shape_triple_fails() {
        let u = u_shape();
        let a = [Point::new(0.5, 2.9), Point::new(2.5, 2.9), Point::new(1.5, 0.1)];
        let t = triple_condition_linear(&u, &a).unwrap();
        assert!(!t.holds && t.failing_triple == Some([0, 1, 2]));
        let r = guard_linear(&u, &a).unwrap();
        assert!(r.guard.is_none() && r.failing_triple == Some([0, 1, 2]));
    }

    #[test]
    fn random_polygons_guard_iff_triples() {
        for seed in 0..20u64 {
            let s = random_simple_polygon(6 + (seed as usize % 10), seed);
            let a = s.interior_samples(5, seed);
            let r = guard_linear(&s, &a).unwrap();
            let t = triple_condition_linear(&s, &a).unwrap();
            if t.holds {
                let g = r.guard.expect("triple condition holds but no guard");
                assert!(a.iter().all(|p| sees_linear(&s, g, *p, 0).unwrap()));
            }
            if r.guard.is_some() {
                assert!(t.holds);
                // Dropping a treasure keeps a guard.
                assert!(guard_linear(&s, &a[1..]).unwrap().guard.is_some());
            }
        }
    }

    #[test]
    fn spindle_guards() {
        let disk = ArcRegion::disk(Disk::unit(Point::ORIGIN));
        let frame = GridFrame::new(disk.bbox().expand(0.05), 48).unwrap();
        let a = [Point::new(0.9, 0.0), Point::new(-0.5, 0.7), Point::new(0.0, -0.99)];
        assert!(guard_spindle(&disk, &a, 1.0, frame).unwrap().guard.is_some());
        let one = [Point::new(0.3, 0.2)];
        assert_eq!(guard_spindle(&disk, &one, 1.0, frame).unwrap().guard, Some(one[0]));

        let big = ArcRegion::disk(Disk::new(Point::ORIGIN, 1.5));
        assert!(matches!(guard_spindle(&big, &a, 1.0, frame), Err(Error::DiameterExceeded(_))));

        let disks = [Disk::unit(Point::ORIGIN), Disk::unit(Point::new(0.8, 0.6)), Disk::unit(Point::new(0.8, -0.6))];
        let expr = FlowerExpr::Intersect(vec![FlowerExpr::Leaf(0), FlowerExpr::Union(vec![FlowerExpr::Leaf(1), FlowerExpr::Leaf(2)])]);
        let flower = eval_flower(&expr, &disks).unwrap();
        let frame = GridFrame::new(flower.bbox().expand(0.05), 64).unwrap();
        let tips = Domain::corners(&flower);
        let r = guard_spindle(&flower, &tips, 1.0, frame).unwrap();
        let g = r.guard.unwrap();
        assert!(sees_all(&flower, g, &tips, 1.0));
        assert!(tips.iter().all(|t| sees_linear(&flower, g, *t, 512).unwrap()));
    }

    #[test]
    fn spindle_u_shape_triple_fails() {
        let u = u_shape().scaled(0.45, Point::ORIGIN);
        let a = [Point::new(0.5, 2.9), Point::new(2.5, 2.9), Point::new(1.5, 0.1)].map(|p| p * 0.45);
        let frame = GridFrame::new(u.bbox(), 48).unwrap();
        let t = triple_condition_spindle(&u, &a, 1.0, frame).unwrap();
        assert!(!t.holds);
        assert!(guard_spindle(&u, &a, 1.0, frame).unwrap().guard.is_none());
    }
}
