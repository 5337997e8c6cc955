use std::f64::consts::TAU;

use super::arrangement::chain_loops;
use super::{split_arc, ArcRegion, Edge, Solid};
use crate::geom::{dist, Disk, Point};

const ANG_TOL: f64 = 1e-13;

/// Counter-clockwise arc of `disks[disk]` on the boundary of an intersection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryArc {
    pub disk: usize,
    pub start: f64,
    pub sweep: f64,
}

/// Boundary of `⋂ disks` as arcs on the generating circles, plus isolated
/// points (tangencies where the intersection collapses to a point).
///
/// Each circle keeps the angular set where it lies inside every other disk;
/// the work is quadratic in the number of disks.
pub fn disk_intersection_arcs(disks: &[Disk]) -> (Vec<BoundaryArc>, Vec<Point>) {
    let mut unique: Vec<usize> = Vec::new();
    for (i, d) in disks.iter().enumerate() {
        if !unique.iter().any(|&j| same_disk(&disks[j], d)) {
            unique.push(i);
        }
    }
    let mut arcs = Vec::new();
    let mut points = Vec::new();
    for &i in &unique {
        let di = disks[i];
        if di.radius <= 0.0 {
            if disks.iter().all(|d| d.contains(di.center, 1e-12)) {
                points.push(di.center);
            }
            continue;
        }
        let mut set = vec![(0.0, TAU)];
        for &j in &unique {
            if i == j {
                continue;
            }
            match constraint(&di, &disks[j]) {
                Constraint::Free => {}
                Constraint::Blocked => {
                    set.clear();
                }
                Constraint::Interval(a, len) => set = intersect(&set, a, len),
            }
            if set.is_empty() {
                break;
            }
        }
        for (a, len) in set {
            if len > 1e-12 {
                arcs.push(BoundaryArc { disk: i, start: a, sweep: len });
            } else {
                points.push(di.center + Point::from_angle(a) * di.radius);
            }
        }
    }
    let on_arc = |p: Point| {
        arcs.iter().any(|a| {
            let d = disks[a.disk];
            let theta = (p - d.center).angle();
            let rel = (theta - a.start).rem_euclid(TAU);
            (dist(p, d.center) - d.radius).abs() < 1e-9 && (rel <= a.sweep + 1e-9 || rel >= TAU - 1e-9)
        })
    };
    let mut isolated: Vec<Point> = Vec::new();
    for p in points {
        if !on_arc(p) && !isolated.iter().any(|q| dist(*q, p) < 1e-9) {
            isolated.push(p);
        }
    }
    (arcs, isolated)
}

fn same_disk(a: &Disk, b: &Disk) -> bool {
    dist(a.center, b.center) < 1e-12 && (a.radius - b.radius).abs() < 1e-12
}

enum Constraint {
    Free,
    Blocked,
    Interval(f64, f64),
}

/// Angular set of the circle of `di` that lies inside `dj`.
fn constraint(di: &Disk, dj: &Disk) -> Constraint {
    let v = dj.center - di.center;
    let d = v.norm();
    let (ri, rj) = (di.radius, dj.radius);
    if d < 1e-12 {
        return if ri <= rj + 1e-12 { Constraint::Free } else { Constraint::Blocked };
    }
    let kappa = (ri * ri + d * d - rj * rj) / (2.0 * ri * d);
    if kappa <= -1.0 {
        Constraint::Free
    } else if kappa > 1.0 + 1e-12 {
        Constraint::Blocked
    } else {
        let alpha = kappa.min(1.0).acos();
        let phi = v.angle();
        Constraint::Interval((phi - alpha).rem_euclid(TAU), 2.0 * alpha)
    }
}

fn intersect(set: &[(f64, f64)], b: f64, m: f64) -> Vec<(f64, f64)> {
    let mut pieces = Vec::new();
    for &(a, len) in set {
        for shift in [-TAU, 0.0, TAU] {
            let bb = b + shift;
            let lo = a.max(bb);
            let hi = (a + len).min(bb + m);
            if hi >= lo - ANG_TOL {
                pieces.push((lo, (hi - lo).max(0.0)));
            }
        }
    }
    normalize(pieces)
}

fn normalize(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    for p in pieces.iter_mut() {
        p.0 = p.0.rem_euclid(TAU);
        if p.0 > TAU - ANG_TOL {
            p.0 = 0.0;
        }
    }
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, len) in pieces {
        if let Some(last) = merged.last_mut() {
            let end = last.0 + last.1;
            if a <= end + ANG_TOL {
                last.1 = last.1.max(a + len - last.0);
                continue;
            }
        }
        merged.push((a, len));
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if first.0 <= ANG_TOL && last.0 + last.1 >= TAU - ANG_TOL {
            merged.pop();
            merged[0] = (last.0, last.1 + first.1 + first.0);
        }
    }
    for p in merged.iter_mut() {
        if p.1 >= TAU - ANG_TOL {
            *p = (0.0, TAU);
        }
    }
    merged
}

/// Vertices of `⋂ disks`: endpoints of its boundary arcs and isolated points.
pub fn disk_intersection_vertices(disks: &[Disk]) -> Vec<Point> {
    let (arcs, isolated) = disk_intersection_arcs(disks);
    let mut out: Vec<Point> = Vec::new();
    for a in &arcs {
        if a.sweep >= TAU - 1e-12 {
            continue;
        }
        let d = disks[a.disk];
        for theta in [a.start, a.start + a.sweep] {
            let p = d.center + Point::from_angle(theta) * d.radius;
            if !out.iter().any(|q| dist(*q, p) < 1e-10) {
                out.push(p);
            }
        }
    }
    out.extend(isolated);
    out
}

/// The common intersection of the disks as an arc region. An empty
/// intersection (or an empty list) gives the empty region.
pub fn disk_intersection(disks: &[Disk]) -> ArcRegion {
    if disks.is_empty() {
        return ArcRegion::empty();
    }
    if disks.len() == 1 {
        return ArcRegion::disk(disks[0]);
    }
    let (arcs, isolated) = disk_intersection_arcs(disks);
    let edges: Vec<Edge> = arcs
        .iter()
        .flat_map(|a| {
            let d = disks[a.disk];
            split_arc(d.center, d.radius, a.start, a.sweep)
        })
        .map(Edge::Arc)
        .collect();
    let solid = Solid::Intersect(disks.iter().map(|d| Solid::Disk(*d)).collect());
    ArcRegion::from_parts(chain_loops(edges), isolated, solid)
}
