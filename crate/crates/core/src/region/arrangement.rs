//! Boundary extraction for solids: split every primitive boundary at all
//! mutual intersections, keep the pieces that separate inside from outside,
//! and chain them into loops.

use std::f64::consts::TAU;

use super::{split_arc, Edge, Solid};
use crate::geom::{circle_circle, dist, segment_circle_params, segment_segment_params, Disk, Point};
use crate::polygon::sort_dedup;

const PROBE: f64 = 1e-7;
const JOIN: f64 = 1e-7;

pub(super) fn boundary_of(solid: &Solid) -> (Vec<Vec<Edge>>, Vec<Point>) {
    let mut disks = Vec::new();
    let mut polys = Vec::new();
    let mut points = Vec::new();
    solid.collect_primitives(&mut disks, &mut polys, &mut points);

    let mut circles: Vec<Disk> = Vec::new();
    for d in disks {
        if d.radius <= 0.0 {
            points.push(d.center);
        } else if !circles
            .iter()
            .any(|c| dist(c.center, d.center) < 1e-12 && (c.radius - d.radius).abs() < 1e-12)
        {
            circles.push(d);
        }
    }
    let segments: Vec<(Point, Point)> = polys.iter().flat_map(|p| p.edges()).collect();

    let mut candidates = points;
    let mut pieces: Vec<Edge> = Vec::new();

    for (i, c) in circles.iter().enumerate() {
        let mut cuts: Vec<f64> = Vec::new();
        for (j, o) in circles.iter().enumerate() {
            if i != j {
                let hits = circle_circle(c.center, c.radius, o.center, o.radius);
                if hits.len() == 1 {
                    candidates.push(hits[0]);
                }
                cuts.extend(hits.iter().map(|p| (*p - c.center).angle().rem_euclid(TAU)));
            }
        }
        for &(a, b) in &segments {
            let ts = segment_circle_params(a, b, c.center, c.radius);
            for t in ts {
                let p = a.lerp(b, t);
                candidates.push(p);
                cuts.push((p - c.center).angle().rem_euclid(TAU));
            }
        }
        sort_dedup(&mut cuts);
        let spans: Vec<(f64, f64)> = if cuts.is_empty() {
            vec![(0.0, TAU)]
        } else {
            (0..cuts.len())
                .map(|k| {
                    let a = cuts[k];
                    let b = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + TAU };
                    (a, b - a)
                })
                .filter(|(_, s)| *s > 1e-12)
                .collect()
        };
        for (a, s) in spans {
            for arc in split_arc(c.center, c.radius, a, s) {
                pieces.push(Edge::Arc(arc));
            }
        }
    }

    for (i, &(a, b)) in segments.iter().enumerate() {
        let mut ts = vec![0.0, 1.0];
        for c in &circles {
            ts.extend(segment_circle_params(a, b, c.center, c.radius));
        }
        for (j, &(c, d)) in segments.iter().enumerate() {
            if i != j {
                for (t, _) in segment_segment_params(a, b, c, d) {
                    ts.push(t);
                    candidates.push(a.lerp(b, t));
                }
            }
        }
        sort_dedup(&mut ts);
        for w in ts.windows(2) {
            let (p, q) = (a.lerp(b, w[0]), a.lerp(b, w[1]));
            if dist(p, q) > 1e-12 {
                pieces.push(Edge::Segment { start: p, end: q });
            }
        }
    }

    let mut kept: Vec<Edge> = Vec::new();
    for e in pieces {
        let m = e.point_at(0.5);
        let n = e.left_normal_at(0.5);
        let left = solid.contains(m + n * PROBE, 0.0);
        let right = solid.contains(m - n * PROBE, 0.0);
        let oriented = match (left, right) {
            (true, false) => e,
            (false, true) => e.reversed(),
            _ => continue,
        };
        let dup = matches!(oriented, Edge::Segment { .. })
            && kept.iter().any(|k| {
                matches!(k, Edge::Segment { .. })
                    && dist(k.start(), oriented.start()) < 1e-12
                    && dist(k.end(), oriented.end()) < 1e-12
            });
        if !dup {
            kept.push(oriented);
        }
    }

    let mut isolated: Vec<Point> = Vec::new();
    for p in candidates {
        if isolated.iter().any(|q| dist(*q, p) < 1e-9) || !solid.contains(p, 1e-12) {
            continue;
        }
        if kept.iter().any(|e| e.distance_to(p) < 1e-9) {
            continue;
        }
        let lonely = (0..8).all(|k| {
            let q = p + Point::from_angle(k as f64 * TAU / 8.0) * PROBE;
            !solid.contains(q, 0.0)
        });
        if lonely {
            isolated.push(p);
        }
    }

    (chain_loops(kept), isolated)
}

/// Chains oriented edges into closed loops by matching endpoints.
pub(crate) fn chain_loops(edges: Vec<Edge>) -> Vec<Vec<Edge>> {
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for first in 0..edges.len() {
        if used[first] {
            continue;
        }
        used[first] = true;
        let mut lp = vec![edges[first]];
        let origin = edges[first].start();
        loop {
            let end = lp.last().unwrap().end();
            if lp.len() > 1 && dist(end, origin) < JOIN {
                break;
            }
            let next = (0..edges.len())
                .filter(|&k| !used[k])
                .map(|k| (k, dist(edges[k].start(), end)))
                .filter(|&(_, d)| d < JOIN)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match next {
                Some((k, _)) => {
                    used[k] = true;
                    lp.push(edges[k]);
                }
                None => break,
            }
        }
        loops.push(lp);
    }
    loops
}
