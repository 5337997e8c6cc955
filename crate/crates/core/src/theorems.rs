//! Certificate checkers for the Helly and Klee type statements about spindle
//! kernels, erosion by a translate body, and the spike construction.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{Point, Tolerance};
use crate::grid::{GridFrame, GridMask};
use crate::kernel::{oracle_targets, spindle_kernel_oracle, visibility_hull_mask};
use crate::region::{ArcRegion, Solid};
use crate::spindle::make_spindle;
use crate::visibility::spindle_visibility_mask;

/// Boundary samples used by the kernel oracles in this module.
pub const ORACLE_SAMPLES: usize = 128;

/// A compact body `K` moved around by its reference point.
#[derive(Clone, Debug)]
pub struct TranslateBody {
    pub body: ArcRegion,
    pub reference: Point,
}

impl TranslateBody {
    pub fn new(body: ArcRegion, reference: Point) -> Result<Self> {
        if body.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(TranslateBody { body, reference })
    }

    pub fn point() -> Self {
        TranslateBody { body: ArcRegion::point(Point::ORIGIN), reference: Point::ORIGIN }
    }

    /// Disk of radius `r` about the origin.
    pub fn disk(r: f64) -> Self {
        TranslateBody { body: ArcRegion::disk(crate::geom::Disk::new(Point::ORIGIN, r)), reference: Point::ORIGIN }
    }

    /// Probe offsets from the reference point: corners, boundary points at
    /// least every half cell, and a stratified interior sample.
    pub fn offsets(&self, cell: f64) -> Vec<Point> {
        let n = ((2.0 * self.body.perimeter() / cell).ceil() as usize).max(64);
        let mut pts = self.body.corners();
        pts.extend(Domain::boundary_points(&self.body, n, 0));
        pts.extend(self.body.interior_samples(32, 0));
        if pts.is_empty() {
            pts.push(self.reference);
        }
        pts.into_iter().map(|p| p - self.reference).collect()
    }
}

/// `A ∼ K`: cells `x` such that every probe of `x + K` falls in an inside cell of `a`.
pub fn minkowski_difference_mask(a: &GridMask, k: &TranslateBody) -> GridMask {
    let offsets = k.offsets(a.frame.cell);
    let frame = a.frame;
    GridMask::from_rows(frame, |j, row| {
        for (i, b) in row.iter_mut().enumerate() {
            let c = frame.center(i, j);
            *b = offsets.iter().all(|o| a.at(c + *o));
        }
    })
}

/// First inside cell of `m` in row-major order.
fn first_cell(m: &GridMask) -> Option<Point> {
    m.cells().next().map(|(i, j)| m.frame.center(i, j))
}

/// Boundary triples to test.
#[derive(Clone, Debug)]
pub enum Triples {
    Given(Vec<[Point; 3]>),
    /// Up to this many triples drawn from corners and boundary samples.
    Sampled(usize),
}

/// Number of boundary candidates triples are drawn from.
const TRIPLE_POOL: usize = 24;

/// Corners ordered from most salient to least: those where a tiny circle
/// around the corner is furthest from half inside `s` come first.
pub fn salient_corners<D: Domain + ?Sized>(s: &D, n: usize) -> Vec<Point> {
    let b = s.bbox();
    let r = 1e-4 * b.width().max(b.height());
    let mut ranked: Vec<(f64, Point)> = s
        .corners()
        .into_iter()
        .map(|p| {
            let inside = (0..64).filter(|k| s.contains(p + Point::from_angle(*k as f64 * TAU / 64.0) * r)).count();
            ((inside as f64 / 64.0 - 0.5).abs(), p)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));
    ranked.into_iter().take(n).map(|(_, p)| p).collect()
}

/// Candidate points and index triples in lexicographic order.
///
/// Sampled triples take the half with the smallest index sums (the most
/// salient corners), then a seeded draw from the rest.
fn triple_indices<D: Domain + ?Sized>(s: &D, triples: &Triples, seed: u64) -> (Vec<Point>, Vec<[usize; 3]>) {
    match triples {
        Triples::Given(ts) => {
            let pts = ts.iter().flatten().copied().collect();
            (pts, (0..ts.len()).map(|k| [3 * k, 3 * k + 1, 3 * k + 2]).collect())
        }
        Triples::Sampled(count) => {
            let mut pts = salient_corners(s, TRIPLE_POOL / 2);
            let rest = TRIPLE_POOL - pts.len();
            pts.extend(s.boundary_points(rest, seed));
            let n = pts.len();
            let mut all = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        all.push([a, b, c]);
                    }
                }
            }
            if all.len() > *count {
                all.sort_by_key(|t| (t[0] + t[1] + t[2], *t));
                let mut rest = all.split_off(count / 2);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                while all.len() < *count {
                    all.push(rest.swap_remove(rng.gen_range(0..rest.len())));
                }
                all.sort();
            }
            (pts, all)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleWitness {
    pub triple: [Point; 3],
    pub witness: Option<Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KrasnoReport {
    pub holds: bool,
    pub witnesses: Vec<TripleWitness>,
}

/// For each boundary triple, searches the cells of `frame` for a point `y`
/// with all three spindles `spi{y, x_i}` inside `S`.
pub fn check_krasno_condition<D: Domain + ?Sized>(
    s: &D,
    lambda: f64,
    triples: &Triples,
    frame: GridFrame,
    seed: u64,
) -> Result<KrasnoReport> {
    let (pts, idx) = triple_indices(s, triples, seed);
    let masks: Vec<GridMask> = pts
        .iter()
        .map(|p| spindle_visibility_mask(s, *p, lambda, frame))
        .collect::<Result<_>>()?;
    let witnesses: Vec<TripleWitness> = idx
        .par_iter()
        .map(|t| {
            let m = masks[t[0]].and(&masks[t[1]])?.and(&masks[t[2]])?;
            Ok(TripleWitness { triple: t.map(|k| pts[k]), witness: first_cell(&m) })
        })
        .collect::<Result<_>>()?;
    Ok(KrasnoReport { holds: witnesses.iter().all(|w| w.witness.is_some()), witnesses })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicationReport {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub witnesses: Vec<TripleWitness>,
    /// A translation `v` with `v + K` in the kernel, when one was found.
    pub translate: Option<Point>,
}

impl ImplicationReport {
    pub fn implication_holds(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

/// Translations `v` whose `v + K` lies in the kernel mask, read with an
/// `eps_set` band around the mask.
fn kernel_translates(kernel: &GridMask, k: &TranslateBody) -> GridMask {
    let band = Tolerance::default().eps_set(kernel.frame.cell);
    minkowski_difference_mask(&kernel.dilate(band), k)
}

/// Hypothesis: every boundary triple admits `u` with `u + K` inside the
/// intersection of the spindle hulls of the three visibility regions.
/// Conclusion: some translate of `K` fits in the oracle kernel.
pub fn check_klee_translate<D: Domain + ?Sized>(
    s: &D,
    k: &TranslateBody,
    lambda: f64,
    triples: &Triples,
    frame: GridFrame,
    seed: u64,
) -> Result<ImplicationReport> {
    let (pts, idx) = triple_indices(s, triples, seed);
    let hulls: Vec<GridMask> = pts
        .iter()
        .map(|p| visibility_hull_mask(s, *p, lambda, frame))
        .collect::<Result<_>>()?;
    let witnesses: Vec<TripleWitness> = idx
        .par_iter()
        .map(|t| {
            let m = hulls[t[0]].and(&hulls[t[1]])?.and(&hulls[t[2]])?;
            Ok(TripleWitness { triple: t.map(|k| pts[k]), witness: first_cell(&minkowski_difference_mask(&m, k)) })
        })
        .collect::<Result<_>>()?;
    let kernel = spindle_kernel_oracle(s, lambda, frame, ORACLE_SAMPLES, seed);
    let translate = first_cell(&kernel_translates(&kernel, k));
    Ok(ImplicationReport {
        hypothesis_holds: witnesses.iter().all(|w| w.witness.is_some()),
        conclusion_holds: translate.is_some(),
        witnesses,
        translate,
    })
}

/// Intersection of regions built from solids.
pub fn intersect_regions(regions: &[&ArcRegion]) -> Result<ArcRegion> {
    let solids = regions
        .iter()
        .map(|r| r.solid().cloned().ok_or_else(|| Error::PreconditionFailed("region has no membership solid".into())))
        .collect::<Result<Vec<_>>>()?;
    match solids.len() {
        0 => Err(Error::EmptyInput),
        1 => Ok(regions[0].clone()),
        _ => Ok(ArcRegion::from_solid(Solid::Intersect(solids))),
    }
}

/// Translate of `K` in the oracle kernel of `region`, without the band.
fn translate_in_kernel(region: &ArcRegion, k: &TranslateBody, lambda: f64, frame: GridFrame, seed: u64) -> Option<Point> {
    if region.is_empty() || region.bbox().is_empty() {
        return None;
    }
    let kernel = spindle_kernel_oracle(region, lambda, frame, ORACLE_SAMPLES, seed);
    first_cell(&minkowski_difference_mask(&kernel, k))
}

#[derive(Clone, Debug, Serialize)]
pub struct HellyReport {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// First 3-subset (lexicographic) whose kernel admits no translate of `K`.
    pub failing_triple: Option<[usize; 3]>,
    pub translate: Option<Point>,
}

impl HellyReport {
    pub fn implication_holds(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

/// Hypothesis: every three members meet in a set whose oracle kernel holds a
/// translate of `K`. Conclusion: the whole family does too.
pub fn verify_family_helly(
    family: &[ArcRegion],
    k: &TranslateBody,
    lambda: f64,
    frame: GridFrame,
    seed: u64,
) -> Result<HellyReport> {
    let n = family.len();
    if n < 3 {
        return Err(Error::TooSmall(n));
    }
    let mut idx = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                idx.push([a, b, c]);
            }
        }
    }
    let found: Vec<Option<Point>> = idx
        .par_iter()
        .map(|t| {
            let meet = intersect_regions(&[&family[t[0]], &family[t[1]], &family[t[2]]])?;
            Ok(translate_in_kernel(&meet, k, lambda, frame, seed))
        })
        .collect::<Result<_>>()?;
    let failing_triple = idx.iter().zip(&found).find(|(_, f)| f.is_none()).map(|(t, _)| *t);
    let all: Vec<&ArcRegion> = family.iter().collect();
    let meet = intersect_regions(&all)?;
    let translate = if meet.is_empty() || meet.bbox().is_empty() {
        None
    } else {
        first_cell(&kernel_translates(&spindle_kernel_oracle(&meet, lambda, frame, ORACLE_SAMPLES, seed), k))
    };
    Ok(HellyReport {
        hypothesis_holds: failing_triple.is_none(),
        conclusion_holds: translate.is_some(),
        failing_triple,
        translate,
    })
}

/// First point where the ray from `x` along `dir` leaves `s`.
fn ray_exit(s: &ArcRegion, x: Point, dir: Point) -> Point {
    let b = s.bbox();
    let reach = b.width() + b.height();
    let step = reach / 1024.0;
    let mut t = 0.0;
    while s.contains_fast(x + dir * (t + step)) && t < reach {
        t += step;
    }
    let (mut lo, mut hi) = (t, t + step);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if s.contains_fast(x + dir * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x + dir * lo
}

/// `S ∪ spi{x, u'} ∪ spi{x, v'}` where the line through `x` along
/// `direction` leaves `S` at `u` and `v`, and `u'`, `v'` sit `overshoot`
/// beyond them.
pub fn spike_perturbation(s: &ArcRegion, x: Point, direction: Point, overshoot: f64) -> Result<ArcRegion> {
    let dir = direction
        .normalized()
        .ok_or_else(|| Error::PreconditionFailed("direction must be nonzero".into()))?;
    if !(overshoot >= 0.0) {
        return Err(Error::PreconditionFailed(format!("overshoot must be nonnegative, got {overshoot}")));
    }
    let base = s.solid().cloned().ok_or_else(|| Error::PreconditionFailed("region has no membership solid".into()))?;
    let scale = s.bbox().width().max(s.bbox().height());
    if !s.contains_fast(x) || s.boundary_distance(x) <= 1e-6 * scale {
        return Err(Error::BadCenter);
    }
    let targets = oracle_targets(s, 256, 0);
    if !targets.iter().all(|q| s.contains_spindle(x, *q, 1.0)) {
        return Err(Error::BadCenter);
    }
    if overshoot == 0.0 {
        return Ok(s.clone());
    }
    let u = ray_exit(s, x, dir) + dir * overshoot;
    let v = ray_exit(s, x, -dir) - dir * overshoot;
    let spikes = [make_spindle(x, u, 1.0)?, make_spindle(x, v, 1.0)?];
    if spikes.iter().any(|p| !p.is_bounded()) {
        return Err(Error::PreconditionFailed("spike longer than a unit diameter".into()));
    }
    let mut parts = vec![base];
    parts.extend(spikes.iter().map(|p| p.to_solid()));
    Ok(ArcRegion::from_solid(Solid::Union(parts)))
}

/// Result row of a theorem check, serialized into certificates.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub theorem: String,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub witnesses: serde_json::Value,
    pub timings: Option<f64>,
}

impl Certificate {
    /// A check passes unless its hypothesis holds while its conclusion fails.
    pub fn passed(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}
