//! One pass/fail line per acceptance criterion, with pinned tolerances.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spindlekit::corpus::{gallery_instance, kernel_corpus, random_family, random_reduced_flower, ShapeKind};
use spindlekit::domain::Domain;
use spindlekit::gallery::{guard_linear, guard_spindle, triple_condition_linear, triple_condition_spindle};
use spindlekit::geom::{arc_exit_predicate, circumradius, dist, BBox, CircularArc, Point, EPS_GEOM};
use spindlekit::grid::{mask_hausdorff, GridFrame, GridMask};
use spindlekit::kernel::{flower_kernel_exact, is_spindle_peak, spindle_kernel_krasnosselsky, spindle_kernel_oracle};
use spindlekit::region::eval_flower;
use spindlekit::spindle::{caratheodory_subset, make_spindle, spindle_hull_points, spindle_monotonicity_check, Hull};
use spindlekit::theorems::{check_klee_translate, check_krasno_condition, verify_family_helly, TranslateBody, Triples};
use spindlekit::visibility::{sees_linear, sees_spindle};

const EPS_SET_CELLS: f64 = 1.5;
const MEMBERSHIP_CASES: usize = 1000;
const MEMBERSHIP_DISKS: usize = 720;
const MEMBERSHIP_SECONDS: f64 = 5.0;
const MONOTONE_PAIRS: usize = 1000;
const CORPUS_RESOLUTION: usize = 256;
const CORPUS_SECONDS: f64 = 60.0;
const ORACLE_BOUNDARY: usize = 256;
const FORMULA_BOUNDARY: usize = 64;
const FLOWERS: u64 = 50;
const FLOWER_RESOLUTION: usize = 128;
const FLOWER_SECONDS: f64 = 10.0;
const ARC_CASES: usize = 10_000;
const CARATHEODORY_SETS: u64 = 100;
const IMPLICATION_RESOLUTION: usize = 96;
const FAMILIES: u64 = 30;
const FAMILY_RESOLUTION: usize = 48;
const SPIKE_MAX_CELLS: f64 = 2.0;
const BASE_MIN_CELLS: f64 = 10.0;
const PEAK_CANDIDATES: usize = 6;
const PEAK_RADIUS_CELLS: f64 = 16.0;
const GALLERY_INSTANCES: u64 = 100;
const GALLERY_RESOLUTION: usize = 64;
const GALLERY_SECONDS: f64 = 120.0;

struct Line {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn line(name: &'static str, pass: bool, detail: String) -> Line {
    eprintln!("{:<28} {}  {}", name, if pass { "PASS" } else { "FAIL" }, detail);
    Line { name, pass, detail }
}

/// Membership in the intersection of radius-λ disks whose centers are spread
/// over the boundary of `B[x, λ] ∩ B[y, λ]`, the set of all centers of
/// radius-λ disks through which both points pass.
fn containing_disks_oracle(x: Point, y: Point, lambda: f64, p: Point, disks: usize) -> bool {
    let d = dist(x, y);
    if d > 2.0 * lambda {
        return true;
    }
    if d == 0.0 {
        return dist(p, x) == 0.0;
    }
    let m = x.midpoint(y);
    let u = (y - x) * (1.0 / d);
    let n = Point::new(-u.y, u.x);
    let h = (lambda * lambda - 0.25 * d * d).max(0.0).sqrt();
    let corners = [m + n * h, m - n * h];
    let mut centers = Vec::with_capacity(disks);
    // The center set is bounded by an arc of radius λ around x and one around y.
    for (k, about) in [x, y].into_iter().enumerate() {
        let (a0, a1) = ((corners[0] - about).angle(), (corners[1] - about).angle());
        let mut sweep = a1 - a0;
        let want_side = if k == 0 { 1.0 } else { -1.0 };
        let mid = |s: f64| about + Point::from_angle(a0 + 0.5 * s) * lambda;
        if (mid(sweep) - m).dot(u) * want_side < 0.0 {
            sweep -= sweep.signum() * std::f64::consts::TAU;
        }
        let per = disks / 2;
        for i in 0..per {
            centers.push(about + Point::from_angle(a0 + sweep * i as f64 / (per - 1) as f64) * lambda);
        }
    }
    centers.iter().all(|c| dist(*c, p) <= lambda)
}

fn spindle_membership() -> Line {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut skipped, mut bad) = (0, 0, 0);
    for _ in 0..MEMBERSHIP_CASES {
        let x = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let y = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lambda = rng.gen_range(0.3..2.0);
        let s = make_spindle(x, y, lambda).unwrap();
        let b = s.bbox().unwrap_or(BBox::of_points([x, y])).expand(0.2);
        let p = Point::new(rng.gen_range(b.min.x..b.max.x), rng.gen_range(b.min.y..b.max.y));
        let near = s.boundary_arcs().iter().map(|a| a.distance_to(p)).fold(f64::INFINITY, f64::min);
        let by_disks = containing_disks_oracle(x, y, lambda, p, MEMBERSHIP_DISKS);
        if near <= EPS_GEOM {
            skipped += 1;
            continue;
        }
        checked += 1;
        if s.contains(p) != by_disks {
            bad += 1;
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    line(
        "spindle-membership",
        bad == 0 && secs < MEMBERSHIP_SECONDS,
        format!("{checked} checked, {skipped} on boundary, {bad} disagreements, {secs:.2}s"),
    )
}

fn monotonicity() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for k in 0..MONOTONE_PAIRS {
        let x = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let y = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lambda = rng.gen_range(0.5..2.0) * dist(x, y).max(0.1);
        let nu = lambda * rng.gen_range(1.01..4.0);
        if !spindle_monotonicity_check(x, y, lambda, nu, 200, k as u64).unwrap() {
            bad += 1;
        }
    }
    line("spindle-monotonicity", bad == 0, format!("{MONOTONE_PAIRS} pairs, {bad} violations"))
}

struct CorpusRun {
    name: String,
    kind: ShapeKind,
    frame: GridFrame,
    oracle: GridMask,
}

fn kernel_formula(runs: &mut Vec<CorpusRun>) -> Line {
    let mut worst_gap: f64 = 0.0;
    let mut worst_secs: f64 = 0.0;
    let mut failures = Vec::new();
    for s in kernel_corpus() {
        let frame = GridFrame::anchored(s.region.bbox().expand(0.05), CORPUS_RESOLUTION, s.anchor).unwrap();
        let clock = Instant::now();
        let oracle = spindle_kernel_oracle(&s.region, 1.0, frame, ORACLE_BOUNDARY, 0);
        let formula = spindle_kernel_krasnosselsky(&s.region, 1.0, frame, FORMULA_BOUNDARY, 0).unwrap();
        let secs = clock.elapsed().as_secs_f64();
        let gap = mask_hausdorff(&oracle, &formula).unwrap() / frame.cell;
        eprintln!("    {:<22} {:6} cells  gap {:.2}  {:.1}s", s.name, oracle.count(), gap, secs);
        worst_gap = worst_gap.max(gap);
        worst_secs = worst_secs.max(secs);
        if gap > EPS_SET_CELLS || secs >= CORPUS_SECONDS {
            failures.push(s.name.clone());
        }
        runs.push(CorpusRun { name: s.name.clone(), kind: s.kind, frame, oracle });
    }
    line(
        "kernel-formula",
        failures.is_empty(),
        format!("20 shapes at {CORPUS_RESOLUTION}, worst gap {worst_gap:.2} cells, slowest {worst_secs:.1}s, failing {failures:?}"),
    )
}

fn flower_kernels() -> Line {
    let (mut worst_gap, mut worst_secs, mut bad): (f64, f64, usize) = (0.0, 0.0, 0);
    for seed in 0..FLOWERS {
        let clock = Instant::now();
        let (expr, disks) = random_reduced_flower(seed);
        let region = eval_flower(&expr, &disks).unwrap();
        let exact = flower_kernel_exact(&expr, &disks).unwrap();
        let frame = GridFrame::new(region.bbox().expand(0.05), FLOWER_RESOLUTION).unwrap();
        let oracle = spindle_kernel_oracle(&region, 1.0, frame, ORACLE_BOUNDARY, seed);
        let exact_mask = GridMask::from_fn(frame, |p| exact.contains_fast(p));
        let gap = mask_hausdorff(&exact_mask, &oracle).unwrap() / frame.cell;
        let secs = clock.elapsed().as_secs_f64();
        worst_gap = worst_gap.max(gap);
        worst_secs = worst_secs.max(secs);
        if gap > EPS_SET_CELLS || secs >= FLOWER_SECONDS {
            bad += 1;
        }
    }
    line(
        "flower-kernel",
        bad == 0,
        format!("{FLOWERS} flowers at {FLOWER_RESOLUTION}, worst gap {worst_gap:.2} cells, slowest {worst_secs:.1}s, {bad} failures"),
    )
}

fn kernel_reach(runs: &[CorpusRun]) -> Line {
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    let shapes = kernel_corpus();
    for (run, s) in runs.iter().zip(&shapes) {
        let limit = 2.0 + EPS_SET_CELLS * run.frame.cell;
        let mut far = s.region.corners();
        far.extend(s.region.boundary_sample(1024, 9).unwrap());
        for y in run.oracle.centers() {
            let reach = far.iter().map(|p| dist(y, *p)).fold(0.0, f64::max);
            worst = worst.max(reach);
            if reach > limit {
                bad += 1;
            }
        }
    }
    line("kernel-reach", bad == 0, format!("max distance {worst:.4}, {bad} violations"))
}

fn arc_exit() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut bad, mut rejected) = (0, 0);
    for _ in 0..ARC_CASES {
        let z = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let out = Point::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        let x = z + out * rng.gen_range(1.0001..3.0);
        let radius = rng.gen_range(1.0..5.0);
        let heading = out.angle() + rng.gen_range(-0.5..0.5) * std::f64::consts::PI;
        let ccw = rng.gen::<bool>();
        let t = Point::from_angle(heading);
        let center = if ccw { x + Point::new(-t.y, t.x) * radius } else { x + Point::new(t.y, -t.x) * radius };
        let sweep = rng.gen_range(0.0..0.999 * std::f64::consts::FRAC_PI_2) * if ccw { 1.0 } else { -1.0 };
        let a0 = (x - center).angle();
        let mu = CircularArc::new(center, radius, a0, sweep).unwrap();
        let end = center + Point::from_angle(a0 + sweep) * radius;
        match arc_exit_predicate(z, x, &mu) {
            Ok(v) => {
                if !v || dist(end, z) <= 1.0 {
                    bad += 1;
                }
            }
            Err(_) => rejected += 1,
        }
    }
    line(
        "arc-exit",
        bad == 0 && rejected == 0,
        format!("{ARC_CASES} configurations, {rejected} rejected as invalid, {bad} endpoints inside"),
    )
}

fn caratheodory() -> Line {
    let (mut bad, mut sets) = (0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while sets < CARATHEODORY_SETS {
        let n = rng.gen_range(2..=8);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7))).collect();
        if circumradius(&pts).map(|(r, _)| r >= 1.0).unwrap_or(true) {
            continue;
        }
        let Hull::Region(h) = spindle_hull_points(&pts, 1.0).unwrap() else { continue };
        let region = h.to_region();
        sets += 1;
        for y in region.interior_samples(5, sets) {
            if caratheodory_subset(&pts, y, 1.0, 3).unwrap().is_none() {
                bad += 1;
            }
        }
        for y in region.boundary_sample(5, sets).unwrap() {
            if caratheodory_subset(&pts, y, 1.0, 2).unwrap().is_none() {
                bad += 1;
            }
        }
    }
    line("caratheodory", bad == 0, format!("{sets} sets, 10 hull points each, {bad} failures"))
}

fn implications() -> Line {
    let mut counter = Vec::new();
    let mut vacuous = 0;
    for s in kernel_corpus() {
        let frame = GridFrame::anchored(s.region.bbox().expand(0.05), IMPLICATION_RESOLUTION, s.anchor).unwrap();
        let k = TranslateBody::disk(2.0 * frame.cell);
        let kr = check_krasno_condition(&s.region, 1.0, &Triples::Sampled(64), frame, 0).unwrap();
        let kernel = spindle_kernel_oracle(&s.region, 1.0, frame, 128, 0);
        if kr.holds && kernel.is_empty() {
            counter.push(format!("{} three-point", s.name));
        }
        let kl = check_klee_translate(&s.region, &k, 1.0, &Triples::Sampled(64), frame, 0).unwrap();
        if kl.hypothesis_holds && !kl.conclusion_holds {
            counter.push(format!("{} translate", s.name));
        }
        vacuous += usize::from(!kr.holds) + usize::from(!kl.hypothesis_holds);
    }
    for seed in 0..FAMILIES {
        let family = random_family(seed);
        let mut b = family[0].bbox();
        for r in &family[1..] {
            b = b.union(&r.bbox());
        }
        let frame = GridFrame::new(b.expand(0.05), FAMILY_RESOLUTION).unwrap();
        let k = TranslateBody::disk(2.0 * frame.cell);
        let h = verify_family_helly(&family, &k, 1.0, frame, seed).unwrap();
        if h.hypothesis_holds && !h.conclusion_holds {
            counter.push(format!("family {seed}"));
        }
        vacuous += usize::from(!h.hypothesis_holds);
    }
    line(
        "implications",
        counter.is_empty(),
        format!("20 shapes x 2 checks + {FAMILIES} families, {vacuous} with false hypothesis, counterexamples {counter:?}"),
    )
}

fn spikes(runs: &[CorpusRun]) -> Line {
    let mut detail = Vec::new();
    let mut pass = true;
    let shapes = kernel_corpus();
    for (run, s) in runs.iter().zip(&shapes).filter(|(r, _)| r.kind == ShapeKind::Spiked) {
        let base = s.scene().region("base").unwrap();
        let base_kernel = spindle_kernel_oracle(&base, 1.0, run.frame, ORACLE_BOUNDARY, 0);
        let (d, d0) = (run.oracle.diameter() / run.frame.cell, base_kernel.diameter() / run.frame.cell);
        pass &= d <= SPIKE_MAX_CELLS && d0 >= BASE_MIN_CELLS;
        detail.push(format!("{} {:.1}/{:.0}", run.name, d, d0));
    }
    line("spike-construction", pass, format!("kernel diameter spiked/original in cells: {}", detail.join(", ")))
}

fn peaks(runs: &[CorpusRun]) -> Line {
    let (mut flagged, mut strict, mut bad) = (0, 0, 0);
    let shapes = kernel_corpus();
    for (k, (run, s)) in runs.iter().zip(&shapes).enumerate() {
        let near = run.oracle.dilate(EPS_SET_CELLS * run.frame.cell);
        let mut xs = vec![s.anchor];
        xs.extend(s.region.interior_samples(PEAK_CANDIDATES, k as u64));
        for (i, x) in xs.into_iter().enumerate() {
            let radius = PEAK_RADIUS_CELLS * run.frame.cell;
            if is_spindle_peak(&s.region, x, 1.0, radius, 16, (k * 100 + i) as u64, run.frame).unwrap() {
                flagged += 1;
                strict += usize::from(!run.oracle.at(x));
                if !near.at(x) {
                    bad += 1;
                    eprintln!("    peak outside kernel: {} {:?}", run.name, x);
                }
            }
        }
    }
    line(
        "spindle-peak",
        bad == 0,
        format!("{flagged} peaks flagged, {strict} outside the mask itself, {bad} farther than eps_set"),
    )
}

fn gallery() -> Line {
    let clock = Instant::now();
    let (mut held, mut bad) = (0, 0);
    for seed in 0..GALLERY_INSTANCES {
        let (s, a) = gallery_instance(seed, false);
        let tr = triple_condition_linear(&s, &a).unwrap();
        let g = guard_linear(&s, &a).unwrap();
        if tr.holds {
            held += 1;
            if g.guard.is_none() {
                bad += 1;
            }
        }
        if let Some(p) = g.guard {
            if !a.iter().all(|t| sees_linear(&s, p, *t, 2).unwrap()) {
                bad += 1;
            }
        }

        let (s, a) = gallery_instance(seed, true);
        let frame = GridFrame::new(s.bbox().expand(0.05), GALLERY_RESOLUTION).unwrap();
        let tr = triple_condition_spindle(&s, &a, 1.0, frame).unwrap();
        let g = guard_spindle(&s, &a, 1.0, frame).unwrap();
        if tr.holds {
            held += 1;
            if g.guard.is_none() {
                bad += 1;
            }
        }
        if let Some(p) = g.guard {
            if !a.iter().all(|t| sees_spindle(&s, p, *t, 1.0, 1300).unwrap()) {
                bad += 1;
            }
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    line(
        "art-gallery",
        bad == 0 && secs < GALLERY_SECONDS,
        format!("{GALLERY_INSTANCES} polygons x 2 modes, {held} with the triple condition, {bad} failures, {secs:.1}s"),
    )
}

const DETERMINISM_SCENE: &str = r#"{
  "lambda": 1,
  "shapes": {
    "left": {"disk": [[-0.2, 0], 0.8]},
    "right": {"spindle": [[0.1, -0.6], [0.2, 0.7]]},
    "room": {"polygon": [[-0.8, -0.6], [0.8, -0.6], [0.8, 0.6], [0.1, 0.6], [0, 0], [-0.1, 0.6], [-0.8, 0.6]]},
    "pair": {"flower": {"disks": [[0, 0], [0.6, 0.1]], "expr": ["cup", 0, 1]}}
  },
  "treasures": [[-0.5, 0.4], [0.5, 0.4], [0, -0.4]],
  "grid": {"resolution": 40},
  "seed": 11
}"#;

fn determinism() -> Line {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.json");
    std::fs::write(&scene, DETERMINISM_SCENE).unwrap();
    let run = |out: &str| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_spindlekit"))
            .args(["verify", "--scene"])
            .arg(&scene)
            .arg("--out")
            .arg(dir.path().join(out))
            .env("SPINDLEKIT_THREADS", "2")
            .output()
            .unwrap();
        (status.status.code(), std::fs::read(dir.path().join(out).join("certificates.json")).unwrap_or_default())
    };
    let (c1, a) = run("first");
    let (c2, b) = run("second");
    line(
        "determinism",
        !a.is_empty() && a == b && c1 == c2,
        format!("{} bytes, identical: {}, exit codes {:?}/{:?}", a.len(), a == b, c1, c2),
    )
}

#[test]
fn acceptance() {
    let mut runs = Vec::new();
    let lines = vec![
        spindle_membership(),
        monotonicity(),
        kernel_formula(&mut runs),
        flower_kernels(),
        kernel_reach(&runs),
        arc_exit(),
        caratheodory(),
        implications(),
        spikes(&runs),
        peaks(&runs),
        gallery(),
        determinism(),
    ];
    println!();
    for l in &lines {
        println!("{:<28} {}  {}", l.name, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.name).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
