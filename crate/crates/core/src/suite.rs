//! The `verify` suite: every check that applies to a scene, as certificates.

use std::time::Instant;

use serde_json::{json, Value};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::gallery::{component_center, guard_linear, guard_spindle, triple_condition_linear, triple_condition_spindle};
use crate::geom::{dist, Point, Tolerance};
use crate::grid::{mask_hausdorff, GridFrame, GridMask};
use crate::kernel::{
    flower_kernel_exact, is_spindle_peak, spindle_kernel_krasnosselsky, spindle_kernel_oracle, verify_kernel_maximal_subsets,
};
use crate::region::ArcRegion;
use crate::scene::{Scene, ShapeSpec};
use crate::theorems::{
    check_klee_translate, check_krasno_condition, verify_family_helly, Certificate, TranslateBody, Triples, ORACLE_SAMPLES,
};
use crate::visibility::{sees_linear, sees_spindle};

/// Row names in suite order.
pub const ROWS: [&str; 10] = [
    "kernel-formula",
    "three-point-condition",
    "translate-condition",
    "flower-kernel",
    "spindle-peak",
    "kernel-reach",
    "family-helly",
    "guard-linear",
    "guard-spindle",
    "maximal-subsets",
];

pub const SAMPLED_TRIPLES: usize = 64;
pub const PEAK_CANDIDATES: usize = 8;
/// Neighbourhood of the peak test; a move of one or two cells rarely changes
/// which cells are visible.
pub const PEAK_RADIUS_CELLS: f64 = 16.0;
pub const MAXIMAL_SEEDS: usize = 4;
/// Greedy growth is quadratic in the cell count, so it runs on a coarser grid.
pub const MAXIMAL_RESOLUTION: usize = 32;

struct Row {
    hypothesis: bool,
    conclusion: bool,
    witnesses: Value,
}

fn skipped(reason: &str) -> Row {
    Row { hypothesis: false, conclusion: false, witnesses: json!({ "skipped": reason }) }
}

fn cells(gap: f64, frame: &GridFrame) -> Value {
    json!(gap / frame.cell)
}

/// Shared state for rows about the target shape.
struct Target<'a> {
    scene: &'a Scene,
    name: &'a str,
    region: ArcRegion,
    frame: GridFrame,
    kernel: GridMask,
    eps_set: f64,
}

impl Target<'_> {
    fn lambda(&self) -> f64 {
        self.scene.lambda
    }

    fn seed(&self) -> u64 {
        self.scene.seed
    }
}

fn kernel_formula(t: &Target) -> Result<Row> {
    let formula = spindle_kernel_krasnosselsky(&t.region, t.lambda(), t.frame, ORACLE_SAMPLES, t.seed())?;
    let gap = mask_hausdorff(&formula, &t.kernel)?;
    Ok(Row {
        hypothesis: true,
        conclusion: gap <= t.eps_set,
        witnesses: json!({
            "shape": t.name,
            "oracle_cells": t.kernel.count(),
            "formula_cells": formula.count(),
            "gap_cells": cells(gap, &t.frame),
        }),
    })
}

fn three_point(t: &Target) -> Result<Row> {
    let r = check_krasno_condition(&t.region, t.lambda(), &Triples::Sampled(SAMPLED_TRIPLES), t.frame, t.seed())?;
    let failing = r.witnesses.iter().find(|w| w.witness.is_none()).map(|w| w.triple);
    Ok(Row {
        hypothesis: r.holds,
        conclusion: !t.kernel.is_empty(),
        witnesses: json!({
            "shape": t.name,
            "triples": r.witnesses.len(),
            "failing_triple": failing,
            "kernel_cells": t.kernel.count(),
        }),
    })
}

fn translate(t: &Target) -> Result<Row> {
    let k = TranslateBody::disk(2.0 * t.frame.cell);
    let r = check_klee_translate(&t.region, &k, t.lambda(), &Triples::Sampled(SAMPLED_TRIPLES), t.frame, t.seed())?;
    let failing = r.witnesses.iter().find(|w| w.witness.is_none()).map(|w| w.triple);
    Ok(Row {
        hypothesis: r.hypothesis_holds,
        conclusion: r.conclusion_holds,
        witnesses: json!({
            "shape": t.name,
            "body_radius_cells": 2,
            "triples": r.witnesses.len(),
            "failing_triple": failing,
            "translate": r.translate,
        }),
    })
}

fn flower_kernel(t: &Target) -> Result<Row> {
    let name = match t.scene.shape(t.name)? {
        ShapeSpec::Flower { .. } => t.name,
        _ => match t.scene.shapes.iter().find(|(_, s)| matches!(s, ShapeSpec::Flower { .. })) {
            Some((n, _)) => n.as_str(),
            None => return Ok(skipped("no flower in scene")),
        },
    };
    let ShapeSpec::Flower { disks, expr } = t.scene.shape(name)? else { unreachable!() };
    let exact = match flower_kernel_exact(expr, disks) {
        Ok(k) => k,
        Err(Error::NotReduced) => {
            return Ok(Row { hypothesis: false, conclusion: false, witnesses: json!({ "shape": name, "reduced": false }) })
        }
        Err(e) => return Err(e),
    };
    let (region, frame, kernel) = if name == t.name {
        (t.region.clone(), t.frame, t.kernel.clone())
    } else {
        let region = t.scene.region(name)?;
        let frame = t.scene.frame(name, region.bbox(), t.scene.grid.resolution)?;
        let kernel = spindle_kernel_oracle(&region, t.lambda(), frame, ORACLE_SAMPLES, t.seed());
        (region, frame, kernel)
    };
    let _ = region;
    let exact_mask = GridMask::from_fn(frame, |p| exact.contains_fast(p));
    let gap = mask_hausdorff(&exact_mask, &kernel)?;
    Ok(Row {
        hypothesis: true,
        conclusion: gap <= Tolerance::default().eps_set(frame.cell),
        witnesses: json!({
            "shape": name,
            "reduced": true,
            "exact_cells": exact_mask.count(),
            "oracle_cells": kernel.count(),
            "gap_cells": cells(gap, &frame),
        }),
    })
}

fn spindle_peak(t: &Target) -> Result<Row> {
    let mut candidates: Vec<Point> = component_center(&t.kernel).into_iter().collect();
    candidates.extend(t.region.interior_samples(PEAK_CANDIDATES, t.seed()));
    let near_kernel = t.kernel.dilate(t.eps_set);
    let mut flagged = Vec::new();
    let mut outside = Vec::new();
    for (k, x) in candidates.iter().enumerate() {
        if is_spindle_peak(&t.region, *x, t.lambda(), PEAK_RADIUS_CELLS * t.frame.cell, 16, t.seed() + k as u64, t.frame)? {
            flagged.push(*x);
            if !near_kernel.at(*x) {
                outside.push(*x);
            }
        }
    }
    Ok(Row {
        hypothesis: !flagged.is_empty(),
        conclusion: outside.is_empty(),
        witnesses: json!({ "shape": t.name, "candidates": candidates.len(), "peaks": flagged, "outside_kernel": outside }),
    })
}

fn kernel_reach(t: &Target) -> Result<Row> {
    let mut far = t.region.corners();
    far.extend(Domain::boundary_points(&t.region, 512, t.seed()));
    let limit = 2.0 * t.lambda() + t.eps_set;
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for y in t.kernel.centers() {
        let reach = far.iter().map(|p| dist(y, *p)).fold(0.0, f64::max);
        worst = worst.max(reach);
        if reach > limit {
            violations += 1;
        }
    }
    Ok(Row {
        hypothesis: !t.kernel.is_empty(),
        conclusion: violations == 0,
        witnesses: json!({ "shape": t.name, "max_reach": worst, "limit": limit, "violations": violations }),
    })
}

fn family_helly(scene: &Scene) -> Result<Row> {
    let names = scene.region_names();
    if names.len() < 3 {
        return Ok(skipped("fewer than three regions"));
    }
    let family: Vec<ArcRegion> = names.iter().map(|n| scene.region(n)).collect::<Result<_>>()?;
    let mut b = family[0].bbox();
    for r in &family[1..] {
        b = b.union(&r.bbox());
    }
    let b = scene.grid.bbox.unwrap_or_else(|| b.expand(0.025 * b.width().max(b.height())));
    let frame = GridFrame::new(b, scene.grid.resolution)?;
    let k = TranslateBody::disk(2.0 * frame.cell);
    let r = verify_family_helly(&family, &k, scene.lambda, frame, scene.seed)?;
    Ok(Row {
        hypothesis: r.hypothesis_holds,
        conclusion: r.conclusion_holds,
        witnesses: json!({
            "members": names,
            "failing_triple": r.failing_triple,
            "translate": r.translate,
        }),
    })
}

fn gallery_polygon(scene: &Scene, target: &str) -> Option<String> {
    if matches!(scene.shape(target), Ok(ShapeSpec::Polygon(_))) {
        return Some(target.to_string());
    }
    scene.shapes.iter().find(|(_, s)| matches!(s, ShapeSpec::Polygon(_))).map(|(n, _)| n.clone())
}

fn guard_row(scene: &Scene, target: &str, spindle: bool) -> Result<Row> {
    let Some(treasures) = &scene.treasures else { return Ok(skipped("no treasures")) };
    let Some(name) = gallery_polygon(scene, target) else { return Ok(skipped("no polygon in scene")) };
    let ShapeSpec::Polygon(s) = scene.shape(&name)? else { unreachable!() };
    if let Some(p) = treasures.iter().find(|p| !s.contains(**p, crate::geom::EPS_GEOM)) {
        return Err(Error::OutsideDomain(*p));
    }
    let (holds, failing, guard, verified) = if spindle {
        let b = s.bbox();
        let frame = GridFrame::new(b.expand(0.025 * b.width().max(b.height())), scene.grid.resolution)?;
        let tr = match triple_condition_spindle(s, treasures, scene.lambda, frame) {
            Ok(tr) => tr,
            Err(Error::DiameterExceeded(d)) => {
                return Ok(Row { hypothesis: false, conclusion: false, witnesses: json!({ "shape": name, "diameter": d }) })
            }
            Err(e) => return Err(e),
        };
        let g = guard_spindle(s, treasures, scene.lambda, frame)?;
        let verified = match g.guard {
            Some(p) => treasures.iter().map(|a| sees_spindle(s, p, *a, scene.lambda, 1300)).collect::<Result<Vec<_>>>()?.iter().all(|b| *b),
            None => false,
        };
        (tr.holds, tr.failing_triple, g.guard, verified)
    } else {
        let tr = triple_condition_linear(s, treasures)?;
        let g = guard_linear(s, treasures)?;
        let verified = match g.guard {
            Some(p) => treasures.iter().map(|a| sees_linear(s, p, *a, 2)).collect::<Result<Vec<_>>>()?.iter().all(|b| *b),
            None => false,
        };
        (tr.holds, tr.failing_triple, g.guard, verified)
    };
    Ok(Row {
        hypothesis: holds,
        conclusion: guard.is_some() && verified,
        witnesses: json!({ "shape": name, "treasures": treasures.len(), "failing_triple": failing, "guard": guard }),
    })
}

fn maximal_subsets(t: &Target) -> Result<Row> {
    let res = MAXIMAL_RESOLUTION.min(t.scene.grid.resolution);
    let frame = t.scene.frame(t.name, t.region.bbox(), res)?;
    let r = verify_kernel_maximal_subsets(&t.region, t.lambda(), MAXIMAL_SEEDS, frame, t.seed())?;
    Ok(Row {
        hypothesis: true,
        conclusion: r.contains_kernel,
        witnesses: json!({
            "shape": t.name,
            "resolution": res,
            "subset_sizes": r.subset_sizes,
            "kernel_cells": r.kernel_cells,
            "intersection_cells": r.intersection_cells,
            "gap_cells": cells(r.hausdorff, &frame),
        }),
    })
}

/// Runs every row on `shape` (the scene's last shape when `None`).
/// Timings are recorded only when asked for, so repeated runs are identical.
pub fn run_suite(scene: &Scene, shape: Option<&str>, timings: bool) -> Result<Vec<Certificate>> {
    let name = match shape {
        Some(n) => n,
        None => scene
            .region_names()
            .last()
            .copied()
            .ok_or_else(|| Error::Scene { pointer: "/shapes".into(), message: "no region to verify".into() })?,
    };
    let region = scene.region(name)?;
    let frame = scene.frame(name, region.bbox(), scene.grid.resolution)?;
    let clock = Instant::now();
    let kernel = spindle_kernel_oracle(&region, scene.lambda, frame, ORACLE_SAMPLES, scene.seed);
    let oracle_time = clock.elapsed().as_secs_f64();
    let t = Target { scene, name, region, frame, kernel, eps_set: Tolerance::default().eps_set(frame.cell) };

    let mut out = Vec::new();
    for row in ROWS {
        let clock = Instant::now();
        let r = match row {
            "kernel-formula" => kernel_formula(&t),
            "three-point-condition" => three_point(&t),
            "translate-condition" => translate(&t),
            "flower-kernel" => flower_kernel(&t),
            "spindle-peak" => spindle_peak(&t),
            "kernel-reach" => kernel_reach(&t),
            "family-helly" => family_helly(scene),
            "guard-linear" => guard_row(scene, name, false),
            "guard-spindle" => guard_row(scene, name, true),
            "maximal-subsets" => maximal_subsets(&t),
            _ => unreachable!(),
        }?;
        let mut secs = clock.elapsed().as_secs_f64();
        if row == "kernel-formula" {
            secs += oracle_time;
        }
        out.push(Certificate {
            theorem: row.to_string(),
            hypothesis_holds: r.hypothesis,
            conclusion_holds: r.conclusion,
            witnesses: r.witnesses,
            timings: timings.then_some(secs),
        });
    }
    Ok(out)
}

/// Plain-text pass/fail table.
pub fn table(certs: &[Certificate]) -> String {
    let mut s = format!("{:<24} {:<11} {:<11} {}\n", "check", "hypothesis", "conclusion", "result");
    for c in certs {
        let verdict = if !c.hypothesis_holds && c.witnesses.get("skipped").is_some() {
            "skip"
        } else if c.passed() {
            "pass"
        } else {
            "FAIL"
        };
        s += &format!("{:<24} {:<11} {:<11} {}\n", c.theorem, c.hypothesis_holds, c.conclusion_holds, verdict);
    }
    s
}
