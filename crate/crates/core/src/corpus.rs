//! Fixed test shapes and seeded random instances.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Disk, Point, Tolerance};
use crate::polygon::{random_simple_polygon, SimplePolygon};
use crate::region::{disk_intersection, is_reduced_along_boundary, ArcRegion, FlowerExpr};
use crate::scene::{Scene, ShapeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Flower,
    Spindle,
    Spiked,
    PerturbedDisk,
}

#[derive(Clone, Debug)]
pub struct CorpusShape {
    pub name: String,
    pub kind: ShapeKind,
    pub region: ArcRegion,
    /// A point of the spindle kernel; grids are anchored here.
    pub anchor: Point,
    pub flower: Option<(FlowerExpr, Vec<Disk>)>,
    /// The shape as scene entries; the last one is the shape itself.
    pub specs: Vec<(String, ShapeSpec)>,
}

impl CorpusShape {
    fn build(name: &str, kind: ShapeKind, anchor: Point, specs: Vec<(String, ShapeSpec)>) -> Self {
        let region = Scene::new(specs.clone()).region(&specs.last().expect("specs").0).expect("corpus shape is valid");
        let flower = match &specs.last().expect("specs").1 {
            ShapeSpec::Flower { disks, expr } => Some((expr.clone(), disks.clone())),
            _ => None,
        };
        CorpusShape { name: name.into(), kind, region, anchor, flower, specs }
    }

    pub fn scene(&self) -> Scene {
        Scene::new(self.specs.clone())
    }
}

fn leaf(i: usize) -> FlowerExpr {
    FlowerExpr::Leaf(i)
}

fn cap(c: Vec<FlowerExpr>) -> FlowerExpr {
    FlowerExpr::Intersect(c)
}

fn cup(c: Vec<FlowerExpr>) -> FlowerExpr {
    FlowerExpr::Union(c)
}

fn ring(n: usize, r: f64, phase: f64) -> Vec<Disk> {
    (0..n).map(|k| Disk::unit(Point::from_angle(phase + TAU * k as f64 / n as f64) * r)).collect()
}

fn kernel_center(disks: &[Disk]) -> Point {
    disk_intersection(disks).bbox().center()
}

fn flower(name: &str, expr: FlowerExpr, disks: Vec<Disk>) -> CorpusShape {
    let anchor = kernel_center(&disks);
    CorpusShape::build(name, ShapeKind::Flower, anchor, vec![(name.into(), ShapeSpec::Flower { disks, expr })])
}

/// Star-shaped polygon `r(θ) = radius (1 + amp sin(kθ + phase))`.
pub fn perturbed_disk(radius: f64, amp: f64, k: u32, phase: f64, vertices: usize) -> SimplePolygon {
    let pts = (0..vertices)
        .map(|i| {
            let t = TAU * i as f64 / vertices as f64;
            Point::from_angle(t) * (radius * (1.0 + amp * (k as f64 * t + phase).sin()))
        })
        .collect();
    SimplePolygon::new(pts).expect("perturbed disk is simple")
}

/// Twenty shapes: eight flowers, three spindles, four spiked shapes and
/// five perturbed disks.
pub fn kernel_corpus() -> Vec<CorpusShape> {
    let mut out = vec![
        flower("flower-pair", FlowerExpr::union_all(2), vec![Disk::unit(Point::ORIGIN), Disk::unit(Point::new(1.0, 0.0))]),
        flower("flower-trefoil", FlowerExpr::union_all(3), ring(3, 0.45, 0.3)),
        flower("flower-reuleaux", FlowerExpr::intersect_all(3), ring(3, 0.55, 0.0)),
        flower("flower-cap-cup", cap(vec![leaf(0), cup(vec![leaf(1), leaf(2)])]), vec![
            Disk::unit(Point::ORIGIN),
            Disk::unit(Point::new(0.8, 0.6)),
            Disk::unit(Point::new(0.8, -0.6)),
        ]),
        flower("flower-quad", FlowerExpr::union_all(4), ring(4, 0.5, 0.2)),
        flower("flower-mixed-4", cup(vec![cap(vec![leaf(0), leaf(1)]), cap(vec![leaf(2), leaf(3)])]), ring(4, 0.6, 0.1)),
        flower("flower-penta", cup(vec![leaf(0), cap(vec![leaf(1), leaf(2)]), leaf(3), leaf(4)]), ring(5, 0.5, 0.0)),
        flower(
            "flower-hexa",
            cup(vec![cap(vec![leaf(0), leaf(3)]), cap(vec![leaf(1), leaf(4)]), cap(vec![leaf(2), leaf(5)])]),
            ring(6, 0.35, 0.4),
        ),
    ];
    for (name, x, y) in [
        ("spindle-short", Point::new(-0.4, 0.0), Point::new(0.4, 0.1)),
        ("spindle-long", Point::new(-0.9, -0.2), Point::new(0.8, 0.3)),
        ("spindle-wide", Point::new(0.0, -0.95), Point::new(0.1, 0.95)),
    ] {
        out.push(CorpusShape::build(name, ShapeKind::Spindle, x.midpoint(y), vec![(name.into(), ShapeSpec::Spindle(x, y))]));
    }

    let disk = ShapeSpec::Disk(Disk::unit(Point::ORIGIN));
    let pair = out[0].specs[0].1.clone();
    let blob = ShapeSpec::Polygon(perturbed_disk(0.85, 0.03, 5, 0.0, 120));
    let spiked = |name: &str, base: &ShapeSpec, x: Point, dirs: &[Point]| {
        let mut specs = vec![("base".to_string(), base.clone())];
        for (k, d) in dirs.iter().enumerate() {
            let prev = specs[k].0.clone();
            let label = if k + 1 == dirs.len() { name.to_string() } else { format!("spike-{}", k + 1) };
            specs.push((label, ShapeSpec::Spike { base: prev, center: x, direction: *d, overshoot: 0.05 }));
        }
        CorpusShape::build(name, ShapeKind::Spiked, x, specs)
    };
    out.push(spiked("spiked-disk", &disk, Point::ORIGIN, &[Point::new(1.0, 0.0)]));
    out.push(spiked("spiked-disk-offset", &disk, Point::new(0.2, 0.1), &[Point::new(1.0, 1.0)]));
    out.push(spiked("spiked-pair", &pair, Point::new(0.5, 0.0), &[Point::new(0.0, 1.0)]));
    out.push(spiked("spiked-star", &blob, Point::ORIGIN, &[Point::new(1.0, 0.0), Point::new(0.0, 1.0)]));

    for (k, (amp, lobes, phase)) in [(0.03, 5, 0.0), (0.04, 3, 0.5), (0.02, 7, 1.0), (0.05, 2, 0.3), (0.03, 4, 2.0)]
        .into_iter()
        .enumerate()
    {
        let name = format!("perturbed-disk-{}", k + 1);
        let poly = ShapeSpec::Polygon(perturbed_disk(0.8, amp, lobes, phase, 120));
        out.push(CorpusShape::build(&name, ShapeKind::PerturbedDisk, Point::ORIGIN, vec![(name.clone(), poly)]));
    }
    out
}

/// Random expression using each of `0..n` once, with alternating operators.
fn random_expr(idx: &mut [usize], intersect: bool, rng: &mut ChaCha8Rng) -> FlowerExpr {
    if idx.len() == 1 {
        return FlowerExpr::Leaf(idx[0]);
    }
    let parts = rng.gen_range(2..=idx.len());
    let mut cuts: Vec<usize> = (1..idx.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort();
    let mut children = Vec::new();
    let mut start = 0;
    for end in cuts.into_iter().chain([idx.len()]) {
        children.push(random_expr(&mut idx[start..end], !intersect, rng));
        start = end;
    }
    if intersect {
        FlowerExpr::Intersect(children)
    } else {
        FlowerExpr::Union(children)
    }
}

/// A random flower of 2 to 6 unit disks that is reduced along its boundary.
pub fn random_reduced_flower(seed: u64) -> (FlowerExpr, Vec<Disk>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=6);
        let disks: Vec<Disk> = (0..n)
            .map(|_| Disk::unit(Point::from_angle(rng.gen_range(0.0..TAU)) * (0.65 * rng.gen::<f64>().sqrt())))
            .collect();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let top = rng.gen::<bool>();
        let expr = random_expr(&mut idx, top, &mut rng);
        if disk_intersection(&disks).area() > 0.05 && is_reduced_along_boundary(&expr, &disks, &Tolerance::default()) {
            return (expr, disks);
        }
    }
}

/// Three to six disks and lenses scattered around the origin. Members are
/// spindle convex; whether they share a kernel depends on the draw.
pub fn random_family(seed: u64) -> Vec<ArcRegion> {
    let specs = random_family_specs(seed);
    let scene = Scene::new(specs.clone());
    specs.iter().map(|(n, _)| scene.region(n).expect("family member is bounded")).collect()
}

pub fn random_family_specs(seed: u64) -> Vec<(String, ShapeSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=6);
    (0..n)
        .map(|k| {
            let c = Point::from_angle(rng.gen_range(0.0..TAU)) * rng.gen_range(0.0..0.8);
            let spec = if rng.gen::<bool>() {
                ShapeSpec::Disk(Disk::new(c, rng.gen_range(0.6..1.0)))
            } else {
                let h = Point::from_angle(rng.gen_range(0.0..TAU)) * rng.gen_range(0.5..0.9);
                ShapeSpec::Spindle(c - h, c + h)
            };
            (format!("member-{}", k + 1), spec)
        })
        .collect()
}

/// Random simple polygon with 4 to 20 vertices and 1 to 8 treasures inside.
/// When `spindle` is set the polygon is scaled to diameter 1.9.
pub fn gallery_instance(seed: u64, spindle: bool) -> (SimplePolygon, Vec<Point>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=20);
    let mut s = random_simple_polygon(n, seed.wrapping_mul(7919).wrapping_add(1));
    if spindle {
        s = s.scaled(1.9 / s.diameter(), Point::ORIGIN);
    }
    let k = rng.gen_range(1..=8);
    let a = crate::domain::Domain::interior_samples(&s, k, seed);
    (s, a)
}

/// A gallery instance as a scene with its treasures.
pub fn gallery_scene(seed: u64, spindle: bool) -> Scene {
    let (s, a) = gallery_instance(seed, spindle);
    let mut scene = Scene::new(vec![("gallery".into(), ShapeSpec::Polygon(s))]);
    scene.treasures = Some(a);
    scene.seed = seed;
    scene
}
