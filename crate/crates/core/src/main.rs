use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use spindlekit::corpus::{gallery_scene, kernel_corpus, random_family_specs};
use spindlekit::gallery::{guard_linear, guard_spindle, triple_condition_linear};
use spindlekit::geom::{BBox, Point, Tolerance};
use spindlekit::grid::{mask_hausdorff, GridFrame};
use spindlekit::kernel::{flower_kernel_exact, kernel_linear, spindle_kernel_krasnosselsky, spindle_kernel_oracle};
use spindlekit::region::ArcRegion;
use spindlekit::scene::{check_resolution, parse_scene, Scene, ShapeSpec};
use spindlekit::spindle::{make_spindle, spindle_hull_points, Hull, SpindleShape};
use spindlekit::suite::{run_suite, table};
use spindlekit::svg::Svg;
use spindlekit::theorems::ORACLE_SAMPLES;
use spindlekit::visibility::{spindle_visibility_mask, visibility_region_linear};
use spindlekit::Error;

const WIDTH: f64 = 640.0;

#[derive(Parser)]
#[command(name = "spindlekit", version, about = "Spindle convexity in the plane: hulls, kernels, guards and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw the spindle of a `spindle` shape or of the first two points of a point set.
    Spindle(Common),
    /// Ball hull of a point set or of a polygon's vertices.
    Hull(Common),
    /// Oracle and formula spindle kernels of a shape.
    Kernel(Common),
    /// Exact kernel of a flower.
    FlowerKernel(Common),
    /// Linear and spindle visibility from the first treasure.
    Visibility(Common),
    /// Single guards for the treasures of a polygon.
    Gallery(Common),
    /// Run every check on a shape and write certificates.json.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Record wall-clock seconds per check.
        #[arg(long)]
        timings: bool,
    },
    /// Write the built-in test shapes as scene files.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Grid cells along the longer side, 16 to 1024.
    #[arg(long)]
    resolution: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Shape to act on; defaults to the last one in the scene.
    #[arg(long)]
    shape: Option<String>,
}

enum Failure {
    Input(String),
    Run(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Scene { .. } | Error::OutOfRange { .. } | Error::BadRadius(_) | Error::InvalidPolygon(_) => {
                Failure::Input(e.to_string())
            }
            e => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    scene: Scene,
    out: PathBuf,
    shape: String,
}

impl Ctx {
    fn load(c: &Common) -> std::result::Result<Ctx, Failure> {
        let text = std::fs::read_to_string(&c.scene)
            .map_err(|e| Failure::Input(format!("{}: {e}", c.scene.display())))?;
        let mut scene = parse_scene(&text)?;
        if let Some(r) = c.resolution {
            scene.grid.resolution = check_resolution(r, "--resolution")?;
        }
        if let Some(s) = c.seed {
            scene.seed = s;
        }
        if let Some(l) = c.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Failure::Input(format!("--lambda must be positive, got {l}")));
            }
            scene.lambda = l;
        }
        let shape = match &c.shape {
            Some(n) => {
                scene.shape(n)?;
                n.clone()
            }
            None => scene.default_shape().to_string(),
        };
        std::fs::create_dir_all(&c.out)?;
        Ok(Ctx { scene, out: c.out.clone(), shape })
    }

    fn write(&self, file: &str, contents: &str) -> Outcome {
        std::fs::write(self.out.join(file), contents)?;
        Ok(())
    }

    fn write_json(&self, file: &str, v: &Value) -> Outcome {
        self.write(file, &(serde_json::to_string_pretty(v).expect("json") + "\n"))
    }

    fn region(&self) -> std::result::Result<ArcRegion, Failure> {
        Ok(self.scene.region(&self.shape)?)
    }

    fn frame(&self, r: &ArcRegion) -> std::result::Result<GridFrame, Failure> {
        Ok(self.scene.frame(&self.shape, r.bbox(), self.scene.grid.resolution)?)
    }

    fn view(&self, b: BBox) -> BBox {
        self.scene.grid.bbox.unwrap_or_else(|| b.expand(0.1 * b.width().max(b.height()).max(1e-6)))
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn cmd_spindle(ctx: &Ctx) -> Outcome {
    let (x, y) = match ctx.scene.shape(&ctx.shape)? {
        ShapeSpec::Spindle(x, y) => (*x, *y),
        ShapeSpec::Points(p) if p.len() >= 2 => (p[0], p[1]),
        _ => return Err(input(format!("shape {:?} is neither a spindle nor a point set of two or more points", ctx.shape))),
    };
    let s = make_spindle(x, y, ctx.scene.lambda)?;
    let kind = match s.shape {
        SpindleShape::Lens(..) => "lens",
        SpindleShape::Disk(_) => "disk",
        SpindleShape::Degenerate(_) => "point",
        SpindleShape::WholePlane => "plane",
    };
    let region = s.to_region();
    let b = BBox::of_points([x, y]);
    let view = ctx.view(region.as_ref().map(|r| r.bbox()).unwrap_or(b).union(&b).expand(if region.is_some() { 0.0 } else { 1.0 }));
    let mut svg = Svg::new(view, WIDTH);
    if let Some(r) = &region {
        svg.region(r, "#4c72b0", "#1f3b73", &format!("spindle, lambda = {}", ctx.scene.lambda));
    }
    svg.points(&[x, y], "#dd8452", "endpoints");
    ctx.write("spindle.svg", &svg.finish())?;
    ctx.write_json(
        "spindle.json",
        &json!({
            "x": x, "y": y, "lambda": ctx.scene.lambda, "kind": kind,
            "area": region.as_ref().map(|r| r.area()),
        }),
    )
}

fn cmd_hull(ctx: &Ctx) -> Outcome {
    let pts: Vec<Point> = match ctx.scene.shape(&ctx.shape)? {
        ShapeSpec::Points(p) => p.clone(),
        ShapeSpec::Polygon(p) => p.vertices().to_vec(),
        ShapeSpec::Spindle(x, y) => vec![*x, *y],
        _ => return Err(input(format!("shape {:?} has no point set to take the hull of", ctx.shape))),
    };
    let hull = spindle_hull_points(&pts, ctx.scene.lambda)?;
    let b = BBox::of_points(pts.iter().copied());
    let (region, centers) = match &hull {
        Hull::Region(h) => (Some(h.to_region()), h.centers.clone()),
        Hull::WholePlane => (None, Vec::new()),
    };
    let view = ctx.view(region.as_ref().map(|r| r.bbox().union(&b)).unwrap_or(b));
    let mut svg = Svg::new(view, WIDTH);
    if let Some(r) = &region {
        svg.region(r, "#55a868", "#2d6b3c", "ball hull");
    }
    svg.points(&pts, "#dd8452", "points");
    ctx.write("hull.svg", &svg.finish())?;
    ctx.write_json(
        "hull.json",
        &json!({
            "lambda": ctx.scene.lambda,
            "points": pts,
            "whole_plane": region.is_none(),
            "centers": centers,
            "area": region.as_ref().map(|r| r.area()),
        }),
    )
}

fn cmd_kernel(ctx: &Ctx) -> Outcome {
    let s = ctx.region()?;
    let frame = ctx.frame(&s)?;
    let (lambda, seed) = (ctx.scene.lambda, ctx.scene.seed);
    let oracle = spindle_kernel_oracle(&s, lambda, frame, ORACLE_SAMPLES, seed);
    let formula = spindle_kernel_krasnosselsky(&s, lambda, frame, ORACLE_SAMPLES, seed)?;
    let gap = mask_hausdorff(&oracle, &formula)?;
    let eps = Tolerance::default().eps_set(frame.cell);
    let linear = match ctx.scene.shape(&ctx.shape)? {
        ShapeSpec::Polygon(p) => kernel_linear(p),
        _ => None,
    };
    let mut svg = Svg::new(ctx.view(s.bbox()), WIDTH);
    svg.region(&s, "#cccccc", "#555555", &ctx.shape);
    svg.mask(&oracle, "#4c72b0", "spindle kernel, definition");
    svg.mask(&formula.and_not(&oracle)?, "#c44e52", "formula only");
    if let Some(k) = &linear {
        svg.region(&ArcRegion::polygon(k.clone()), "none", "#8172b3", "linear kernel");
    }
    ctx.write("kernel.svg", &svg.finish())?;
    ctx.write_json(
        "kernel.json",
        &json!({
            "shape": ctx.shape,
            "lambda": lambda,
            "resolution": ctx.scene.grid.resolution,
            "cell": frame.cell,
            "oracle_cells": oracle.count(),
            "formula_cells": formula.count(),
            "gap_cells": gap / frame.cell,
            "eps_set_cells": eps / frame.cell,
            "within_eps_set": gap <= eps,
            "linear_kernel": linear.as_ref().map(|k| k.vertices().to_vec()),
        }),
    )
}

fn cmd_flower_kernel(ctx: &Ctx) -> Outcome {
    let ShapeSpec::Flower { disks, expr } = ctx.scene.shape(&ctx.shape)? else {
        return Err(input(format!("shape {:?} is not a flower", ctx.shape)));
    };
    let s = ctx.region()?;
    let kernel = match flower_kernel_exact(expr, disks) {
        Ok(k) => Some(k),
        Err(Error::NotReduced) => None,
        Err(e) => return Err(e.into()),
    };
    let mut svg = Svg::new(ctx.view(s.bbox()), WIDTH);
    svg.region(&s, "#cccccc", "#555555", &ctx.shape);
    if let Some(k) = &kernel {
        svg.region(k, "#4c72b0", "#1f3b73", "kernel: intersection of all disks");
    }
    ctx.write("flower-kernel.svg", &svg.finish())?;
    ctx.write_json(
        "flower-kernel.json",
        &json!({
            "shape": ctx.shape,
            "reduced": kernel.is_some(),
            "kernel_area": kernel.as_ref().map(|k| k.area()),
            "kernel_bbox": kernel.as_ref().map(|k| { let b = k.bbox(); [b.min, b.max] }),
        }),
    )
}

fn treasures(ctx: &Ctx) -> std::result::Result<&[Point], Failure> {
    match &ctx.scene.treasures {
        Some(t) if !t.is_empty() => Ok(t),
        _ => Err(input("scene has no treasures")),
    }
}

fn cmd_visibility(ctx: &Ctx) -> Outcome {
    let s = ctx.region()?;
    let p = treasures(ctx)?[0];
    let frame = ctx.frame(&s)?;
    let mask = spindle_visibility_mask(&s, p, ctx.scene.lambda, frame)?;
    let linear = match ctx.scene.shape(&ctx.shape)? {
        ShapeSpec::Polygon(poly) => Some(visibility_region_linear(poly, p)?),
        _ => None,
    };
    let mut svg = Svg::new(ctx.view(s.bbox()), WIDTH);
    svg.region(&s, "#cccccc", "#555555", &ctx.shape);
    svg.mask(&mask, "#4c72b0", "spindle visibility");
    if let Some(v) = &linear {
        svg.region(&ArcRegion::polygon(v.clone()), "none", "#c44e52", "linear visibility");
    }
    svg.points(&[p], "#dd8452", "viewpoint");
    ctx.write("visibility.svg", &svg.finish())?;
    ctx.write_json(
        "visibility.json",
        &json!({
            "shape": ctx.shape,
            "viewpoint": p,
            "spindle_cells": mask.count(),
            "spindle_area": mask.area(),
            "linear_area": linear.as_ref().map(|v| v.area()),
        }),
    )
}

fn cmd_gallery(ctx: &Ctx) -> Outcome {
    let ShapeSpec::Polygon(poly) = ctx.scene.shape(&ctx.shape)? else {
        return Err(input(format!("shape {:?} is not a polygon", ctx.shape)));
    };
    let a = treasures(ctx)?;
    let linear = guard_linear(poly, a)?;
    let triple = triple_condition_linear(poly, a)?;
    let s = ArcRegion::polygon(poly.clone());
    let frame = ctx.frame(&s)?;
    let spindle = match guard_spindle(poly, a, ctx.scene.lambda, frame) {
        Ok(g) => json!({ "guard": g.guard, "failing_triple": g.failing_triple }),
        Err(Error::DiameterExceeded(d)) => json!({ "skipped": format!("diameter {d} exceeds 2 lambda") }),
        Err(e) => return Err(e.into()),
    };
    let mut svg = Svg::new(ctx.view(s.bbox()), WIDTH);
    svg.region(&s, "#cccccc", "#555555", &ctx.shape);
    svg.points(a, "#dd8452", "treasures");
    if let Some(g) = linear.guard {
        svg.points(&[g], "#4c72b0", "linear guard");
    }
    if let Some(g) = spindle.get("guard").and_then(|g| serde_json::from_value::<Point>(g.clone()).ok()) {
        svg.points(&[g], "#55a868", "spindle guard");
    }
    ctx.write("gallery.svg", &svg.finish())?;
    ctx.write_json(
        "gallery.json",
        &json!({
            "shape": ctx.shape,
            "treasures": a,
            "triple_condition": triple.holds,
            "linear": { "guard": linear.guard, "failing_triple": linear.failing_triple },
            "spindle": spindle,
        }),
    )
}

fn cmd_verify(ctx: &Ctx, timings: bool) -> Outcome {
    let certs = run_suite(&ctx.scene, Some(&ctx.shape), timings)?;
    ctx.write_json("certificates.json", &serde_json::to_value(&certs).expect("json"))?;
    print!("{}", table(&certs));
    if certs.iter().all(|c| c.passed()) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_corpus(out: &Path) -> Outcome {
    std::fs::create_dir_all(out)?;
    for c in kernel_corpus() {
        let mut scene = c.scene();
        scene.grid.resolution = 128;
        std::fs::write(out.join(format!("{}.json", c.name)), scene.to_json())?;
    }
    let mut family = Scene::new(random_family_specs(1));
    family.grid.resolution = 64;
    std::fs::write(out.join("family.json"), family.to_json())?;
    std::fs::write(out.join("gallery.json"), gallery_scene(1, true).to_json())?;
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("SPINDLEKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Corpus { out } => cmd_corpus(out),
        Command::Verify { common, timings } => Ctx::load(common).and_then(|c| cmd_verify(&c, *timings)),
        Command::Spindle(c) => Ctx::load(c).and_then(|c| cmd_spindle(&c)),
        Command::Hull(c) => Ctx::load(c).and_then(|c| cmd_hull(&c)),
        Command::Kernel(c) => Ctx::load(c).and_then(|c| cmd_kernel(&c)),
        Command::FlowerKernel(c) => Ctx::load(c).and_then(|c| cmd_flower_kernel(&c)),
        Command::Visibility(c) => Ctx::load(c).and_then(|c| cmd_visibility(&c)),
        Command::Gallery(c) => Ctx::load(c).and_then(|c| cmd_gallery(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
