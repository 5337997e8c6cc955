//! Browser bindings: spindle outline, ball hull and flower kernel, each
//! returned as a standalone SVG document.

use serde_json::Value;
use wasm_bindgen::prelude::*;

use spindlekit::geom::{BBox, Point};
use spindlekit::kernel::flower_kernel_exact;
use spindlekit::region::eval_flower;
use spindlekit::scene::parse_flower_expr;
use spindlekit::spindle::{make_spindle, spindle_hull_points, Hull};
use spindlekit::svg::Svg;
use spindlekit::Error;

const WIDTH: f64 = 480.0;

fn fail(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn view(b: BBox) -> BBox {
    b.expand(0.15 * b.width().max(b.height()).max(0.5))
}

fn parse_points(json: &str) -> Result<Vec<Point>, JsValue> {
    serde_json::from_str::<Vec<[f64; 2]>>(json)
        .map(|v| v.into_iter().map(|[x, y]| Point::new(x, y)).collect())
        .map_err(|e| fail(format!("expected [[x, y], ...]: {e}")))
}

/// SVG of `spi_λ{(x1, y1), (x2, y2)}`.
#[wasm_bindgen]
pub fn spindle_svg(x1: f64, y1: f64, x2: f64, y2: f64, lambda: f64) -> Result<String, JsValue> {
    let (x, y) = (Point::new(x1, y1), Point::new(x2, y2));
    let s = make_spindle(x, y, lambda).map_err(fail)?;
    let ends = BBox::of_points([x, y]);
    let Some(region) = s.to_region() else {
        let mut svg = Svg::new(view(ends.expand(1.0)), WIDTH);
        svg.points(&[x, y], "#dd8452", "farther apart than 2 lambda: the spindle is the plane");
        return Ok(svg.finish());
    };
    let mut svg = Svg::new(view(region.bbox().union(&ends)), WIDTH);
    svg.region(&region, "#4c72b0", "#1f3b73", "spindle");
    svg.points(&[x, y], "#dd8452", "endpoints");
    Ok(svg.finish())
}

/// SVG of the ball hull of a JSON point list.
#[wasm_bindgen]
pub fn ball_hull_svg(points_json: &str, lambda: f64) -> Result<String, JsValue> {
    let pts = parse_points(points_json)?;
    let hull = spindle_hull_points(&pts, lambda).map_err(fail)?;
    let b = BBox::of_points(pts.iter().copied());
    match hull {
        Hull::Region(h) => {
            let region = h.to_region();
            let mut svg = Svg::new(view(region.bbox().union(&b)), WIDTH);
            svg.region(&region, "#55a868", "#2d6b3c", "ball hull");
            svg.points(&pts, "#dd8452", "points");
            Ok(svg.finish())
        }
        Hull::WholePlane => {
            let mut svg = Svg::new(view(b), WIDTH);
            svg.points(&pts, "#dd8452", "no disk of radius lambda holds them all: the hull is the plane");
            Ok(svg.finish())
        }
    }
}

/// SVG of a flower `{"disks": [[x, y], ...], "expr": ["cap", 0, ["cup", 1, 2]]}`
/// and its kernel, the intersection of all its disks.
#[wasm_bindgen]
pub fn flower_kernel_svg(flower_json: &str) -> Result<String, JsValue> {
    let v: Value = serde_json::from_str(flower_json).map_err(fail)?;
    let disks: Vec<spindlekit::geom::Disk> = parse_points(&v["disks"].to_string())?
        .into_iter()
        .map(spindlekit::geom::Disk::unit)
        .collect();
    let expr = parse_flower_expr(&v["expr"], "/expr").map_err(fail)?;
    let region = eval_flower(&expr, &disks).map_err(fail)?;
    let mut svg = Svg::new(view(region.bbox()), WIDTH);
    svg.region(&region, "#cccccc", "#555555", "flower");
    match flower_kernel_exact(&expr, &disks) {
        Ok(k) => svg.region(&k, "#4c72b0", "#1f3b73", "kernel"),
        Err(Error::NotReduced) => svg.points(&[], "#c44e52", "not reduced along its boundary: kernel formula does not apply"),
        Err(e) => return Err(fail(e)),
    }
    Ok(svg.finish())
}
