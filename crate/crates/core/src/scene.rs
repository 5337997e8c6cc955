//! Scene files: named shapes, treasures, grid and seed, as JSON.
//!
//! ```json
//! {
//!   "lambda": 1,
//!   "shapes": {
//!     "d": {"disk": [[0, 0], 1]},
//!     "f": {"flower": {"disks": [[0, 0], [1, 0], [[0.5, 0.8], 1]], "expr": ["cap", 0, ["cup", 1, 2]]}},
//!     "p": {"polygon": [[0, 0], [2, 0], [2, 1], [0, 1]]},
//!     "s": {"spindle": [[-0.5, 0], [0.5, 0]]},
//!     "q": {"points": [[0, 0], [0.5, 0.2]]},
//!     "x": {"spike": {"base": "d", "center": [0, 0], "direction": [1, 0], "overshoot": 0.05}}
//!   },
//!   "treasures": [[0.1, 0.2]],
//!   "grid": {"bbox": [[-1.2, -1.2], [1.2, 1.2]], "resolution": 128},
//!   "seed": 7
//! }
//! ```

use std::fmt;

use serde::de::{IgnoredAny, MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geom::{BBox, Disk, Point};
use crate::grid::{GridFrame, MIN_RESOLUTION};
use crate::polygon::SimplePolygon;
use crate::region::{eval_flower, ArcRegion, FlowerExpr};
use crate::spindle::make_spindle;
use crate::theorems::spike_perturbation;

pub const MAX_RESOLUTION: usize = 1024;
pub const DEFAULT_RESOLUTION: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    Polygon(SimplePolygon),
    Disk(Disk),
    Flower { disks: Vec<Disk>, expr: FlowerExpr },
    Spindle(Point, Point),
    Points(Vec<Point>),
    /// `spike_perturbation` applied to an earlier shape.
    Spike { base: String, center: Point, direction: Point, overshoot: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub bbox: Option<BBox>,
    pub resolution: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub lambda: f64,
    /// In file order.
    pub shapes: Vec<(String, ShapeSpec)>,
    pub treasures: Option<Vec<Point>>,
    pub grid: GridSpec,
    pub seed: u64,
}

fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Scene { pointer: pointer.to_string(), message: message.into() }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn number(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| err(ptr, "expected a number"))
}

fn point(v: &Value, ptr: &str) -> Result<Point> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([x, y]) => Ok(Point::new(number(x, &format!("{ptr}/0"))?, number(y, &format!("{ptr}/1"))?)),
        _ => Err(err(ptr, "expected a point [x, y]")),
    }
}

fn points(v: &Value, ptr: &str) -> Result<Vec<Point>> {
    let arr = v.as_array().ok_or_else(|| err(ptr, "expected a list of points"))?;
    arr.iter().enumerate().map(|(k, p)| point(p, &format!("{ptr}/{k}"))).collect()
}

fn disk(v: &Value, ptr: &str) -> Result<Disk> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([c, r]) if c.is_array() => {
            let r = number(r, &format!("{ptr}/1"))?;
            if r <= 0.0 {
                return Err(err(&format!("{ptr}/1"), "radius must be positive"));
            }
            Ok(Disk::new(point(c, &format!("{ptr}/0"))?, r))
        }
        _ => Err(err(ptr, "expected a disk [[x, y], r]")),
    }
}

fn object<'a>(v: &'a Value, ptr: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| err(ptr, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(err(&format!("{ptr}/{}", escape(k)), "unknown field"));
    }
    Ok(obj)
}

/// `["cap", e, ...]`, `["cup", e, ...]` or a disk index.
pub fn parse_flower_expr(v: &Value, ptr: &str) -> Result<FlowerExpr> {
    if let Some(i) = v.as_u64() {
        return Ok(FlowerExpr::Leaf(i as usize));
    }
    let arr = v.as_array().ok_or_else(|| err(ptr, "expected a disk index or [\"cap\" | \"cup\", ...]"))?;
    let op = arr.first().and_then(Value::as_str).ok_or_else(|| err(&format!("{ptr}/0"), "expected \"cap\" or \"cup\""))?;
    if arr.len() < 3 {
        return Err(err(ptr, "an operator needs at least two operands"));
    }
    let children = arr[1..]
        .iter()
        .enumerate()
        .map(|(k, c)| parse_flower_expr(c, &format!("{ptr}/{}", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    match op {
        "cap" => Ok(FlowerExpr::Intersect(children)),
        "cup" => Ok(FlowerExpr::Union(children)),
        _ => Err(err(&format!("{ptr}/0"), format!("unknown operator {op:?}"))),
    }
}

pub fn flower_expr_to_json(e: &FlowerExpr) -> Value {
    match e {
        FlowerExpr::Leaf(i) => json!(i),
        FlowerExpr::Intersect(c) | FlowerExpr::Union(c) => {
            let tag = if matches!(e, FlowerExpr::Intersect(_)) { "cap" } else { "cup" };
            let mut out = vec![json!(tag)];
            out.extend(c.iter().map(flower_expr_to_json));
            Value::Array(out)
        }
    }
}

fn parse_shape(v: &Value, ptr: &str, earlier: &[(String, ShapeSpec)]) -> Result<ShapeSpec> {
    let obj = object(v, ptr, &["polygon", "disk", "flower", "spindle", "points", "spike"])?;
    if obj.len() != 1 {
        return Err(err(ptr, "expected exactly one of polygon, disk, flower, spindle, points, spike"));
    }
    let (kind, body) = obj.iter().next().expect("one entry");
    let ptr = format!("{ptr}/{kind}");
    match kind.as_str() {
        "polygon" => SimplePolygon::new(points(body, &ptr)?)
            .map(ShapeSpec::Polygon)
            .map_err(|e| err(&ptr, e.to_string())),
        "disk" => Ok(ShapeSpec::Disk(disk(body, &ptr)?)),
        "spindle" => match points(body, &ptr)?.as_slice() {
            [x, y] => Ok(ShapeSpec::Spindle(*x, *y)),
            _ => Err(err(&ptr, "expected two points")),
        },
        "points" => {
            let pts = points(body, &ptr)?;
            if pts.is_empty() {
                return Err(err(&ptr, "expected at least one point"));
            }
            Ok(ShapeSpec::Points(pts))
        }
        "flower" => {
            let f = object(body, &ptr, &["disks", "expr"])?;
            let dptr = format!("{ptr}/disks");
            let disks = f
                .get("disks")
                .ok_or_else(|| err(&dptr, "missing"))?
                .as_array()
                .ok_or_else(|| err(&dptr, "expected a list of disks"))?
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    let p = format!("{dptr}/{k}");
                    match d.as_array().map(|a| a.as_slice()) {
                        Some([c, _]) if c.is_array() => disk(d, &p),
                        _ => Ok(Disk::unit(point(d, &p)?)),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let eptr = format!("{ptr}/expr");
            let expr = match f.get("expr") {
                Some(e) => parse_flower_expr(e, &eptr)?,
                None => FlowerExpr::union_all(disks.len()),
            };
            expr.validate(disks.len()).map_err(|e| err(&eptr, e.to_string()))?;
            if let Some(k) = disks.iter().position(|d| (d.radius - 1.0).abs() > 1e-12) {
                return Err(err(&format!("{dptr}/{k}/1"), "flowers are built from unit disks"));
            }
            Ok(ShapeSpec::Flower { disks, expr })
        }
        "spike" => {
            let f = object(body, &ptr, &["base", "center", "direction", "overshoot"])?;
            let get = |k: &str| f.get(k).ok_or_else(|| err(&format!("{ptr}/{k}"), "missing"));
            let base = get("base")?
                .as_str()
                .ok_or_else(|| err(&format!("{ptr}/base"), "expected a shape name"))?
                .to_string();
            match earlier.iter().find(|(n, _)| *n == base) {
                None => return Err(err(&format!("{ptr}/base"), format!("no earlier shape named {base:?}"))),
                Some((_, ShapeSpec::Points(_))) => {
                    return Err(err(&format!("{ptr}/base"), "a point set has no region to perturb"))
                }
                Some(_) => {}
            }
            let overshoot = match f.get("overshoot") {
                Some(o) => number(o, &format!("{ptr}/overshoot"))?,
                None => 0.05,
            };
            Ok(ShapeSpec::Spike {
                base,
                center: point(get("center")?, &format!("{ptr}/center"))?,
                direction: point(get("direction")?, &format!("{ptr}/direction"))?,
                overshoot,
            })
        }
        _ => unreachable!(),
    }
}

/// Keys of the top-level `shapes` object in file order, duplicates kept.
struct ShapeKeys(Vec<String>);

impl<'de> Deserialize<'de> for ShapeKeys {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ShapeKeys;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<ShapeKeys, A::Error> {
                let mut keys = Vec::new();
                while let Some(k) = m.next_key::<String>()? {
                    m.next_value::<IgnoredAny>()?;
                    keys.push(k);
                }
                Ok(ShapeKeys(keys))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
struct TopKeys {
    shapes: Option<ShapeKeys>,
}

/// Parses and validates a scene.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let top = object(&v, "", &["lambda", "shapes", "treasures", "grid", "seed"])?;
    let order = serde_json::from_str::<TopKeys>(text)
        .ok()
        .and_then(|t| t.shapes)
        .map(|k| k.0)
        .unwrap_or_default();
    for (k, name) in order.iter().enumerate() {
        if order[..k].contains(name) {
            return Err(err(&format!("/shapes/{}", escape(name)), "duplicate shape name"));
        }
    }

    let lambda = match top.get("lambda") {
        Some(l) => number(l, "/lambda")?,
        None => 1.0,
    };
    if lambda <= 0.0 {
        return Err(err("/lambda", "must be positive"));
    }
    let shapes_v = top.get("shapes").ok_or_else(|| err("/shapes", "missing"))?;
    let shapes_obj = shapes_v.as_object().ok_or_else(|| err("/shapes", "expected an object"))?;
    if shapes_obj.is_empty() {
        return Err(err("/shapes", "expected at least one shape"));
    }
    let mut shapes: Vec<(String, ShapeSpec)> = Vec::new();
    for name in &order {
        let ptr = format!("/shapes/{}", escape(name));
        let spec = parse_shape(&shapes_obj[name], &ptr, &shapes)?;
        shapes.push((name.clone(), spec));
    }
    let treasures = top.get("treasures").map(|t| points(t, "/treasures")).transpose()?;
    let grid = match top.get("grid") {
        None => GridSpec { bbox: None, resolution: DEFAULT_RESOLUTION },
        Some(g) => {
            let g = object(g, "/grid", &["bbox", "resolution"])?;
            let bbox = match g.get("bbox") {
                None => None,
                Some(b) => match points(b, "/grid/bbox")?.as_slice() {
                    [lo, hi] if lo.x < hi.x && lo.y < hi.y => Some(BBox::new(*lo, *hi)),
                    _ => return Err(err("/grid/bbox", "expected [[xmin, ymin], [xmax, ymax]] with positive extent")),
                },
            };
            let resolution = match g.get("resolution") {
                None => DEFAULT_RESOLUTION,
                Some(r) => check_resolution(r.as_u64().ok_or_else(|| err("/grid/resolution", "expected an integer"))?, "/grid/resolution")?,
            };
            GridSpec { bbox, resolution }
        }
    };
    let seed = match top.get("seed") {
        None => 0,
        Some(s) => s.as_u64().ok_or_else(|| err("/seed", "expected a nonnegative integer"))?,
    };
    Ok(Scene { lambda, shapes, treasures, grid, seed })
}

pub fn check_resolution(r: u64, pointer: &str) -> Result<usize> {
    if !(MIN_RESOLUTION as u64..=MAX_RESOLUTION as u64).contains(&r) {
        return Err(Error::OutOfRange {
            pointer: pointer.to_string(),
            value: r as f64,
            min: MIN_RESOLUTION as f64,
            max: MAX_RESOLUTION as f64,
        });
    }
    Ok(r as usize)
}

fn pt(p: &Point) -> Value {
    json!([p.x, p.y])
}

fn shape_to_json(s: &ShapeSpec) -> Value {
    let disk = |d: &Disk| json!([pt(&d.center), d.radius]);
    match s {
        ShapeSpec::Polygon(p) => json!({ "polygon": p.vertices().iter().map(pt).collect::<Vec<_>>() }),
        ShapeSpec::Disk(d) => json!({ "disk": disk(d) }),
        ShapeSpec::Flower { disks, expr } => json!({
            "flower": { "disks": disks.iter().map(disk).collect::<Vec<_>>(), "expr": flower_expr_to_json(expr) }
        }),
        ShapeSpec::Spindle(x, y) => json!({ "spindle": [pt(x), pt(y)] }),
        ShapeSpec::Points(ps) => json!({ "points": ps.iter().map(pt).collect::<Vec<_>>() }),
        ShapeSpec::Spike { base, center, direction, overshoot } => json!({
            "spike": { "base": base, "center": pt(center), "direction": pt(direction), "overshoot": overshoot }
        }),
    }
}

impl Scene {
    /// A scene with the given shapes and default settings.
    pub fn new(shapes: Vec<(String, ShapeSpec)>) -> Self {
        Scene { lambda: 1.0, shapes, treasures: None, grid: GridSpec { bbox: None, resolution: DEFAULT_RESOLUTION }, seed: 0 }
    }

    /// JSON text that [`parse_scene`] reads back to an equal scene. Shape
    /// order survives because keys are written in order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out += &format!("  \"lambda\": {},\n  \"shapes\": {{\n", json!(self.lambda));
        for (k, (name, spec)) in self.shapes.iter().enumerate() {
            let sep = if k + 1 < self.shapes.len() { "," } else { "" };
            out += &format!("    {}: {}{}\n", json!(name), shape_to_json(spec), sep);
        }
        out += "  },\n";
        if let Some(t) = &self.treasures {
            out += &format!("  \"treasures\": {},\n", Value::Array(t.iter().map(pt).collect()));
        }
        let mut grid = Map::new();
        if let Some(b) = &self.grid.bbox {
            grid.insert("bbox".into(), json!([pt(&b.min), pt(&b.max)]));
        }
        grid.insert("resolution".into(), json!(self.grid.resolution));
        out += &format!("  \"grid\": {},\n  \"seed\": {}\n}}\n", Value::Object(grid), self.seed);
        out
    }

    pub fn shape(&self, name: &str) -> Result<&ShapeSpec> {
        self.shapes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| err("/shapes", format!("no shape named {name:?}")))
    }

    /// The shape commands act on when none is named: the last one.
    pub fn default_shape(&self) -> &str {
        &self.shapes.last().expect("scenes have shapes").0
    }

    /// The region a shape describes. Point sets have none.
    pub fn region(&self, name: &str) -> Result<ArcRegion> {
        let ptr = format!("/shapes/{}", escape(name));
        match self.shape(name)? {
            ShapeSpec::Polygon(p) => Ok(ArcRegion::polygon(p.clone())),
            ShapeSpec::Disk(d) => Ok(ArcRegion::disk(*d)),
            ShapeSpec::Flower { disks, expr } => eval_flower(expr, disks),
            ShapeSpec::Spindle(x, y) => make_spindle(*x, *y, self.lambda)?
                .to_region()
                .ok_or_else(|| err(&ptr, "spindle of points farther apart than 2 lambda is the whole plane")),
            ShapeSpec::Points(_) => Err(err(&ptr, "a point set is not a region")),
            ShapeSpec::Spike { base, center, direction, overshoot } => {
                spike_perturbation(&self.region(base)?, *center, *direction, *overshoot)
            }
        }
    }

    /// A point of the kernel worth putting on a cell center, if the shape has one.
    pub fn anchor(&self, name: &str) -> Option<Point> {
        match self.shape(name).ok()? {
            ShapeSpec::Spike { center, .. } => Some(*center),
            _ => None,
        }
    }

    /// Grid for a shape: the scene's box, or the shape's box grown by 5%.
    pub fn frame(&self, name: &str, bbox: BBox, resolution: usize) -> Result<GridFrame> {
        let b = self.grid.bbox.unwrap_or_else(|| bbox.expand(0.05 * bbox.width().max(bbox.height())));
        match self.anchor(name) {
            Some(a) => GridFrame::anchored(b, resolution, a),
            None => GridFrame::new(b, resolution),
        }
    }

    /// Names of the shapes that describe regions.
    pub fn region_names(&self) -> Vec<&str> {
        self.shapes.iter().filter(|(_, s)| !matches!(s, ShapeSpec::Points(_))).map(|(n, _)| n.as_str()).collect()
    }
}
