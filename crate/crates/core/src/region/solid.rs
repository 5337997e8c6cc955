use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geom::{BBox, Disk, Point};
use crate::polygon::SimplePolygon;

/// Membership description of a closed planar set built from disks, polygons
/// and points with unions and intersections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solid {
    Empty,
    Plane,
    Point(Point),
    Disk(Disk),
    Polygon(Arc<SimplePolygon>),
    Union(Vec<Solid>),
    Intersect(Vec<Solid>),
}

impl Solid {
    /// Closed membership with `eps` slack on every primitive.
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        match self {
            Solid::Empty => false,
            Solid::Plane => true,
            Solid::Point(q) => (p - *q).norm2() <= eps * eps,
            Solid::Disk(d) => d.contains(p, eps),
            Solid::Polygon(poly) => poly.contains(p, eps),
            Solid::Union(cs) => cs.iter().any(|c| c.contains_shallow(p, eps)),
            Solid::Intersect(cs) => cs.iter().all(|c| c.contains_shallow(p, eps)),
        }
    }

    /// `contains` with disk children decided without a recursive call.
    #[inline(always)]
    fn contains_shallow(&self, p: Point, eps: f64) -> bool {
        match self {
            Solid::Disk(d) => d.contains(p, eps),
            other => other.contains(p, eps),
        }
    }

    /// Bounding box; `None` for unbounded solids.
    pub fn bbox(&self) -> Option<BBox> {
        match self {
            Solid::Empty => Some(BBox::empty()),
            Solid::Plane => None,
            Solid::Point(p) => Some(BBox::new(*p, *p)),
            Solid::Disk(d) => Some(d.bbox()),
            Solid::Polygon(poly) => Some(poly.bbox()),
            Solid::Union(cs) => {
                let mut b = BBox::empty();
                for c in cs {
                    b = b.union(&c.bbox()?);
                }
                Some(b)
            }
            Solid::Intersect(cs) => {
                let mut b: Option<BBox> = None;
                for c in cs {
                    if let Some(cb) = c.bbox() {
                        b = Some(match b {
                            Some(b) => b.intersection(&cb),
                            None => cb,
                        });
                    }
                }
                b
            }
        }
    }

    pub(crate) fn collect_primitives<'a>(
        &'a self,
        disks: &mut Vec<Disk>,
        polys: &mut Vec<&'a SimplePolygon>,
        points: &mut Vec<Point>,
    ) {
        match self {
            Solid::Empty | Solid::Plane => {}
            Solid::Point(p) => points.push(*p),
            Solid::Disk(d) => disks.push(*d),
            Solid::Polygon(poly) => polys.push(poly),
            Solid::Union(cs) | Solid::Intersect(cs) => {
                for c in cs {
                    c.collect_primitives(disks, polys, points);
                }
            }
        }
    }
}
