use serde::{Deserialize, Serialize};

use super::{disk_intersection, ArcRegion, Solid};
use crate::error::{Error, Result};
use crate::geom::{Disk, Point, Tolerance};

/// Lattice polynomial over disks: each leaf names a disk by index, and every
/// index appears exactly once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowerExpr {
    Leaf(usize),
    Intersect(Vec<FlowerExpr>),
    Union(Vec<FlowerExpr>),
}

impl FlowerExpr {
    /// `B_0 ∩ … ∩ B_{n-1}` (a single leaf when `n == 1`).
    pub fn intersect_all(n: usize) -> FlowerExpr {
        Self::flat(n, FlowerExpr::Intersect)
    }

    /// `B_0 ∪ … ∪ B_{n-1}` (a single leaf when `n == 1`).
    pub fn union_all(n: usize) -> FlowerExpr {
        Self::flat(n, FlowerExpr::Union)
    }

    fn flat(n: usize, node: fn(Vec<FlowerExpr>) -> FlowerExpr) -> FlowerExpr {
        if n == 1 {
            FlowerExpr::Leaf(0)
        } else {
            node((0..n).map(FlowerExpr::Leaf).collect())
        }
    }

    /// Leaf indices in tree order.
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |i| out.push(i));
        out
    }

    fn walk(&self, f: &mut impl FnMut(usize)) {
        match self {
            FlowerExpr::Leaf(i) => f(*i),
            FlowerExpr::Intersect(cs) | FlowerExpr::Union(cs) => cs.iter().for_each(|c| c.walk(f)),
        }
    }

    /// Checks that each of the indices `0..n` occurs exactly once and that
    /// every internal node has at least two children.
    pub fn validate(&self, n: usize) -> Result<()> {
        self.check_arity()?;
        let mut seen = vec![false; n];
        for i in self.indices() {
            if i >= n {
                return Err(Error::InvalidFlower(format!("disk index {i} out of range (n = {n})")));
            }
            if seen[i] {
                return Err(Error::InvalidFlower(format!("disk index {i} used more than once")));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidFlower(format!("disk index {i} not used")));
        }
        Ok(())
    }

    fn check_arity(&self) -> Result<()> {
        match self {
            FlowerExpr::Leaf(_) => Ok(()),
            FlowerExpr::Intersect(cs) | FlowerExpr::Union(cs) => {
                if cs.len() < 2 {
                    return Err(Error::InvalidFlower("internal node with fewer than two children".into()));
                }
                cs.iter().try_for_each(|c| c.check_arity())
            }
        }
    }

    /// Direct lattice composition of disk memberships.
    pub fn contains(&self, disks: &[Disk], p: Point, eps: f64) -> bool {
        match self {
            FlowerExpr::Leaf(i) => disks[*i].contains(p, eps),
            FlowerExpr::Intersect(cs) => cs.iter().all(|c| c.contains(disks, p, eps)),
            FlowerExpr::Union(cs) => cs.iter().any(|c| c.contains(disks, p, eps)),
        }
    }

    pub fn to_solid(&self, disks: &[Disk]) -> Solid {
        match self {
            FlowerExpr::Leaf(i) => Solid::Disk(disks[*i]),
            FlowerExpr::Intersect(cs) => Solid::Intersect(cs.iter().map(|c| c.to_solid(disks)).collect()),
            FlowerExpr::Union(cs) => Solid::Union(cs.iter().map(|c| c.to_solid(disks)).collect()),
        }
    }

    fn is_pure_intersection(&self) -> bool {
        match self {
            FlowerExpr::Leaf(_) => true,
            FlowerExpr::Intersect(cs) => cs.iter().all(|c| c.is_pure_intersection()),
            FlowerExpr::Union(_) => false,
        }
    }
}

/// The flower `F(B_1, …, B_n)` as an arc region. Generators must be unit disks.
pub fn eval_flower(expr: &FlowerExpr, disks: &[Disk]) -> Result<ArcRegion> {
    if disks.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, d) in disks.iter().enumerate() {
        if (d.radius - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitGenerator { index, radius: d.radius });
        }
    }
    expr.validate(disks.len())?;
    Ok(match expr {
        FlowerExpr::Leaf(i) => ArcRegion::disk(disks[*i]),
        e if e.is_pure_intersection() => disk_intersection(disks),
        e => ArcRegion::from_solid(e.to_solid(disks)),
    })
}

/// Whether every generating circle carries a boundary arc longer than
/// `eps_set`, measured on a 256-cell grid over the flower's bounding box.
/// Invalid flowers are not reduced.
pub fn is_reduced_along_boundary(expr: &FlowerExpr, disks: &[Disk], tol: &Tolerance) -> bool {
    let Ok(r) = eval_flower(expr, disks) else {
        return false;
    };
    let b = r.bbox();
    if b.is_empty() {
        return false;
    }
    let threshold = tol.eps_set(b.width().max(b.height()) / 256.0);
    disks.iter().all(|d| r.arc_length_on(d) > threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(x: f64, y: f64) -> Disk {
        Disk::unit(Point::new(x, y))
    }

    #[test]
    fn lens_membership() {
        let r = eval_flower(&FlowerExpr::intersect_all(2), &[unit(0.0, 0.0), unit(1.0, 0.0)]).unwrap();
        assert!(r.contains(Point::new(0.5, 0.0)));
        assert!(!r.contains(Point::new(-0.5, 0.9)));
    }

    #[test]
    fn disjoint_union_has_two_loops() {
        let r = eval_flower(&FlowerExpr::union_all(2), &[unit(0.0, 0.0), unit(3.0, 0.0)]).unwrap();
        assert_eq!(r.loops().len(), 2);
        assert!(!r.contains(Point::new(1.5, 0.0)));
    }

    #[test]
    fn single_leaf_is_the_disk() {
        let r = eval_flower(&FlowerExpr::Leaf(0), &[unit(0.2, 0.1)]).unwrap();
        assert!((r.area() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejections() {
        let e = eval_flower(&FlowerExpr::Leaf(0), &[Disk::new(Point::ORIGIN, 2.0)]);
        assert_eq!(e, Err(Error::NonUnitGenerator { index: 0, radius: 2.0 }));
        let dup = FlowerExpr::Intersect(vec![FlowerExpr::Leaf(0), FlowerExpr::Leaf(0)]);
        assert!(matches!(dup.validate(1), Err(Error::InvalidFlower(_))));
        let unary = FlowerExpr::Union(vec![FlowerExpr::Leaf(0)]);
        assert!(matches!(unary.validate(1), Err(Error::InvalidFlower(_))));
        assert!(matches!(FlowerExpr::Leaf(0).validate(2), Err(Error::InvalidFlower(_))));
    }

    #[test]
    fn reducedness() {
        let tol = Tolerance::default();
        assert!(is_reduced_along_boundary(&FlowerExpr::intersect_all(2), &[unit(0.0, 0.0), unit(1.0, 0.0)], &tol));
        assert!(is_reduced_along_boundary(&FlowerExpr::union_all(2), &[unit(0.0, 0.0), unit(0.1, 0.0)], &tol));
        // Tangent disks meet in a single point: neither circle carries an arc.
        assert!(!is_reduced_along_boundary(&FlowerExpr::intersect_all(2), &[unit(0.0, 0.0), unit(2.0, 0.0)], &tol));
        // A lens swallowed by a third disk contributes no boundary.
        let e = FlowerExpr::Union(vec![
            FlowerExpr::Leaf(0),
            FlowerExpr::Intersect(vec![FlowerExpr::Leaf(1), FlowerExpr::Leaf(2)]),
        ]);
        assert!(!is_reduced_along_boundary(&e, &[unit(0.0, 0.0), unit(0.5, 0.0), unit(-0.5, 0.0)], &tol));
    }

    #[test]
    fn membership_matches_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let e = FlowerExpr::Intersect(vec![
            FlowerExpr::Leaf(0),
            FlowerExpr::Union(vec![FlowerExpr::Leaf(1), FlowerExpr::Leaf(2)]),
            FlowerExpr::Leaf(3),
        ]);
        let disks = [unit(0.0, 0.0), unit(0.8, 0.3), unit(-0.7, 0.4), unit(0.1, 0.6)];
        let r = eval_flower(&e, &disks).unwrap();
        for _ in 0..10_000 {
            let p = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if r.boundary_distance(p) < 1e-9 {
                continue;
            }
            assert_eq!(r.contains(p), e.contains(&disks, p, 0.0));
        }
    }
}
