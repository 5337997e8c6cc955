//! Cell-center rasterization and set distances between masks.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{convex_hull, dist, BBox, Point};

pub const MIN_RESOLUTION: usize = 16;

/// Square-cell grid covering a bounding box. `resolution` cells span the
/// longer side of the box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFrame {
    pub origin: Point,
    pub cell: f64,
    pub width: usize,
    pub height: usize,
}

impl GridFrame {
    pub fn new(bbox: BBox, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooLow(resolution));
        }
        let (w, h) = (bbox.width(), bbox.height());
        if bbox.is_empty() || !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
            return Err(Error::EmptyBox);
        }
        let cell = w.max(h) / resolution as f64;
        let width = ((w / cell) - 1e-9).ceil().max(1.0) as usize;
        let height = ((h / cell) - 1e-9).ceil().max(1.0) as usize;
        Ok(GridFrame { origin: bbox.min, cell, width, height })
    }

    /// Like [`GridFrame::new`] but shifted so that `anchor` is a cell center.
    /// The grid grows by one cell in each direction to keep covering the box.
    pub fn anchored(bbox: BBox, resolution: usize, anchor: Point) -> Result<Self> {
        let f = GridFrame::new(bbox, resolution)?;
        let shift = |o: f64, a: f64| {
            let k = ((a - o) / f.cell).floor();
            a - (k + 1.5) * f.cell
        };
        let origin = Point::new(shift(f.origin.x, anchor.x), shift(f.origin.y, anchor.y));
        Ok(GridFrame { origin, cell: f.cell, width: f.width + 2, height: f.height + 2 })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.cell,
            self.origin.y + (j as f64 + 0.5) * self.cell,
        )
    }

    /// Cell whose square contains `p`.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let fx = ((p.x - self.origin.x) / self.cell).floor();
        let fy = ((p.y - self.origin.y) / self.cell).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.width as f64 || fy >= self.height as f64 {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    pub fn bbox(&self) -> BBox {
        BBox::new(
            self.origin,
            self.origin + Point::new(self.width as f64 * self.cell, self.height as f64 * self.cell),
        )
    }

    pub fn cell_area(&self) -> f64 {
        self.cell * self.cell
    }

    fn same_as(&self, o: &GridFrame) -> bool {
        self.width == o.width
            && self.height == o.height
            && (self.cell - o.cell).abs() <= 1e-12 * self.cell
            && (self.origin.x - o.origin.x).abs() <= 1e-9 * self.cell
            && (self.origin.y - o.origin.y).abs() <= 1e-9 * self.cell
    }
}

/// Inside/outside bit per cell center, rows bottom to top.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMask {
    pub frame: GridFrame,
    bits: Vec<bool>,
}

impl GridMask {
    pub fn empty(frame: GridFrame) -> Self {
        GridMask { frame, bits: vec![false; frame.len()] }
    }

    pub fn full(frame: GridFrame) -> Self {
        GridMask { frame, bits: vec![true; frame.len()] }
    }

    /// Evaluates `f` at every cell center. Rows run in parallel; the result
    /// does not depend on the worker count.
    pub fn from_fn<F: Fn(Point) -> bool + Sync>(frame: GridFrame, f: F) -> Self {
        let mut bits = vec![false; frame.len()];
        bits.par_chunks_mut(frame.width).enumerate().for_each(|(j, row)| {
            for (i, b) in row.iter_mut().enumerate() {
                *b = f(frame.center(i, j));
            }
        });
        GridMask { frame, bits }
    }

    /// Like [`GridMask::from_fn`] with a per-row callback, for callers that
    /// can fill a whole row more cheaply than cell by cell.
    pub fn from_rows<F: Fn(usize, &mut [bool]) + Sync>(frame: GridFrame, f: F) -> Self {
        let mut bits = vec![false; frame.len()];
        bits.par_chunks_mut(frame.width).enumerate().for_each(|(j, row)| f(j, row));
        GridMask { frame, bits }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.frame.width + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = self.frame.width;
        self.bits[j * w + i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn row(&self, j: usize) -> &[bool] {
        let w = self.frame.width;
        &self.bits[j * w..(j + 1) * w]
    }

    /// Value of the cell containing `p`; outside the grid is outside.
    pub fn at(&self, p: Point) -> bool {
        self.frame.cell_of(p).is_some_and(|(i, j)| self.get(i, j))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn area(&self) -> f64 {
        self.count() as f64 * self.frame.cell_area()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.frame.width;
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(move |(k, _)| (k % w, k / w))
    }

    pub fn centers(&self) -> impl Iterator<Item = Point> + '_ {
        self.cells().map(|(i, j)| self.frame.center(i, j))
    }

    /// Largest distance between two inside cell centers; 0 with fewer than two.
    pub fn diameter(&self) -> f64 {
        let hull = convex_hull(&self.centers().collect::<Vec<_>>());
        let mut d: f64 = 0.0;
        for (k, p) in hull.iter().enumerate() {
            for q in &hull[k + 1..] {
                d = d.max(dist(*p, *q));
            }
        }
        d
    }

    fn zip(&self, o: &GridMask, f: impl Fn(bool, bool) -> bool) -> Result<GridMask> {
        if !self.frame.same_as(&o.frame) {
            return Err(Error::GridMismatch);
        }
        let bits = self.bits.iter().zip(&o.bits).map(|(a, b)| f(*a, *b)).collect();
        Ok(GridMask { frame: self.frame, bits })
    }

    pub fn and(&self, o: &GridMask) -> Result<GridMask> {
        self.zip(o, |a, b| a && b)
    }

    pub fn or(&self, o: &GridMask) -> Result<GridMask> {
        self.zip(o, |a, b| a || b)
    }

    pub fn and_not(&self, o: &GridMask) -> Result<GridMask> {
        self.zip(o, |a, b| a && !b)
    }

    /// Every inside cell of `self` is inside `o`.
    pub fn is_subset_of(&self, o: &GridMask) -> Result<bool> {
        Ok(self.and_not(o)?.is_empty())
    }

    /// 4-connected components, largest first.
    pub fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let (w, h) = (self.frame.width, self.frame.height);
        let mut seen = vec![false; self.bits.len()];
        let mut out = Vec::new();
        for start in 0..self.bits.len() {
            if !self.bits[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = Vec::new();
            let mut stack = vec![start];
            while let Some(k) = stack.pop() {
                let (i, j) = (k % w, k / w);
                comp.push((i, j));
                let mut push = |ni: usize, nj: usize| {
                    let nk = nj * w + ni;
                    if self.bits[nk] && !seen[nk] {
                        seen[nk] = true;
                        stack.push(nk);
                    }
                };
                if i > 0 {
                    push(i - 1, j);
                }
                if i + 1 < w {
                    push(i + 1, j);
                }
                if j > 0 {
                    push(i, j - 1);
                }
                if j + 1 < h {
                    push(i, j + 1);
                }
            }
            comp.sort_unstable_by_key(|&(i, j)| (j, i));
            out.push(comp);
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].1.cmp(&b[0].1)).then(a[0].0.cmp(&b[0].0)));
        out
    }

    /// Cells whose center lies within `r` of some inside cell center
    /// (`r < 0` erodes instead).
    pub fn dilate(&self, r: f64) -> GridMask {
        if r < 0.0 {
            let inv = GridMask { frame: self.frame, bits: self.bits.iter().map(|b| !b).collect() };
            let grown = inv.dilate(-r);
            return GridMask { frame: self.frame, bits: grown.bits.iter().map(|b| !b).collect() };
        }
        let d2 = squared_edt(self);
        let lim = (r / self.frame.cell).powi(2) + 1e-9;
        GridMask { frame: self.frame, bits: d2.iter().map(|d| *d <= lim).collect() }
    }

    /// Binary PGM (P5) image, top row first.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (w, h) = (self.frame.width, self.frame.height);
        let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
        for j in (0..h).rev() {
            out.extend(self.row(j).iter().map(|b| if *b { 255u8 } else { 0u8 }));
        }
        out
    }

    pub fn write_pgm(&self, path: &Path) -> std::io::Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_pgm())
    }
}

/// Rasterizes a membership predicate: a cell is inside iff its center is.
pub fn rasterize<F: Fn(Point) -> bool + Sync>(f: F, bbox: BBox, resolution: usize) -> Result<GridMask> {
    Ok(GridMask::from_fn(GridFrame::new(bbox, resolution)?, f))
}

/// Symmetric Hausdorff distance between the inside-cell sets, in length
/// units. Two empty masks are at distance 0, one empty mask is at infinity.
pub fn mask_hausdorff(a: &GridMask, b: &GridMask) -> Result<f64> {
    if !a.frame.same_as(&b.frame) {
        return Err(Error::GridMismatch);
    }
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(f64::INFINITY),
        _ => {}
    }
    let directed = |x: &GridMask, y: &GridMask| {
        let d = squared_edt(y);
        x.bits.iter().zip(&d).filter(|(b, _)| **b).map(|(_, d)| *d).fold(0.0, f64::max)
    };
    let h = directed(a, b).max(directed(b, a));
    Ok(h.sqrt() * a.frame.cell)
}

/// Squared distance, in cells, from every cell center to the nearest inside
/// cell center (separable exact transform).
pub fn squared_edt(m: &GridMask) -> Vec<f64> {
    let (w, h) = (m.frame.width, m.frame.height);
    let inf = 1e20;
    let mut grid: Vec<f64> = m.bits.iter().map(|b| if *b { 0.0 } else { inf }).collect();
    let mut f = vec![0.0; w.max(h)];
    let mut out = vec![0.0; w.max(h)];
    for j in 0..h {
        f[..w].copy_from_slice(&grid[j * w..(j + 1) * w]);
        edt_1d(&f[..w], &mut out[..w]);
        grid[j * w..(j + 1) * w].copy_from_slice(&out[..w]);
    }
    for i in 0..w {
        for j in 0..h {
            f[j] = grid[j * w + i];
        }
        edt_1d(&f[..h], &mut out[..h]);
        for j in 0..h {
            grid[j * w + i] = out[j];
        }
    }
    grid
}

fn edt_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let cross = |q: usize, p: usize| {
        ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64))
    };
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s = cross(q, v[k]);
        while s <= z[k] {
            k -= 1;
            s = cross(q, v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let diff = q as f64 - v[k] as f64;
        *dq = diff * diff + f[v[k]];
    }
}
