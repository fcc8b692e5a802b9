//! Euclidean primitives: points, point clouds, segments, and set-to-set
//! distances (Hausdorff) shared by the rest of the crate.

use crate::error::{Error, Result};

/// A point in R^d. Coordinates are finite; the dimension is fixed per point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Point { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

pub fn euclidean_distance(p: &Point, q: &Point) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(distance_unchecked(p.coords(), q.coords()))
}

pub(crate) fn distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Straight segment between two points of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(a.dim(), b.dim()));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        distance_unchecked(self.a.coords(), self.b.coords())
    }

    /// Point at parameter t in [0, 1] along the segment.
    pub fn at(&self, t: f64) -> Point {
        let coords = self
            .a
            .coords()
            .iter()
            .zip(self.b.coords())
            .map(|(x, y)| x + t * (y - x))
            .collect();
        Point { coords }
    }
}

/// min over t in [0,1] of ||p - (a + t(b-a))||.
pub fn point_segment_distance(p: &Point, s: &Segment) -> Result<f64> {
    if p.dim() != s.a.dim() {
        return Err(Error::DimensionMismatch(p.dim(), s.a.dim()));
    }
    let a = s.a.coords();
    let b = s.b.coords();
    let mut dot_ap_ab = 0.0;
    let mut dot_ab_ab = 0.0;
    for i in 0..a.len() {
        let ab = b[i] - a[i];
        dot_ap_ab += (p.coords()[i] - a[i]) * ab;
        dot_ab_ab += ab * ab;
    }
    let t = if dot_ab_ab == 0.0 {
        0.0
    } else {
        (dot_ap_ab / dot_ab_ab).clamp(0.0, 1.0)
    };
    Ok(distance_unchecked(p.coords(), s.at(t).coords()))
}

/// Ordered, immutable list of points of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("point cloud"));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
        }
        Ok(PointCloud { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    let mut worst: f64 = 0.0;
    for p in a.iter() {
        let mut best = f64::INFINITY;
        for q in b.iter() {
            let d = distance_unchecked(p.coords(), q.coords());
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}
