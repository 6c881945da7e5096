//! Convex polygons: the geometric realization of support functions.
//!
//! Vertices are stored counterclockwise. Every constructor either validates
//! convexity or builds the polygon from a halfplane intersection, which is
//! convex by construction.

use std::f64::consts::PI;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Relative tolerance for merging vertices and dropping collinear ones.
pub const TOL_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

#[inline]
fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

#[inline]
pub fn direction(theta: f64) -> Vec2 {
    Vec2::new(theta.cos(), theta.sin())
}

impl ConvexPolygon {
    /// Builds a polygon from counterclockwise vertices, checking convexity.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let poly = Self::from_vertices_unchecked(vertices);
        let cleaned = poly.cleaned(TOL_GEOM * poly.scale().max(f64::MIN_POSITIVE));
        if cleaned.vertices.len() < 3 {
            return Err(Error::DegenerateShape("fewer than 3 distinct vertices".into()));
        }
        let n = cleaned.vertices.len();
        let tol = 1e-12 * cleaned.scale().powi(2);
        for i in 0..n {
            let a = cleaned.vertices[i];
            let b = cleaned.vertices[(i + 1) % n];
            let c = cleaned.vertices[(i + 2) % n];
            if cross(b - a, c - b) < -tol {
                return Err(Error::InvalidShape(format!("vertex {} is reflex", (i + 1) % n)));
            }
        }
        if cleaned.signed_area() <= 0.0 {
            return Err(Error::InvalidShape("vertices are not counterclockwise".into()));
        }
        Ok(cleaned)
    }

    fn from_vertices_unchecked(vertices: Vec<Vec2>) -> Self {
        Self { vertices }
    }

    /// Convex hull of a point set (Andrew's monotone chain).
    pub fn hull(points: &[Vec2]) -> Result<Self> {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
        pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
        if pts.len() < 3 {
            return Err(Error::DegenerateShape("hull needs 3 points".into()));
        }
        let mut lower: Vec<Vec2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 1] - lower[lower.len() - 2], p - lower[lower.len() - 1]) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Vec2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 1] - upper[upper.len() - 2], p - upper[upper.len() - 1]) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::new(lower)
    }

    /// Intersection of the halfplanes `x . (cos t, sin t) <= h` for each
    /// `(t, h)` pair. Directions must leave no angular gap of `pi` or more.
    pub fn from_halfplanes(planes: &[(f64, f64)]) -> Result<Self> {
        if planes.len() < 3 {
            return Err(Error::InvalidDiscretization("need at least 3 halfplanes".into()));
        }
        let mut angles: Vec<f64> = planes.iter().map(|p| p.0.rem_euclid(2.0 * PI)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut max_gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
        for w in angles.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        if max_gap >= PI - 1e-12 {
            return Err(Error::InvalidDiscretization("halfplane directions leave an unbounded gap".into()));
        }
        let hmax = planes.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(1e-300);
        let r = 4.0 * hmax / (max_gap / 2.0).cos();
        let mut poly = vec![Vec2::new(-r, -r), Vec2::new(r, -r), Vec2::new(r, r), Vec2::new(-r, r)];
        for &(t, h) in planes {
            poly = clip_halfplane(&poly, direction(t), h);
            if poly.len() < 3 {
                return Err(Error::DegenerateShape("empty halfplane intersection".into()));
            }
        }
        let out = Self::from_vertices_unchecked(poly).cleaned(TOL_GEOM * hmax);
        if out.vertices.len() < 3 || out.area() <= 1e-14 * hmax * hmax {
            return Err(Error::DegenerateShape("halfplane intersection has no interior".into()));
        }
        Ok(out)
    }

    /// Removes near-duplicate and collinear vertices.
    fn cleaned(&self, tol: f64) -> Self {
        let mut v: Vec<Vec2> = Vec::with_capacity(self.vertices.len());
        for &p in &self.vertices {
            if v.last().map_or(true, |q: &Vec2| (p - *q).norm() > tol) {
                v.push(p);
            }
        }
        while v.len() > 1 && (v[0] - v[v.len() - 1]).norm() <= tol {
            v.pop();
        }
        let mut changed = true;
        while changed && v.len() >= 3 {
            changed = false;
            let n = v.len();
            for i in 0..n {
                let a = v[(i + n - 1) % n];
                let b = v[i];
                let c = v[(i + 1) % n];
                let len = (c - a).norm().max(f64::MIN_POSITIVE);
                if cross(b - a, c - a).abs() / len <= tol {
                    v.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        Self { vertices: v }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| cross(a, b)).sum::<f64>() / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::zeros();
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let w = cross(p, q);
            a2 += w;
            c += (p + q) * w;
        }
        c / (3.0 * a2)
    }

    /// Largest vertex distance from the origin; used as a length scale.
    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn support(&self, theta: f64) -> f64 {
        let u = direction(theta);
        self.vertices.iter().map(|v| v.dot(&u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn width(&self, theta: f64) -> f64 {
        self.support(theta) + self.support(theta + PI)
    }

    pub fn diameter(&self) -> f64 {
        let n = self.vertices.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                d = d.max((self.vertices[i] - self.vertices[j]).norm());
            }
        }
        d
    }

    /// Endpoints of a diameter.
    pub fn diameter_endpoints(&self) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        let mut best = (0.0, 0, 0);
        for i in 0..n {
            for j in i + 1..n {
                let d = (self.vertices[i] - self.vertices[j]).norm();
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        (self.vertices[best.1], self.vertices[best.2])
    }

    /// Minimal width; attained in an edge-normal direction. Returns the width
    /// together with that normal angle.
    pub fn min_width_direction(&self) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        for (a, b) in self.edges() {
            let e = b - a;
            let nrm = Vec2::new(e.y, -e.x);
            let theta = nrm.y.atan2(nrm.x);
            let w = self.width(theta);
            if w < best.0 {
                best = (w, theta);
            }
        }
        best
    }

    pub fn min_width(&self) -> f64 {
        self.min_width_direction().0
    }

    pub fn contains_point(&self, p: Vec2, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            cross(e, p - a) >= -tol * e.norm()
        })
    }

    /// Signed distance from `p` to the boundary, positive inside.
    pub fn inner_distance(&self, p: Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                cross(e, p - a) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from an interior `center` to the boundary along direction `u`.
    pub fn radial(&self, center: Vec2, u: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            let nrm = Vec2::new(e.y, -e.x);
            let den = nrm.dot(&u);
            if den > 0.0 {
                let t = nrm.dot(&(a - center)) / den;
                if t < best {
                    best = t;
                }
            }
        }
        best
    }

    pub fn map(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Self> {
        let mut v: Vec<Vec2> = self.vertices.iter().map(|&p| f(p)).collect();
        let poly = Self::from_vertices_unchecked(v.clone());
        if poly.signed_area() < 0.0 {
            v.reverse();
        }
        Self::new(v)
    }

    pub fn translated(&self, t: Vec2) -> Self {
        Self::from_vertices_unchecked(self.vertices.iter().map(|p| p + t).collect())
    }

    pub fn scaled(&self, s: f64) -> Self {
        assert!(s > 0.0);
        Self::from_vertices_unchecked(self.vertices.iter().map(|p| p * s).collect())
    }

    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_vertices_unchecked(self.vertices.iter().map(|p| Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)).collect())
    }

    /// Vertical stretch `(x, y) -> (x, t y)`.
    pub fn stretched_y(&self, t: f64) -> Self {
        assert!(t > 0.0);
        Self::from_vertices_unchecked(self.vertices.iter().map(|p| Vec2::new(p.x, t * p.y)).collect())
    }

    /// Intersection with an axis-aligned box, `None` if it has no interior.
    pub fn clip_box(&self, min: Vec2, max: Vec2) -> Option<Self> {
        let mut poly = self.vertices.clone();
        for (n, c) in [
            (Vec2::new(1.0, 0.0), max.x),
            (Vec2::new(-1.0, 0.0), -min.x),
            (Vec2::new(0.0, 1.0), max.y),
            (Vec2::new(0.0, -1.0), -min.y),
        ] {
            poly = clip_halfplane(&poly, n, c);
            if poly.len() < 3 {
                return None;
            }
        }
        let out = Self::from_vertices_unchecked(poly).cleaned(TOL_GEOM * self.scale());
        (out.vertices.len() >= 3 && out.area() > 0.0).then_some(out)
    }

    /// Hausdorff distance between two convex bodies, i.e. the sup-norm of the
    /// difference of their support functions.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        let mut angles: Vec<f64> = (0..2048).map(|i| i as f64 * 2.0 * PI / 2048.0).collect();
        for poly in [self, other] {
            for (a, b) in poly.edges() {
                let e = b - a;
                angles.push((-e.x).atan2(e.y));
            }
        }
        angles.iter().map(|&t| (self.support(t) - other.support(t)).abs()).fold(0.0, f64::max)
    }

    /// How far `self` sticks out of `outer`: the largest support excess over
    /// the edge normals of `outer`. Nonpositive iff `self` lies inside.
    pub fn excess_over(&self, outer: &Self) -> f64 {
        outer
            .edges()
            .map(|(a, b)| {
                let e = b - a;
                let t = (-e.x).atan2(e.y);
                self.support(t) - outer.support(t)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Vertex list as CSV with an `x,y` header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for v in &self.vertices {
            s.push_str(&format!("{},{}\n", v.x, v.y));
        }
        s
    }

    /// Closed SVG path in user coordinates (y up is left to the caller).
    pub fn svg_path(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(if i == 0 { "M" } else { " L" });
            s.push_str(&format!("{:.6} {:.6}", v.x, v.y));
        }
        s.push_str(" Z");
        s
    }
}

/// One Sutherland-Hodgman step for the halfplane `n . x <= c`.
fn clip_halfplane(poly: &[Vec2], n: Vec2, c: f64) -> Vec<Vec2> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let dp = n.dot(&p) - c;
        let dq = n.dot(&q) - c;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let t = dp / (dp - dq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
    ConvexPolygon::new(vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)])
        .expect("rectangle with positive sides")
}

/// Regular polygon with `n` vertices on the circle of radius `r`.
pub fn regular(n: usize, r: f64, phase: f64) -> ConvexPolygon {
    let v = (0..n).map(|i| direction(phase + 2.0 * PI * i as f64 / n as f64) * r).collect();
    ConvexPolygon::new(v).expect("regular polygon")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_basics() {
        let sq = rectangle(-1.0, -1.0, 1.0, 1.0);
        assert_relative_eq!(sq.area(), 4.0);
        assert_relative_eq!(sq.diameter(), 8f64.sqrt());
        assert_relative_eq!(sq.min_width(), 2.0);
        assert_relative_eq!(sq.support(PI / 4.0), 2f64.sqrt(), epsilon = 1e-12);
        assert!(sq.centroid().norm() < 1e-14);
    }

    #[test]
    fn reflex_rejected() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.2), Vec2::new(1.0, 2.0)];
        assert!(matches!(ConvexPolygon::new(v), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn halfplanes_of_square() {
        let planes: Vec<(f64, f64)> = (0..4).map(|i| (i as f64 * PI / 2.0, 1.0)).collect();
        let p = ConvexPolygon::from_halfplanes(&planes).unwrap();
        assert_eq!(p.len(), 4);
        assert_relative_eq!(p.area(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_intersection_is_degenerate() {
        let planes = vec![(0.0, -1.0), (PI / 2.0, 1.0), (PI, -1.0), (3.0 * PI / 2.0, 1.0)];
        assert!(matches!(ConvexPolygon::from_halfplanes(&planes), Err(Error::DegenerateShape(_))));
    }

    #[test]
    fn clip_and_radial() {
        let sq = rectangle(0.0, 0.0, 2.0, 2.0);
        let q = sq.clip_box(Vec2::new(1.0, 1.0), Vec2::new(5.0, 5.0)).unwrap();
        assert_relative_eq!(q.area(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(sq.radial(Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0)), 1.0, epsilon = 1e-12);
        assert!(sq.clip_box(Vec2::new(3.0, 3.0), Vec2::new(4.0, 4.0)).is_none());
    }

    #[test]
    fn hausdorff_of_nested_squares() {
        let a = rectangle(-1.0, -1.0, 1.0, 1.0);
        let b = rectangle(-1.5, -1.0, 1.0, 1.0);
        assert_relative_eq!(a.hausdorff(&b), 0.5, epsilon = 1e-9);
    }
}
