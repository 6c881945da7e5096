//! Support functions of planar convex bodies.
//!
//! A body is encoded either by a truncated Fourier series
//! `f(t) = a0 + sum_k (a_k cos kt + b_k sin kt)` with coefficient vector
//! `(a0, a_1..a_N, b_1..b_N)`, or by samples `f_m = f(m tau)`, `m = 1..M`,
//! `tau = 2 pi / M`, linearly interpolated in between.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{direction, ConvexPolygon, Vec2};

/// Below this minimal width a body counts as collapsed to a segment.
pub const EPS_WIDTH: f64 = 1e-4;
/// Relative tolerance of the discrete convexity test.
pub const TOL_CONVEX: f64 = 1e-9;
/// Relative tolerance of inclusion and feasibility tests.
pub const TOL_FEAS: f64 = 1e-9;
/// Sampling used for builtin shapes and for Fourier reconstruction.
pub const DEFAULT_SAMPLES: usize = 512;

const DIAMETER_SCAN: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Fourier { coeffs: Vec<f64> },
    PiecewiseAffine { samples: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    repr: Representation,
}

impl SupportFunction {
    /// Fourier representation from `(a0, a_1..a_N, b_1..b_N)`.
    pub fn fourier(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 == 0 {
            return Err(Error::InvalidShape(format!("Fourier vector must have length 2N+1, got {}", coeffs.len())));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidShape("non-finite Fourier coefficient".into()));
        }
        Ok(Self { repr: Representation::Fourier { coeffs } })
    }

    /// Piecewise-affine representation from samples at `m tau`, `m = 1..M`.
    ///
    /// Samples must be nonnegative: the origin lies in the closed body.
    pub fn pwa(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::InvalidDiscretization(format!("piecewise-affine needs M >= 8, got {}", samples.len())));
        }
        if samples.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidShape("non-finite support sample".into()));
        }
        let scale = samples.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        if samples.iter().any(|&f| f < -TOL_FEAS * scale) {
            return Err(Error::InvalidShape("negative support sample: origin outside the body".into()));
        }
        Ok(Self { repr: Representation::PiecewiseAffine { samples } })
    }

    /// Same representation with new coefficients, without the sign check.
    pub(crate) fn with_coefficients_unchecked(&self, f: &[f64]) -> Self {
        let repr = match &self.repr {
            Representation::Fourier { .. } => Representation::Fourier { coeffs: f.to_vec() },
            Representation::PiecewiseAffine { .. } => Representation::PiecewiseAffine { samples: f.to_vec() },
        };
        Self { repr }
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// The coefficient vector `F`: Fourier coefficients or samples.
    pub fn coefficients(&self) -> &[f64] {
        match &self.repr {
            Representation::Fourier { coeffs } => coeffs,
            Representation::PiecewiseAffine { samples } => samples,
        }
    }

    pub fn is_fourier(&self) -> bool {
        matches!(self.repr, Representation::Fourier { .. })
    }

    /// Fourier order `N`, if Fourier.
    pub fn order(&self) -> Option<usize> {
        match &self.repr {
            Representation::Fourier { coeffs } => Some((coeffs.len() - 1) / 2),
            _ => None,
        }
    }

    /// Sample count `M`, if piecewise-affine.
    pub fn nodes(&self) -> Option<usize> {
        match &self.repr {
            Representation::PiecewiseAffine { samples } => Some(samples.len()),
            _ => None,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match &self.repr {
            Representation::Fourier { coeffs } => eval_fourier(coeffs, theta),
            Representation::PiecewiseAffine { samples } => {
                let m = samples.len();
                let tau = 2.0 * PI / m as f64;
                // sample index s holds angle (s + 1) tau
                let x = (theta.rem_euclid(2.0 * PI)) / tau - 1.0;
                let lo = x.floor();
                let t = x - lo;
                let i = (lo as i64).rem_euclid(m as i64) as usize;
                let j = (i + 1) % m;
                samples[i] * (1.0 - t) + samples[j] * t
            }
        }
    }

    /// Discrete `f + f''` at `theta`. For piecewise-affine bodies `theta` is
    /// rounded to the nearest node and the second difference is used.
    pub fn convexity_residual(&self, theta: f64) -> f64 {
        match &self.repr {
            Representation::Fourier { coeffs } => {
                let n = (coeffs.len() - 1) / 2;
                let mut r = coeffs[0];
                for k in 1..=n {
                    let kf = k as f64;
                    r += (1.0 - kf * kf) * (coeffs[k] * (kf * theta).cos() + coeffs[n + k] * (kf * theta).sin());
                }
                r
            }
            Representation::PiecewiseAffine { samples } => {
                let m = samples.len();
                let tau = 2.0 * PI / m as f64;
                let idx = ((theta.rem_euclid(2.0 * PI) / tau).round() as i64 - 1).rem_euclid(m as i64) as usize;
                pwa_residual(samples, idx, tau)
            }
        }
    }

    /// Residuals at the `M` sample angles `m 2pi/M` (piecewise-affine bodies
    /// always use their own nodes).
    pub fn convexity_residuals(&self, m: usize) -> Vec<f64> {
        match &self.repr {
            Representation::Fourier { .. } => (1..=m).map(|i| self.convexity_residual(node_angle(i, m))).collect(),
            Representation::PiecewiseAffine { samples } => {
                let tau = 2.0 * PI / samples.len() as f64;
                (0..samples.len()).map(|i| pwa_residual(samples, i, tau)).collect()
            }
        }
    }

    /// True when every discrete convexity residual is above `-TOL_CONVEX * scale`.
    pub fn is_convex(&self, m: usize) -> bool {
        let tol = TOL_CONVEX * self.scale();
        self.convexity_residuals(m).iter().all(|&r| r >= -tol)
    }

    /// Characteristic size: `a0` or the mean sample.
    pub fn scale(&self) -> f64 {
        match &self.repr {
            Representation::Fourier { coeffs } => coeffs[0].abs(),
            Representation::PiecewiseAffine { samples } => samples.iter().sum::<f64>() / samples.len() as f64,
        }
    }

    /// Angles at which halfplanes are taken when realizing the body.
    pub fn sample_angles(&self, m_out: usize) -> Vec<f64> {
        let m = self.nodes().unwrap_or(m_out);
        (1..=m).map(|i| node_angle(i, m)).collect()
    }

    /// Intersection of the halfplanes `x . u(t) <= f(t)` over the sample
    /// angles. Piecewise-affine bodies use their own nodes and ignore `m_out`.
    pub fn reconstruct_polygon(&self, m_out: usize) -> Result<ConvexPolygon> {
        if self.nodes().is_none() && m_out < 8 && m_out != 4 {
            return Err(Error::InvalidDiscretization(format!("M_out = {m_out} too small")));
        }
        let planes: Vec<(f64, f64)> = self.sample_angles(m_out).into_iter().map(|t| (t, self.eval(t))).collect();
        ConvexPolygon::from_halfplanes(&planes)
    }

    /// Like [`reconstruct_polygon`](Self::reconstruct_polygon) but reports a
    /// body thinner than [`EPS_WIDTH`] as [`Error::CollapsedShape`].
    pub fn realize(&self, m_out: usize) -> Result<ConvexPolygon> {
        let p = self.reconstruct_polygon(m_out)?;
        let w = p.min_width();
        if w < EPS_WIDTH {
            return Err(Error::CollapsedShape { width: w });
        }
        Ok(p)
    }

    pub fn width(&self, theta: f64) -> f64 {
        self.eval(theta) + self.eval(theta + PI)
    }

    /// `(value, angle)` of the extreme width, found by a dense scan refined by
    /// golden-section search.
    fn width_extremum(&self, maximize: bool) -> (f64, f64) {
        // a piecewise-affine support is exact only at its nodes; use its polygon
        if self.nodes().is_some() {
            if let Ok(poly) = self.reconstruct_polygon(0) {
                return if maximize {
                    let (p, q) = poly.diameter_endpoints();
                    let d = q - p;
                    (d.norm(), d.y.atan2(d.x).rem_euclid(PI))
                } else {
                    let (w, t) = poly.min_width_direction();
                    (w, t.rem_euclid(PI))
                };
            }
        }
        let sign = if maximize { -1.0 } else { 1.0 };
        let obj = |t: f64| sign * self.width(t);
        let step = PI / DIAMETER_SCAN as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..DIAMETER_SCAN {
            let t = i as f64 * step;
            let v = obj(t);
            if v < best.0 {
                best = (v, t);
            }
        }
        let (v, t) = golden_min(&obj, best.1 - step, best.1 + step, 1e-12);
        let (v, t) = if v <= best.0 { (v, t) } else { best };
        (sign * v, t.rem_euclid(PI))
    }

    pub fn diameter(&self) -> f64 {
        self.width_extremum(true).0
    }

    /// Direction (angle) in which the width equals the diameter.
    pub fn diameter_direction(&self) -> f64 {
        self.width_extremum(true).1
    }

    pub fn min_width(&self) -> f64 {
        self.width_extremum(false).0
    }

    /// Width in the direction orthogonal to the diameter.
    pub fn w_perp(&self) -> f64 {
        self.width(self.diameter_direction() + PI / 2.0)
    }

    /// Area of the realized polygon.
    pub fn area(&self, m_out: usize) -> Result<f64> {
        Ok(self.reconstruct_polygon(m_out)?.area())
    }

    /// Inclusion test `inner <= self + tol` at the comparison nodes: the
    /// nodes of any piecewise-affine operand, otherwise `DEFAULT_SAMPLES`.
    pub fn contains(&self, inner: &SupportFunction) -> bool {
        let tol = TOL_FEAS * self.scale().max(inner.scale());
        comparison_angles(self, inner).into_iter().all(|t| inner.eval(t) <= self.eval(t) + tol)
    }

    /// Support of the convex hull of the body and `points`, resampled into
    /// the same representation.
    pub fn hull_with_points(&self, points: &[Vec2]) -> Result<Self> {
        let g = |t: f64| {
            let u = direction(t);
            points.iter().map(|p| p.dot(&u)).fold(self.eval(t), f64::max)
        };
        match &self.repr {
            Representation::PiecewiseAffine { samples } => {
                let m = samples.len();
                Self::pwa((1..=m).map(|i| g(node_angle(i, m))).collect())
            }
            Representation::Fourier { coeffs } => {
                let n = (coeffs.len() - 1) / 2;
                Self::fourier(fit_fourier(g, n, DEFAULT_SAMPLES.max(8 * n + 8)))
            }
        }
    }

    pub fn to_pwa(&self, m: usize) -> Result<Self> {
        Self::pwa((1..=m).map(|i| self.eval(node_angle(i, m))).collect())
    }

    /// Least-squares Fourier fit of order `n` from uniform samples.
    pub fn to_fourier(&self, n: usize) -> Result<Self> {
        let samples = DEFAULT_SAMPLES.max(8 * n + 8);
        Self::fourier(fit_fourier(|t| self.eval(t), n, samples))
    }

    /// Support function of `s * body + t`.
    pub fn affine(&self, s: f64, t: Vec2) -> Result<Self> {
        assert!(s > 0.0);
        match &self.repr {
            Representation::Fourier { coeffs } => {
                let mut c: Vec<f64> = coeffs.iter().map(|x| x * s).collect();
                let n = (c.len() - 1) / 2;
                if n == 0 {
                    c = vec![c[0], t.x, t.y];
                } else {
                    c[1] += t.x;
                    c[n + 1] += t.y;
                }
                Self::fourier(c)
            }
            Representation::PiecewiseAffine { samples } => {
                let m = samples.len();
                Self::pwa(samples.iter().enumerate().map(|(i, f)| s * f + t.dot(&direction(node_angle(i + 1, m)))).collect())
            }
        }
    }

    // ---- builtin bodies ----

    pub fn disk(r: f64, center: Vec2) -> Result<Self> {
        Self::fourier(vec![r, center.x, center.y])
    }

    /// Sampled support of a convex polygon (or any point set's hull).
    /// The origin need not lie inside the hull.
    pub fn from_points(points: &[Vec2], m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidDiscretization(format!("piecewise-affine needs M >= 8, got {m}")));
        }
        if points.is_empty() {
            return Err(Error::InvalidShape("empty point set".into()));
        }
        let samples = (1..=m).map(|i| max_dot(points, direction(node_angle(i, m)))).collect();
        Ok(Self { repr: Representation::PiecewiseAffine { samples } })
    }

    pub fn from_polygon(poly: &ConvexPolygon, m: usize) -> Result<Self> {
        Self::from_points(poly.vertices(), m)
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let pts = [Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)];
        Self::from_points(&pts, DEFAULT_SAMPLES)
    }

    /// Square `[-h, h]^2`.
    pub fn square(half: f64) -> Result<Self> {
        Self::rectangle(-half, -half, half, half)
    }

    /// Reuleaux triangle of the given width, centered at its centroid.
    pub fn reuleaux(width: f64) -> Result<Self> {
        let r = width / 3f64.sqrt();
        let verts: Vec<Vec2> = (0..3).map(|i| direction(PI / 2.0 + 2.0 * PI * i as f64 / 3.0) * r).collect();
        let mut pts = Vec::new();
        let per_arc = 2000;
        for i in 0..3 {
            let c = verts[i];
            let a = verts[(i + 1) % 3] - c;
            let start = a.y.atan2(a.x);
            for j in 0..=per_arc {
                pts.push(c + direction(start + (PI / 3.0) * j as f64 / per_arc as f64) * width);
            }
        }
        Self::from_points(&pts, DEFAULT_SAMPLES)
    }

    /// Intersection of the unit disk with the concentric square whose four
    /// remaining circular arcs each have half-angle `theta` (`0` gives the
    /// inscribed square, `pi/4` the disk).
    pub fn disk_square_intersection(theta: f64, m: usize) -> Result<Self> {
        let theta = theta.clamp(0.0, PI / 4.0);
        let mut pts = Vec::new();
        let per_arc = 400;
        for c in 0..4 {
            let mid = PI / 4.0 + c as f64 * PI / 2.0;
            for j in 0..=per_arc {
                pts.push(direction(mid - theta + 2.0 * theta * j as f64 / per_arc as f64));
            }
        }
        Self::from_points(&pts, m)
    }

    pub fn to_json(&self, meta: serde_json::Value) -> Result<String> {
        let file = match &self.repr {
            Representation::Fourier { coeffs } => {
                ShapeFile { repr: "fourier".into(), coeffs: Some(coeffs.clone()), samples: None, meta }
            }
            Representation::PiecewiseAffine { samples } => {
                ShapeFile { repr: "pwa".into(), coeffs: None, samples: Some(samples.clone()), meta }
            }
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ShapeFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk shape: `{ "repr": "fourier"|"pwa", "coeffs"|"samples": [...], "meta": {...} }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ShapeFile {
    pub repr: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<Vec<f64>>,
    #[serde(default)]
    pub meta: serde_json::Value,
}

impl TryFrom<ShapeFile> for SupportFunction {
    type Error = Error;

    fn try_from(f: ShapeFile) -> Result<Self> {
        match (f.repr.as_str(), f.coeffs, f.samples) {
            ("fourier", Some(c), _) => SupportFunction::fourier(c),
            ("pwa", _, Some(s)) => SupportFunction::pwa(s),
            (r, _, _) => Err(Error::Serialization(format!("shape file: repr '{r}' without matching data"))),
        }
    }
}

impl Serialize for SupportFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let file = match &self.repr {
            Representation::Fourier { coeffs } => ShapeFile {
                repr: "fourier".into(),
                coeffs: Some(coeffs.clone()),
                samples: None,
                meta: serde_json::Value::Null,
            },
            Representation::PiecewiseAffine { samples } => ShapeFile {
                repr: "pwa".into(),
                coeffs: None,
                samples: Some(samples.clone()),
                meta: serde_json::Value::Null,
            },
        };
        file.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SupportFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ShapeFile::deserialize(d)?;
        f.try_into().map_err(serde::de::Error::custom)
    }
}

/// `theta_m = m 2pi / M`.
#[inline]
pub fn node_angle(m: usize, count: usize) -> f64 {
    m as f64 * 2.0 * PI / count as f64
}

fn max_dot(points: &[Vec2], u: Vec2) -> f64 {
    points.iter().map(|p| p.dot(&u)).fold(f64::NEG_INFINITY, f64::max)
}

fn pwa_residual(samples: &[f64], i: usize, tau: f64) -> f64 {
    let m = samples.len();
    let prev = samples[(i + m - 1) % m];
    let next = samples[(i + 1) % m];
    samples[i] + (next - 2.0 * samples[i] + prev) / (tau * tau)
}

fn eval_fourier(c: &[f64], theta: f64) -> f64 {
    let n = (c.len() - 1) / 2;
    let (s1, c1) = theta.sin_cos();
    let (mut ck, mut sk) = (1.0, 0.0);
    let mut v = c[0];
    for k in 1..=n {
        let nc = ck * c1 - sk * s1;
        let ns = sk * c1 + ck * s1;
        ck = nc;
        sk = ns;
        v += c[k] * ck + c[n + k] * sk;
    }
    v
}

fn fit_fourier(g: impl Fn(f64) -> f64, n: usize, samples: usize) -> Vec<f64> {
    let vals: Vec<(f64, f64)> = (1..=samples).map(|i| {
        let t = node_angle(i, samples);
        (t, g(t))
    }).collect();
    let mut c = vec![0.0; 2 * n + 1];
    let s = samples as f64;
    c[0] = vals.iter().map(|v| v.1).sum::<f64>() / s;
    for k in 1..=n {
        let kf = k as f64;
        c[k] = 2.0 / s * vals.iter().map(|(t, v)| v * (kf * t).cos()).sum::<f64>();
        c[n + k] = 2.0 / s * vals.iter().map(|(t, v)| v * (kf * t).sin()).sum::<f64>();
    }
    c
}

fn comparison_angles(a: &SupportFunction, b: &SupportFunction) -> Vec<f64> {
    let mut angles = Vec::new();
    for f in [a, b] {
        if let Some(m) = f.nodes() {
            angles.extend((1..=m).map(|i| node_angle(i, m)));
        }
    }
    if angles.is_empty() {
        angles.extend((1..=DEFAULT_SAMPLES).map(|i| node_angle(i, DEFAULT_SAMPLES)));
    }
    angles
}

/// Golden-section minimization on `[a, b]`; returns `(value, argmin)`.
pub fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = (a + b) / 2.0;
    (f(t), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_disk() -> SupportFunction {
        SupportFunction::disk(1.0, Vec2::zeros()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_relative_eq!(unit_disk().eval(1.234), 1.0);
        let sq = SupportFunction::square(1.0).unwrap();
        assert_relative_eq!(sq.eval(0.0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(sq.eval(PI / 4.0), 2f64.sqrt(), epsilon = 1e-12);
        let shifted = SupportFunction::disk(1.0, Vec2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(shifted.eval(0.0), 2.0);
    }

    #[test]
    fn convexity_examples() {
        assert_relative_eq!(unit_disk().convexity_residual(0.7), 1.0);
        let cos_only = SupportFunction::fourier(vec![0.0, 1.0, 0.0]).unwrap();
        for m in 1..=16 {
            assert_relative_eq!(cos_only.convexity_residual(node_angle(m, 16)), 0.0, epsilon = 1e-15);
        }
        let pwa = unit_disk().to_pwa(64).unwrap();
        for r in pwa.convexity_residuals(64) {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pwa_validation() {
        assert!(matches!(SupportFunction::pwa(vec![1.0; 7]), Err(Error::InvalidDiscretization(_))));
        assert!(matches!(SupportFunction::pwa(vec![-1.0; 8]), Err(Error::InvalidShape(_))));
        assert!(SupportFunction::fourier(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn widths() {
        let d = unit_disk();
        assert_relative_eq!(d.diameter(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(d.min_width(), 2.0, epsilon = 1e-12);
        let sq = SupportFunction::square(1.0).unwrap();
        assert_relative_eq!(sq.diameter(), 8f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(sq.min_width(), 2.0, epsilon = 1e-9);
        let eps = 0.01;
        let r = SupportFunction::rectangle(0.0, 0.0, 1.0, eps).unwrap();
        assert_relative_eq!(r.diameter(), (1.0 + eps * eps).sqrt(), epsilon = 1e-9);
        assert_relative_eq!(r.min_width(), eps, epsilon = 1e-9);
    }

    #[test]
    fn reconstruct_examples() {
        let p = unit_disk().reconstruct_polygon(128).unwrap();
        assert_eq!(p.len(), 128);
        let expect = 1.0 / (PI / 128.0).cos();
        for v in p.vertices() {
            assert_relative_eq!(v.norm(), expect, epsilon = 1e-12);
        }
        let sq = SupportFunction::fourier(vec![0.0, 0.0, 0.0]).unwrap();
        assert!(sq.reconstruct_polygon(16).is_err());
        let four = SupportFunction::square(1.0).unwrap().to_pwa(8).unwrap();
        let q = four.reconstruct_polygon(0).unwrap();
        assert_relative_eq!(q.area(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn collapse_reported() {
        let seg = SupportFunction::rectangle(-1.0, -1e-5, 1.0, 1e-5).unwrap();
        assert!(matches!(seg.realize(0), Err(Error::CollapsedShape { .. })));
    }

    #[test]
    fn area_and_contains() {
        let sq = SupportFunction::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(sq.area(512).unwrap(), 1.0, epsilon = 1e-6);
        let h = 2f64.sqrt() / 2.0;
        let inscribed = SupportFunction::square(h).unwrap();
        assert!(unit_disk().contains(&inscribed));
        assert!(!inscribed.contains(&unit_disk()));
    }

    #[test]
    fn hull_with_antipodal_points() {
        let d = unit_disk().to_pwa(512).unwrap();
        let h = d.hull_with_points(&[Vec2::new(1.93, 0.0), Vec2::new(-1.93, 0.0)]).unwrap();
        assert_relative_eq!(h.diameter(), 3.86, epsilon = 1e-9);
    }

    #[test]
    fn json_roundtrip() {
        let f = SupportFunction::fourier(vec![1.0, 0.1, 0.0, 0.2, -0.1]).unwrap();
        let s = f.to_json(serde_json::json!({"name": "test"})).unwrap();
        assert!(s.contains("\"repr\": \"fourier\""));
        assert_eq!(SupportFunction::from_json(&s).unwrap(), f);
    }

    #[test]
    fn disk_square_family_endpoints() {
        let sq = SupportFunction::disk_square_intersection(0.0, 512).unwrap();
        assert_relative_eq!(sq.area(0).unwrap(), 2.0, epsilon = 1e-9);
        let disk = SupportFunction::disk_square_intersection(PI / 4.0, 512).unwrap();
        assert_relative_eq!(disk.area(0).unwrap(), PI, epsilon = 1e-4);
    }
}
