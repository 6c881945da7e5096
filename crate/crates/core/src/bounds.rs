//! Lower and upper bounds for Neumann eigenvalues of convex domains, the
//! constants built from them, and an inequality checker.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigen::{mu_k, EvalOptions, Spectrum};
use crate::error::{Error, Result};
use crate::polygon::{ConvexPolygon, Vec2};
use crate::reference::{bessel_root, j01, RootKind};
use crate::support::{SupportFunction, DEFAULT_SAMPLES};

/// Default value of the constant in the improved Payne-Weinberger estimate.
pub const DEFAULT_C: f64 = 6.0;
/// Relative slack for comparisons against discrete eigenvalues.
pub const TOL_FEM: f64 = 0.01;

/// `pi^2 / diam^2`, strictly below `mu_1`.
pub fn payne_weinberger(shape: &SupportFunction) -> f64 {
    PI * PI / shape.diameter().powi(2)
}

/// `(2 j_{0,1} + (k-1) pi)^2 / diam^2`, an upper bound for `mu_k`.
pub fn diameter_upper(shape: &SupportFunction, k: usize) -> f64 {
    diameter_upper_from(shape.diameter(), k)
}

fn diameter_upper_from(diam: f64, k: usize) -> f64 {
    (2.0 * j01() + (k as f64 - 1.0) * PI).powi(2) / (diam * diam)
}

/// Partition bound: split the bounding box of the body (in a given frame)
/// into an `N x N` grid with `N = floor(sqrt(k))` and return
/// `pi^2 / max diam^2(piece)` over the nonempty clipped pieces. The frame
/// aligned with a diameter and a fan of fixed rotations are tried; the best
/// (largest) certified value is returned. Each cell has diameter at most
/// `sqrt(2) diam / N`.
pub fn buser_grid_lower(shape: &SupportFunction, k: usize) -> Result<f64> {
    let poly = shape.reconstruct_polygon(DEFAULT_SAMPLES)?;
    Ok(buser_grid_lower_polygon(&poly, k))
}

const BUSER_FRAMES: usize = 16;

pub fn buser_grid_lower_polygon(poly: &ConvexPolygon, k: usize) -> f64 {
    let n = ((k as f64).sqrt().floor() as usize).max(1);
    let (p, q) = poly.diameter_endpoints();
    let d = q - p;
    let mut angles = vec![d.y.atan2(d.x)];
    angles.extend((0..BUSER_FRAMES).map(|i| i as f64 * PI / (2.0 * BUSER_FRAMES as f64)));
    angles.into_iter().map(|a| grid_bound(&poly.rotated(-a), n)).fold(0.0, f64::max)
}

fn grid_bound(poly: &ConvexPolygon, n: usize) -> f64 {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in poly.vertices() {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    let cell = (hi - lo) / n as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = lo + Vec2::new(i as f64 * cell.x, j as f64 * cell.y);
            if let Some(piece) = poly.clip_box(a, a + cell) {
                worst = worst.max(piece.diameter());
            }
        }
    }
    PI * PI / (worst * worst)
}

/// The constant `C_k` of the lower bound `mu_k >= C_k / diam^2`, `k >= 2`.
pub fn c_k(k: usize, c: f64) -> Result<f64> {
    let pi2 = PI * PI;
    match k {
        0 | 1 => Err(Error::Unsupported("C_k is defined for k >= 2; use payne_weinberger for k = 1".into())),
        2 => Ok(pi2 / 2.0 * (1.0 + (1.0 + 7.0 * c / (2.0 * pi2) + c * c / (16.0 * pi2 * pi2)).sqrt()) - c / 8.0),
        3 => Ok(pi2 / 2.0 * (1.0 + (1.0 + 34.0 * c / (9.0 * pi2) + c * c / (81.0 * pi2 * pi2)).sqrt()) - c / 18.0),
        _ => {
            let n = (k as f64).sqrt().floor();
            Ok(n * n * pi2 / 2.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MkBounds {
    pub lower: f64,
    pub upper: f64,
    /// Lower value before clamping.
    pub raw_lower: f64,
    /// True when `raw_lower > upper` and the lower end was clamped.
    pub clamped: bool,
    pub c: f64,
}

/// Interval for `M_k = inf J_k`. For `k = 1` both ends equal
/// `pi^2 / (4 j_{0,1}^2)`.
pub fn m_k_bounds(k: usize, c: f64) -> Result<MkBounds> {
    if k == 0 {
        return Err(Error::Unsupported("k must be at least 1".into()));
    }
    let j = j01();
    if k == 1 {
        let v = PI * PI / (4.0 * j * j);
        return Ok(MkBounds { lower: v, upper: v, raw_lower: v, clamped: false, c });
    }
    let den = (2.0 * j + (k as f64 - 1.0) * PI).powi(2);
    let upper = (k * k) as f64 * PI * PI / den;
    let raw_lower = c_k(k, c)? * PI * PI / den;
    let clamped = raw_lower > upper;
    Ok(MkBounds { lower: raw_lower.min(upper), upper, raw_lower, clamped, c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Existence {
    Satisfied,
    NotSatisfied,
}

/// Whether `candidate` inside `d` certifies `mu_k(candidate) <= k^2 pi^2 / diam^2(d)`.
pub fn existence_criterion(
    d: &SupportFunction,
    candidate: &SupportFunction,
    k: usize,
    opts: &EvalOptions,
) -> Result<Existence> {
    if !d.contains(candidate) {
        return Err(Error::NotContained);
    }
    let threshold = (k * k) as f64 * PI * PI / d.diameter().powi(2);
    let mu = mu_k(candidate, k, opts)?;
    Ok(if mu <= threshold * (1.0 + TOL_FEM) { Existence::Satisfied } else { Existence::NotSatisfied })
}

/// `8 diam / (pi w)` with `w` the minimal width. Since `w` never exceeds the
/// width orthogonal to a diameter, this is a valid (possibly weaker) bound on
/// the existence threshold; see [`k0_bound_sharp`].
pub fn k0_bound(d: &SupportFunction) -> f64 {
    8.0 * d.diameter() / (PI * d.min_width())
}

/// `8 diam / (pi w_perp)` with `w_perp` the width orthogonal to a diameter.
pub fn k0_bound_sharp(d: &SupportFunction) -> f64 {
    8.0 * d.diameter() / (PI * d.w_perp())
}

/// `1 / (16 (L^2 + 1) max((a + b)^2, c^2))`.
pub fn cusp_poincare_lower(a: f64, b: f64, c: f64, lip: f64) -> f64 {
    1.0 / (16.0 * (lip * lip + 1.0) * ((a + b).powi(2)).max(c * c))
}

/// Parameters of the cusp region cut off by the two tangents from an
/// exterior point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspConfiguration {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lipschitz: f64,
}

impl CuspConfiguration {
    /// `p` is a boundary point of `d`; `q` lies outside `d` on the exterior
    /// normal through `p`. The tangent lines from `q` touch `d` at abscissae
    /// `-a` and `b` in the frame where `p` is the origin and the normal is
    /// vertical.
    pub fn from_polygon(d: &ConvexPolygon, p: Vec2, q: Vec2) -> Result<Self> {
        let scale = d.diameter();
        let tol = 1e-9 * scale;
        if d.contains_point(q, tol) {
            return Err(Error::InvalidShape("exterior point lies inside the domain".into()));
        }
        let c = (q - p).norm();
        let n = (q - p) / c;
        let t = Vec2::new(n.y, -n.x);
        if d.vertices().iter().any(|v| (v - p).dot(&n) > tol) {
            return Err(Error::InvalidShape("q - p is not an exterior normal at p".into()));
        }
        let (mut s_plus, mut b) = (f64::NEG_INFINITY, 0.0);
        let (mut s_minus, mut a) = (f64::INFINITY, 0.0);
        for v in d.vertices() {
            let x = (v - p).dot(&t);
            let y = (v - p).dot(&n) - c;
            if x > tol {
                let s = y / x;
                if s > s_plus {
                    s_plus = s;
                    b = x;
                }
            } else if x < -tol {
                let s = y / x;
                if s < s_minus {
                    s_minus = s;
                    a = -x;
                }
            }
        }
        if !s_plus.is_finite() || !s_minus.is_finite() {
            return Err(Error::InvalidShape("tangent construction failed: domain on one side of the normal".into()));
        }
        Ok(Self { a, b, c, lipschitz: s_plus.abs().max(s_minus.abs()) })
    }

    pub fn lower_bound(&self) -> f64 {
        cusp_poincare_lower(self.a, self.b, self.c, self.lipschitz)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl InequalityCheck {
    fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { name: name.into(), lhs, rhs, pass: lhs <= rhs * (1.0 + TOL_FEM) }
    }
}

/// Checks every available bound against a computed spectrum of `shape`.
pub fn inequality_suite(shape: &SupportFunction, spectrum: &Spectrum) -> Result<Vec<InequalityCheck>> {
    let poly = shape.reconstruct_polygon(DEFAULT_SAMPLES)?;
    let diam = poly.diameter();
    let area = poly.area();
    let width = poly.min_width();
    let mu1 = spectrum.values[1];
    let jp11 = bessel_root(1, 1, RootKind::ZeroOfJPrime);
    let mut checks = vec![
        InequalityCheck::le("payne_weinberger", PI * PI / (diam * diam), mu1),
        InequalityCheck::le("szego_weinberger", area * mu1, PI * jp11 * jp11),
        InequalityCheck::le("hll_width", mu1, PI * PI * width * width / (area * area)),
    ];
    for k in 1..=spectrum.kmax() {
        let mu = spectrum.values[k];
        checks.push(InequalityCheck::le(format!("diameter_upper_k{k}"), mu, diameter_upper_from(diam, k)));
        checks.push(InequalityCheck::le(format!("buser_grid_k{k}"), buser_grid_lower_polygon(&poly, k), mu));
    }
    Ok(checks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub shape_id: String,
    pub k: usize,
    pub c: f64,
    pub pw_lower: f64,
    pub diam_upper: f64,
    pub buser_lower: f64,
    /// `C_k / diam^2`; equals the Payne-Weinberger value for `k = 1`.
    pub c_k_lower: f64,
    pub k0_bound: f64,
    pub mu_fem: Option<f64>,
    pub inequality_checks: Vec<InequalityCheck>,
}

pub fn bounds_report(
    shape_id: &str,
    shape: &SupportFunction,
    k: usize,
    c: f64,
    spectrum: Option<&Spectrum>,
) -> Result<BoundsReport> {
    if k == 0 {
        return Err(Error::Unsupported("k must be at least 1".into()));
    }
    let diam = shape.diameter();
    let pw = payne_weinberger(shape);
    let c_k_lower = if k == 1 { pw } else { c_k(k, c)? / (diam * diam) };
    Ok(BoundsReport {
        shape_id: shape_id.to_string(),
        k,
        c,
        pw_lower: pw,
        diam_upper: diameter_upper(shape, k),
        buser_lower: buser_grid_lower(shape, k)?,
        c_k_lower,
        k0_bound: k0_bound(shape),
        mu_fem: spectrum.filter(|s| s.kmax() >= k).map(|s| s.values[k]),
        inequality_checks: match spectrum {
            Some(s) => inequality_suite(shape, s)?,
            None => Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_disk() -> SupportFunction {
        SupportFunction::disk(1.0, Vec2::zeros()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(payne_weinberger(&unit_disk()), PI * PI / 4.0, epsilon = 1e-12);
        let unit_sq = SupportFunction::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(payne_weinberger(&unit_sq), PI * PI / 2.0, epsilon = 1e-9);
        assert_relative_eq!(diameter_upper(&unit_disk(), 1), 5.783, epsilon = 1e-3);
        let sq = SupportFunction::square(1.0).unwrap();
        let j = 2.404_825_557_695_773;
        assert_relative_eq!(diameter_upper(&sq, 2), (2.0 * j + PI).powi(2) / 8.0, epsilon = 1e-9);
        let big = SupportFunction::square(2.0).unwrap();
        assert_relative_eq!(diameter_upper(&big, 3) * 4.0, diameter_upper(&sq, 3), max_relative = 1e-9);
    }

    #[test]
    fn constants() {
        assert_relative_eq!(c_k(2, 6.0).unwrap(), 12.945, epsilon = 1e-3);
        assert_relative_eq!(c_k(3, 6.0).unwrap(), 13.568, epsilon = 1e-3);
        assert_eq!(c_k(4, 6.0).unwrap(), 2.0 * PI * PI);
        assert!(c_k(1, 6.0).is_err());
        let m1 = m_k_bounds(1, 6.0).unwrap();
        assert_relative_eq!(m1.lower, 0.426_650_83, epsilon = 1e-8);
        let m2 = m_k_bounds(2, 6.0).unwrap();
        assert!(m2.clamped && m2.lower == m2.upper);
        let den = (2.0 * 2.404_825_557_695_773 + PI).powi(2);
        assert_relative_eq!(m2.upper, 4.0 * PI * PI / den, epsilon = 1e-9);
        assert_relative_eq!(m2.raw_lower, c_k(2, 6.0).unwrap() * PI * PI / den, epsilon = 1e-9);
        assert!(m2.raw_lower > 2.0);
        for k in 1..=20 {
            let b = m_k_bounds(k, 6.0).unwrap();
            assert!(b.lower <= b.upper);
        }
    }

    #[test]
    fn k0_examples() {
        let sq = SupportFunction::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(k0_bound(&sq), 8.0 * 2f64.sqrt() / PI, epsilon = 1e-6);
        assert_relative_eq!(k0_bound(&unit_disk()), 8.0 / PI, epsilon = 1e-9);
        let long = SupportFunction::rectangle(0.0, 0.0, 10.0, 1.0).unwrap();
        assert_relative_eq!(k0_bound(&long), 8.0 * 101f64.sqrt() / PI, epsilon = 1e-6);
        assert_relative_eq!(k0_bound_sharp(&sq), 8.0 / PI, epsilon = 1e-6);
    }

    #[test]
    fn buser_square_k9() {
        let sq = SupportFunction::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        // axis-aligned cells of side 1/3 are the best grid
        let b = buser_grid_lower(&sq, 9).unwrap();
        assert_relative_eq!(b, 4.5 * PI * PI, max_relative = 1e-9);
        let disk4 = buser_grid_lower(&unit_disk(), 4).unwrap();
        assert!(disk4 >= PI * PI / 2.0 - 1e-9 && disk4 < 9.33);
    }

    #[test]
    fn cusp_bound() {
        assert_relative_eq!(cusp_poincare_lower(1.0, 1.0, 1.0, 1.0), 1.0 / 128.0);
        assert_relative_eq!(cusp_poincare_lower(2.0, 2.0, 2.0, 1.0), cusp_poincare_lower(1.0, 1.0, 1.0, 1.0) / 4.0);
        let sq = crate::polygon::rectangle(-1.0, -1.0, 1.0, 1.0);
        let cfg = CuspConfiguration::from_polygon(&sq, Vec2::new(0.0, 1.0), Vec2::new(0.0, 2.0)).unwrap();
        assert_relative_eq!(cfg.a, 1.0);
        assert_relative_eq!(cfg.b, 1.0);
        assert_relative_eq!(cfg.c, 1.0);
        assert_relative_eq!(cfg.lipschitz, 1.0);
        assert!(CuspConfiguration::from_polygon(&sq, Vec2::new(0.0, 1.0), Vec2::new(0.0, 0.5)).is_err());
    }
}
