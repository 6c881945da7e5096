//! One-parameter shape families and grid scans of `mu_k` along them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigen::{mu_k, EvalOptions};
use crate::error::{Error, Result};
use crate::par::{map_indexed, ExecMode};
use crate::polygon::{direction, Vec2};
use crate::support::{golden_min, SupportFunction};

/// Support samples used for family members.
pub const FAMILY_SAMPLES: usize = 1024;
const ARC_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Unit disk intersected with a concentric square; the parameter is the
    /// half-angle of the remaining arcs, in `[0, pi/4]`.
    DiskSquareIntersection,
    /// Hull of the unit disk and `points` points at distance `d` from the
    /// origin, at angles `2 pi j / points`.
    HullDiskPoints { points: usize },
    /// Hull of `[-1, 1]^2` and the pair `(+-d, 0)`.
    HullSquarePoints,
}

/// Whether a scan looks for the smallest or the largest `mu_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Minimize,
    Maximize,
}

impl Family {
    pub fn shape(&self, p: f64) -> Result<SupportFunction> {
        match *self {
            Family::DiskSquareIntersection => SupportFunction::disk_square_intersection(p, FAMILY_SAMPLES),
            Family::HullDiskPoints { points } => {
                if points == 0 {
                    return Err(Error::InvalidShape("hull family needs at least one point".into()));
                }
                let mut pts: Vec<Vec2> = (0..ARC_POINTS).map(|i| direction(2.0 * PI * i as f64 / ARC_POINTS as f64)).collect();
                pts.extend((0..points).map(|j| direction(2.0 * PI * j as f64 / points as f64) * p));
                SupportFunction::from_points(&pts, FAMILY_SAMPLES)
            }
            Family::HullSquarePoints => {
                let mut pts = vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0)];
                pts.push(Vec2::new(p, 0.0));
                pts.push(Vec2::new(-p, 0.0));
                SupportFunction::from_points(&pts, FAMILY_SAMPLES)
            }
        }
    }

    /// Interior families are minimized, hull families maximized.
    pub fn goal(&self) -> Goal {
        match self {
            Family::DiskSquareIntersection => Goal::Minimize,
            _ => Goal::Maximize,
        }
    }

    /// Natural parameter range.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Family::DiskSquareIntersection => (0.0, PI / 4.0),
            Family::HullDiskPoints { .. } => (1.0, 2.5),
            Family::HullSquarePoints => (1.0, 3.0),
        }
    }

    /// `n` equally spaced parameters over [`range`](Self::range).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.range();
        if n <= 1 {
            return vec![0.5 * (a + b)];
        }
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::DiskSquareIntersection => write!(f, "disk-square-intersection"),
            Family::HullDiskPoints { points } => write!(f, "hull-disk-points:{points}"),
            Family::HullSquarePoints => write!(f, "hull-square-points"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        match name {
            "disk-square-intersection" | "disk-square" => Ok(Family::DiskSquareIntersection),
            "hull-disk-points" | "hull-disk" => {
                let points = if arg.is_empty() { 2 } else { arg.parse().map_err(|_| Error::InvalidShape(format!("bad point count in {s:?}")))? };
                Ok(Family::HullDiskPoints { points })
            }
            "hull-square-points" | "hull-square" => Ok(Family::HullSquarePoints),
            _ => Err(Error::InvalidShape(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub eval: EvalOptions,
    /// Parameter tolerance of the golden-section refinement.
    pub refine_tol: f64,
    pub exec: ExecMode,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { eval: EvalOptions { h_factor: 60.0, ..Default::default() }, refine_tol: 1e-4, exec: ExecMode::Parallel }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub family: Family,
    pub k: usize,
    pub goal: Goal,
    /// `(parameter, mu_k)`; `None` where the evaluation failed.
    pub values: Vec<(f64, Option<f64>)>,
    pub best_param: f64,
    pub best_value: f64,
}

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,mu_k\n");
        for (p, v) in &self.values {
            match v {
                Some(v) => s.push_str(&format!("{p:.10},{v:.12e}\n")),
                None => s.push_str(&format!("{p:.10},\n")),
            }
        }
        s
    }
}

/// Evaluates `mu_k` along `grid` and refines the best grid point by
/// golden-section search between its neighbours.
pub fn scan_family(family: Family, k: usize, grid: &[f64], opts: &ScanOptions) -> Result<ScanResult> {
    if grid.is_empty() {
        return Err(Error::InvalidDiscretization("empty grid".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let goal = family.goal();
    let sign = if goal == Goal::Minimize { 1.0 } else { -1.0 };
    let eval = |p: f64| family.shape(p).and_then(|s| mu_k(&s, k, &opts.eval)).ok();
    let values: Vec<Option<f64>> = map_indexed(opts.exec, grid.len(), |i| eval(grid[i]));
    let best = (0..grid.len())
        .filter_map(|i| values[i].map(|v| (i, sign * v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::SolverDivergence("no family member could be evaluated".into()))?
        .0;
    let mut best_param = grid[best];
    let mut best_value = values[best].unwrap();
    if grid.len() > 1 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let f = |p: f64| eval(p).map_or(f64::INFINITY, |v| sign * v);
        let (v, p) = golden_min(&f, lo, hi, opts.refine_tol);
        if v.is_finite() && v < sign * best_value {
            best_param = p;
            best_value = sign * v;
        }
    }
    Ok(ScanResult { family, k, goal, values: grid.into_iter().zip(values).collect(), best_param, best_value })
}

/// Octagon with vertices `(+-1, +-s)` and `(+-t, +-1)`, inscribed in
/// `[-1, 1]^2` and touching all four sides.
pub fn octagon(s: f64, t: f64) -> Result<SupportFunction> {
    let mut pts = Vec::with_capacity(8);
    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        pts.push(Vec2::new(sx, sy * s));
        pts.push(Vec2::new(sx * t, sy));
    }
    SupportFunction::from_points(&pts, FAMILY_SAMPLES)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OctagonProbe {
    pub k: usize,
    pub s: f64,
    pub t: f64,
    pub value: f64,
    pub shape: SupportFunction,
}

/// Local minimization of `mu_k` over the octagons [`octagon`]: a coarse grid
/// followed by alternating golden-section sweeps in `s` and `t`.
pub fn octagon_probe(k: usize, grid: usize, sweeps: usize, opts: &ScanOptions) -> Result<OctagonProbe> {
    let n = grid.max(2);
    let f = |s: f64, t: f64| octagon(s, t).and_then(|o| mu_k(&o, k, &opts.eval)).unwrap_or(f64::INFINITY);
    let nodes: Vec<(f64, f64)> = (0..=n).flat_map(|i| (0..=n).map(move |j| (i as f64 / n as f64, j as f64 / n as f64))).collect();
    let vals = map_indexed(opts.exec, nodes.len(), |i| f(nodes[i].0, nodes[i].1));
    let best = (0..nodes.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let (mut s, mut t) = nodes[best];
    let mut value = vals[best];
    if !value.is_finite() {
        return Err(Error::SolverDivergence("no octagon could be evaluated".into()));
    }
    let step = 1.0 / n as f64;
    for sweep in 0..sweeps {
        let width = step / (1 << sweep) as f64;
        let (v, ns) = golden_min(&|x| f(x, t), (s - width).max(0.0), (s + width).min(1.0), opts.refine_tol);
        if v < value {
            value = v;
            s = ns;
        }
        let (v, nt) = golden_min(&|y| f(s, y), (t - width).max(0.0), (t + width).min(1.0), opts.refine_tol);
        if v < value {
            value = v;
            t = nt;
        }
    }
    Ok(OctagonProbe { k, s, t, value, shape: octagon(s, t)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_endpoints() {
        let d = Family::HullDiskPoints { points: 2 }.shape(1.0).unwrap();
        assert!((d.diameter() - 2.0).abs() < 1e-5);
        let h = Family::HullDiskPoints { points: 2 }.shape(2.0).unwrap();
        assert!((h.diameter() - 4.0).abs() < 1e-9);
        let sq = Family::HullSquarePoints.shape(1.0).unwrap();
        assert!((sq.diameter() - 8f64.sqrt()).abs() < 1e-9);
        let hex = Family::HullSquarePoints.shape(2.0).unwrap();
        assert_eq!(hex.reconstruct_polygon(0).unwrap().vertices().len(), 6);
    }

    #[test]
    fn parse_roundtrip() {
        for f in [Family::DiskSquareIntersection, Family::HullDiskPoints { points: 4 }, Family::HullSquarePoints] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!("hull-disk-points".parse::<Family>().unwrap(), Family::HullDiskPoints { points: 2 });
        assert!("blob".parse::<Family>().is_err());
    }

    #[test]
    fn octagon_is_inscribed() {
        let o = octagon(0.5, 0.3).unwrap();
        let exact = crate::polygon::ConvexPolygon::hull(&[
            Vec2::new(1.0, 0.5),
            Vec2::new(0.3, 1.0),
            Vec2::new(-0.3, 1.0),
            Vec2::new(-1.0, 0.5),
            Vec2::new(-1.0, -0.5),
            Vec2::new(-0.3, -1.0),
            Vec2::new(0.3, -1.0),
            Vec2::new(1.0, -0.5),
        ])
        .unwrap();
        let dist = o.reconstruct_polygon(0).unwrap().hausdorff(&exact);
        assert!(dist < 1e-3, "{dist}");
        assert!((o.width(0.0) - 2.0).abs() < 1e-9);
        assert!((o.width(PI / 2.0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn coarse_scan_finds_interior_extremum() {
        let opts = ScanOptions { eval: EvalOptions { h_factor: 20.0, ..Default::default() }, refine_tol: 1e-2, ..Default::default() };
        let grid = Family::HullDiskPoints { points: 2 }.grid(6);
        let r = scan_family(Family::HullDiskPoints { points: 2 }, 2, &grid, &opts).unwrap();
        assert_eq!(r.goal, Goal::Maximize);
        assert!(r.best_param > 1.3 && r.best_param < 2.5, "{}", r.best_param);
        let disk = r.values[0].1.unwrap();
        assert!(r.best_value > disk);
    }
}
