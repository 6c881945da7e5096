//! Linear constraint systems `A F <= B` encoding discrete convexity plus
//! inclusion in a box (interior problem) or around an obstacle (exterior
//! problem).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::support::{node_angle, SupportFunction, TOL_FEAS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    /// Minimize inside a box: inclusion rows are `f <= f_D`.
    Interior,
    /// Maximize around an obstacle: inclusion rows are `f >= f_omega`.
    Exterior,
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProblemKind::Interior => "interior",
            ProblemKind::Exterior => "exterior",
        })
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(ProblemKind::Interior),
            "exterior" => Ok(ProblemKind::Exterior),
            _ => Err(Error::InvalidShape(format!("unknown mode {s:?}"))),
        }
    }
}

/// Shape parametrization used by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Truncated Fourier series of order `n` (`2n + 1` unknowns).
    Fourier { n: usize },
    /// Support values at `m` equally spaced angles.
    PiecewiseAffine { m: usize },
}

impl Strategy {
    pub fn dimension(&self) -> usize {
        match *self {
            Strategy::Fourier { n } => 2 * n + 1,
            Strategy::PiecewiseAffine { m } => m,
        }
    }

    /// Parses `fourier:N`, `fourier-coeffs:D` (D odd) or `pwa:M`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidDiscretization(format!("strategy '{s}': expected kind:value")))?;
        let v: usize = val
            .parse()
            .map_err(|_| Error::InvalidDiscretization(format!("strategy '{s}': bad number")))?;
        match kind {
            "fourier" => Ok(Strategy::Fourier { n: v }),
            "fourier-coeffs" if v % 2 == 1 => Ok(Strategy::Fourier { n: (v - 1) / 2 }),
            "pwa" => Ok(Strategy::PiecewiseAffine { m: v }),
            _ => Err(Error::InvalidDiscretization(format!("unknown strategy '{s}'"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Fourier { n } => write!(f, "fourier:{n}"),
            Strategy::PiecewiseAffine { m } => write!(f, "pwa:{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub kind: ProblemKind,
    pub strategy: Strategy,
    /// Number of constraint angles `M`.
    pub samples: usize,
    /// Absolute feasibility tolerance derived from the reference scale.
    pub tol: f64,
}

/// Builds `(A, B)`. For the piecewise-affine strategy the sample count is the
/// strategy's `m`; for Fourier it is `samples`.
pub fn assemble_constraints(
    kind: ProblemKind,
    strategy: Strategy,
    reference: &SupportFunction,
    samples: usize,
) -> Result<ConstraintSystem> {
    let m = match strategy {
        Strategy::PiecewiseAffine { m } => m,
        Strategy::Fourier { .. } => samples,
    };
    if m < 8 {
        return Err(Error::InvalidDiscretization(format!("M = {m} < 8")));
    }
    let d = strategy.dimension();
    let mut a = DMatrix::zeros(2 * m, d);
    let mut b = DVector::zeros(2 * m);
    let sign = match kind {
        ProblemKind::Interior => 1.0,
        ProblemKind::Exterior => -1.0,
    };
    match strategy {
        Strategy::Fourier { n } => {
            for row in 0..m {
                let theta = node_angle(row + 1, m);
                a[(row, 0)] = -1.0;
                a[(m + row, 0)] = sign;
                for k in 1..=n {
                    let kf = k as f64;
                    let (s, c) = (kf * theta).sin_cos();
                    a[(row, k)] = -(1.0 - kf * kf) * c;
                    a[(row, n + k)] = -(1.0 - kf * kf) * s;
                    a[(m + row, k)] = sign * c;
                    a[(m + row, n + k)] = sign * s;
                }
                b[m + row] = sign * reference.eval(theta);
            }
        }
        Strategy::PiecewiseAffine { .. } => {
            let tau = 2.0 * PI / m as f64;
            let off = -1.0 / (tau * tau);
            for row in 0..m {
                a[(row, row)] = -1.0 + 2.0 / (tau * tau);
                a[(row, (row + 1) % m)] = off;
                a[(row, (row + m - 1) % m)] = off;
                a[(m + row, row)] = sign;
                b[m + row] = sign * reference.eval(node_angle(row + 1, m));
            }
        }
    }
    Ok(ConstraintSystem { a, b, kind, strategy, samples: m, tol: TOL_FEAS * reference.scale().max(1e-300) })
}

impl ConstraintSystem {
    /// `max_i (A F - B)_i`; nonpositive for feasible `F`.
    pub fn residual(&self, f: &[f64]) -> f64 {
        let v = &self.a * DVector::from_column_slice(f) - &self.b;
        v.max()
    }

    pub fn is_feasible(&self, f: &[f64]) -> bool {
        self.residual(f) <= self.tol
    }

    /// Max violation of the inclusion rows only.
    pub fn inclusion_residual(&self, f: &[f64]) -> f64 {
        let v = &self.a * DVector::from_column_slice(f) - &self.b;
        v.rows(self.samples, self.samples).max()
    }

    pub fn dimension(&self) -> usize {
        self.a.ncols()
    }

    /// Wraps a coefficient vector as a support function of the strategy's
    /// representation. No sign or convexity checks are applied.
    pub fn shape(&self, f: &[f64]) -> SupportFunction {
        let template = match self.strategy {
            Strategy::Fourier { .. } => SupportFunction::fourier(vec![1.0]).unwrap(),
            Strategy::PiecewiseAffine { .. } => SupportFunction::pwa(vec![1.0; 8]).unwrap(),
        };
        template.with_coefficients_unchecked(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Vec2;
    use approx::assert_relative_eq;

    fn disk() -> SupportFunction {
        SupportFunction::disk(1.0, Vec2::zeros()).unwrap()
    }

    #[test]
    fn fourier_dimensions() {
        let cs = assemble_constraints(ProblemKind::Interior, Strategy::Fourier { n: 16 }, &disk(), 100).unwrap();
        assert_eq!(cs.a.shape(), (200, 33));
        assert_eq!(cs.b.len(), 200);
        assert!(cs.b.rows(0, 100).iter().all(|&x| x == 0.0));
        assert_relative_eq!(cs.b[150], 1.0);
    }

    #[test]
    fn pwa_block_structure() {
        let m = 50;
        let cs = assemble_constraints(ProblemKind::Interior, Strategy::PiecewiseAffine { m }, &disk(), 0).unwrap();
        let tau = 2.0 * PI / m as f64;
        assert_relative_eq!(cs.a[(0, 0)], -1.0 + 2.0 / (tau * tau));
        assert_relative_eq!(cs.a[(0, m - 1)], -1.0 / (tau * tau));
        assert_relative_eq!(cs.a[(m - 1, 0)], -1.0 / (tau * tau));
        assert_eq!(cs.a[(0, 2)], 0.0);
        assert_eq!(cs.a[(m + 3, 3)], 1.0);
        let ext = assemble_constraints(ProblemKind::Exterior, Strategy::PiecewiseAffine { m }, &disk(), 0).unwrap();
        assert_eq!(ext.a[(m + 3, 3)], -1.0);
        assert_relative_eq!(ext.b[m + 3], -1.0);
    }

    #[test]
    fn half_disk_feasibility() {
        let m = 50;
        let f = vec![0.5; m];
        let int = assemble_constraints(ProblemKind::Interior, Strategy::PiecewiseAffine { m }, &disk(), 0).unwrap();
        assert!(int.is_feasible(&f));
        let ext = assemble_constraints(ProblemKind::Exterior, Strategy::PiecewiseAffine { m }, &disk(), 0).unwrap();
        assert!(!ext.is_feasible(&f));
    }

    #[test]
    fn small_m_rejected() {
        let r = assemble_constraints(ProblemKind::Interior, Strategy::PiecewiseAffine { m: 6 }, &disk(), 0);
        assert!(matches!(r, Err(Error::InvalidDiscretization(_))));
    }

    #[test]
    fn strategy_parse() {
        assert_eq!(Strategy::parse("pwa:50").unwrap(), Strategy::PiecewiseAffine { m: 50 });
        assert_eq!(Strategy::parse("fourier:8").unwrap(), Strategy::Fourier { n: 8 });
        assert_eq!(Strategy::parse("fourier-coeffs:21").unwrap(), Strategy::Fourier { n: 10 });
        assert!(Strategy::parse("fourier-coeffs:20").is_err());
    }
}
