//! Necessary conditions for a body to be its own optimizer ("self-domain")
//! for the interior or exterior problem.
//!
//! Interior: a minimizer cannot have `mu_k = mu_{k+1}`, and for `k = 1` no
//! minimizer exists at all. Exterior: a maximizer with a strictly convex
//! boundary arc, or a side shorter than `2 j_{0,1} / sqrt(mu_k)`, cannot
//! have `mu_{k-1} = mu_k`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraints::{ProblemKind, Strategy};
use crate::eigen::{spectrum_of, EvalOptions, MULTIPLICITY_GAP};
use crate::error::{Error, Result};
use crate::optimize::{solve_exterior, solve_interior, OptimizeOptions};
use crate::polygon::ConvexPolygon;
use crate::reference::j01;
use crate::support::SupportFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// A necessary condition fails.
    No,
    /// Interior `k = 1`: the infimum is not attained.
    NoExistence,
    /// No obstruction was found.
    Probably,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::No => "NO",
            Verdict::NoExistence => "NO (no minimizer exists)",
            Verdict::Probably => "probably",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfDomainOptions {
    pub eval: EvalOptions,
    /// Relative gap below which two eigenvalues count as equal.
    pub gap: f64,
    /// Local optimization looking for a strictly better competitor.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probe: Option<(Strategy, OptimizeOptions)>,
    /// Relative improvement a probe must reach to count.
    pub probe_tol: f64,
}

impl Default for SelfDomainOptions {
    fn default() -> Self {
        Self { eval: EvalOptions::default(), gap: MULTIPLICITY_GAP, probe: None, probe_tol: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub objective: f64,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfDomainReport {
    pub k: usize,
    pub mode: ProblemKind,
    /// `mu_0 ..= mu_{k+1}`.
    pub spectrum: Vec<f64>,
    /// Interior: `mu_k = mu_{k+1}`; exterior: `mu_{k-1} = mu_k`.
    pub multiple: bool,
    pub strictly_convex_part: bool,
    /// `2 j_{0,1} / sqrt(mu_k)`.
    pub short_side_threshold: f64,
    pub shortest_side: Option<f64>,
    pub probe: Option<ProbeOutcome>,
    pub verdict: Verdict,
    pub reason: String,
}

impl SelfDomainReport {
    pub fn summary(&self) -> String {
        format!("{}: {}", self.verdict, self.reason)
    }
}

/// Turning angle below which a polygon vertex is treated as flat.
const FLAT_TURN: f64 = 1e-6;

/// Sides of `poly` after merging nearly collinear edges, and whether part
/// of the boundary is a fine polygonal approximation of a curved arc: a run
/// of edges shorter than `diam / 16` turning by at least `pi / 8` in total
/// through vertices that each turn by less than `pi / 16`.
fn boundary_structure(poly: &ConvexPolygon) -> (Vec<f64>, bool) {
    let v = poly.vertices();
    let n = v.len();
    let turn = |i: usize| {
        let a = v[i] - v[(i + n - 1) % n];
        let b = v[(i + 1) % n] - v[i];
        a.perp(&b).atan2(a.dot(&b))
    };
    let corners: Vec<usize> = (0..n).filter(|&i| turn(i) > FLAT_TURN).collect();
    let sides: Vec<f64> = (0..corners.len())
        .map(|j| {
            let (a, b) = (corners[j], corners[(j + 1) % corners.len()]);
            (v[b] - v[a]).norm()
        })
        .collect();
    let limit = poly.diameter() / 16.0;
    let mut curved = false;
    let mut run_turn = 0.0;
    // walk twice around so that runs through the starting vertex count
    for idx in 0..2 * corners.len() {
        let j = idx % corners.len();
        if sides[j] <= limit && turn(corners[(j + 1) % corners.len()]) < PI / 16.0 {
            run_turn += turn(corners[(j + 1) % corners.len()]);
            if run_turn >= PI / 8.0 {
                curved = true;
                break;
            }
        } else {
            run_turn = 0.0;
        }
    }
    (sides, curved)
}

pub fn self_domain_check(shape: &SupportFunction, k: usize, mode: ProblemKind, opts: &SelfDomainOptions) -> Result<SelfDomainReport> {
    if k == 0 {
        return Err(Error::InvalidDiscretization("k must be at least 1".into()));
    }
    let spectrum = spectrum_of(shape, k + 1, &opts.eval)?.values;
    let equal = |a: f64, b: f64| (a - b).abs() <= opts.gap * a.abs().max(b.abs());
    let mu = spectrum[k];
    let threshold = 2.0 * j01() / mu.sqrt();
    let poly = shape.realize(opts.eval.m_out)?;
    let (sides, curved) = boundary_structure(&poly);
    let shortest = sides.iter().copied().reduce(f64::min);
    let multiple = match mode {
        ProblemKind::Interior => equal(mu, spectrum[k + 1]),
        ProblemKind::Exterior => k >= 2 && equal(spectrum[k - 1], mu),
    };
    let (mut verdict, mut reason) = match mode {
        ProblemKind::Interior if k == 1 => (Verdict::NoExistence, "the infimum of mu_1 is not attained".to_string()),
        ProblemKind::Interior if multiple => (Verdict::No, format!("mu_{k} = mu_{} = {mu:.6}", k + 1)),
        ProblemKind::Exterior if multiple && curved => {
            (Verdict::No, format!("mu_{} = mu_{k} = {mu:.6} with a strictly convex boundary part", k - 1))
        }
        ProblemKind::Exterior if multiple && shortest.is_some_and(|s| s < threshold) => (
            Verdict::No,
            format!("mu_{} = mu_{k} = {mu:.6} with a side of length {:.6} < {threshold:.6}", k - 1, shortest.unwrap()),
        ),
        ProblemKind::Interior => (Verdict::Probably, format!("mu_{k} = {mu:.6} < mu_{} = {:.6}", k + 1, spectrum[k + 1])),
        ProblemKind::Exterior if multiple => {
            (Verdict::Probably, format!("mu_{} = mu_{k} but neither geometric hypothesis applies", k - 1))
        }
        ProblemKind::Exterior => (Verdict::Probably, format!("mu_{} = {:.6} < mu_{k} = {mu:.6}", k - 1, spectrum[k - 1])),
    };
    let mut probe = None;
    if let Some((strategy, popts)) = &opts.probe {
        if verdict == Verdict::Probably {
            let (result, improved) = match mode {
                ProblemKind::Interior => {
                    let r = solve_interior(shape, k, *strategy, popts)?;
                    let better = r.objective < mu * (1.0 - opts.probe_tol);
                    (r, better)
                }
                ProblemKind::Exterior => {
                    let r = solve_exterior(shape, k, *strategy, popts)?;
                    let better = r.objective > mu * (1.0 + opts.probe_tol);
                    (r, better)
                }
            };
            if improved {
                verdict = Verdict::No;
                reason = format!("local search found mu_{k} = {:.6} against {mu:.6}", result.objective);
            }
            probe = Some(ProbeOutcome { objective: result.objective, improved });
        }
    }
    Ok(SelfDomainReport {
        k,
        mode,
        spectrum,
        multiple,
        strictly_convex_part: curved,
        short_side_threshold: threshold,
        shortest_side: shortest,
        probe,
        verdict,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{rectangle, regular};

    #[test]
    fn boundary_of_square_and_disk() {
        let (sides, curved) = boundary_structure(&rectangle(-1.0, -1.0, 1.0, 1.0));
        assert_eq!(sides.len(), 4);
        assert!(!curved);
        assert!(sides.iter().all(|s| (s - 2.0).abs() < 1e-12));
        let (_, curved) = boundary_structure(&regular(256, 1.0, 0.0));
        assert!(curved);
        let (_, curved) = boundary_structure(&regular(6, 1.0, 0.0));
        assert!(!curved);
    }

    #[test]
    fn interior_k1_has_no_minimizer() {
        let sq = SupportFunction::square(1.0).unwrap();
        let opts = SelfDomainOptions { eval: EvalOptions { h_factor: 20.0, ..Default::default() }, ..Default::default() };
        let r = self_domain_check(&sq, 1, ProblemKind::Interior, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::NoExistence);
    }
}
