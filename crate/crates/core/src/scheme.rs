//! The alternating scheme: `Omega_n` minimizes `mu_k` inside `D_n`, then
//! `D_{n+1}` maximizes `mu_k` around `Omega_n`. Each stage is warm-started
//! from a shape that is feasible for it (the previous `Omega`, resp. the
//! current `D`), so `mu_k(Omega_n)` decreases and `mu_k(D_n)` increases up
//! to discretization error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::{m_k_bounds, DEFAULT_C};
use crate::constraints::Strategy;
use crate::eigen::{mu_k, EvalOptions};
use crate::error::{Error, Result};
use crate::optimize::{solve_exterior, solve_interior, OptimizeOptions};
use crate::reference::j01;
use crate::support::{SupportFunction, EPS_WIDTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Running,
    Stationary,
    Collapsed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeOptions {
    pub strategy: Strategy,
    /// Options of every stage; `starts` counts the warm start.
    pub optimize: OptimizeOptions,
    /// Stationarity threshold relative to `diam(D_1)`.
    pub stat_tol_rel: f64,
    pub collapse_tol: f64,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::PiecewiseAffine { m: 40 },
            optimize: OptimizeOptions { starts: 2, ..Default::default() },
            stat_tol_rel: 1e-3,
            collapse_tol: EPS_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeStep {
    pub n: usize,
    pub omega: SupportFunction,
    pub d: SupportFunction,
    pub mu_omega: f64,
    pub mu_d: f64,
    /// `mu_k(Omega_n) / mu_k(D_n)`.
    pub j: f64,
    pub min_width_d: f64,
    pub diam_d: f64,
    /// How far `Omega_n` sticks out of `D_n` (nonpositive when inside).
    pub omega_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeTrace {
    pub k: usize,
    pub steps: Vec<SchemeStep>,
    pub status: Status,
    /// `mu_k(D_1)` on the reporting mesh.
    pub mu_d1: f64,
    /// `(J_k(D_n), k^2 pi^2 / (2 j_{0,1} + (k - 1) pi)^2)` on collapse.
    pub collapse_comparison: Option<(f64, f64)>,
    /// Message of the stage that ended the run, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub n: usize,
    pub name: String,
    pub previous: f64,
    pub current: f64,
    pub pass: bool,
}

impl SchemeTrace {
    /// Per step: `mu_k(D)` nondecreasing, `mu_k(Omega)` nonincreasing and
    /// `J` nonincreasing, each up to a relative slack `tol`.
    pub fn monotonicity(&self, tol: f64) -> Vec<StepCheck> {
        let mut out = Vec::new();
        for w in self.steps.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let mut push = |name: &str, previous: f64, current: f64, pass: bool| {
                out.push(StepCheck { n: b.n, name: name.into(), previous, current, pass })
            };
            push("mu_k(D)", a.mu_d, b.mu_d, b.mu_d >= a.mu_d * (1.0 - tol));
            push("mu_k(Omega)", a.mu_omega, b.mu_omega, b.mu_omega <= a.mu_omega * (1.0 + tol));
            push("J_k", a.j, b.j, b.j <= a.j * (1.0 + tol));
        }
        out
    }

    /// `Omega_n` inside `D_n` and inside `D_{n+1}`, up to `tol`.
    pub fn inclusions(&self, m_out: usize, tol: f64) -> Result<Vec<StepCheck>> {
        let mut out = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push(StepCheck { n: s.n, name: "Omega_n in D_n".into(), previous: 0.0, current: s.omega_excess, pass: s.omega_excess <= tol });
            if let Some(next) = self.steps.get(i + 1) {
                let e = s.omega.reconstruct_polygon(m_out)?.excess_over(&next.d.reconstruct_polygon(m_out)?);
                out.push(StepCheck { n: s.n, name: "Omega_n in D_n+1".into(), previous: 0.0, current: e, pass: e <= tol });
            }
        }
        Ok(out)
    }

    /// `diam(D_n) <= (2 j_{0,1} + (k - 1) pi) / sqrt(mu_k(D_1))`.
    pub fn diameter_bound(&self) -> f64 {
        (2.0 * j01() + (self.k as f64 - 1.0) * PI) / self.mu_d1.sqrt()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,mu_omega,mu_d,j_k,min_width_d\n");
        for st in &self.steps {
            s.push_str(&format!("{},{:.12e},{:.12e},{:.12e},{:.6e}\n", st.n, st.mu_omega, st.mu_d, st.j, st.min_width_d));
        }
        s
    }
}

fn reporting_eval(opts: &OptimizeOptions) -> EvalOptions {
    EvalOptions { m_out: opts.m_out, h_factor: opts.final_h_factor, refine: 0, allow_thin: opts.allow_thin }
}

pub fn run_scheme(d1: &SupportFunction, k: usize, n_max: usize, opts: &SchemeOptions) -> Result<SchemeTrace> {
    if k < 2 {
        return Err(Error::Unsupported("the scheme needs k >= 2".into()));
    }
    let m_out = opts.optimize.m_out;
    let stat_tol = opts.stat_tol_rel * d1.diameter();
    let mu_d1 = mu_k(d1, k, &reporting_eval(&opts.optimize))?;
    let mut trace = SchemeTrace { k, steps: Vec::new(), status: Status::Running, mu_d1, collapse_comparison: None, error: None };
    let mut d = d1.clone();
    let mut mu_d = mu_d1;
    let mut prev_omega: Option<SupportFunction> = None;
    for n in 1..=n_max {
        let stage = OptimizeOptions { warm_start: Some(prev_omega.clone().unwrap_or_else(|| d.clone())), ..opts.optimize.clone() };
        let interior = match solve_interior(&d, k, opts.strategy, &stage) {
            Ok(r) => r,
            Err(e) => {
                trace.error = Some(format!("interior stage {n}: {e}"));
                break;
            }
        };
        let omega = interior.shape;
        let d_poly = d.reconstruct_polygon(m_out)?;
        let step = SchemeStep {
            n,
            omega_excess: omega.reconstruct_polygon(m_out)?.excess_over(&d_poly),
            mu_omega: interior.objective,
            mu_d,
            j: interior.objective / mu_d,
            min_width_d: d_poly.min_width(),
            diam_d: d_poly.diameter(),
            omega: omega.clone(),
            d: d.clone(),
        };
        let collapsed = step.min_width_d < opts.collapse_tol;
        let stationary = trace.steps.last().is_some_and(|p: &SchemeStep| {
            let dist = |a: &SupportFunction, b: &SupportFunction| -> f64 {
                match (a.reconstruct_polygon(m_out), b.reconstruct_polygon(m_out)) {
                    (Ok(a), Ok(b)) => a.hausdorff(&b),
                    _ => f64::INFINITY,
                }
            };
            let tol = opts.optimize.tol_opt;
            dist(&p.omega, &step.omega) < stat_tol
                && dist(&p.d, &step.d) < stat_tol
                && (p.mu_omega - step.mu_omega).abs() <= tol * step.mu_omega
                && (p.mu_d - step.mu_d).abs() <= tol * step.mu_d
        });
        let j = step.j;
        trace.steps.push(step);
        if collapsed {
            trace.status = Status::Collapsed;
            trace.collapse_comparison = Some((j, m_k_bounds(k, DEFAULT_C)?.upper));
            break;
        }
        if stationary {
            trace.status = Status::Stationary;
            break;
        }
        if n == n_max {
            break;
        }
        let stage = OptimizeOptions { warm_start: Some(d.clone()), ..opts.optimize.clone() };
        match solve_exterior(&omega, k, opts.strategy, &stage) {
            Ok(r) => {
                d = r.shape;
                mu_d = r.objective;
            }
            Err(e) => {
                trace.error = Some(format!("exterior stage {n}: {e}"));
                break;
            }
        }
        prev_omega = Some(omega);
    }
    Ok(trace)
}

/// `J_k(D) = I_k(D) / mu_k(D)`, with `I_k` the interior minimum. For `k = 1`
/// the infimum is `pi^2 / diam^2`, giving `pi^2 / (diam^2 mu_1)`.
pub fn j_k(d: &SupportFunction, k: usize, strategy: Strategy, opts: &OptimizeOptions) -> Result<f64> {
    let eval = reporting_eval(opts);
    let mu = mu_k(d, k, &eval)?;
    if k == 1 {
        return Ok(PI * PI / (d.diameter().powi(2) * mu));
    }
    let stage = OptimizeOptions { warm_start: opts.warm_start.clone().or_else(|| Some(d.clone())), ..opts.clone() };
    Ok(solve_interior(d, k, strategy, &stage)?.objective / mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Vec2;

    #[test]
    fn j1_of_unit_square() {
        let sq = SupportFunction::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let opts = OptimizeOptions { final_h_factor: 60.0, ..Default::default() };
        let j = j_k(&sq, 1, Strategy::PiecewiseAffine { m: 16 }, &opts).unwrap();
        assert!((j - 0.5).abs() < 5e-3, "{j}");
    }

    #[test]
    fn rejects_k1() {
        let disk = SupportFunction::disk(1.0, Vec2::zeros()).unwrap();
        assert!(run_scheme(&disk, 1, 2, &SchemeOptions::default()).is_err());
    }
}
