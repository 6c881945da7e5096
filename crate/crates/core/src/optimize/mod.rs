//! Multi-start projected descent for the discretized interior and exterior
//! problems: minimize (interior) or maximize (exterior) `mu_k` over support
//! vectors `F` with `A F <= B`.
//!
//! Each start runs a projected gradient method. Gradients are central finite
//! differences; the perturbed shapes are evaluated on the current mesh
//! carried over by [`MeshTemplate::morph`], warm-started from the current
//! eigenvectors, so that the difference quotients see a smooth function
//! rather than remeshing noise.

mod projection;
mod starts;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{assemble_constraints, ConstraintSystem, ProblemKind, Strategy};
use crate::eigen::{solve_modes, Modes, Spectrum};
use crate::error::{Error, Result};
use crate::mesh::{triangulate, MeshTemplate, TriangleMesh};
use crate::par::{map_indexed, ExecMode};
use crate::polygon::ConvexPolygon;
use crate::support::{SupportFunction, EPS_WIDTH};

pub use projection::Polyhedron;

/// Lower bound imposed on the width in every sampled direction, keeping the
/// iterates meshable while still allowing collapse to the threshold scale.
pub const WIDTH_FLOOR: f64 = 1.2 * EPS_WIDTH;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACK: usize = 40;
const STALL_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative objective change over the stall window that ends a run.
    pub tol_opt: f64,
    /// Mesh size `diam / h_factor` during descent.
    pub h_factor: f64,
    /// Mesh size for the reported final spectrum.
    pub final_h_factor: f64,
    /// Halfplanes used to realize Fourier shapes.
    pub m_out: usize,
    /// Constraint angles `M` for the Fourier strategy.
    pub samples: usize,
    /// Finite-difference step relative to the reference scale.
    pub h_fd_rel: f64,
    /// Initial step length relative to the reference diameter.
    pub step0_rel: f64,
    /// Angular H1 smoothing `eps` of the gradient: frequency `j` is damped
    /// by `1 / (1 + eps j^2)`. Zero gives the plain Euclidean gradient.
    pub smoothing: f64,
    pub allow_thin: bool,
    pub exec: ExecMode,
    /// Optional first start (converted to the strategy and projected).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warm_start: Option<SupportFunction>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 0,
            max_iter: 150,
            tol_opt: 1e-5,
            h_factor: 40.0,
            final_h_factor: 80.0,
            m_out: 256,
            samples: 256,
            h_fd_rel: 1e-4,
            step0_rel: 0.02,
            smoothing: 0.05,
            allow_thin: true,
            exec: ExecMode::Parallel,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub kind: ProblemKind,
    pub k: usize,
    pub strategy: Strategy,
    pub f_opt: Vec<f64>,
    pub shape: SupportFunction,
    /// Spectrum of the optimum on the final mesh.
    pub spectrum: Spectrum,
    /// `mu_k` of the optimum on the final mesh.
    pub objective: f64,
    /// `(iteration, mu_k)` on the descent mesh for the winning start.
    pub objective_trace: Vec<(usize, f64)>,
    pub feasibility_residual: f64,
    pub starts_used: usize,
    pub best_start: usize,
    /// Final `mu_k` of every start that completed, in start order.
    pub start_objectives: Vec<Option<f64>>,
    pub seed: u64,
    pub min_width: f64,
}

/// A discretized optimization problem: `G F <= h` collects the convexity and
/// inclusion rows plus width floors.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub k: usize,
    pub reference: SupportFunction,
    pub constraints: ConstraintSystem,
    pub feasible: Polyhedron,
    /// Length scale of the reference body.
    pub scale: f64,
    pub diameter: f64,
}

impl Problem {
    pub fn new(kind: ProblemKind, reference: &SupportFunction, k: usize, strategy: Strategy, samples: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDiscretization("k must be at least 1".into()));
        }
        let cs = assemble_constraints(kind, strategy, reference, samples)?;
        let d = strategy.dimension();
        let width_dirs = cs.samples.div_ceil(2);
        let mut g = DMatrix::zeros(cs.a.nrows() + width_dirs, d);
        let mut h = DVector::zeros(cs.a.nrows() + width_dirs);
        g.rows_mut(0, cs.a.nrows()).copy_from(&cs.a);
        h.rows_mut(0, cs.a.nrows()).copy_from(&cs.b);
        for j in 0..width_dirs {
            let theta = PI * j as f64 / width_dirs as f64;
            let a = eval_row(strategy, theta);
            let b = eval_row(strategy, theta + PI);
            for c in 0..d {
                g[(cs.a.nrows() + j, c)] = -(a[c] + b[c]);
            }
            h[cs.a.nrows() + j] = -WIDTH_FLOOR;
        }
        Ok(Self {
            kind,
            k,
            reference: reference.clone(),
            scale: reference.scale(),
            diameter: reference.diameter(),
            constraints: cs,
            feasible: Polyhedron::new(g, h),
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.constraints.strategy
    }

    pub fn shape(&self, x: &DVector<f64>) -> SupportFunction {
        self.constraints.shape(x.as_slice())
    }

    /// `+mu_k` for interior problems, `-mu_k` for exterior ones.
    fn sign(&self) -> f64 {
        match self.kind {
            ProblemKind::Interior => 1.0,
            ProblemKind::Exterior => -1.0,
        }
    }

    /// Coefficient vector of `shape` in this problem's representation.
    pub fn encode(&self, shape: &SupportFunction) -> Result<DVector<f64>> {
        match self.strategy() {
            Strategy::Fourier { n } => Ok(DVector::from_column_slice(shape.to_fourier(n)?.coefficients())),
            Strategy::PiecewiseAffine { m } => {
                Ok(DVector::from_fn(m, |i, _| shape.eval(crate::support::node_angle(i + 1, m))))
            }
        }
    }

    /// Gradient in the angular H1 metric `(I - eps d^2/dtheta^2)^{-1} g`.
    fn smooth(&self, g: &DVector<f64>, eps: f64) -> DVector<f64> {
        if eps <= 0.0 {
            return g.clone();
        }
        match self.strategy() {
            Strategy::Fourier { n } => DVector::from_fn(g.len(), |i, _| {
                let j = if i == 0 { 0 } else if i <= n { i } else { i - n };
                g[i] / (1.0 + eps * (j * j) as f64)
            }),
            Strategy::PiecewiseAffine { m } => {
                let tau = 2.0 * PI / m as f64;
                let c = eps / (tau * tau);
                let mut a = DMatrix::identity(m, m) * (1.0 + 2.0 * c);
                for i in 0..m {
                    a[(i, (i + 1) % m)] -= c;
                    a[(i, (i + m - 1) % m)] -= c;
                }
                match a.cholesky() {
                    Some(ch) => ch.solve(g),
                    None => g.clone(),
                }
            }
        }
    }

    fn tol(&self) -> f64 {
        self.constraints.tol.max(1e-12 * self.scale)
    }
}

/// Linear functional `F -> f(theta)` of the strategy.
fn eval_row(strategy: Strategy, theta: f64) -> Vec<f64> {
    match strategy {
        Strategy::Fourier { n } => {
            let mut r = vec![0.0; 2 * n + 1];
            r[0] = 1.0;
            for k in 1..=n {
                let (s, c) = (k as f64 * theta).sin_cos();
                r[k] = c;
                r[n + k] = s;
            }
            r
        }
        Strategy::PiecewiseAffine { m } => {
            let tau = 2.0 * PI / m as f64;
            let x = theta.rem_euclid(2.0 * PI) / tau - 1.0;
            let lo = x.floor();
            let t = x - lo;
            let i = (lo as i64).rem_euclid(m as i64) as usize;
            let mut r = vec![0.0; m];
            r[i] += 1.0 - t;
            r[(i + 1) % m] += t;
            r
        }
    }
}

/// Current mesh, eigenvectors and morphing template of an iterate.
#[derive(Clone)]
struct Base {
    value: f64,
    spectrum: Spectrum,
    modes: Modes,
    template: MeshTemplate,
    quality: f64,
    h: f64,
}

fn mesh_quality(mesh: &TriangleMesh) -> f64 {
    mesh.min_altitude() / mesh.max_edge()
}

struct Evaluator<'a> {
    problem: &'a Problem,
    opts: &'a OptimizeOptions,
}

impl Evaluator<'_> {
    fn polygon(&self, x: &DVector<f64>) -> Result<ConvexPolygon> {
        let poly = self.problem.shape(x).reconstruct_polygon(self.opts.m_out)?;
        let w = poly.min_width();
        if w < 0.5 * EPS_WIDTH || (!self.opts.allow_thin && w < EPS_WIDTH) {
            return Err(Error::CollapsedShape { width: w });
        }
        Ok(poly)
    }

    fn fresh(&self, x: &DVector<f64>) -> Result<Base> {
        let poly = self.polygon(x)?;
        let h = poly.diameter() / self.opts.h_factor;
        let mesh = triangulate(&poly, h, true)?;
        let modes = solve_modes(&mesh, self.problem.k + 1, None)?;
        Ok(Base {
            value: modes.spectrum.values[self.problem.k],
            spectrum: modes.spectrum.clone(),
            quality: mesh_quality(&mesh),
            template: MeshTemplate::new(&poly, mesh),
            modes,
            h,
        })
    }

    /// Evaluates `x` on the base mesh carried over to the new shape; falls
    /// back to a fresh mesh when morphing would damage the elements.
    fn via(&self, base: &Base, x: &DVector<f64>) -> Result<Base> {
        let poly = self.polygon(x)?;
        let diam = poly.diameter();
        let size_ok = (0.5..=2.0).contains(&(base.h * self.opts.h_factor / diam));
        if size_ok {
            if let Some(mesh) = base.template.morph(&poly) {
                let q = mesh_quality(&mesh);
                if q >= 0.3 * base.quality {
                    let modes = solve_modes(&mesh, self.problem.k + 1, Some(&base.modes))?;
                    return Ok(Base {
                        value: modes.spectrum.values[self.problem.k],
                        spectrum: modes.spectrum.clone(),
                        template: MeshTemplate::new(&poly, mesh),
                        modes,
                        quality: base.quality,
                        h: base.h,
                    });
                }
            }
        }
        self.fresh(x)
    }

    fn value_via(&self, base: &Base, x: &DVector<f64>) -> Option<f64> {
        self.via(base, x).ok().map(|b| b.value)
    }

    /// Forward and backward difference quotients of `mu_k` along each
    /// coordinate; `None` where a stencil point cannot be evaluated.
    fn slopes(&self, base: &Base, x: &DVector<f64>, h_fd: f64) -> Slopes {
        let d = x.len();
        let vals = map_indexed(self.opts.exec, 2 * d, |j| {
            let mut y = x.clone();
            y[j / 2] += if j % 2 == 0 { h_fd } else { -h_fd };
            self.value_via(base, &y)
        });
        let q = |v: Option<f64>| v.map(|v| (v - base.value) / h_fd);
        Slopes {
            forward: (0..d).map(|i| q(vals[2 * i])).collect(),
            backward: (0..d).map(|i| q(vals[2 * i + 1])).collect(),
        }
    }
}

/// One-sided difference quotients: `forward[i] ~ (f(x + h e_i) - f(x)) / h`,
/// `backward[i] ~ (f(x - h e_i) - f(x)) / h`.
struct Slopes {
    forward: Vec<Option<f64>>,
    backward: Vec<Option<f64>>,
}

impl Slopes {
    fn scaled(mut self, sign: f64) -> Self {
        for v in self.forward.iter_mut().chain(self.backward.iter_mut()).flatten() {
            *v *= sign;
        }
        self
    }

    /// Central differences, one-sided where only one side is available.
    fn central(&self) -> DVector<f64> {
        DVector::from_fn(self.forward.len(), |i, _| match (self.forward[i], self.backward[i]) {
            (Some(p), Some(m)) => 0.5 * (p - m),
            (Some(p), None) => p,
            (None, Some(m)) => -m,
            (None, None) => 0.0,
        })
    }

    /// Costs `(forward, -backward)` of the split variables `s = z+ - z-`;
    /// a side that could not be evaluated is priced out.
    fn split_costs(&self, big: f64) -> DVector<f64> {
        let d = self.forward.len();
        DVector::from_fn(2 * d, |i, _| {
            if i < d {
                self.forward[i].unwrap_or(big)
            } else {
                self.backward[i - d].unwrap_or(big)
            }
        })
    }

    /// Predicted change along `step` from the one-sided linear models.
    fn predict(&self, step: &DVector<f64>) -> f64 {
        step.iter()
            .enumerate()
            .map(|(i, &s)| {
                let c = if s >= 0.0 { self.forward[i].or(self.backward[i].map(|m| -m)) } else { self.backward[i].map(|m| -m).or(self.forward[i]) };
                c.unwrap_or(0.0) * s
            })
            .sum()
    }
}

enum Direction {
    /// Projection of `x + a d / |d|`.
    Gradient(DVector<f64>),
    /// Minimizer of `c . z + |z|^2 / (2a)` over feasible split steps
    /// `x + z+ - z-`, with `c` normalized.
    Model(DVector<f64>),
}

impl Direction {
    fn trial(&self, problem: &Problem, x: &DVector<f64>, a: f64) -> Result<DVector<f64>> {
        match self {
            Direction::Gradient(d) => problem.feasible.project(&(x + d * (a / d.norm()))),
            Direction::Model(c) => {
                let d = x.len();
                let g = &problem.feasible.g;
                let m = g.nrows();
                let mut g2 = DMatrix::zeros(m + 2 * d, 2 * d);
                g2.view_mut((0, 0), (m, d)).copy_from(g);
                g2.view_mut((0, d), (m, d)).copy_from(&(-g));
                for i in 0..2 * d {
                    g2[(m + i, i)] = -1.0;
                }
                let slack = (&problem.feasible.h - g * x).map(|v| v.max(0.0));
                let mut h2 = DVector::zeros(m + 2 * d);
                h2.rows_mut(0, m).copy_from(&slack);
                let z = Polyhedron::new(g2, h2).project(&(c * (-a / c.norm())))?;
                let step = z.rows(0, d) - z.rows(d, d);
                problem.feasible.project(&(x + step))
            }
        }
    }
}

/// Outcome of one descent run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub x: DVector<f64>,
    pub trace: Vec<(usize, f64)>,
    pub coarse_value: f64,
}

/// Projected descent from a feasible `x0`.
pub fn descend(problem: &Problem, opts: &OptimizeOptions, x0: DVector<f64>) -> Result<RunOutcome> {
    let ev = Evaluator { problem, opts };
    let sign = problem.sign();
    let mut x = x0;
    let mut base = ev.fresh(&x)?;
    let mut trace = vec![(0, base.value)];
    let mut alpha = opts.step0_rel * problem.diameter;
    let alpha_max = problem.diameter;
    let alpha_min = 1e-9 * problem.diameter;
    let h_fd0 = opts.h_fd_rel * problem.scale;
    for iter in 1..=opts.max_iter {
        let k = problem.k;
        let multiple = base.spectrum.is_multiple(k);
        let (h_fd, shrink) = if multiple { (0.5 * h_fd0, 0.25) } else { (h_fd0, 0.5) };
        let slopes = ev.slopes(&base, &x, h_fd).scaled(sign);
        let grad = slopes.central();
        let gnorm = grad.norm();
        if gnorm == 0.0 || !gnorm.is_finite() {
            break;
        }
        let phi = sign * base.value;
        // smoothed gradient first, then the plain one, then a step of the
        // one-sided model, which handles kinks where a support sample
        // switches between active and redundant
        let mut dirs = vec![Direction::Gradient(-problem.smooth(&grad, opts.smoothing))];
        if opts.smoothing > 0.0 {
            dirs.push(Direction::Gradient(-&grad));
        }
        dirs.push(Direction::Model(slopes.split_costs(1e3 * gnorm)));
        let mut accepted = None;
        for dir in &dirs {
            let mut a = alpha;
            for _ in 0..MAX_BACKTRACK {
                let y = dir.trial(problem, &x, a)?;
                let step = &y - &x;
                if step.norm() <= 1e-13 * problem.scale {
                    break;
                }
                let pred = slopes.predict(&step);
                // failures of the FEM pipeline just reject the step
                if pred < 0.0 {
                    if let Ok(trial) = ev.via(&base, &y) {
                        if sign * trial.value <= phi + ARMIJO_C1 * pred {
                            accepted = Some((y, trial, a));
                            break;
                        }
                    }
                }
                a *= shrink;
                if a < alpha_min {
                    break;
                }
            }
            if accepted.is_some() {
                break;
            }
        }
        let Some((y, trial, a)) = accepted else { break };
        x = y;
        base = trial;
        alpha = (2.0 * a).min(alpha_max);
        trace.push((iter, base.value));
        if trace.len() > STALL_WINDOW {
            let old = trace[trace.len() - 1 - STALL_WINDOW].1;
            if (old - base.value).abs() <= opts.tol_opt * base.value.abs() {
                break;
            }
        }
    }
    Ok(RunOutcome { coarse_value: base.value, x, trace })
}

fn start_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// Feasible starting vectors: the warm start (if any) followed by random
/// starts, `opts.starts` in total. Falls back to the anchor shape when no
/// random start can be projected.
pub fn starting_points(problem: &Problem, opts: &OptimizeOptions) -> Result<Vec<DVector<f64>>> {
    let anchor = starts::anchor(problem)?;
    let mut out = Vec::with_capacity(opts.starts);
    if let Some(w) = &opts.warm_start {
        let y = problem.encode(w)?;
        out.push(problem.feasible.project(&y)?);
    }
    let mut index = 0;
    let mut failures = 0;
    while out.len() < opts.starts {
        let mut rng = start_rng(opts.seed, index);
        index += 1;
        match starts::random_start(problem, &mut rng).and_then(|y| problem.feasible.project(&y)) {
            Ok(x) => out.push(x),
            Err(_) => {
                failures += 1;
                if failures > 4 * opts.starts.max(1) {
                    break;
                }
            }
        }
    }
    if out.is_empty() {
        out.push(anchor);
    }
    Ok(out)
}

fn finalize(problem: &Problem, opts: &OptimizeOptions, x: &DVector<f64>) -> Result<(SupportFunction, Spectrum)> {
    let shape = problem.shape(x);
    let poly = shape.reconstruct_polygon(opts.m_out)?;
    let mesh = triangulate(&poly, poly.diameter() / opts.final_h_factor, opts.allow_thin)?;
    let modes = solve_modes(&mesh, problem.k + 1, None)?;
    Ok((shape, modes.spectrum))
}

/// Runs all starts and keeps the best final objective (lowest start index on
/// ties).
pub fn optimize(problem: &Problem, opts: &OptimizeOptions) -> Result<OptimizationResult> {
    let starts = starting_points(problem, opts)?;
    let outcomes = map_indexed(opts.exec, starts.len(), |i| {
        let run = descend(problem, opts, starts[i].clone())?;
        let (shape, spectrum) = finalize(problem, opts, &run.x)?;
        Ok::<_, Error>((run, shape, spectrum))
    });
    let sign = problem.sign();
    let mut best: Option<usize> = None;
    let mut first_err = None;
    let mut start_objectives = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        match o {
            Ok((_, _, s)) => {
                let v = s.values[problem.k];
                start_objectives.push(Some(v));
                let better = match best {
                    None => true,
                    Some(b) => {
                        let vb = outcomes[b].as_ref().unwrap().2.values[problem.k];
                        sign * v < sign * vb
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            Err(e) => {
                start_objectives.push(None);
                first_err.get_or_insert_with(|| e.clone());
            }
        }
    }
    let Some(b) = best else {
        return Err(first_err.unwrap_or(Error::NoFeasibleStart));
    };
    let (run, shape, spectrum) = outcomes[b].as_ref().unwrap().clone();
    Ok(OptimizationResult {
        kind: problem.kind,
        k: problem.k,
        strategy: problem.strategy(),
        f_opt: run.x.iter().copied().collect(),
        objective: spectrum.values[problem.k],
        min_width: shape.reconstruct_polygon(opts.m_out).map(|p| p.min_width()).unwrap_or(0.0),
        feasibility_residual: problem.feasible.residual(&run.x).max(problem.constraints.residual(run.x.as_slice())),
        shape,
        spectrum,
        objective_trace: run.trace,
        starts_used: starts.len(),
        best_start: b,
        start_objectives,
        seed: opts.seed,
    })
}

/// Minimizes `mu_k` over convex bodies inside `d`.
pub fn solve_interior(d: &SupportFunction, k: usize, strategy: Strategy, opts: &OptimizeOptions) -> Result<OptimizationResult> {
    let problem = Problem::new(ProblemKind::Interior, d, k, strategy, opts.samples)?;
    optimize(&problem, opts)
}

/// Maximizes `mu_k` over convex bodies containing `omega`.
pub fn solve_exterior(
    omega: &SupportFunction,
    k: usize,
    strategy: Strategy,
    opts: &OptimizeOptions,
) -> Result<OptimizationResult> {
    let problem = Problem::new(ProblemKind::Exterior, omega, k, strategy, opts.samples)?;
    optimize(&problem, opts)
}

impl OptimizationResult {
    pub fn to_json(&self, config: &serde_json::Value) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap_or(serde_json::Value::Null);
        if let serde_json::Value::Object(m) = &mut v {
            m.insert("config".into(), config.clone());
            m.insert("multiple".into(), serde_json::to_value(self.spectrum.multiplicity_flags()).unwrap());
        }
        v
    }

    pub fn trace_csv(&self) -> String {
        let mut s = String::from("iteration,mu_k\n");
        for (i, v) in &self.objective_trace {
            s.push_str(&format!("{i},{v:.12e}\n"));
        }
        s
    }

    /// Is the accepted trace monotone in the right direction, up to `rel`?
    pub fn trace_is_monotone(&self, rel: f64) -> bool {
        let sign = match self.kind {
            ProblemKind::Interior => 1.0,
            ProblemKind::Exterior => -1.0,
        };
        self.objective_trace.windows(2).all(|w| sign * w[1].1 <= sign * w[0].1 + rel * w[0].1.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Vec2;

    fn quick() -> OptimizeOptions {
        OptimizeOptions { starts: 1, max_iter: 6, h_factor: 15.0, final_h_factor: 20.0, m_out: 64, samples: 64, ..Default::default() }
    }

    #[test]
    fn width_rows_present() {
        let d = SupportFunction::disk(1.0, Vec2::zeros()).unwrap();
        let p = Problem::new(ProblemKind::Interior, &d, 1, Strategy::PiecewiseAffine { m: 20 }, 0).unwrap();
        assert_eq!(p.feasible.g.nrows(), 40 + 10);
        let half = DVector::from_element(20, 0.5);
        assert!(p.feasible.residual(&half) <= 0.0);
    }

    #[test]
    fn interior_descent_decreases() {
        let d = SupportFunction::disk(1.0, Vec2::zeros()).unwrap();
        let r = solve_interior(&d, 2, Strategy::Fourier { n: 3 }, &quick()).unwrap();
        assert!(r.trace_is_monotone(1e-9));
        assert!(r.feasibility_residual <= 1e-8);
        assert!(r.objective_trace.last().unwrap().1 <= r.objective_trace[0].1);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = SupportFunction::square(1.0).unwrap();
        let o = OptimizeOptions { max_iter: 3, ..quick() };
        let a = solve_interior(&d, 1, Strategy::PiecewiseAffine { m: 16 }, &o).unwrap();
        let b = solve_interior(&d, 1, Strategy::PiecewiseAffine { m: 16 }, &o).unwrap();
        assert_eq!(a.f_opt, b.f_opt);
    }
}
