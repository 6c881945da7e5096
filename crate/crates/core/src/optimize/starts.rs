//! Feasible anchors and random starting shapes.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Problem;
use crate::constraints::ProblemKind;
use crate::error::{Error, Result};
use crate::polygon::{direction, ConvexPolygon, Vec2};
use crate::support::{SupportFunction, DEFAULT_SAMPLES};

/// A point of the feasible polyhedron: a small disk inside the box, or a
/// large disk around the obstacle.
pub(super) fn anchor(problem: &Problem) -> Result<DVector<f64>> {
    let reference = problem.reference.reconstruct_polygon(DEFAULT_SAMPLES)?;
    let disk = match problem.kind {
        ProblemKind::Interior => {
            let c = reference.centroid();
            let r = 0.5 * reference.inner_distance(c);
            SupportFunction::disk(r, c)?
        }
        ProblemKind::Exterior => {
            let r = reference.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max);
            SupportFunction::disk(1.05 * r.max(problem.scale), Vec2::zeros())?
        }
    };
    let x = problem.encode(&disk)?;
    if problem.feasible.residual(&x) > problem.tol() {
        return Err(Error::NoFeasibleStart);
    }
    Ok(x)
}

/// An infeasible-in-general random shape near the feasible set, to be
/// projected.
pub(super) fn random_start(problem: &Problem, rng: &mut ChaCha8Rng) -> Result<DVector<f64>> {
    let reference = problem.reference.reconstruct_polygon(DEFAULT_SAMPLES)?;
    let shape = match problem.kind {
        ProblemKind::Interior => random_inner_polygon(&reference, rng)?,
        ProblemKind::Exterior => random_outer_shape(problem, &reference, rng)?,
    };
    problem.encode(&shape)
}

/// Hull of 3 to 8 random points of the box, shrunk by 10% about its centroid.
fn random_inner_polygon(d: &ConvexPolygon, rng: &mut ChaCha8Rng) -> Result<SupportFunction> {
    let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
    for v in d.vertices() {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    for _attempt in 0..100 {
        let count = rng.gen_range(3..=8);
        let mut pts = Vec::with_capacity(count);
        while pts.len() < count {
            let p = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
            if d.contains_point(p, 0.0) {
                pts.push(p);
            }
        }
        let Ok(hull) = ConvexPolygon::hull(&pts) else { continue };
        if hull.min_width() < 0.05 * d.diameter() {
            continue;
        }
        let c = hull.centroid();
        let shrunk: Vec<Vec2> = hull.vertices().iter().map(|v| c + (v - c) * 0.9).collect();
        return SupportFunction::from_points(&shrunk, DEFAULT_SAMPLES);
    }
    Err(Error::NoFeasibleStart)
}

/// The obstacle dilated by a factor in `[1.05, 1.8]` about its centroid,
/// plus a small random low-frequency perturbation.
fn random_outer_shape(problem: &Problem, omega: &ConvexPolygon, rng: &mut ChaCha8Rng) -> Result<SupportFunction> {
    let c = omega.centroid();
    let s = rng.gen_range(1.05..1.8);
    let amp: Vec<(f64, f64)> = (2..=4)
        .map(|k| {
            let a = 0.05 * problem.scale / (k * k) as f64;
            (rng.gen_range(-a..a), rng.gen_range(-a..a))
        })
        .collect();
    let m = DEFAULT_SAMPLES;
    let samples = (1..=m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            let u = direction(t);
            let base = c.dot(&u) + s * (omega.support(t) - c.dot(&u));
            let wobble: f64 = amp
                .iter()
                .enumerate()
                .map(|(j, (a, b))| {
                    let k = (j + 2) as f64;
                    a * (k * t).cos() + b * (k * t).sin()
                })
                .sum();
            base + wobble
        })
        .collect();
    SupportFunction::pwa(samples)
}
