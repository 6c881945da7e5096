//! Closed-form Neumann spectra of disks and rectangles, and zeros of Bessel
//! functions and their derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigen::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    ZeroOfJ,
    ZeroOfJPrime,
}

/// Largest order and index for which roots are guaranteed.
pub const MAX_ORDER: usize = 10;
pub const MAX_INDEX: usize = 10;

const QUADRATURE: usize = 160;

/// `J_n(x)` by the trapezoid rule on Bessel's integral, which is spectrally
/// accurate for a periodic integrand; fine for `x` up to about 100.
pub fn bessel_j(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let sum: f64 = (0..QUADRATURE)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / QUADRATURE as f64;
            (nf * t - x * t.sin()).cos()
        })
        .sum();
    sum / QUADRATURE as f64
}

/// `J_n'(x)`.
pub fn bessel_j_prime(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let sum: f64 = (0..QUADRATURE)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / QUADRATURE as f64;
            (nf * t - x * t.sin()).sin() * t.sin()
        })
        .sum();
    sum / QUADRATURE as f64
}

/// The `q`-th positive zero of `J_p` or `J_p'`. For `J_0'` the trivial zero
/// at the origin is not counted.
pub fn bessel_root(p: usize, q: usize, kind: RootKind) -> f64 {
    assert!(q >= 1, "root index starts at 1");
    let f = |x: f64| match kind {
        RootKind::ZeroOfJ => bessel_j(p, x),
        RootKind::ZeroOfJPrime => bessel_j_prime(p, x),
    };
    // all positive zeros of J_p and J_p' (p >= 1) exceed p
    let step = 0.05;
    let mut a = 0.9 * p as f64 + 0.1;
    let mut fa = f(a);
    let mut found = 0;
    loop {
        let b = a + step;
        let fb = f(b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == q {
                return bisect(&f, a, b);
            }
        }
        a = b;
        fa = fb;
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    while b - a > 1e-14 * b {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `j_{0,1}`, the first zero of `J_0`.
pub fn j01() -> f64 {
    bessel_root(0, 1, RootKind::ZeroOfJ)
}

fn sorted_spectrum(mut values: Vec<f64>, kmax: usize) -> Spectrum {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.truncate(kmax + 1);
    Spectrum { values, mesh_h: 0.0, n_dof: 0 }
}

/// Neumann spectrum of the `a x b` rectangle: `pi^2 (m^2/a^2 + n^2/b^2)`.
pub fn rectangle_spectrum(a: f64, b: f64, kmax: usize) -> Spectrum {
    let mut values = Vec::with_capacity((kmax + 1) * (kmax + 1));
    for m in 0..=kmax {
        for n in 0..=kmax {
            let (mf, nf) = (m as f64, n as f64);
            values.push(PI * PI * (mf * mf / (a * a) + nf * nf / (b * b)));
        }
    }
    sorted_spectrum(values, kmax)
}

/// Neumann spectrum of the disk of radius `r`: `(j'_{p,q}/r)^2`, doubled for
/// `p >= 1`. Exact for `kmax <= 40`; beyond that higher orders are missing and
/// the list is truncated.
pub fn disk_spectrum(r: f64, kmax: usize) -> Spectrum {
    // j'_{11,1} ~ 12.83 bounds every value we can certify as complete
    let cutoff = bessel_root(MAX_ORDER + 1, 1, RootKind::ZeroOfJPrime);
    let mut values = vec![0.0];
    for p in 0..=MAX_ORDER {
        for q in 1..=MAX_INDEX {
            let j = bessel_root(p, q, RootKind::ZeroOfJPrime);
            if j >= cutoff {
                break;
            }
            let mu = (j / r).powi(2);
            values.push(mu);
            if p > 0 {
                values.push(mu);
            }
        }
    }
    sorted_spectrum(values, kmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_roots() {
        assert_relative_eq!(j01(), 2.404_825_557_695_773, epsilon = 1e-10);
        assert_relative_eq!(bessel_root(1, 1, RootKind::ZeroOfJPrime), 1.841_183_781_340_659, epsilon = 1e-10);
        assert_relative_eq!(bessel_root(2, 1, RootKind::ZeroOfJPrime), 3.054_236_928_227_14, epsilon = 1e-10);
        assert_relative_eq!(bessel_root(0, 1, RootKind::ZeroOfJPrime), 3.831_705_970_207_512, epsilon = 1e-10);
        assert_relative_eq!(bessel_root(1, 1, RootKind::ZeroOfJ), 3.831_705_970_207_512, epsilon = 1e-10);
    }

    #[test]
    fn thin_rectangle_limit() {
        let s = rectangle_spectrum(1.0, 0.01, 3);
        assert_relative_eq!(s.values[3], 9.0 * PI * PI, epsilon = 1e-12);
    }

    #[test]
    fn disk_values() {
        let s = disk_spectrum(1.0, 4);
        let expect = [0.0, 3.390, 3.390, 9.328, 9.328];
        for (v, e) in s.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-3);
        }
    }

    #[test]
    fn square_values() {
        let s = rectangle_spectrum(1.0, 1.0, 2);
        assert_relative_eq!(s.values[1], PI * PI);
        assert_relative_eq!(s.values[2], PI * PI);
    }
}
