//! Euclidean projection onto a polyhedron `{x : G x <= h}`, computed with the
//! dual active-set method of Goldfarb and Idnani specialised to the identity
//! Hessian. The method starts from the unconstrained minimizer `y` and adds
//! violated constraints one at a time, dropping others as their multipliers
//! reach zero, so it cannot cycle on degenerate constraint sets.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    row_norms: Vec<f64>,
}

impl Polyhedron {
    pub fn new(g: DMatrix<f64>, h: DVector<f64>) -> Self {
        let row_norms = (0..g.nrows()).map(|i| g.row(i).norm()).collect();
        Self { g, h, row_norms }
    }

    pub fn dimension(&self) -> usize {
        self.g.ncols()
    }

    /// `max_i (G x - h)_i`.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        (&self.g * x - &self.h).max()
    }

    /// Closest point of the polyhedron to `y`.
    pub fn project(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        let d = self.dimension();
        let m = self.g.nrows();
        let scale = y.amax().max(self.h.amax()).max(1e-300);
        let tol = 1e-12 * scale;
        let mut x = y.clone();
        let mut active: Vec<usize> = Vec::new();
        let mut u: Vec<f64> = Vec::new();
        let max_iter = 10 * (m + d) + 100;
        let mut iter = 0;
        loop {
            // most violated constraint, measured in distance
            let gx = &self.g * &x;
            let mut pick = None;
            let mut worst = tol;
            for i in 0..m {
                if active.contains(&i) || self.row_norms[i] == 0.0 {
                    continue;
                }
                let v = (gx[i] - self.h[i]) / self.row_norms[i];
                if v > worst {
                    worst = v;
                    pick = Some(i);
                }
            }
            let Some(p) = pick else { return Ok(x) };
            let np: DVector<f64> = self.g.row(p).transpose();
            let mut up = 0.0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::SolverDivergence("projection did not terminate".into()));
                }
                let (z, r) = self.directions(&active, &np);
                // largest dual step keeping active multipliers nonnegative
                let mut t1 = f64::INFINITY;
                let mut drop = None;
                for (j, &rj) in r.iter().enumerate() {
                    if rj > 0.0 {
                        let t = u[j] / rj;
                        if t < t1 {
                            t1 = t;
                            drop = Some(j);
                        }
                    }
                }
                let zn = z.dot(&np);
                let slack = self.h[p] - np.dot(&x);
                let t2 = if z.norm() > 1e-12 * np.norm() && zn > 0.0 { -slack / zn } else { f64::INFINITY };
                if t1.is_infinite() && t2.is_infinite() {
                    return Err(Error::NoFeasibleStart);
                }
                let t = t1.min(t2);
                if t2.is_finite() {
                    x.axpy(-t, &z, 1.0);
                }
                for (uj, rj) in u.iter_mut().zip(&r) {
                    *uj -= t * rj;
                }
                up += t;
                if t2 <= t1 {
                    active.push(p);
                    u.push(up);
                    break;
                }
                let j = drop.unwrap();
                active.remove(j);
                u.remove(j);
            }
        }
    }

    /// Primal direction `z = (I - P_N) n` and dual direction `r` with
    /// `N r = P_N n`, where `N` holds the active rows.
    fn directions(&self, active: &[usize], n: &DVector<f64>) -> (DVector<f64>, Vec<f64>) {
        if active.is_empty() {
            return (n.clone(), Vec::new());
        }
        let d = self.dimension();
        let nm = DMatrix::from_fn(d, active.len(), |i, j| self.g[(active[j], i)]);
        let qr = nm.qr();
        let q = qr.q();
        let rmat = qr.r();
        let qtn = q.transpose() * n;
        let z = n - &q * &qtn;
        let r = rmat.solve_upper_triangular(&qtn).unwrap_or_else(|| DVector::zeros(active.len()));
        (z, r.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_box() -> Polyhedron {
        // 0 <= x, y <= 1
        let g = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]);
        let h = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
        Polyhedron::new(g, h)
    }

    #[test]
    fn box_projection() {
        let p = unit_box();
        let out = p.project(&DVector::from_vec(vec![2.0, -3.0])).unwrap();
        assert_relative_eq!(out[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(out[1], 0.0, epsilon = 1e-12);
        let inside = DVector::from_vec(vec![0.2, 0.9]);
        assert_eq!(p.project(&inside).unwrap(), inside);
    }

    #[test]
    fn simplex_projection() {
        // x + y <= 1, x >= 0, y >= 0
        let g = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, -1.0, 0.0, 0.0, -1.0]);
        let h = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let poly = Polyhedron::new(g, h);
        let out = poly.project(&DVector::from_vec(vec![1.0, 0.6])).unwrap();
        assert_relative_eq!(out[0], 0.7, epsilon = 1e-12);
        assert_relative_eq!(out[1], 0.3, epsilon = 1e-12);
        let corner = poly.project(&DVector::from_vec(vec![3.0, -2.0])).unwrap();
        assert_relative_eq!(corner[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(corner[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_rows() {
        // the same halfplane three times plus a nearly parallel one
        let g = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 1e-9]);
        let h = DVector::from_vec(vec![1.0, 1.0, 2.0, 1.0]);
        let poly = Polyhedron::new(g, h);
        let out = poly.project(&DVector::from_vec(vec![5.0, 0.3])).unwrap();
        assert!(poly.residual(&out) <= 1e-10);
        assert_relative_eq!(out[0], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn infeasible_detected() {
        let g = DMatrix::from_row_slice(2, 1, &[1.0, -1.0]);
        let h = DVector::from_vec(vec![0.0, -1.0]);
        assert!(Polyhedron::new(g, h).project(&DVector::from_vec(vec![0.5])).is_err());
    }
}
