//! P1 finite elements for the Neumann Laplacian and a shift-invert block
//! subspace eigensolver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{triangulate, TriangleMesh};
use crate::support::SupportFunction;

/// Relative gap below which neighbouring eigenvalues count as multiple.
pub const MULTIPLICITY_GAP: f64 = 1e-3;
/// Residual tolerance for each returned eigenpair.
pub const TOL_RESIDUAL: f64 = 1e-8;
const MAX_ITER: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// `mu_0 <= mu_1 <= ...`; `mu_0` belongs to the constant mode.
    pub values: Vec<f64>,
    pub mesh_h: f64,
    pub n_dof: usize,
}

impl Spectrum {
    pub fn mu(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    /// Whether `mu_k` coincides with a neighbour up to `MULTIPLICITY_GAP`.
    pub fn is_multiple(&self, k: usize) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= MULTIPLICITY_GAP * a.abs().max(b.abs());
        (k > 1 && close(self.values[k - 1], self.values[k]))
            || (k + 1 < self.values.len() && close(self.values[k], self.values[k + 1]))
    }

    pub fn multiplicity_flags(&self) -> Vec<bool> {
        (0..self.values.len()).map(|k| k > 0 && self.is_multiple(k)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,mu\n");
        for (k, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{k},{v:.12e}\n"));
        }
        s
    }

    pub fn to_json(&self, mesh: Option<&TriangleMesh>) -> serde_json::Value {
        serde_json::json!({
            "values": self.values,
            "multiple": self.multiplicity_flags(),
            "mesh_h": self.mesh_h,
            "n_dof": self.n_dof,
            "mesh": mesh.map(|m| m.metadata()),
        })
    }
}

/// Symmetric sparse matrix in compressed-row form (both triangles stored).
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(t.len() / 3);
        let mut vals: Vec<f64> = Vec::with_capacity(t.len() / 3);
        let mut last = (usize::MAX, usize::MAX);
        for (i, j, v) in t {
            if (i, j) == last {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = (i, j);
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }
}

/// Stiffness and lumped-free mass matrices of the P1 discretization.
#[derive(Debug, Clone)]
pub struct FemSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
}

pub fn assemble(mesh: &TriangleMesh) -> Result<FemSystem> {
    let n = mesh.n_nodes();
    let mut kt = Vec::with_capacity(9 * mesh.n_triangles());
    let mut mt = Vec::with_capacity(9 * mesh.n_triangles());
    let scale2 = mesh.h_target * mesh.h_target;
    for tri in &mesh.triangles {
        let p = tri.map(|i| mesh.nodes[i]);
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        if !(area2 > 1e-14 * scale2) {
            return Err(Error::DegenerateMass(format!("triangle {tri:?} has area {:.3e}", area2 / 2.0)));
        }
        let area = area2 / 2.0;
        let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
        let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
        for i in 0..3 {
            for j in 0..3 {
                kt.push((tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area)));
                mt.push((tri[i], tri[j], area / 12.0 * if i == j { 2.0 } else { 1.0 }));
            }
        }
    }
    Ok(FemSystem { stiffness: CsrMatrix::from_triplets(n, kt), mass: CsrMatrix::from_triplets(n, mt) })
}

/// Reverse Cuthill-McKee ordering; returns `perm[new] = old`.
fn rcm(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n).map(|i| a.row_ptr[i + 1] - a.row_ptr[i]).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let bfs_last_level = |start: usize| -> (usize, usize) {
        let mut level = vec![usize::MAX; n];
        level[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            last = v;
            for (w, _) in a.row(v) {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        (last, level[last])
    };
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap();
        // pseudo-peripheral start
        let (mut start, mut ecc) = bfs_last_level(seed);
        for _ in 0..4 {
            let (far, e) = bfs_last_level(start);
            if e <= ecc {
                break;
            }
            start = far;
            ecc = e;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = a.row(v).map(|(w, _)| w).filter(|&w| !visited[w]).collect();
            nb.sort_by_key(|&w| degree[w]);
            for w in nb {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Variable-band (skyline) Cholesky factor `L` of a symmetric positive
/// definite matrix, stored row by row from the first nonzero column.
struct ProfileCholesky {
    first: Vec<usize>,
    ptr: Vec<usize>,
    data: Vec<f64>,
}

impl ProfileCholesky {
    /// Factors `K - sigma M` in the permuted numbering `perm[new] = old`.
    fn factor(sys: &FemSystem, sigma: f64, perm: &[usize], inv: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut first = vec![0; n];
        for (i_new, &i_old) in perm.iter().enumerate() {
            first[i_new] = sys.stiffness.row(i_old).map(|(j, _)| inv[j]).min().unwrap_or(i_new).min(i_new);
        }
        let mut ptr = vec![0; n + 1];
        for i in 0..n {
            ptr[i + 1] = ptr[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; ptr[n]];
        for (i_new, &i_old) in perm.iter().enumerate() {
            for (j_old, v) in sys.stiffness.row(i_old) {
                let j_new = inv[j_old];
                if j_new <= i_new {
                    data[ptr[i_new] + j_new - first[i_new]] += v;
                }
            }
            for (j_old, v) in sys.mass.row(i_old) {
                let j_new = inv[j_old];
                if j_new <= i_new {
                    data[ptr[i_new] + j_new - first[i_new]] -= sigma * v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let s: f64 = {
                    let ri = &data[ptr[i] + k0 - fi..ptr[i] + j - fi];
                    let rj = &data[ptr[j] + k0 - fj..ptr[j] + j - fj];
                    ri.iter().zip(rj).map(|(a, b)| a * b).sum()
                };
                let idx = ptr[i] + j - fi;
                if j < i {
                    data[idx] = (data[idx] - s) / data[ptr[j + 1] - 1];
                } else {
                    let d = data[idx] - s;
                    if !(d > 0.0) {
                        return Err(Error::SolverDivergence(format!("shifted matrix not definite at row {i}")));
                    }
                    data[idx] = d.sqrt();
                }
            }
        }
        Ok(Self { first, ptr, data })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.ptr[i]..self.ptr[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&x[fi..i]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.ptr[i]..self.ptr[i + 1]];
            x[i] /= row[i - fi];
            let xi = x[i];
            for (xk, l) in x[fi..i].iter_mut().zip(&row[..i - fi]) {
                *xk -= l * xi;
            }
        }
    }
}

/// Eigenpairs from a solve; `vectors` columns are M-orthonormal and can seed
/// a later solve on a mesh with the same numbering.
#[derive(Debug, Clone)]
pub struct Modes {
    pub spectrum: Spectrum,
    pub vectors: DMatrix<f64>,
    pub iterations: usize,
}

fn starting_block(mesh: &TriangleMesh, p: usize) -> DMatrix<f64> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for q in &mesh.nodes {
        for d in 0..2 {
            lo[d] = lo[d].min(q[d]);
            hi[d] = hi[d].max(q[d]);
        }
    }
    let mut freqs: Vec<(usize, usize)> = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).filter(|&f| f != (0, 0)).collect();
    freqs.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
    let n = mesh.n_nodes();
    DMatrix::from_fn(n, p, |i, col| {
        let (a, b) = freqs[col % freqs.len()];
        let x = (mesh.nodes[i][0] - lo[0]) / (hi[0] - lo[0]).max(1e-300);
        let y = (mesh.nodes[i][1] - lo[1]) / (hi[1] - lo[1]).max(1e-300);
        // a small deterministic perturbation breaks exact symmetries of the start
        let jitter = (((i * 7919 + col * 104729) % 1009) as f64 / 1009.0 - 0.5) * 0.05;
        (std::f64::consts::PI * a as f64 * x).cos() * (std::f64::consts::PI * b as f64 * y).cos() + jitter
    })
}

fn m_orthonormalize(mass: &CsrMatrix, ones: &DVector<f64>, y: &mut DMatrix<f64>) {
    let n = y.nrows();
    let mut my = vec![0.0; n];
    for _pass in 0..2 {
        for j in 0..y.ncols() {
            let c = mass.dot(ones.as_slice(), y.column(j).as_slice());
            y.column_mut(j).axpy(-c, ones, 1.0);
            for i in 0..j {
                let yi = y.column(i).clone_owned();
                let c = mass.dot(yi.as_slice(), y.column(j).as_slice());
                y.column_mut(j).axpy(-c, &yi, 1.0);
            }
            mass.mul_vec(y.column(j).as_slice(), &mut my);
            let norm = y.column(j).iter().zip(&my).map(|(a, b)| a * b).sum::<f64>().sqrt();
            if norm > 0.0 {
                y.column_mut(j).scale_mut(1.0 / norm);
            }
        }
    }
}

/// Lowest `kmax + 1` Neumann eigenvalues on `mesh`.
pub fn neumann_spectrum(mesh: &TriangleMesh, kmax: usize) -> Result<Spectrum> {
    Ok(solve_modes(mesh, kmax, None)?.spectrum)
}

/// Like `neumann_spectrum` but also returns eigenvectors and accepts a warm
/// start from a previous solve on a mesh with identical connectivity.
pub fn solve_modes(mesh: &TriangleMesh, kmax: usize, warm: Option<&Modes>) -> Result<Modes> {
    if kmax == 0 {
        return Err(Error::InvalidDiscretization("kmax must be at least 1".into()));
    }
    let sys = assemble(mesh)?;
    let n = mesh.n_nodes();
    let nev = kmax; // nonconstant modes wanted
    if n < nev + 2 {
        return Err(Error::InvalidDiscretization(format!("{n} nodes cannot resolve {nev} modes")));
    }
    let p = (nev + 8).max(2 * nev).min(n - 1);
    let area: f64 = mesh.area();
    let sigma = -1e-6 / area;

    let perm = rcm(&sys.stiffness);
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let chol = ProfileCholesky::factor(&sys, sigma, &perm, &inv)?;
    let apply_inverse = |rhs: &[f64], out: &mut [f64]| {
        let mut tmp: Vec<f64> = perm.iter().map(|&o| rhs[o]).collect();
        chol.solve_in_place(&mut tmp);
        for (new, &old) in perm.iter().enumerate() {
            out[old] = tmp[new];
        }
    };

    let ones = DVector::from_element(n, 1.0 / area.sqrt());
    let mut x = match warm {
        Some(w) if w.vectors.nrows() == n && w.vectors.ncols() == p => w.vectors.clone(),
        _ => starting_block(mesh, p),
    };
    m_orthonormalize(&sys.mass, &ones, &mut x);

    let mut mx = vec![0.0; n];
    let mut kx = vec![0.0; n];
    let mut col = vec![0.0; n];
    let mut values = vec![0.0; p];
    for iter in 1..=MAX_ITER {
        let mut y = DMatrix::zeros(n, p);
        for j in 0..p {
            sys.mass.mul_vec(x.column(j).as_slice(), &mut mx);
            apply_inverse(&mx, &mut col);
            y.column_mut(j).copy_from_slice(&col);
        }
        m_orthonormalize(&sys.mass, &ones, &mut y);
        let mut ky = DMatrix::zeros(n, p);
        for j in 0..p {
            sys.stiffness.mul_vec(y.column(j).as_slice(), &mut kx);
            ky.column_mut(j).copy_from_slice(&kx);
        }
        let mut kr = y.transpose() * &ky;
        kr = (&kr + kr.transpose()) * 0.5;
        let eig = SymmetricEigen::new(kr);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let q = DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]);
        for (j, &o) in order.iter().enumerate() {
            values[j] = eig.eigenvalues[o];
        }
        x = &y * &q;
        let kxm = &ky * &q;
        let mut converged = true;
        for j in 0..nev {
            sys.mass.mul_vec(x.column(j).as_slice(), &mut mx);
            let mu = values[j];
            let (mut r2, mut m2) = (0.0, 0.0);
            for i in 0..n {
                let r = kxm[(i, j)] - mu * mx[i];
                r2 += r * r;
                m2 += mx[i] * mx[i];
            }
            if r2.sqrt() > TOL_RESIDUAL * mu.abs().max(1.0) * m2.sqrt() {
                converged = false;
                break;
            }
        }
        if converged {
            let mu0 = sys.stiffness.dot(ones.as_slice(), ones.as_slice());
            let mut vals = vec![mu0];
            vals.extend_from_slice(&values[..nev]);
            return Ok(Modes {
                spectrum: Spectrum { values: vals, mesh_h: mesh.h_target, n_dof: n },
                vectors: x,
                iterations: iter,
            });
        }
    }
    Err(Error::SolverDivergence(format!("no convergence after {MAX_ITER} subspace iterations")))
}

/// Discretization settings for evaluating eigenvalues of a support function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Polygon resolution for Fourier shapes (ignored for piecewise-affine).
    pub m_out: usize,
    /// Target element size is `diameter / h_factor`.
    pub h_factor: f64,
    /// Uniform refinements applied after meshing.
    pub refine: usize,
    pub allow_thin: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { m_out: 256, h_factor: 60.0, refine: 0, allow_thin: false }
    }
}

impl EvalOptions {
    pub fn with_h_factor(self, h_factor: f64) -> Self {
        Self { h_factor, ..self }
    }
}

/// Meshes a support function according to `opts`.
pub fn mesh_shape(shape: &SupportFunction, opts: &EvalOptions) -> Result<TriangleMesh> {
    let poly = shape.realize(opts.m_out)?;
    let mut mesh = triangulate(&poly, poly.diameter() / opts.h_factor, opts.allow_thin)?;
    for _ in 0..opts.refine {
        mesh = mesh.refine();
    }
    Ok(mesh)
}

pub fn spectrum_of(shape: &SupportFunction, kmax: usize, opts: &EvalOptions) -> Result<Spectrum> {
    neumann_spectrum(&mesh_shape(shape, opts)?, kmax)
}

pub fn mu_k(shape: &SupportFunction, k: usize, opts: &EvalOptions) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidDiscretization("k must be at least 1".into()));
    }
    Ok(spectrum_of(shape, k, opts)?.values[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{rectangle, regular};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn skyline_solves_spd() {
        let mesh = triangulate(&rectangle(0.0, 0.0, 1.0, 1.0), 0.2, false).unwrap();
        let sys = assemble(&mesh).unwrap();
        let n = mesh.n_nodes();
        let perm = rcm(&sys.stiffness);
        let mut inv = vec![0; n];
        for (a, &b) in perm.iter().enumerate() {
            inv[b] = a;
        }
        let sigma = -0.5;
        let chol = ProfileCholesky::factor(&sys, sigma, &perm, &inv).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let (mut kx, mut mx) = (vec![0.0; n], vec![0.0; n]);
        sys.stiffness.mul_vec(&x, &mut kx);
        sys.mass.mul_vec(&x, &mut mx);
        let b: Vec<f64> = (0..n).map(|i| kx[i] - sigma * mx[i]).collect();
        let mut t: Vec<f64> = perm.iter().map(|&o| b[o]).collect();
        chol.solve_in_place(&mut t);
        for (new, &old) in perm.iter().enumerate() {
            assert!((t[new] - x[old]).abs() < 1e-10);
        }
    }

    #[test]
    fn mass_sums_to_area() {
        let mesh = triangulate(&regular(9, 1.0, 0.0), 0.2, false).unwrap();
        let sys = assemble(&mesh).unwrap();
        let ones = vec![1.0; mesh.n_nodes()];
        assert_relative_eq!(sys.mass.dot(&ones, &ones), mesh.area(), epsilon = 1e-12);
        assert!(sys.stiffness.dot(&ones, &ones).abs() < 1e-12);
    }

    #[test]
    fn unit_square_spectrum() {
        let mesh = triangulate(&rectangle(0.0, 0.0, 1.0, 1.0), 0.02, false).unwrap();
        let s = neumann_spectrum(&mesh, 5).unwrap();
        let pi2 = PI * PI;
        for (k, e) in [(1, pi2), (2, pi2), (3, 2.0 * pi2), (4, 4.0 * pi2), (5, 4.0 * pi2)] {
            assert!((s.values[k] / e - 1.0).abs() < 5e-3, "mu_{k} = {}", s.values[k]);
        }
        assert!(s.values[0].abs() < 1e-8);
        assert!(s.is_multiple(1) && s.is_multiple(2) && !s.is_multiple(3));
    }

    #[test]
    fn warm_start_converges_fast() {
        let poly = regular(10, 1.0, 0.0);
        let mesh = triangulate(&poly, 0.1, false).unwrap();
        let first = solve_modes(&mesh, 4, None).unwrap();
        let again = solve_modes(&mesh, 4, Some(&first)).unwrap();
        assert!(again.iterations <= 2);
        for (a, b) in first.spectrum.values.iter().zip(&again.spectrum.values) {
            assert!((a - b).abs() < 1e-7 * b.max(1.0));
        }
    }

    #[test]
    fn csv_export() {
        let s = Spectrum { values: vec![0.0, 1.5], mesh_h: 0.1, n_dof: 10 };
        assert!(s.to_csv().starts_with("k,mu\n0,"));
        assert_eq!(s.to_csv().lines().count(), 3);
    }
}
