//! Triangle meshes of convex polygons for piecewise-linear finite elements.
//!
//! Regular polygons are meshed by resampling the boundary at spacing at most
//! `h`, seeding a triangular lattice inside and taking the Delaunay
//! triangulation of the resulting point set. Polygons thinner than a few
//! element sizes get a structured, anisotropic mesh aligned with their
//! minimal-width direction, with at least two layers through the thickness.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::polygon::{ConvexPolygon, Vec2};
use crate::support::EPS_WIDTH;

/// Polygons thinner than this many target sizes use the structured mesher.
const THIN_RATIO: f64 = 3.0;
/// Interior lattice points closer than this fraction of `h` to the boundary
/// are dropped.
const LATTICE_CLEARANCE: f64 = 0.5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<[usize; 2]>,
    pub h_target: f64,
    /// Vertex-merge threshold applied to the input polygon; element altitudes
    /// stay above it unless the polygon itself is thinner.
    pub h_min_quality: f64,
}

#[inline]
fn tri_area2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

impl TriangleMesh {
    fn from_parts(nodes: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>, h_target: f64, h_min_quality: f64) -> Self {
        let mut mesh = Self { nodes, triangles, boundary_edges: Vec::new(), h_target, h_min_quality };
        mesh.boundary_edges = mesh.compute_boundary();
        mesh
    }

    fn compute_boundary(&self) -> Vec<[usize; 2]> {
        let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                count.entry(key).or_insert((0, [a, b])).0 += 1;
            }
        }
        let mut edges: Vec<[usize; 2]> = count.into_values().filter(|(c, _)| *c == 1).map(|(_, e)| e).collect();
        edges.sort_unstable();
        edges
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        0.5 * tri_area2(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Smallest triangle altitude.
    pub fn min_altitude(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                let p = [self.nodes[a], self.nodes[b], self.nodes[c]];
                let area2 = tri_area2(p[0], p[1], p[2]).abs();
                let longest = (0..3)
                    .map(|i| {
                        let (u, v) = (p[i], p[(i + 1) % 3]);
                        ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt()
                    })
                    .fold(0.0, f64::max);
                area2 / longest
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Longest edge length.
    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i], t[(i + 1) % 3])))
            .map(|(a, b)| {
                let (u, v) = (self.nodes[a], self.nodes[b]);
                ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// All triangles counterclockwise with positive area.
    pub fn is_valid(&self) -> bool {
        (0..self.triangles.len()).all(|t| self.signed_area(t) > 0.0)
    }

    /// Edge-sharing check: every interior edge is used by exactly two
    /// triangles with opposite orientation.
    pub fn is_conforming(&self) -> bool {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                *seen.entry((t[e], t[(e + 1) % 3])).or_default() += 1;
            }
        }
        seen.iter().all(|(&(a, b), &c)| c == 1 && seen.get(&(b, a)).copied().unwrap_or(0) <= 1)
    }

    /// Uniform red refinement: each triangle is split into four.
    pub fn refine(&self) -> Self {
        let mut nodes = self.nodes.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>| -> usize {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Self::from_parts(nodes, triangles, self.h_target / 2.0, self.h_min_quality / 2.0)
    }

    /// Node/element text export: `x y` lines, a blank line, then `i j k`
    /// lines with zero-based indices.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.nodes {
            s.push_str(&format!("{} {}\n", p[0], p[1]));
        }
        s.push('\n');
        for t in &self.triangles {
            s.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
        }
        s
    }

    pub fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "n_nodes": self.n_nodes(),
            "n_triangles": self.n_triangles(),
            "n_boundary_edges": self.boundary_edges.len(),
            "h_target": self.h_target,
            "h_min_quality": self.h_min_quality,
            "area": self.area(),
        })
    }
}

/// Meshes a convex polygon with target element size `h`.
pub fn triangulate(poly: &ConvexPolygon, h: f64, allow_thin: bool) -> Result<TriangleMesh> {
    if !(h > 0.0) {
        return Err(Error::InvalidDiscretization(format!("h_target must be positive, got {h}")));
    }
    let (width, normal_angle) = poly.min_width_direction();
    if width < EPS_WIDTH && !allow_thin {
        return Err(Error::CollapsedShape { width });
    }
    let merge = 0.05 * h.min(width);
    let poly = merge_close_vertices(poly, merge);
    if width < THIN_RATIO * h {
        structured_thin(&poly, h, normal_angle, merge)
    } else {
        delaunay(&poly, h, merge)
    }
}

/// Drops vertices that sit closer than `tol` to their predecessor.
fn merge_close_vertices(poly: &ConvexPolygon, tol: f64) -> ConvexPolygon {
    let v = poly.vertices();
    if v.len() <= 3 {
        return poly.clone();
    }
    let mut kept: Vec<Vec2> = Vec::with_capacity(v.len());
    for &p in v {
        if kept.last().map_or(true, |q: &Vec2| (p - *q).norm() > tol) {
            kept.push(p);
        }
    }
    while kept.len() > 3 && (kept[0] - kept[kept.len() - 1]).norm() <= tol {
        kept.pop();
    }
    ConvexPolygon::new(kept).unwrap_or_else(|_| poly.clone())
}

fn delaunay(poly: &ConvexPolygon, h: f64, h_min: f64) -> Result<TriangleMesh> {
    let mut points: Vec<Vec2> = Vec::new();
    for (a, b) in poly.edges() {
        let n = ((b - a).norm() / h).ceil().max(1.0) as usize;
        for i in 0..n {
            points.push(a + (b - a) * (i as f64 / n as f64));
        }
    }
    let (lo, hi) = bounding_box(poly);
    let dy = h * 3f64.sqrt() / 2.0;
    let rows = ((hi.y - lo.y) / dy).ceil() as usize + 1;
    let cols = ((hi.x - lo.x) / h).ceil() as usize + 2;
    let y0 = lo.y + 0.5 * ((hi.y - lo.y) - (rows - 1) as f64 * dy);
    for j in 0..rows {
        let y = y0 + j as f64 * dy;
        let shift = if j % 2 == 0 { 0.0 } else { 0.5 * h };
        let x0 = lo.x + 0.5 * ((hi.x - lo.x) - (cols - 1) as f64 * h) + shift - 0.25 * h;
        for i in 0..cols {
            let p = Vec2::new(x0 + i as f64 * h, y);
            if poly.inner_distance(p) > LATTICE_CLEARANCE * h {
                points.push(p);
            }
        }
    }
    let mut dt: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut handle_to_index: HashMap<usize, usize> = HashMap::new();
    let mut nodes: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    for p in &points {
        let handle = dt
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| Error::DegenerateShape(format!("triangulation insert: {e:?}")))?;
        let idx = handle.index();
        handle_to_index.entry(idx).or_insert_with(|| {
            nodes.push([p.x, p.y]);
            nodes.len() - 1
        });
    }
    let scale = (hi - lo).norm();
    let mut triangles = Vec::new();
    for face in dt.inner_faces() {
        let vs = face.vertices();
        let t = [
            handle_to_index[&vs[0].fix().index()],
            handle_to_index[&vs[1].fix().index()],
            handle_to_index[&vs[2].fix().index()],
        ];
        let a2 = tri_area2(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
        if a2.abs() <= 1e-12 * scale * h {
            continue;
        }
        triangles.push(if a2 > 0.0 { t } else { [t[0], t[2], t[1]] });
    }
    let (nodes, triangles) = drop_orphans(nodes, triangles);
    Ok(TriangleMesh::from_parts(nodes, triangles, h, h_min))
}

fn bounding_box(poly: &ConvexPolygon) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in poly.vertices() {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    (lo, hi)
}

fn drop_orphans(nodes: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> (Vec<[f64; 2]>, Vec<[usize; 3]>) {
    let mut used = vec![false; nodes.len()];
    for t in &triangles {
        for &i in t {
            used[i] = true;
        }
    }
    if used.iter().all(|&u| u) {
        return (nodes, triangles);
    }
    let mut map = vec![usize::MAX; nodes.len()];
    let mut kept = Vec::new();
    for (i, p) in nodes.into_iter().enumerate() {
        if used[i] {
            map[i] = kept.len();
            kept.push(p);
        }
    }
    let tris = triangles.into_iter().map(|t| [map[t[0]], map[t[1]], map[t[2]]]).collect();
    (kept, tris)
}

/// Column mesh in the frame where the minimal width is vertical.
fn structured_thin(poly: &ConvexPolygon, h: f64, normal_angle: f64, h_min: f64) -> Result<TriangleMesh> {
    // rotate so that the minimal-width normal becomes +y
    let rot = std::f64::consts::FRAC_PI_2 - normal_angle;
    let local = poly.rotated(rot);
    let (lo, hi) = bounding_box(&local);
    let length = hi.x - lo.x;
    let width = hi.y - lo.y;
    let n_uniform = (length / h).ceil().max(4.0) as usize;
    let dx = length / n_uniform as f64;
    let mut xs: Vec<f64> = (0..=n_uniform).map(|i| lo.x + i as f64 * dx).collect();
    // snap columns onto polygon vertices so the boundary is reproduced exactly
    for v in local.vertices() {
        let i = ((v.x - lo.x) / dx).round() as usize;
        let i = i.min(n_uniform);
        if (xs[i] - v.x).abs() < 0.3 * dx {
            xs[i] = v.x;
        } else {
            xs.push(v.x);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * length);
    let ny = ((width / h).ceil() as usize).max(2);
    let collapse = 1e-9 * width.max(f64::MIN_POSITIVE);

    let mut nodes: Vec<[f64; 2]> = Vec::new();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(xs.len());
    for &x in &xs {
        let (ylo, yhi) = vertical_extent(&local, x);
        if yhi - ylo <= collapse {
            nodes.push([x, 0.5 * (ylo + yhi)]);
            columns.push(vec![nodes.len() - 1]);
        } else {
            let col = (0..=ny)
                .map(|j| {
                    nodes.push([x, ylo + (yhi - ylo) * j as f64 / ny as f64]);
                    nodes.len() - 1
                })
                .collect();
            columns.push(col);
        }
    }
    let mut triangles = Vec::new();
    for w in columns.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        match (l.len(), r.len()) {
            (1, 1) => return Err(Error::DegenerateShape("adjacent collapsed columns".into())),
            (1, _) => {
                for j in 0..r.len() - 1 {
                    triangles.push([l[0], r[j], r[j + 1]]);
                }
            }
            (_, 1) => {
                for j in 0..l.len() - 1 {
                    triangles.push([l[j], r[0], l[j + 1]]);
                }
            }
            _ => {
                for j in 0..l.len() - 1 {
                    triangles.push([l[j], r[j], r[j + 1]]);
                    triangles.push([l[j], r[j + 1], l[j + 1]]);
                }
            }
        }
    }
    let (s, c) = (-rot).sin_cos();
    let nodes: Vec<[f64; 2]> = nodes.into_iter().map(|[x, y]| [c * x - s * y, s * x + c * y]).collect();
    let triangles: Vec<[usize; 3]> = triangles
        .into_iter()
        .filter_map(|t| {
            let a2 = tri_area2(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            if a2 > 0.0 {
                Some(t)
            } else if a2 < 0.0 {
                Some([t[0], t[2], t[1]])
            } else {
                None
            }
        })
        .collect();
    let (nodes, triangles) = drop_orphans(nodes, triangles);
    Ok(TriangleMesh::from_parts(nodes, triangles, h, h_min))
}

/// `[ymin, ymax]` of the vertical chord of a convex polygon at abscissa `x`.
fn vertical_extent(poly: &ConvexPolygon, x: f64) -> (f64, f64) {
    let mut ylo = f64::INFINITY;
    let mut yhi = f64::NEG_INFINITY;
    for (a, b) in poly.edges() {
        let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
        if x < x0 || x > x1 {
            continue;
        }
        if (b.x - a.x).abs() <= f64::EPSILON * (1.0 + x.abs()) {
            ylo = ylo.min(a.y.min(b.y));
            yhi = yhi.max(a.y.max(b.y));
        } else {
            let y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
            ylo = ylo.min(y);
            yhi = yhi.max(y);
        }
    }
    if ylo > yhi {
        // x sits a rounding error outside; use the nearest vertex
        let v = poly
            .vertices()
            .iter()
            .min_by(|p, q| (p.x - x).abs().partial_cmp(&(q.x - x).abs()).unwrap())
            .unwrap();
        return (v.y, v.y);
    }
    (ylo, yhi)
}

/// A mesh that can be carried onto nearby convex polygons without
/// remeshing: nodes keep their angle about a fixed center and their
/// relative radial position.
#[derive(Debug, Clone)]
pub struct MeshTemplate {
    pub mesh: TriangleMesh,
    center: Vec2,
    polar: Vec<(Vec2, f64)>,
}

impl MeshTemplate {
    pub fn new(poly: &ConvexPolygon, mesh: TriangleMesh) -> Self {
        let center = poly.centroid();
        let polar = mesh
            .nodes
            .iter()
            .map(|p| {
                let d = Vec2::new(p[0], p[1]) - center;
                let r = d.norm();
                if r == 0.0 {
                    (Vec2::new(1.0, 0.0), 0.0)
                } else {
                    let u = d / r;
                    (u, (r / poly.radial(center, u)).min(1.0))
                }
            })
            .collect();
        Self { mesh, center, polar }
    }

    /// The template mesh mapped onto `poly`, or `None` if the center is not
    /// interior or some element would invert.
    pub fn morph(&self, poly: &ConvexPolygon) -> Option<TriangleMesh> {
        if poly.inner_distance(self.center) <= 0.0 {
            return None;
        }
        let nodes: Vec<[f64; 2]> = self
            .polar
            .iter()
            .map(|&(u, s)| {
                let p = self.center + u * (s * poly.radial(self.center, u));
                [p.x, p.y]
            })
            .collect();
        let mesh = TriangleMesh { nodes, ..self.mesh.clone() };
        mesh.is_valid().then_some(mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{rectangle, regular};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_mesh() {
        let m = triangulate(&rectangle(0.0, 0.0, 1.0, 1.0), 0.1, false).unwrap();
        assert!(m.is_valid());
        assert!(m.is_conforming());
        assert!((200..=260).contains(&m.n_triangles()), "{} triangles", m.n_triangles());
        assert_relative_eq!(m.area(), 1.0, epsilon = 1e-6);
        assert_eq!(m.boundary_edges.len(), 40);
    }

    #[test]
    fn disk_polygon_mesh() {
        let poly = regular(256, 1.0, 0.0);
        let m = triangulate(&poly, 0.05, false).unwrap();
        assert!(m.is_valid());
        let inscribed = 0.5 * 256.0 * (2.0 * PI / 256.0).sin();
        assert_relative_eq!(m.area(), inscribed, epsilon = 1e-9);
        assert!((m.area() - PI).abs() < 5e-3);
    }

    #[test]
    fn thin_rectangle_layers() {
        let poly = rectangle(0.0, 0.0, 1.0, 0.001);
        assert!(triangulate(&poly, 0.05, false).is_ok());
        let sliver = rectangle(0.0, 0.0, 1.0, 5e-5);
        assert!(matches!(triangulate(&sliver, 0.05, false), Err(Error::CollapsedShape { .. })));
        let m = triangulate(&sliver, 0.05, true).unwrap();
        assert!(m.is_valid());
        assert_relative_eq!(m.area(), 5e-5, max_relative = 1e-9);
        // nodes on the mid-column: at least three distinct heights
        let mut ys: Vec<f64> = m.nodes.iter().filter(|p| (p[0] - 0.5).abs() < 1e-9).map(|p| p[1]).collect();
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ys.len() >= 3);
    }

    #[test]
    fn thin_diagonal_rectangle() {
        let c = Vec2::new(0.5, 0.5);
        let u = Vec2::new(1.0, 1.0).normalize();
        let v = Vec2::new(-u.y, u.x);
        let (l, w) = (0.9 * 2f64.sqrt() / 2.0, 0.025);
        let poly = ConvexPolygon::new(vec![c - u * l - v * w, c + u * l - v * w, c + u * l + v * w, c - u * l + v * w]).unwrap();
        let m = triangulate(&poly, 1.0 / 60.0, false).unwrap();
        assert!(m.is_valid());
        assert_relative_eq!(m.area(), poly.area(), max_relative = 1e-9);
    }

    #[test]
    fn refinement_counts_and_area() {
        let sq = ConvexPolygon::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]).unwrap();
        let two = TriangleMesh::from_parts(
            sq.vertices().iter().map(|v| [v.x, v.y]).collect(),
            vec![[0, 1, 2], [0, 2, 3]],
            1.0,
            0.0,
        );
        let r1 = two.refine();
        assert_eq!(r1.n_triangles(), 8);
        assert_eq!(r1.refine().n_triangles(), 32);
        assert_relative_eq!(r1.refine().area(), 1.0, epsilon = 1e-14);
        assert!(r1.is_conforming());
        let m = triangulate(&regular(7, 1.0, 0.3), 0.2, false).unwrap();
        let rr = m.refine().refine();
        assert_eq!(rr.n_triangles(), 16 * m.n_triangles());
        assert_relative_eq!(rr.area(), m.area(), epsilon = 1e-12);
    }

    #[test]
    fn morph_identity_and_scaling() {
        let poly = regular(12, 1.0, 0.1);
        let m = triangulate(&poly, 0.15, false).unwrap();
        let tpl = MeshTemplate::new(&poly, m.clone());
        let same = tpl.morph(&poly).unwrap();
        for (p, q) in same.nodes.iter().zip(&m.nodes) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
        let big = tpl.morph(&poly.scaled(1.1)).unwrap();
        assert_relative_eq!(big.area(), 1.21 * m.area(), epsilon = 1e-12);
    }

    #[test]
    fn text_export() {
        let m = triangulate(&rectangle(0.0, 0.0, 1.0, 1.0), 0.5, false).unwrap();
        let s = m.to_text();
        let blocks: Vec<&str> = s.split("\n\n").collect();
        assert_eq!(blocks[0].lines().count(), m.n_nodes());
        assert_eq!(blocks[1].lines().count(), m.n_triangles());
    }
}
