//! Quasi-interpolation: Scott–Zhang, Clément-type patch averages, the MINI
//! Fortin operator, and prolongation between nested meshes.

use std::sync::Arc;

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::fem::quadrature::{gauss_legendre, QuadratureRule};
use crate::fem::space::{velocity_shape, DiscreteFunction, Element, ElementPair, MixedSpace, Role};
use crate::mesh::{TriMesh, VertexParent};
use crate::{Error, Point, Result};

/// `⟨b_K⟩_K` for the bubble `27 λ0 λ1 λ2`.
pub const BUBBLE_MEAN: f64 = 9.0 / 20.0;

/// The set over which a node's dual functional averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Support {
    Edge(usize),
    Triangle(usize),
}

/// Lagrange basis of degree `order` on `[0, 1]`: endpoints, then midpoint.
fn edge_shape(order: usize, t: f64) -> [f64; 3] {
    match order {
        1 => [1.0 - t, t, 0.0],
        _ => [(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)],
    }
}

fn triangle_shape(order: usize, l: &[f64; 3]) -> [f64; 6] {
    match order {
        1 => [l[0], l[1], l[2], 0.0, 0.0, 0.0],
        _ => velocity_shape(ElementPair::TaylorHood, l).0,
    }
}

/// Inverse mass matrices of the Lagrange bases on the unit interval and
/// the reference triangle, both w.r.t. the normalized measure; row `i`
/// holds the coefficients of the dual function of node `i`.
struct DualBasis {
    order: usize,
    edge: Mat<f64>,
    triangle: Mat<f64>,
    edge_rule: (Vec<f64>, Vec<f64>),
    triangle_rule: QuadratureRule,
}

impl DualBasis {
    fn new(order: usize) -> Self {
        let ne = order + 1;
        let nt = if order == 1 { 3 } else { 6 };
        let edge_rule = gauss_legendre(8);
        let triangle_rule = QuadratureRule::new(8).expect("degree 8 exists");

        let mut me = Mat::<f64>::zeros(ne, ne);
        for (&t, &w) in edge_rule.0.iter().zip(&edge_rule.1) {
            let s = edge_shape(order, t);
            for i in 0..ne {
                for j in 0..ne {
                    me[(i, j)] += w * s[i] * s[j];
                }
            }
        }
        let mut mt = Mat::<f64>::zeros(nt, nt);
        for (l, &w) in triangle_rule.points.iter().zip(&triangle_rule.weights) {
            let s = triangle_shape(order, l);
            for i in 0..nt {
                for j in 0..nt {
                    mt[(i, j)] += w * s[i] * s[j];
                }
            }
        }
        Self {
            order,
            edge: me.partial_piv_lu().inverse(),
            triangle: mt.partial_piv_lu().inverse(),
            edge_rule,
            triangle_rule,
        }
    }

    /// Dual-functional value of local node `local` on edge `[a, b]`.
    fn on_edge(&self, a: Point, b: Point, local: usize, f: &dyn Fn(Point) -> [f64; 2]) -> [f64; 2] {
        let ne = self.order + 1;
        let mut moments = [[0.0; 2]; 3];
        for (&t, &w) in self.edge_rule.0.iter().zip(&self.edge_rule.1) {
            let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let fx = f(x);
            let s = edge_shape(self.order, t);
            for m in 0..ne {
                moments[m][0] += w * s[m] * fx[0];
                moments[m][1] += w * s[m] * fx[1];
            }
        }
        let mut out = [0.0; 2];
        for m in 0..ne {
            out[0] += self.edge[(local, m)] * moments[m][0];
            out[1] += self.edge[(local, m)] * moments[m][1];
        }
        out
    }

    fn on_triangle(&self, el: &Element, local: usize, f: &dyn Fn(Point) -> [f64; 2]) -> [f64; 2] {
        let nt = if self.order == 1 { 3 } else { 6 };
        let mut moments = [[0.0; 2]; 6];
        for (l, &w) in self.triangle_rule.points.iter().zip(&self.triangle_rule.weights) {
            let fx = f(el.map(l));
            let s = triangle_shape(self.order, l);
            for m in 0..nt {
                moments[m][0] += w * s[m] * fx[0];
                moments[m][1] += w * s[m] * fx[1];
            }
        }
        let mut out = [0.0; 2];
        for m in 0..nt {
            out[0] += self.triangle[(local, m)] * moments[m][0];
            out[1] += self.triangle[(local, m)] * moments[m][1];
        }
        out
    }
}

/// Lagrange nodes of order `order`: vertices, then (order 2) edge midpoints.
/// Returns the support chosen for each node.
fn supports(mesh: &TriMesh, order: usize) -> Vec<Support> {
    let nv = mesh.n_vertices();
    let mut boundary_edge_of = vec![None; nv];
    for (e, (&[a, b], &bd)) in mesh.edges().iter().zip(mesh.boundary_edge_flags()).enumerate() {
        if bd {
            for v in [a, b] {
                boundary_edge_of[v].get_or_insert(e);
            }
        }
    }
    let patches = mesh.vertex_patches();
    let mut out: Vec<Support> = (0..nv)
        .map(|v| match boundary_edge_of[v] {
            Some(e) => Support::Edge(e),
            None => Support::Triangle(patches[v][0]),
        })
        .collect();
    if order == 2 {
        for (e, tris) in mesh.edge_triangles().iter().enumerate() {
            if mesh.boundary_edge_flags()[e] {
                out.push(Support::Edge(e));
            } else {
                let t = tris.iter().flatten().copied().min().expect("interior edge has triangles");
                out.push(Support::Triangle(t));
            }
        }
    }
    out
}

/// Scott–Zhang values at the Lagrange nodes of order `order`, optionally
/// only for nodes selected by `wanted`.
fn scott_zhang_nodes(
    mesh: &TriMesh,
    order: usize,
    f: &dyn Fn(Point) -> [f64; 2],
    wanted: Option<&dyn Fn(usize) -> bool>,
) -> Vec<[f64; 2]> {
    let dual = DualBasis::new(order);
    let nv = mesh.n_vertices();
    let sup = supports(mesh, order);
    let mut values = vec![[0.0; 2]; sup.len()];
    for (node, s) in sup.iter().enumerate() {
        if let Some(w) = wanted {
            if !w(node) {
                continue;
            }
        }
        values[node] = match *s {
            Support::Edge(e) => {
                let [a, b] = mesh.edges()[e];
                let local = if node == a {
                    0
                } else if node == b {
                    1
                } else {
                    2
                };
                dual.on_edge(mesh.vertices()[a], mesh.vertices()[b], local, f)
            }
            Support::Triangle(t) => {
                let local = if node < nv {
                    mesh.triangles()[t].iter().position(|&v| v == node).expect("vertex in patch")
                } else {
                    3 + mesh.triangle_edges()[t].iter().position(|&e| e == node - nv).expect("edge of triangle")
                };
                dual.on_triangle(&Element::new(mesh, t), local, f)
            }
        };
    }
    values
}

/// Writes Lagrange node values of order `order` into velocity coefficients
/// of `space` (P1 data is embedded into P2 by edge averaging).
fn embed(space: &MixedSpace, order: usize, nodal: &[[f64; 2]]) -> Vec<f64> {
    let mesh = space.mesh();
    let nv = mesh.n_vertices();
    let mut coeffs = vec![0.0; space.n_velocity_dofs()];
    for (v, val) in nodal.iter().take(nv).enumerate() {
        coeffs[2 * v] = val[0];
        coeffs[2 * v + 1] = val[1];
    }
    if space.pair() == ElementPair::TaylorHood {
        for (e, &[a, b]) in mesh.edges().iter().enumerate() {
            let val = if order == 2 {
                nodal[nv + e]
            } else {
                [0.5 * (nodal[a][0] + nodal[b][0]), 0.5 * (nodal[a][1] + nodal[b][1])]
            };
            coeffs[2 * (nv + e)] = val[0];
            coeffs[2 * (nv + e) + 1] = val[1];
        }
    }
    coeffs
}

fn check_order(space: &MixedSpace, order: usize) -> Result<()> {
    match (order, space.pair()) {
        (1, _) | (2, ElementPair::TaylorHood) => Ok(()),
        _ => Err(Error::config(format!("Scott-Zhang order {order} is not available on the {} space", space.pair()))),
    }
}

/// Scott–Zhang quasi-interpolant of a vector field, of polynomial order 1
/// (no bubble part on MINI) or 2 (Taylor–Hood only).
///
/// Boundary nodes average over the boundary edge with the smallest index
/// containing them, interior nodes over the containing triangle with the
/// smallest index.
pub fn scott_zhang(space: &Arc<MixedSpace>, order: usize, f: &dyn Fn(Point) -> [f64; 2]) -> Result<DiscreteFunction> {
    check_order(space, order)?;
    let nodal = scott_zhang_nodes(space.mesh(), order, f, None);
    DiscreteFunction::new(space.clone(), Role::Velocity, embed(space, order, &nodal))
}

/// Scott–Zhang values (order matching the pair) at boundary velocity dofs,
/// as `(dof, value)` pairs in the order of
/// [`MixedSpace::boundary_velocity_dofs`]. Only `f|∂Ω` is evaluated.
pub fn scott_zhang_boundary(space: &MixedSpace, f: &dyn Fn(Point) -> [f64; 2]) -> Vec<(usize, f64)> {
    let order = space.pair().velocity_order();
    let flags = space.boundary_node_flags();
    let wanted = |n: usize| flags[n];
    let nodal = scott_zhang_nodes(space.mesh(), order, f, Some(&wanted));
    space.boundary_velocity_dofs().iter().map(|&dof| (dof, nodal[dof / 2][dof % 2])).collect()
}

/// Patch averages `⟨f⟩_{ω_v}` at every vertex.
pub fn clement_pressure(space: &Arc<MixedSpace>, f: &dyn Fn(Point) -> f64) -> Result<DiscreteFunction> {
    let mesh = space.mesh();
    let rule = QuadratureRule::new(8)?;
    let mut integral = vec![0.0; mesh.n_vertices()];
    let mut measure = vec![0.0; mesh.n_vertices()];
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let int: f64 = rule.points.iter().zip(&rule.weights).map(|(l, w)| w * f(el.map(l))).sum::<f64>() * el.area;
        for &v in &mesh.triangles()[t] {
            integral[v] += int;
            measure[v] += el.area;
        }
    }
    let coeffs = integral.iter().zip(&measure).map(|(i, m)| i / m).collect();
    DiscreteFunction::new(space.clone(), Role::Pressure, coeffs)
}

/// MINI Fortin operator `w = sz₁ z + Σ_K (⟨z − sz₁ z⟩_K / ⟨b_K⟩_K) b_K`,
/// so that `⟨z − w⟩_K = 0` on every triangle.
pub fn mini_fortin(space: &Arc<MixedSpace>, z: &dyn Fn(Point) -> [f64; 2]) -> Result<DiscreteFunction> {
    if space.pair() != ElementPair::Mini {
        return Err(Error::config("the bubble-corrected Fortin operator needs the MINI space"));
    }
    let mut w = scott_zhang(space, 1, z)?;
    let mesh = space.mesh();
    let nv = mesh.n_vertices();
    let rule = QuadratureRule::new(10)?;
    let coeffs = w.coeffs_mut();
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let tri = mesh.triangles()[t];
        let mut mean = [0.0; 2];
        for (l, &wq) in rule.points.iter().zip(&rule.weights) {
            let zx = z(el.map(l));
            for c in 0..2 {
                let p1: f64 = (0..3).map(|k| coeffs[2 * tri[k] + c] * l[k]).sum();
                mean[c] += wq * (zx[c] - p1);
            }
        }
        for c in 0..2 {
            coeffs[2 * (nv + t) + c] = mean[c] / BUBBLE_MEAN;
        }
    }
    Ok(w)
}

/// Evaluates a function on the coarse mesh at the nodes of the red-refined
/// fine space. MINI bubbles are chosen so that the fine function matches the
/// coarse one at fine barycenters.
pub fn prolongate(coarse: &DiscreteFunction, fine_space: &Arc<MixedSpace>) -> Result<DiscreteFunction> {
    let cspace = coarse.space();
    let (cm, fm) = (cspace.mesh(), fine_space.mesh());
    check_genealogy(cm, fm)?;
    if cspace.pair() != fine_space.pair() {
        return Err(Error::SpaceMismatch("prolongation between different element pairs".into()));
    }
    let parents = fm.parent_triangles();
    match coarse.role() {
        Role::Pressure => {
            let mut out = vec![0.0; fine_space.n_pressure_dofs()];
            for t in 0..fm.n_triangles() {
                let cel = Element::new(cm, parents[t]);
                for &v in &fm.triangles()[t] {
                    let l = cel.barycentric(fm.vertices()[v]);
                    out[v] = coarse.eval_pressure(parents[t], &l)?.0;
                }
            }
            DiscreteFunction::new(fine_space.clone(), Role::Pressure, out)
        }
        Role::Velocity => {
            let pair = fine_space.pair();
            let nv = fm.n_vertices();
            let mut out = vec![0.0; fine_space.n_velocity_dofs()];
            let lagrange = if pair == ElementPair::Mini { 3 } else { 6 };
            let node_pts = fine_space.node_points();
            for t in 0..fm.n_triangles() {
                let parent = parents[t];
                let cel = Element::new(cm, parent);
                let nodes = fine_space.velocity_nodes(t);
                for &node in &nodes[..lagrange] {
                    let l = cel.barycentric(node_pts[node]);
                    let (u, _) = coarse.eval_velocity(parent, &l)?;
                    out[2 * node] = u[0];
                    out[2 * node + 1] = u[1];
                }
            }
            if pair == ElementPair::Mini {
                for t in 0..fm.n_triangles() {
                    let parent = parents[t];
                    let cel = Element::new(cm, parent);
                    let l = cel.barycentric(node_pts[nv + t]);
                    let (u, _) = coarse.eval_velocity(parent, &l)?;
                    let tri = fm.triangles()[t];
                    for c in 0..2 {
                        let p1 = (out[2 * tri[0] + c] + out[2 * tri[1] + c] + out[2 * tri[2] + c]) / 3.0;
                        out[2 * (nv + t) + c] = u[c] - p1;
                    }
                }
            }
            DiscreteFunction::new(fine_space.clone(), Role::Velocity, out)
        }
    }
}

fn check_genealogy(coarse: &TriMesh, fine: &TriMesh) -> Result<()> {
    let ok = fine.level() == coarse.level() + 1
        && fine.n_triangles() == 4 * coarse.n_triangles()
        && fine.parent_triangles().len() == fine.n_triangles()
        && fine.parent_vertices().len() == fine.n_vertices()
        && fine.parent_vertices().iter().zip(fine.vertices()).all(|(p, x)| {
            let y = match *p {
                VertexParent::Vertex(v) => coarse.vertices().get(v).copied(),
                VertexParent::EdgeMidpoint(e) => coarse.edges().get(e).map(|&[a, b]| {
                    let (pa, pb) = (coarse.vertices()[a], coarse.vertices()[b]);
                    [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]
                }),
            };
            y == Some(*x)
        });
    if ok {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(format!(
            "mesh of level {} is not the red refinement of the level {} mesh",
            fine.level(),
            coarse.level()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(level: usize, pair: ElementPair) -> Arc<MixedSpace> {
        Arc::new(MixedSpace::new(Arc::new(TriMesh::unit_square(level)), pair))
    }

    fn max_node_error(f: &DiscreteFunction, g: impl Fn(Point) -> [f64; 2], lagrange_nodes: usize) -> f64 {
        let pts = f.space().node_points();
        pts.iter()
            .take(lagrange_nodes)
            .enumerate()
            .map(|(n, &x)| {
                let e = g(x);
                (f.coeffs()[2 * n] - e[0]).abs().max((f.coeffs()[2 * n + 1] - e[1]).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn reproduces_linear_fields() {
        let g = |x: Point| [1.0 + 2.0 * x[0] - x[1], 0.5 * x[1] - 3.0 * x[0]];
        for pair in [ElementPair::Mini, ElementPair::TaylorHood] {
            let s = space(2, pair);
            let sz = scott_zhang(&s, 1, &g).unwrap();
            let lagrange = match pair {
                ElementPair::Mini => s.mesh().n_vertices(),
                ElementPair::TaylorHood => s.n_velocity_nodes(),
            };
            assert!(max_node_error(&sz, g, lagrange) < 1e-13);
        }
    }

    #[test]
    fn reproduces_quadratic_fields() {
        let g = |x: Point| [x[0] * x[0] - x[0] * x[1] + 0.3, 2.0 * x[1] * x[1] + x[0]];
        let s = space(2, ElementPair::TaylorHood);
        let sz = scott_zhang(&s, 2, &g).unwrap();
        assert!(max_node_error(&sz, g, s.n_velocity_nodes()) < 1e-13);
        assert!(scott_zhang(&space(1, ElementPair::Mini), 2, &g).is_err());
    }

    #[test]
    fn constants_are_reproduced() {
        let s = space(1, ElementPair::Mini);
        let sz = scott_zhang(&s, 1, &|_| [2.5, -1.0]).unwrap();
        let nv = s.mesh().n_vertices();
        for v in 0..nv {
            assert!((sz.coeffs()[2 * v] - 2.5).abs() < 1e-14);
            assert!((sz.coeffs()[2 * v + 1] + 1.0).abs() < 1e-14);
        }
        assert!(sz.coeffs()[2 * nv..].iter().all(|&c| c == 0.0));
        let p = clement_pressure(&s, &|_| 3.0).unwrap();
        assert!(p.coeffs().iter().all(|&c| (c - 3.0).abs() < 1e-14));
    }

    #[test]
    fn boundary_values_depend_only_on_trace() {
        let s = space(2, ElementPair::TaylorHood);
        let f = |x: Point| [x[0].sin(), x[1].exp()];
        let bump = |x: Point| {
            let b = 16.0 * x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
            [x[0].sin() + 5.0 * b, x[1].exp() - b]
        };
        let a = scott_zhang_boundary(&s, &f);
        let b = scott_zhang_boundary(&s, &bump);
        assert_eq!(a, b);
        let full = scott_zhang(&s, 2, &f).unwrap();
        for &(dof, v) in &a {
            assert_eq!(full.coeffs()[dof], v);
        }
    }

    #[test]
    fn fortin_preserves_element_means() {
        let s = space(2, ElementPair::Mini);
        let z = |x: Point| {
            let b = x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
            [b * (1.0 + x[0]), b * x[1] * x[1]]
        };
        let w = mini_fortin(&s, &z).unwrap();
        let rule = QuadratureRule::new(10).unwrap();
        for t in 0..s.mesh().n_triangles() {
            let el = Element::new(s.mesh(), t);
            let mut mean = [0.0; 2];
            for (l, &wq) in rule.points.iter().zip(&rule.weights) {
                let (u, _) = w.eval_velocity(t, l).unwrap();
                let zx = z(el.map(l));
                mean[0] += wq * (zx[0] - u[0]);
                mean[1] += wq * (zx[1] - u[1]);
            }
            assert!(mean[0].abs() < 1e-15 && mean[1].abs() < 1e-15);
        }
        assert!(mini_fortin(&space(1, ElementPair::TaylorHood), &z).is_err());
    }

    #[test]
    fn bubble_mean() {
        let rule = QuadratureRule::new(3).unwrap();
        let m: f64 = rule.points.iter().zip(&rule.weights).map(|(l, w)| w * 27.0 * l[0] * l[1] * l[2]).sum();
        assert!((m - BUBBLE_MEAN).abs() < 1e-15);
    }

    #[test]
    fn taylor_hood_prolongation_is_exact() {
        let g = |x: Point| [x[0] * x[1] - 0.2 * x[0], 1.0 - x[1] * x[1]];
        let c = space(1, ElementPair::TaylorHood);
        let f = space(2, ElementPair::TaylorHood);
        let uc = scott_zhang(&c, 2, &g).unwrap();
        let uf = prolongate(&uc, &f).unwrap();
        for x in [[0.1, 0.7], [0.33, 0.21], [0.9, 0.05]] {
            let (a, b) = (uc.eval_at(x).unwrap(), uf.eval_at(x).unwrap());
            assert!((a[0] - b[0]).abs() < 1e-13 && (a[1] - b[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn mini_prolongation_matches_at_fine_vertices() {
        let z = |x: Point| {
            let b = x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
            [b, 2.0 * b]
        };
        let c = space(1, ElementPair::Mini);
        let f = space(2, ElementPair::Mini);
        let uc = mini_fortin(&c, &z).unwrap();
        let uf = prolongate(&uc, &f).unwrap();
        for (v, &x) in f.mesh().vertices().iter().enumerate() {
            let a = uc.eval_at(x).unwrap();
            assert!((a[0] - uf.coeffs()[2 * v]).abs() < 1e-14);
            assert!((a[1] - uf.coeffs()[2 * v + 1]).abs() < 1e-14);
        }
        // Fine barycenters are matched by construction.
        for t in 0..f.mesh().n_triangles() {
            let el = Element::new(f.mesh(), t);
            let x = el.map(&[1.0 / 3.0; 3]);
            let (a, b) = (uc.eval_at(x).unwrap(), uf.eval_velocity(t, &[1.0 / 3.0; 3]).unwrap().0);
            assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_prolongation_and_mismatch() {
        let c = space(1, ElementPair::Mini);
        let f = space(2, ElementPair::Mini);
        let p = clement_pressure(&c, &|_| 1.5).unwrap();
        let pf = prolongate(&p, &f).unwrap();
        assert!(pf.coeffs().iter().all(|&x| (x - 1.5).abs() < 1e-14));
        let far = space(3, ElementPair::Mini);
        assert!(matches!(prolongate(&p, &far), Err(Error::SpaceMismatch(_))));
        let th = space(2, ElementPair::TaylorHood);
        let u = DiscreteFunction::zeros(c.clone(), Role::Velocity);
        assert!(prolongate(&u, &th).is_err());
    }
}
