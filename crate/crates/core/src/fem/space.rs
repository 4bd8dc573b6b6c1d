//! Degrees of freedom, local bases and discrete functions for the MINI and
//! Taylor–Hood pairs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::fem::quadrature::QuadratureRule;
use crate::mesh::TriMesh;
use crate::{Error, Point, Result};

/// Maximal number of scalar velocity basis functions on one triangle.
pub const MAX_LOCAL: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementPair {
    /// Continuous P1 plus a cubic bubble per velocity component, P1 pressure.
    Mini,
    /// Continuous P2 velocity, P1 pressure.
    TaylorHood,
}

impl ElementPair {
    /// Scalar velocity basis functions per triangle.
    pub fn local_velocity_count(self) -> usize {
        match self {
            ElementPair::Mini => 4,
            ElementPair::TaylorHood => 6,
        }
    }

    /// Polynomial order of the Lagrange part of the velocity space.
    pub fn velocity_order(self) -> usize {
        match self {
            ElementPair::Mini => 1,
            ElementPair::TaylorHood => 2,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ElementPair::Mini => "mini",
            ElementPair::TaylorHood => "th",
        }
    }
}

impl fmt::Display for ElementPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ElementPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mini" => Ok(ElementPair::Mini),
            "th" | "taylorhood" | "taylor-hood" => Ok(ElementPair::TaylorHood),
            other => Err(Error::config(format!("unknown element pair '{other}' (expected mini or th)"))),
        }
    }
}

/// Affine geometry of one triangle.
#[derive(Clone, Copy, Debug)]
pub struct Element {
    pub points: [Point; 3],
    pub area: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
}

impl Element {
    pub fn new(mesh: &TriMesh, t: usize) -> Self {
        let points = mesh.triangle_points(t);
        let [a, b, c] = points;
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        let inv = 1.0 / det;
        let grad_lambda = [
            [(b[1] - c[1]) * inv, (c[0] - b[0]) * inv],
            [(c[1] - a[1]) * inv, (a[0] - c[0]) * inv],
            [(a[1] - b[1]) * inv, (b[0] - a[0]) * inv],
        ];
        Self { points, area: 0.5 * det, grad_lambda }
    }

    pub fn map(&self, lam: &[f64; 3]) -> Point {
        let [a, b, c] = self.points;
        [lam[0] * a[0] + lam[1] * b[0] + lam[2] * c[0], lam[0] * a[1] + lam[1] * b[1] + lam[2] * c[1]]
    }

    /// Barycentric coordinates of `x` (not clamped).
    pub fn barycentric(&self, x: Point) -> [f64; 3] {
        let [a, _, _] = self.points;
        let d = [x[0] - a[0], x[1] - a[1]];
        let l1 = self.grad_lambda[1][0] * d[0] + self.grad_lambda[1][1] * d[1];
        let l2 = self.grad_lambda[2][0] * d[0] + self.grad_lambda[2][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }

    /// Physical gradient from derivatives with respect to `(λ0, λ1, λ2)`.
    pub fn gradient(&self, dlam: &[f64; 3]) -> [f64; 2] {
        let g = &self.grad_lambda;
        [
            dlam[0] * g[0][0] + dlam[1] * g[1][0] + dlam[2] * g[2][0],
            dlam[0] * g[0][1] + dlam[1] * g[1][1] + dlam[2] * g[2][1],
        ]
    }
}

/// Scalar velocity basis (values and barycentric derivatives) at one point.
///
/// Local order: vertices 0..3, then the bubble (MINI) or the edge functions
/// opposite vertex 0, 1, 2 (Taylor–Hood).
pub fn velocity_shape(pair: ElementPair, l: &[f64; 3]) -> ([f64; MAX_LOCAL], [[f64; 3]; MAX_LOCAL]) {
    let mut v = [0.0; MAX_LOCAL];
    let mut d = [[0.0; 3]; MAX_LOCAL];
    match pair {
        ElementPair::Mini => {
            for k in 0..3 {
                v[k] = l[k];
                d[k][k] = 1.0;
            }
            v[3] = 27.0 * l[0] * l[1] * l[2];
            d[3] = [27.0 * l[1] * l[2], 27.0 * l[0] * l[2], 27.0 * l[0] * l[1]];
        }
        ElementPair::TaylorHood => {
            for k in 0..3 {
                v[k] = l[k] * (2.0 * l[k] - 1.0);
                d[k][k] = 4.0 * l[k] - 1.0;
                let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                v[3 + k] = 4.0 * l[i] * l[j];
                d[3 + k][i] = 4.0 * l[j];
                d[3 + k][j] = 4.0 * l[i];
            }
        }
    }
    (v, d)
}

/// Basis tables of a quadrature rule, shared by every element.
#[derive(Clone, Debug)]
pub struct Tabulation {
    pub rule: QuadratureRule,
    pub n_local: usize,
    pub values: Vec<[f64; MAX_LOCAL]>,
    pub dlambda: Vec<[[f64; 3]; MAX_LOCAL]>,
}

impl Tabulation {
    pub fn new(pair: ElementPair, degree: usize) -> Result<Self> {
        let rule = QuadratureRule::new(degree)?;
        let (values, dlambda) = rule.points.iter().map(|l| velocity_shape(pair, l)).unzip();
        Ok(Self { rule, n_local: pair.local_velocity_count(), values, dlambda })
    }

    /// Physical gradients of all local velocity basis functions at point `q`.
    pub fn gradients(&self, el: &Element, q: usize) -> [[f64; 2]; MAX_LOCAL] {
        let mut g = [[0.0; 2]; MAX_LOCAL];
        for (gi, dl) in g.iter_mut().zip(&self.dlambda[q]).take(self.n_local) {
            *gi = el.gradient(dl);
        }
        g
    }
}

/// Velocity and pressure degrees of freedom on a triangulation.
///
/// Scalar velocity nodes are numbered vertices first, then edges
/// (Taylor–Hood) or triangles (MINI bubbles). Velocity component `c` of node
/// `n` is dof `2n + c`; pressure dofs are the vertices.
#[derive(Clone, Debug)]
pub struct MixedSpace {
    mesh: Arc<TriMesh>,
    pair: ElementPair,
    n_nodes: usize,
    boundary_node: Vec<bool>,
    boundary_dofs: Vec<usize>,
    free_dofs: Vec<usize>,
}

impl MixedSpace {
    pub fn new(mesh: Arc<TriMesh>, pair: ElementPair) -> Self {
        let nv = mesh.n_vertices();
        let mut boundary_node = mesh.boundary_vertex_flags().to_vec();
        match pair {
            ElementPair::Mini => boundary_node.extend(std::iter::repeat_n(false, mesh.n_triangles())),
            ElementPair::TaylorHood => boundary_node.extend_from_slice(mesh.boundary_edge_flags()),
        }
        let n_nodes = boundary_node.len();
        debug_assert!(n_nodes >= nv);
        let mut boundary_dofs = Vec::new();
        let mut free_dofs = Vec::new();
        for (n, &b) in boundary_node.iter().enumerate() {
            let list = if b { &mut boundary_dofs } else { &mut free_dofs };
            list.extend([2 * n, 2 * n + 1]);
        }
        Self { mesh, pair, n_nodes, boundary_node, boundary_dofs, free_dofs }
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn pair(&self) -> ElementPair {
        self.pair
    }

    pub fn n_velocity_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_velocity_dofs(&self) -> usize {
        2 * self.n_nodes
    }

    pub fn n_pressure_dofs(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn boundary_node_flags(&self) -> &[bool] {
        &self.boundary_node
    }

    pub fn boundary_velocity_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn free_velocity_dofs(&self) -> &[usize] {
        &self.free_dofs
    }

    /// Global scalar velocity nodes of triangle `t` in local basis order.
    pub fn velocity_nodes(&self, t: usize) -> [usize; MAX_LOCAL] {
        let tri = self.mesh.triangles()[t];
        let nv = self.mesh.n_vertices();
        match self.pair {
            ElementPair::Mini => [tri[0], tri[1], tri[2], nv + t, 0, 0],
            ElementPair::TaylorHood => {
                let e = self.mesh.triangle_edges()[t];
                [tri[0], tri[1], tri[2], nv + e[0], nv + e[1], nv + e[2]]
            }
        }
    }

    pub fn pressure_nodes(&self, t: usize) -> [usize; 3] {
        self.mesh.triangles()[t]
    }

    /// Position of every scalar velocity node (bubble nodes at barycenters).
    pub fn node_points(&self) -> Vec<Point> {
        let mut pts = self.mesh.vertices().to_vec();
        match self.pair {
            ElementPair::Mini => {
                for t in 0..self.mesh.n_triangles() {
                    let [a, b, c] = self.mesh.triangle_points(t);
                    pts.push([(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]);
                }
            }
            ElementPair::TaylorHood => {
                for &[a, b] in self.mesh.edges() {
                    let (pa, pb) = (self.mesh.vertices()[a], self.mesh.vertices()[b]);
                    pts.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                }
            }
        }
        pts
    }

    /// Local velocity coefficients of triangle `t`, `[component][local]`.
    pub fn gather_velocity(&self, coeffs: &[f64], t: usize) -> [[f64; MAX_LOCAL]; 2] {
        let nodes = self.velocity_nodes(t);
        let mut out = [[0.0; MAX_LOCAL]; 2];
        for k in 0..self.pair.local_velocity_count() {
            out[0][k] = coeffs[2 * nodes[k]];
            out[1][k] = coeffs[2 * nodes[k] + 1];
        }
        out
    }

    pub fn gather_pressure(&self, coeffs: &[f64], t: usize) -> [f64; 3] {
        let n = self.pressure_nodes(t);
        [coeffs[n[0]], coeffs[n[1]], coeffs[n[2]]]
    }

    /// Index of a triangle containing `x` (smallest index on ties).
    pub fn locate(&self, x: Point) -> Option<(usize, [f64; 3])> {
        let tol = 1e-12;
        (0..self.mesh.n_triangles()).find_map(|t| {
            let l = Element::new(&self.mesh, t).barycentric(x);
            l.iter().all(|&c| c >= -tol).then_some((t, l))
        })
    }
}

/// Value `u` and gradient `∇u[i][j] = ∂_j u_i` of a velocity field.
pub fn velocity_value(
    local: &[[f64; MAX_LOCAL]; 2],
    n_local: usize,
    values: &[f64; MAX_LOCAL],
    grads: &[[f64; 2]; MAX_LOCAL],
) -> ([f64; 2], [[f64; 2]; 2]) {
    let mut u = [0.0; 2];
    let mut g = [[0.0; 2]; 2];
    for c in 0..2 {
        for k in 0..n_local {
            u[c] += local[c][k] * values[k];
            g[c][0] += local[c][k] * grads[k][0];
            g[c][1] += local[c][k] * grads[k][1];
        }
    }
    (u, g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Velocity,
    Pressure,
}

/// Coefficients of a finite element function on a [`MixedSpace`].
#[derive(Clone, Debug)]
pub struct DiscreteFunction {
    space: Arc<MixedSpace>,
    role: Role,
    coeffs: Vec<f64>,
}

impl DiscreteFunction {
    pub fn new(space: Arc<MixedSpace>, role: Role, coeffs: Vec<f64>) -> Result<Self> {
        let expected = match role {
            Role::Velocity => space.n_velocity_dofs(),
            Role::Pressure => space.n_pressure_dofs(),
        };
        if coeffs.len() != expected {
            return Err(Error::SpaceMismatch(format!(
                "{role:?} function needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { space, role, coeffs })
    }

    pub fn zeros(space: Arc<MixedSpace>, role: Role) -> Self {
        let n = match role {
            Role::Velocity => space.n_velocity_dofs(),
            Role::Pressure => space.n_pressure_dofs(),
        };
        Self { space, role, coeffs: vec![0.0; n] }
    }

    pub fn space(&self) -> &Arc<MixedSpace> {
        &self.space
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Velocity value and gradient at barycentric `l` in triangle `t`.
    pub fn eval_velocity(&self, t: usize, l: &[f64; 3]) -> Result<([f64; 2], [[f64; 2]; 2])> {
        self.expect_role(Role::Velocity)?;
        let pair = self.space.pair();
        let el = Element::new(self.space.mesh(), t);
        let (v, d) = velocity_shape(pair, l);
        let mut g = [[0.0; 2]; MAX_LOCAL];
        for k in 0..pair.local_velocity_count() {
            g[k] = el.gradient(&d[k]);
        }
        let local = self.space.gather_velocity(&self.coeffs, t);
        Ok(velocity_value(&local, pair.local_velocity_count(), &v, &g))
    }

    /// Pressure value and gradient at barycentric `l` in triangle `t`.
    pub fn eval_pressure(&self, t: usize, l: &[f64; 3]) -> Result<(f64, [f64; 2])> {
        self.expect_role(Role::Pressure)?;
        let el = Element::new(self.space.mesh(), t);
        let c = self.space.gather_pressure(&self.coeffs, t);
        let value = c[0] * l[0] + c[1] * l[1] + c[2] * l[2];
        Ok((value, el.gradient(&c)))
    }

    /// Point evaluation; the value of a velocity field is its first entry.
    pub fn eval_at(&self, x: Point) -> Result<[f64; 2]> {
        let (t, l) = self.space.locate(x).ok_or_else(|| Error::domain(format!("point {x:?} lies outside the mesh")))?;
        match self.role {
            Role::Velocity => Ok(self.eval_velocity(t, &l)?.0),
            Role::Pressure => Ok([self.eval_pressure(t, &l)?.0, 0.0]),
        }
    }

    fn expect_role(&self, role: Role) -> Result<()> {
        if self.role == role {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("expected a {role:?} function, got {:?}", self.role)))
        }
    }
}
