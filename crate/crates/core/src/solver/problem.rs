//! Data of the discrete problem and the discrete state.

use std::sync::Arc;

use crate::constitutive::{StressParams, Tensor2};
use crate::fem::interp::scott_zhang_boundary;
use crate::fem::quadrature::{gauss_legendre, QuadratureRule, MAX_DEGREE};
use crate::fem::space::{DiscreteFunction, Element, MixedSpace, Role, Tabulation};
use crate::{Error, Point, Result};

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// Default quadrature degree for the nonlinear residual and Jacobian.
pub const DEFAULT_QUAD_DEGREE: usize = 8;

/// A smooth exact solution `(v, q)` from which the problem data are derived.
pub trait ExactFields: Send + Sync {
    fn velocity(&self, x: Point) -> [f64; 2];
    /// `∇v[i][j] = ∂_j v_i`.
    fn velocity_gradient(&self, x: Point) -> [[f64; 2]; 2];
    fn pressure(&self, x: Point) -> f64;

    fn divergence(&self, x: Point) -> f64 {
        let g = self.velocity_gradient(x);
        g[0][0] + g[1][1]
    }
}

/// Stress law, divergence data `g₁`, boundary data `g₂` and the load
/// functional `z ↦ (f, z)` tabulated on every velocity basis function.
#[derive(Clone)]
pub struct ProblemData {
    pub stress: StressParams,
    pub space: Arc<MixedSpace>,
    pub g1: ScalarField,
    pub g2: VectorField,
    /// `(f, z_a)` for every velocity dof `a` (only free dofs are used).
    pub load: Vec<f64>,
    tab: Arc<Tabulation>,
}

impl ProblemData {
    pub fn new(
        stress: StressParams,
        space: Arc<MixedSpace>,
        g1: ScalarField,
        g2: VectorField,
        load: Vec<f64>,
        quad_degree: usize,
    ) -> Result<Self> {
        if load.len() != space.n_velocity_dofs() {
            return Err(Error::SpaceMismatch(format!(
                "load has {} entries, space has {} velocity dofs",
                load.len(),
                space.n_velocity_dofs()
            )));
        }
        let tab = Arc::new(Tabulation::new(space.pair(), quad_degree)?);
        Ok(Self { stress, space, g1, g2, load, tab })
    }

    /// Data generated by an exact solution: `g₁ = div v`, `g₂ = v`, and
    /// `(f, z) = (S(Dv), Dz) − (v⊗v, ∇z) − (q, div z)`, which is the weak
    /// form of the momentum equation for test functions vanishing on `∂Ω`.
    pub fn from_exact(
        stress: StressParams,
        space: Arc<MixedSpace>,
        exact: Arc<dyn ExactFields>,
        quad_degree: usize,
    ) -> Result<Self> {
        let tab = Tabulation::new(space.pair(), quad_degree)?;
        let load = weak_load(&stress, &space, exact.as_ref(), &tab);
        let e1 = exact.clone();
        let g1: ScalarField = Arc::new(move |x| e1.divergence(x));
        let e2 = exact;
        let g2: VectorField = Arc::new(move |x| e2.velocity(x));
        Self::new(stress, space, g1, g2, load, quad_degree)
    }

    /// The same data with a different stress law.
    pub fn with_stress(&self, stress: StressParams) -> Self {
        Self { stress, ..self.clone() }
    }

    pub fn tabulation(&self) -> &Tabulation {
        &self.tab
    }

    /// `∫_Ω g₁ − ∫_∂Ω g₂·n`, which vanishes for compatible data. Uses the
    /// most accurate triangle rule, since `g₁` may be weakly singular.
    pub fn compatibility_defect(&self) -> f64 {
        let mesh = self.space.mesh();
        let rule = &QuadratureRule::new(MAX_DEGREE).expect("supported degree");
        let mut vol = 0.0;
        for t in 0..mesh.n_triangles() {
            let el = Element::new(mesh, t);
            vol += el.area * rule.points.iter().zip(&rule.weights).map(|(l, w)| w * (self.g1)(el.map(l))).sum::<f64>();
        }
        vol - boundary_flux(mesh, self.g2.as_ref())
    }
}

/// `∫_∂Ω g·n ds` by Gauss–Legendre on each boundary edge.
pub fn boundary_flux(mesh: &crate::mesh::TriMesh, g: &(dyn Fn(Point) -> [f64; 2] + Send + Sync)) -> f64 {
    let (xs, ws) = gauss_legendre(10);
    let mut flux = 0.0;
    for (e, tris) in mesh.edge_triangles().iter().enumerate() {
        if !mesh.boundary_edge_flags()[e] {
            continue;
        }
        let t = tris[0].expect("boundary edge has a triangle");
        let [a, b] = mesh.edges()[e];
        let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
        // Outward normal: rotate the tangent away from the opposite vertex.
        let tri = mesh.triangles()[t];
        let opp = tri.iter().copied().find(|&v| v != a && v != b).expect("triangle has three vertices");
        let po = mesh.vertices()[opp];
        let tangent = [pb[0] - pa[0], pb[1] - pa[1]];
        let mut n = [tangent[1], -tangent[0]];
        if n[0] * (po[0] - pa[0]) + n[1] * (po[1] - pa[1]) > 0.0 {
            n = [-n[0], -n[1]];
        }
        // |n| equals the edge length, which is the Jacobian of the edge map.
        for (&s, &w) in xs.iter().zip(&ws) {
            let x = [pa[0] + s * tangent[0], pa[1] + s * tangent[1]];
            let gx = g(x);
            flux += w * (gx[0] * n[0] + gx[1] * n[1]);
        }
    }
    flux
}

fn weak_load(stress: &StressParams, space: &MixedSpace, exact: &dyn ExactFields, tab: &Tabulation) -> Vec<f64> {
    let mesh = space.mesh();
    let n = tab.n_local;
    let mut load = vec![0.0; space.n_velocity_dofs()];
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let nodes = space.velocity_nodes(t);
        for (q, (l, &w)) in tab.rule.points.iter().zip(&tab.rule.weights).enumerate() {
            let x = el.map(l);
            let wq = w * el.area;
            let v = exact.velocity(x);
            let s = stress.s_of(&Tensor2(exact.velocity_gradient(x))).to_tensor().0;
            let p = exact.pressure(x);
            // Flux T = S(Dv) − v⊗v − q I; the load is ∫ T : ∇z.
            let mut flux = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    flux[i][j] = s[i][j] - v[i] * v[j] - if i == j { p } else { 0.0 };
                }
            }
            let g = tab.gradients(&el, q);
            for a in 0..n {
                for c in 0..2 {
                    load[2 * nodes[a] + c] += wq * (flux[c][0] * g[a][0] + flux[c][1] * g[a][1]);
                }
            }
        }
    }
    load
}

/// Velocity, pressure and the multiplier of the zero-mean constraint.
#[derive(Clone, Debug)]
pub struct DiscreteState {
    pub velocity: DiscreteFunction,
    pub pressure: DiscreteFunction,
    pub multiplier: f64,
}

impl DiscreteState {
    pub fn zeros(space: &Arc<MixedSpace>) -> Self {
        Self {
            velocity: DiscreteFunction::zeros(space.clone(), Role::Velocity),
            pressure: DiscreteFunction::zeros(space.clone(), Role::Pressure),
            multiplier: 0.0,
        }
    }

    /// Zero interior velocity and pressure with the discrete boundary data.
    pub fn lifted(data: &ProblemData) -> Self {
        apply_dirichlet(data, Self::zeros(&data.space))
    }

    pub fn space(&self) -> &Arc<MixedSpace> {
        self.velocity.space()
    }

    /// Unknown vector `[v, q, μ]`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.velocity.coeffs().len() + self.pressure.coeffs().len() + 1);
        x.extend_from_slice(self.velocity.coeffs());
        x.extend_from_slice(self.pressure.coeffs());
        x.push(self.multiplier);
        x
    }

    pub fn from_vector(space: &Arc<MixedSpace>, x: &[f64]) -> Result<Self> {
        let (nv, np) = (space.n_velocity_dofs(), space.n_pressure_dofs());
        if x.len() != nv + np + 1 {
            return Err(Error::SpaceMismatch(format!(
                "state vector of length {} for {} unknowns",
                x.len(),
                nv + np + 1
            )));
        }
        Ok(Self {
            velocity: DiscreteFunction::new(space.clone(), Role::Velocity, x[..nv].to_vec())?,
            pressure: DiscreteFunction::new(space.clone(), Role::Pressure, x[nv..nv + np].to_vec())?,
            multiplier: x[nv + np],
        })
    }
}

/// Overwrites boundary velocity coefficients with the Scott–Zhang trace of
/// `g₂` (order 1 on MINI, order 2 on Taylor–Hood); interior dofs are kept.
pub fn apply_dirichlet(data: &ProblemData, mut state: DiscreteState) -> DiscreteState {
    let g2 = data.g2.clone();
    let values = scott_zhang_boundary(&data.space, &move |x| g2(x));
    let coeffs = state.velocity.coeffs_mut();
    for (dof, v) in values {
        coeffs[dof] = v;
    }
    state
}
