#![allow(dead_code)]

use std::sync::Arc;

use shearflow::constitutive::StressParams;
use shearflow::fem::{Element, ElementPair, MixedSpace, QuadratureRule};
use shearflow::mesh::TriMesh;
use shearflow::solver::{DiscreteState, ExactFields, ProblemData};
use shearflow::Point;

/// `v = (y, x)`, `q = x − 1/2`: divergence free, mean-zero pressure, and
/// both fields lie in the Taylor–Hood space.
pub struct PatchFields;

impl ExactFields for PatchFields {
    fn velocity(&self, x: Point) -> [f64; 2] {
        [x[1], x[0]]
    }

    fn velocity_gradient(&self, _x: Point) -> [[f64; 2]; 2] {
        [[0.0, 1.0], [1.0, 0.0]]
    }

    fn pressure(&self, x: Point) -> f64 {
        x[0] - 0.5
    }
}

pub fn patch_stress() -> StressParams {
    StressParams::new(2.0, 1e-5, 0.1).unwrap()
}

pub fn space(level: usize, pair: ElementPair) -> Arc<MixedSpace> {
    Arc::new(MixedSpace::new(Arc::new(TriMesh::unit_square(level)), pair))
}

pub fn patch_data(level: usize, pair: ElementPair) -> ProblemData {
    ProblemData::from_exact(patch_stress(), space(level, pair), Arc::new(PatchFields), 8).unwrap()
}

/// `(div v_h − g₁, η_i)` for every pressure basis function, by quadrature
/// of the given degree.
pub fn divergence_defects(state: &DiscreteState, g1: &dyn Fn(Point) -> f64, degree: usize) -> Vec<f64> {
    let space = state.space();
    let mesh = space.mesh();
    let rule = QuadratureRule::new(degree).unwrap();
    let mut out = vec![0.0; space.n_pressure_dofs()];
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let pn = space.pressure_nodes(t);
        for (l, &w) in rule.points.iter().zip(&rule.weights) {
            let (_, g) = state.velocity.eval_velocity(t, l).unwrap();
            let d = g[0][0] + g[1][1] - g1(el.map(l));
            for k in 0..3 {
                out[pn[k]] += w * el.area * d * l[k];
            }
        }
    }
    out
}

/// `∫_Ω q_h`.
pub fn pressure_mean(state: &DiscreteState) -> f64 {
    let space = state.space();
    let mesh = space.mesh();
    let pc = state.pressure.coeffs();
    (0..mesh.n_triangles())
        .map(|t| {
            let tri = mesh.triangles()[t];
            mesh.area(t) * (pc[tri[0]] + pc[tri[1]] + pc[tri[2]]) / 3.0
        })
        .sum()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
