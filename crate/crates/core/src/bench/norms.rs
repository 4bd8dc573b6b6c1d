//! Error quantities, the a priori stability quantity and the dual modular.

use crate::bench::cases::ManufacturedCase;
use crate::bench::exponents::ExponentSet;
use crate::constitutive::{nfunction_conjugate, StressParams, SymTensor2, Tensor2};
use crate::fem::space::{velocity_value, Element, Tabulation};
use crate::fem::QuadratureRule;
use crate::mesh::TriMesh;
use crate::solver::{DiscreteState, ExactFields};
use crate::Result;

/// Default quadrature degree for errors and modulars.
pub const NORM_DEGREE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    /// `‖F(Dv_h) − F(Dv)‖₂`.
    pub e_v: f64,
    /// `‖q_h − q‖_{s'}`.
    pub e_q_s: f64,
    /// `‖q_h − q‖_{ℓ'}`.
    pub e_q_ell: f64,
    /// `‖q_h − q‖_{p'}`.
    pub e_q_p: f64,
}

/// Integrates `N` functions of `(x, v_h, ∇v_h, q_h)` over Ω in one pass.
fn integrate_state<const N: usize>(
    state: &DiscreteState,
    degree: usize,
    f: impl Fn(crate::Point, [f64; 2], [[f64; 2]; 2], f64) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let space = state.space();
    let mesh = space.mesh();
    let tab = Tabulation::new(space.pair(), degree)?;
    let mut total = [0.0; N];
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let lv = space.gather_velocity(state.velocity.coeffs(), t);
        let lp = space.gather_pressure(state.pressure.coeffs(), t);
        let mut part = [0.0; N];
        for (q, (l, &w)) in tab.rule.points.iter().zip(&tab.rule.weights).enumerate() {
            let g = tab.gradients(&el, q);
            let (u, gu) = velocity_value(&lv, tab.n_local, &tab.values[q], &g);
            let p = lp[0] * l[0] + lp[1] * l[1] + lp[2] * l[2];
            for (acc, v) in part.iter_mut().zip(f(el.map(l), u, gu, p)?) {
                *acc += w * v;
            }
        }
        for (acc, v) in total.iter_mut().zip(part) {
            *acc += el.area * v;
        }
    }
    Ok(total)
}

fn sym(g: &[[f64; 2]; 2]) -> SymTensor2 {
    SymTensor2::new(g[0][0], 0.5 * (g[0][1] + g[1][0]), g[1][1])
}

pub fn error_norms(
    state: &DiscreteState,
    case: &ManufacturedCase,
    exps: &ExponentSet,
    degree: usize,
) -> Result<ErrorNorms> {
    error_norms_exact(state, &case.stress, case, exps, degree)
}

/// Error quantities against any exact solution, with `F` of `stress`.
pub fn error_norms_exact(
    state: &DiscreteState,
    stress: &StressParams,
    exact: &dyn ExactFields,
    exps: &ExponentSet,
    degree: usize,
) -> Result<ErrorNorms> {
    let (a_s, a_l, a_p) = (exps.s_conj, exps.ell_conj, exps.p_conj);
    let [ev2, qs, ql, qp] = integrate_state(state, degree, |x, _, gu, qh| {
        let fh = stress.f_of_sym(&sym(&gu));
        let fe = stress.f_of(&Tensor2(exact.velocity_gradient(x)));
        let dq = (qh - exact.pressure(x)).abs();
        Ok([fh.sub(&fe).norm().powi(2), dq.powf(a_s), dq.powf(a_l), dq.powf(a_p)])
    })?;
    Ok(ErrorNorms {
        e_v: ev2.sqrt(),
        e_q_s: qs.powf(1.0 / a_s),
        e_q_ell: ql.powf(1.0 / a_l),
        e_q_p: qp.powf(1.0 / a_p),
    })
}

/// `‖v_h‖_{1,p} + ‖q_h‖_{s'}` with `‖v‖_{1,p} = (‖v‖_p^p + ‖∇v‖_p^p)^{1/p}`.
pub fn apriori_quantity(state: &DiscreteState, exps: &ExponentSet, degree: usize) -> Result<f64> {
    let p = exps.p;
    let [v, q] = integrate_state(state, degree, |_, u, gu, qh| {
        let un = u[0].hypot(u[1]);
        let gn = (gu[0][0].powi(2) + gu[0][1].powi(2) + gu[1][0].powi(2) + gu[1][1].powi(2)).sqrt();
        Ok([un.powf(p) + gn.powf(p), qh.abs().powf(exps.s_conj)])
    })?;
    Ok(v.powf(1.0 / p) + q.powf(1.0 / exps.s_conj))
}

/// `∫_Ω (φ_{|Dv|})*(h |∇q|) dx` for the exact fields, integrated on `mesh`.
pub fn dual_modular_diagnostic(case: &ManufacturedCase, mesh: &TriMesh, h: f64, degree: usize) -> Result<f64> {
    if h == 0.0 {
        return Ok(0.0);
    }
    let rule = QuadratureRule::new(degree)?;
    let (p, delta) = (case.stress.p, case.stress.delta);
    let mut total = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let mut part = 0.0;
        for (l, &w) in rule.points.iter().zip(&rule.weights) {
            let x = el.map(l);
            let g = case.grad_v(x)?;
            let shift = sym(&g).norm();
            let gq = case.grad_q(x)?;
            part += w * nfunction_conjugate(p, delta + shift, h * gq[0].hypot(gq[1]))?;
        }
        total += el.area * part;
    }
    Ok(total)
}

/// `‖f‖_a` of a scalar function by quadrature on `mesh` (used in tests and
/// diagnostics).
pub fn lebesgue_norm(mesh: &TriMesh, a: f64, degree: usize, f: impl Fn(crate::Point) -> f64) -> Result<f64> {
    let rule = QuadratureRule::new(degree)?;
    let mut total = 0.0;
    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        total +=
            el.area * rule.points.iter().zip(&rule.weights).map(|(l, w)| w * f(el.map(l)).abs().powf(a)).sum::<f64>();
    }
    Ok(total.powf(1.0 / a))
}
