//! Newton's method for the discrete problem.

use crate::solver::assembly::assemble;
use crate::solver::linear::LuSolver;
use crate::solver::problem::{DiscreteState, ProblemData};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Initial step length (1 = full Newton steps).
    pub damping: f64,
    /// Backtracking on the residual norm when a step does not decrease it
    /// sufficiently.
    pub line_search: bool,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-8, rel_tol: 1e-10, max_iter: 30, damping: 1.0, line_search: true }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        let ok =
            self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_iter > 0 && self.damping > 0.0 && self.damping <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid Newton configuration {self:?}")))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    /// Number of Newton updates applied.
    pub iterations: usize,
    /// Euclidean residual norm before each update and after the last one.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Largest relative residual of the linear solves.
    pub max_linear_residual: f64,
}

struct Trial {
    x: Vec<f64>,
    state: DiscreteState,
    res: Vec<f64>,
    jac: Option<crate::sparse::CsrMatrix>,
    norm: f64,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Runs Newton from `init` until `‖R‖₂ ≤ abs_tol` or `‖R‖₂ ≤ rel_tol ‖R₀‖₂`.
///
/// Boundary velocity values of `init` are kept fixed.
pub fn newton_solve(
    data: &ProblemData,
    init: DiscreteState,
    cfg: &NewtonConfig,
) -> Result<(DiscreteState, SolveReport)> {
    cfg.validate()?;
    let space = data.space.clone();
    if !std::sync::Arc::ptr_eq(init.space(), &space) {
        return Err(Error::SpaceMismatch("initial state lives on a different space".into()));
    }
    let mut x = init.to_vector();
    let mut state = init;
    let mut report = SolveReport::default();
    let (mut res, mut jac) = assemble(data, &state, true)?;
    let mut rnorm = norm2(&res);
    let r0 = rnorm;
    report.residual_history.push(rnorm);

    loop {
        if rnorm <= cfg.abs_tol || rnorm <= cfg.rel_tol * r0 {
            report.converged = true;
            return Ok((state, report));
        }
        if report.iterations >= cfg.max_iter {
            return Err(Error::NonConvergence { iterations: report.iterations, history: report.residual_history });
        }
        let solver = LuSolver::new(jac.as_ref().expect("Jacobian requested"))?;
        let (dx, lin_res) = solver.solve_with_residual(&res)?;
        report.max_linear_residual = report.max_linear_residual.max(lin_res);

        let mut lambda = cfg.damping;
        let mut best: Option<Trial> = None;
        for _ in 0..12 {
            let xs: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi - lambda * di).collect();
            let st = DiscreteState::from_vector(&space, &xs)?;
            let (r, j) = assemble(data, &st, true)?;
            let norm = norm2(&r);
            let sufficient = norm.is_finite() && norm <= (1.0 - 1e-4 * lambda) * rnorm;
            let done = !cfg.line_search || sufficient;
            // Keep the best trial in case no step passes the decrease test.
            if done || (norm.is_finite() && best.as_ref().is_none_or(|b| norm < b.norm)) {
                best = Some(Trial { x: xs, state: st, res: r, jac: j, norm });
            }
            if done {
                break;
            }
            lambda *= 0.5;
        }
        let Some(Trial { x: nx, state: nstate, res: nres, jac: njac, norm: nnorm }) = best else {
            return Err(Error::NonConvergence { iterations: report.iterations, history: report.residual_history });
        };
        x = nx;
        state = nstate;
        res = nres;
        jac = njac;
        rnorm = nnorm;
        report.iterations += 1;
        report.residual_history.push(rnorm);
    }
}
