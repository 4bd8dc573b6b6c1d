//! Convergence studies: nested solves over uniformly refined meshes.

use std::sync::Arc;

use crate::bench::cases::{Case, ManufacturedCase};
use crate::bench::exponents::exponents;
use crate::bench::norms::{apriori_quantity, dual_modular_diagnostic, error_norms, NORM_DEGREE};
use crate::bench::table::{EocRow, EocTable};
use crate::constitutive::StressParams;
use crate::fem::{prolongate, ElementPair, MixedSpace};
use crate::mesh::TriMesh;
use crate::solver::{apply_dirichlet, newton_solve, DiscreteState, NewtonConfig, ProblemData, DEFAULT_QUAD_DEGREE};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub pair: ElementPair,
    pub case: Case,
    pub p_list: Vec<f64>,
    pub max_level: usize,
    /// Quadrature degree of the residual, Jacobian and load.
    pub quad_degree: usize,
    /// Quadrature degree of errors and modulars.
    pub norm_degree: usize,
    pub newton: NewtonConfig,
    /// On Newton failure, retry the level by continuation in `p` from 2.
    pub p_continuation: bool,
    /// Number of `p` values solved concurrently (1 = serial).
    pub threads: usize,
}

impl StudyConfig {
    pub fn new(pair: ElementPair, case: Case, p_list: Vec<f64>, max_level: usize) -> Self {
        Self {
            pair,
            case,
            p_list,
            max_level,
            quad_degree: DEFAULT_QUAD_DEGREE,
            norm_degree: NORM_DEGREE,
            newton: NewtonConfig::default(),
            p_continuation: true,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_level < 1 {
            return Err(Error::config("a study needs max_level >= 1"));
        }
        if self.p_list.is_empty() {
            return Err(Error::config("empty list of exponents"));
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return Err(Error::config(format!("exponent p = {p} must lie in (1, inf)")));
        }
        if self.threads == 0 {
            return Err(Error::config("thread count must be positive"));
        }
        self.newton.validate()
    }
}

/// Result of one level of a study.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub row: EocRow,
    pub state: DiscreteState,
    pub compatibility_defect: f64,
}

/// Solves one `(pair, case, p)` configuration on levels `0..=max_level`,
/// starting every level from the prolongated solution of the previous one.
/// `on_level` sees each converged level.
pub fn run_cell_with(
    cfg: &StudyConfig,
    p: f64,
    mut on_level: impl FnMut(&LevelSolution) -> Result<()>,
) -> Result<EocTable> {
    let at = |level| move |e: Error| Error::AtLevel { p, level, source: Box::new(e) };
    let case = ManufacturedCase::new(cfg.case, p).map_err(at(0))?;
    let exps = exponents(p)?;
    let exact = Arc::new(case);
    let mut table = EocTable { pair: cfg.pair, case: cfg.case, p, rows: Vec::with_capacity(cfg.max_level + 1) };
    let mut mesh = Arc::new(TriMesh::unit_square_initial());
    let mut prev: Option<DiscreteState> = None;
    for level in 0..=cfg.max_level {
        if level > 0 {
            mesh = Arc::new(mesh.red_refine());
        }
        let space = Arc::new(MixedSpace::new(mesh.clone(), cfg.pair));
        let data =
            ProblemData::from_exact(case.stress, space.clone(), exact.clone(), cfg.quad_degree).map_err(at(level))?;
        let init = match &prev {
            None => DiscreteState::lifted(&data),
            Some(c) => apply_dirichlet(
                &data,
                DiscreteState {
                    velocity: prolongate(&c.velocity, &space).map_err(at(level))?,
                    pressure: prolongate(&c.pressure, &space).map_err(at(level))?,
                    multiplier: c.multiplier,
                },
            ),
        };
        let (state, iters) = solve_level(cfg, &data, init).map_err(at(level))?;
        let errs = error_norms(&state, &case, &exps, cfg.norm_degree).map_err(at(level))?;
        let h = 0.5f64.powi(level as i32);
        let row = EocRow {
            level,
            h,
            ndof_v: space.n_velocity_dofs(),
            ndof_q: space.n_pressure_dofs(),
            e_v: errs.e_v,
            e_q_s: errs.e_q_s,
            e_q_ell: errs.e_q_ell,
            e_q_p: errs.e_q_p,
            newton_iters: iters,
            dual_modular: dual_modular_diagnostic(&case, mesh.as_ref(), h, cfg.norm_degree).map_err(at(level))?,
            apriori: apriori_quantity(&state, &exps, cfg.norm_degree).map_err(at(level))?,
            multiplier: state.multiplier,
        };
        let sol = LevelSolution { row, state, compatibility_defect: data.compatibility_defect() };
        on_level(&sol)?;
        table.rows.push(sol.row);
        prev = Some(sol.state);
    }
    Ok(table)
}

pub fn run_cell(cfg: &StudyConfig, p: f64) -> Result<EocTable> {
    run_cell_with(cfg, p, |_| Ok(()))
}

/// Newton on one level; on non-convergence optionally retries by walking
/// `p` from 2 to its target on the same mesh. Returns the total number of
/// Newton updates.
fn solve_level(cfg: &StudyConfig, data: &ProblemData, init: DiscreteState) -> Result<(DiscreteState, usize)> {
    let first = match newton_solve(data, init.clone(), &cfg.newton) {
        Ok((state, report)) => return Ok((state, report.iterations)),
        Err(e) => e,
    };
    let target = data.stress.p;
    if !cfg.p_continuation || !matches!(first, Error::NonConvergence { .. }) || target == 2.0 {
        return Err(first);
    }
    for steps in [4usize, 16] {
        if let Ok(done) = continuation(cfg, data, init.clone(), steps) {
            return Ok(done);
        }
    }
    Err(first)
}

fn continuation(
    cfg: &StudyConfig,
    data: &ProblemData,
    init: DiscreteState,
    steps: usize,
) -> Result<(DiscreteState, usize)> {
    let target = data.stress.p;
    let mut state = init;
    let mut total = 0;
    for k in 0..=steps {
        let pk = if k == steps { target } else { 2.0 + (target - 2.0) * k as f64 / steps as f64 };
        let stress = StressParams::new(pk, data.stress.delta, data.stress.nu)?;
        // The load belongs to the target problem; intermediate steps only
        // move the iterate towards its basin of attraction.
        let step_data = data.with_stress(stress);
        let (s, report) = newton_solve(&step_data, state, &cfg.newton)?;
        state = s;
        total += report.iterations;
    }
    Ok((state, total))
}

/// Runs every `p` of the configuration; cells are distributed over
/// `cfg.threads` workers and returned in the order of `cfg.p_list`.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<EocTable>> {
    cfg.validate()?;
    if cfg.threads == 1 || cfg.p_list.len() == 1 {
        return cfg.p_list.iter().map(|&p| run_cell(cfg, p)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<EocTable>>>> =
        cfg.p_list.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..cfg.threads.min(cfg.p_list.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(&p) = cfg.p_list.get(i) else { break };
                *slots[i].lock().expect("slot lock") = Some(run_cell(cfg, p));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every cell ran")).collect()
}
