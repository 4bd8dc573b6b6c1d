//! Residual and Newton matrix of the discrete saddle-point problem.
//!
//! Unknowns are ordered `[v, q, μ]`. Rows:
//!
//! - momentum (free velocity dofs `z`):
//!   `(S(Dv_h), Dz) + b(v_h, v_h, z) − (q_h, div z) − (f, z)`,
//! - continuity (pressure dofs `η`): `−(div v_h − g₁, η) − μ (η, 1)`,
//! - mean: `−(q_h, 1)`,
//! - boundary velocity dofs: identically zero.
//!
//! The last two blocks carry a minus sign so that the pressure coupling and
//! the multiplier enter the Newton matrix as exact transposes.

use crate::constitutive::{apply_mandel, SymTensor2};
use crate::fem::space::{velocity_value, Element, MAX_LOCAL};
use crate::solver::problem::{DiscreteState, ProblemData};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::Result;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Mandel vector of `sym(∇(φ e_c))` for `∇φ = g`.
#[inline]
fn sym_grad_mandel(g: [f64; 2], c: usize) -> [f64; 3] {
    if c == 0 {
        [g[0], SQRT_HALF * g[1], 0.0]
    } else {
        [0.0, SQRT_HALF * g[0], g[1]]
    }
}

/// Sizes of the unknown blocks.
pub fn system_size(data: &ProblemData) -> (usize, usize, usize) {
    let nv = data.space.n_velocity_dofs();
    let np = data.space.n_pressure_dofs();
    (nv, np, nv + np + 1)
}

pub fn assemble_residual(data: &ProblemData, state: &DiscreteState) -> Result<Vec<f64>> {
    Ok(assemble(data, state, false)?.0)
}

pub fn assemble_jacobian(data: &ProblemData, state: &DiscreteState) -> Result<CsrMatrix> {
    Ok(assemble(data, state, true)?.1.expect("requested"))
}

/// Residual and (optionally) the Newton matrix in one element loop.
pub fn assemble(
    data: &ProblemData,
    state: &DiscreteState,
    with_jacobian: bool,
) -> Result<(Vec<f64>, Option<CsrMatrix>)> {
    let space = &data.space;
    let mesh = space.mesh();
    let tab = data.tabulation();
    let n = tab.n_local;
    let (nv, np, size) = system_size(data);
    let imu = nv + np;
    let boundary = space.boundary_node_flags();
    let vcoef = state.velocity.coeffs();
    let pcoef = state.pressure.coeffs();
    let mu = state.multiplier;

    let mut res = vec![0.0; size];
    let per_elem = (2 * n) * (2 * n) + 2 * (2 * n * 3) + 6;
    let mut jac =
        with_jacobian.then(|| TripletBuilder::with_capacity(size, size, mesh.n_triangles() * per_elem + size));

    for t in 0..mesh.n_triangles() {
        let el = Element::new(mesh, t);
        let vn = space.velocity_nodes(t);
        let pn = space.pressure_nodes(t);
        let lv = space.gather_velocity(vcoef, t);
        let lp = space.gather_pressure(pcoef, t);

        let mut r_mom = [[0.0; 2]; MAX_LOCAL];
        let mut r_cont = [0.0; 3];
        let mut r_mean = 0.0;
        let mut k_vv = [[[[0.0; 2]; MAX_LOCAL]; 2]; MAX_LOCAL];
        let mut k_vp = [[[0.0; 3]; 2]; MAX_LOCAL];
        let mut m_p = [0.0; 3];

        for (q, (l, &w)) in tab.rule.points.iter().zip(&tab.rule.weights).enumerate() {
            let wq = w * el.area;
            let phi = &tab.values[q];
            let g = tab.gradients(&el, q);
            let (u, gu) = velocity_value(&lv, n, phi, &g);
            let d = SymTensor2::new(gu[0][0], 0.5 * (gu[0][1] + gu[1][0]), gu[1][1]);
            let s = data.stress.s_of_sym(&d);
            let pval = lp[0] * l[0] + lp[1] * l[1] + lp[2] * l[2];
            let g1 = (data.g1)(el.map(l));
            let div = gu[0][0] + gu[1][1];
            let gu_u = [gu[0][0] * u[0] + gu[0][1] * u[1], gu[1][0] * u[0] + gu[1][1] * u[1]];

            for a in 0..n {
                let u_dot_ga = u[0] * g[a][0] + u[1] * g[a][1];
                for c in 0..2 {
                    let ez = sym_grad_mandel(g[a], c);
                    let sm = s.mandel();
                    let stress = sm[0] * ez[0] + sm[1] * ez[1] + sm[2] * ez[2];
                    let conv = 0.5 * (phi[a] * gu_u[c] + g1 * u[c] * phi[a] - u[c] * u_dot_ga);
                    r_mom[a][c] += wq * (stress + conv - pval * g[a][c]);
                }
            }
            for i in 0..3 {
                r_cont[i] -= wq * ((div - g1) + mu) * l[i];
            }
            r_mean -= wq * pval;

            if with_jacobian {
                let cm = data.stress.s_jacobian_sym(&d)?;
                for a in 0..n {
                    let u_dot_ga = u[0] * g[a][0] + u[1] * g[a][1];
                    for c in 0..2 {
                        let ez = sym_grad_mandel(g[a], c);
                        let cz = apply_mandel(&cm, &SymTensor2::from_mandel(ez)).mandel();
                        for b in 0..n {
                            let u_dot_gb = u[0] * g[b][0] + u[1] * g[b][1];
                            for dd in 0..2 {
                                let eb = sym_grad_mandel(g[b], dd);
                                let stress = cz[0] * eb[0] + cz[1] * eb[1] + cz[2] * eb[2];
                                // b(δu, u, z) with δu = φ_b e_d
                                let mut conv = 0.5 * (phi[a] * gu[c][dd] * phi[b] - u[c] * phi[b] * g[a][dd]);
                                if c == dd {
                                    conv += 0.5 * g1 * phi[b] * phi[a];
                                    // b(u, δu, z)
                                    conv += 0.5 * (phi[a] * u_dot_gb - phi[b] * u_dot_ga);
                                }
                                k_vv[a][c][b][dd] += wq * (stress + conv);
                            }
                        }
                        for i in 0..3 {
                            k_vp[a][c][i] -= wq * l[i] * g[a][c];
                        }
                    }
                }
                for i in 0..3 {
                    m_p[i] -= wq * l[i];
                }
            }
        }

        for a in 0..n {
            if boundary[vn[a]] {
                continue;
            }
            for c in 0..2 {
                res[2 * vn[a] + c] += r_mom[a][c];
            }
        }
        for i in 0..3 {
            res[nv + pn[i]] += r_cont[i];
        }
        res[imu] += r_mean;

        if let Some(jb) = jac.as_mut() {
            for a in 0..n {
                let row_free = !boundary[vn[a]];
                for c in 0..2 {
                    let ra = 2 * vn[a] + c;
                    if row_free {
                        for b in 0..n {
                            if boundary[vn[b]] {
                                continue;
                            }
                            for dd in 0..2 {
                                jb.push(ra, 2 * vn[b] + dd, k_vv[a][c][b][dd]);
                            }
                        }
                    }
                    if row_free {
                        for i in 0..3 {
                            let v = k_vp[a][c][i];
                            jb.push(ra, nv + pn[i], v);
                            jb.push(nv + pn[i], ra, v);
                        }
                    }
                }
            }
            for i in 0..3 {
                jb.push(nv + pn[i], imu, m_p[i]);
                jb.push(imu, nv + pn[i], m_p[i]);
            }
        }
    }

    for &dof in space.free_velocity_dofs() {
        res[dof] -= data.load[dof];
    }
    // Boundary rows: residual zero, identity in the matrix.
    for &dof in space.boundary_velocity_dofs() {
        res[dof] = 0.0;
    }
    let jac = jac.map(|mut jb| {
        for &dof in space.boundary_velocity_dofs() {
            jb.push(dof, dof, 1.0);
        }
        jb.build()
    });
    Ok((res, jac))
}
