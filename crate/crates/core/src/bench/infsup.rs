//! Discrete inf-sup constant of a mixed pair in the Hilbert setting.
//!
//! `β_h² = λ_min` of `B A₁⁻¹ Bᵀ q = λ M_p q` over pressures with zero mean,
//! where `A₁` is the `H¹` Gram matrix of velocities vanishing on `∂Ω`. The
//! constant pressure is in the kernel of `Bᵀ` and is deflated. The smallest
//! eigenvalue is found by block inverse iteration with Rayleigh–Ritz, each
//! application of `(B A₁⁻¹ Bᵀ)⁻¹ M_p` being one solve with the saddle-point
//! matrix
//!
//! ```text
//! [ A₁  Bᵀ  0 ] [u]   [ 0 ]
//! [ B   0   m ] [x] = [−r ]
//! [ 0   mᵀ  0 ] [μ]   [ 0 ]
//! ```
//!
//! with `m = M_p 1`, which yields `x = (B A₁⁻¹ Bᵀ)⁻¹ r` with zero mean for
//! right-hand sides `r ⟂ 1`.

use std::ops::RangeInclusive;
use std::sync::Arc;

use faer::{Mat, Side};

use crate::fem::{assemble_aux_matrices, ElementPair, MixedSpace};
use crate::mesh::TriMesh;
use crate::solver::LuSolver;
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::{Error, Result};

/// Block size of the subspace iteration.
const BLOCK: usize = 4;
const MAX_ITER: usize = 500;
const TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfSupEstimate {
    pub level: usize,
    pub h: f64,
    pub ndof_v: usize,
    pub ndof_q: usize,
    pub beta: f64,
    pub iterations: usize,
}

/// The pieces of the generalized eigenproblem on one space, restricted to
/// velocities vanishing on the boundary.
pub struct InfSupOperators {
    /// `A₁` on free velocity dofs.
    pub a: CsrMatrix,
    /// `B` with free velocity columns.
    pub b: CsrMatrix,
    pub mass: CsrMatrix,
}

impl InfSupOperators {
    pub fn new(space: &MixedSpace) -> Result<Self> {
        let aux = assemble_aux_matrices(space)?;
        let free = space.free_velocity_dofs();
        let all_p: Vec<usize> = (0..space.n_pressure_dofs()).collect();
        Ok(Self {
            a: aux.velocity_h1.submatrix(free, free),
            b: aux.divergence.submatrix(&all_p, free),
            mass: aux.pressure_mass,
        })
    }

    fn saddle_matrix(&self, m1: &[f64]) -> CsrMatrix {
        let (nv, np) = (self.a.n_rows(), self.mass.n_rows());
        let n = nv + np + 1;
        let mut tb = TripletBuilder::with_capacity(n, n, self.a.nnz() + 2 * self.b.nnz() + 2 * np);
        for (i, j, v) in self.a.entries() {
            tb.push(i, j, v);
        }
        for (i, j, v) in self.b.entries() {
            tb.push(nv + i, j, v);
            tb.push(j, nv + i, v);
        }
        for (i, &v) in m1.iter().enumerate() {
            tb.push(nv + i, nv + np, v);
            tb.push(nv + np, nv + i, v);
        }
        tb.build()
    }
}

fn m_dot(mass: &CsrMatrix, x: &[f64], y: &[f64]) -> f64 {
    mass.matvec(y).iter().zip(x).map(|(a, b)| a * b).sum()
}

/// `x ← x − (1ᵀ M x / 1ᵀ M 1) 1`.
fn deflate(x: &mut [f64], m1: &[f64], total: f64) {
    let c = m1.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<f64>() / total;
    x.iter_mut().for_each(|v| *v -= c);
}

/// Smallest nonzero eigenvalue of `B A₁⁻¹ Bᵀ q = λ M_p q` and the number of
/// subspace iterations used.
pub fn infsup_constant(space: &MixedSpace) -> Result<(f64, usize)> {
    let ops = InfSupOperators::new(space)?;
    let np = ops.mass.n_rows();
    let nv = ops.a.n_rows();
    let k = BLOCK.min(np.saturating_sub(1));
    if k == 0 {
        return Err(Error::Eigen("pressure space has no zero-mean functions".into()));
    }
    let m1 = ops.mass.matvec(&vec![1.0; np]);
    let total: f64 = m1.iter().sum();
    let lu = LuSolver::new(&ops.saddle_matrix(&m1))?;
    // T x = (B A₁⁻¹ Bᵀ)⁻¹ M x on the zero-mean subspace.
    let apply = |x: &[f64]| -> Result<Vec<f64>> {
        let r = ops.mass.matvec(x);
        let mut rhs = vec![0.0; nv + np + 1];
        for (dst, v) in rhs[nv..nv + np].iter_mut().zip(&r) {
            *dst = -v;
        }
        let sol = lu.solve(&rhs)?;
        let mut y = sol[nv..nv + np].to_vec();
        deflate(&mut y, &m1, total);
        Ok(y)
    };

    let mut y = (0..k)
        .map(|j| {
            let mut v: Vec<f64> = (0..np).map(|i| ((i + 1) as f64 * (j + 1) as f64 * 1.2345).sin()).collect();
            deflate(&mut v, &m1, total);
            apply(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut last = f64::NAN;
    for it in 1..=MAX_ITER {
        let q = m_orthonormalize(&ops.mass, y)?;
        let z = q.iter().map(|v| apply(v)).collect::<Result<Vec<_>>>()?;
        let g =
            Mat::<f64>::from_fn(k, k, |i, j| 0.5 * (m_dot(&ops.mass, &q[i], &z[j]) + m_dot(&ops.mass, &q[j], &z[i])));
        let eig = g.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("Ritz problem: {e:?}")))?;
        let theta = eig.S().column_vector()[k - 1];
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Eigen(format!("nonpositive Ritz value {theta}")));
        }
        if (theta - last).abs() <= TOL * theta {
            return Ok((1.0 / theta, it));
        }
        last = theta;
        // T applied to the Ritz vectors Q W is Z W.
        let w = eig.U();
        y = (0..k).map(|c| (0..np).map(|i| (0..k).map(|r| z[r][i] * w[(r, c)]).sum()).collect()).collect();
    }
    Err(Error::Eigen(format!("no convergence after {MAX_ITER} subspace iterations")))
}

/// Modified Gram–Schmidt in the `M`-inner product.
fn m_orthonormalize(mass: &CsrMatrix, mut v: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    for j in 0..v.len() {
        let (done, rest) = v.split_at_mut(j);
        let cur = &mut rest[0];
        for _ in 0..2 {
            for prev in done.iter() {
                let c = m_dot(mass, prev, cur);
                cur.iter_mut().zip(prev).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = m_dot(mass, cur, cur).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Eigen("subspace collapsed during orthonormalization".into()));
        }
        cur.iter_mut().for_each(|a| *a /= n);
    }
    Ok(v)
}

/// `β_h` of `pair` on the uniformly refined meshes of the given levels.
pub fn infsup_probe(pair: ElementPair, levels: RangeInclusive<usize>) -> Result<Vec<InfSupEstimate>> {
    if *levels.start() < 1 || levels.is_empty() {
        return Err(Error::config("the inf-sup probe needs levels >= 1"));
    }
    let mut mesh = TriMesh::unit_square(*levels.start());
    let mut out = Vec::new();
    for level in levels {
        if level > mesh.level() {
            mesh = mesh.red_refine();
        }
        let space = MixedSpace::new(Arc::new(mesh.clone()), pair);
        let (lambda, iterations) = infsup_constant(&space)?;
        out.push(InfSupEstimate {
            level,
            h: 0.5f64.powi(level as i32),
            ndof_v: space.n_velocity_dofs(),
            ndof_q: space.n_pressure_dofs(),
            beta: lambda.sqrt(),
            iterations,
        });
    }
    Ok(out)
}
