//! Sparse direct solves.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::Mat;

use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Relative residual the direct solve aims for; up to three steps of
/// iterative refinement are spent to reach it.
pub const TARGET_RELATIVE_RESIDUAL: f64 = 1e-11;

/// Residuals above this are treated as a failed factorization.
const FAILURE_RELATIVE_RESIDUAL: f64 = 1e-6;

/// An LU factorization that can be applied to many right-hand sides.
pub struct LuSolver {
    matrix: CsrMatrix,
    lu: Lu<usize, f64>,
}

impl LuSolver {
    pub fn new(matrix: &CsrMatrix) -> Result<Self> {
        if matrix.n_rows() != matrix.n_cols() {
            return Err(Error::Singular(format!("matrix is {}x{}, not square", matrix.n_rows(), matrix.n_cols())));
        }
        let lu = matrix.to_faer()?.sp_lu().map_err(|e| {
            Error::Singular(format!("sparse LU failed on a {}x{} system: {e:?}", matrix.n_rows(), matrix.n_cols()))
        })?;
        Ok(Self { matrix: matrix.clone(), lu })
    }

    fn raw_solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        self.lu.solve_in_place(b.as_mut());
        (0..rhs.len()).map(|i| b[(i, 0)]).collect()
    }

    /// Solves `A x = b` and returns `x` with its relative residual
    /// `‖Ax − b‖∞ / ‖b‖∞`.
    pub fn solve_with_residual(&self, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
        let bnorm = inf_norm(rhs);
        if bnorm == 0.0 {
            return Ok((vec![0.0; rhs.len()], 0.0));
        }
        let mut x = self.raw_solve(rhs);
        let mut rel = f64::INFINITY;
        for step in 0..4 {
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Singular(format!(
                    "direct solve produced non-finite values ({} unknowns)",
                    rhs.len()
                )));
            }
            let ax = self.matrix.matvec(&x);
            let r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
            rel = inf_norm(&r) / bnorm;
            if rel <= TARGET_RELATIVE_RESIDUAL || step == 3 {
                break;
            }
            let dx = self.raw_solve(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
        }
        if !(rel <= FAILURE_RELATIVE_RESIDUAL) {
            return Err(Error::Singular(format!(
                "direct solve residual {rel:.3e} too large; matrix numerically singular"
            )));
        }
        Ok((x, rel))
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        Ok(self.solve_with_residual(rhs)?.0)
    }
}

/// Factorizes and solves `A x = b` once.
pub fn linear_solve(matrix: &CsrMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != matrix.n_rows() {
        return Err(Error::SpaceMismatch(format!(
            "right-hand side of length {} for a {}-row matrix",
            rhs.len(),
            matrix.n_rows()
        )));
    }
    LuSolver::new(matrix)?.solve(rhs)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sparse::TripletBuilder;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(linear_solve(&CsrMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn random_spd_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100;
        // A = GᵀG + n I with a sparse random G.
        let mut g = DMatrix::<f64>::zeros(n, n);
        for _ in 0..400 {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            g[(i, j)] += rng.random_range(-1.0..1.0);
        }
        let a = g.transpose() * &g + DMatrix::<f64>::identity(n, n) * n as f64;
        let mut tb = TripletBuilder::new(n, n);
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 {
                    tb.push(i, j, a[(i, j)]);
                }
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = linear_solve(&tb.build(), &b).unwrap();
        let oracle = a.lu().solve(&DVector::from_vec(b)).unwrap();
        for i in 0..n {
            assert!((x[i] - oracle[i]).abs() <= 1e-10 * oracle.amax());
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut tb = TripletBuilder::new(2, 2);
        tb.push(0, 0, 1.0);
        tb.push(0, 1, 2.0);
        tb.push(1, 0, 2.0);
        tb.push(1, 1, 4.0);
        assert!(matches!(linear_solve(&tb.build(), &[1.0, 0.0]), Err(Error::Singular(_))));
    }
}
