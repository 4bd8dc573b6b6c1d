//! The discrete saddle-point problem: assembly, direct solves and Newton.

pub mod assembly;
pub mod linear;
pub mod newton;
pub mod problem;
pub mod temam;

pub use assembly::{assemble_jacobian, assemble_residual};
pub use linear::{linear_solve, LuSolver};
pub use newton::{newton_solve, NewtonConfig, SolveReport};
pub use problem::{apply_dirichlet, DiscreteState, ExactFields, ProblemData, DEFAULT_QUAD_DEGREE};
pub use temam::temam_b;
