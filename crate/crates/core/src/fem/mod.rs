//! Finite element spaces, quadrature and quasi-interpolation operators.

pub mod interp;
pub mod matrices;
pub mod quadrature;
pub mod space;

pub use interp::{clement_pressure, mini_fortin, prolongate, scott_zhang, scott_zhang_boundary};
pub use matrices::{assemble_aux_matrices, AuxMatrices};
pub use quadrature::QuadratureRule;
pub use space::{DiscreteFunction, Element, ElementPair, MixedSpace, Role, Tabulation};
