//! Manufactured-solution benchmark: exact fields, error quantities,
//! convergence studies and the inf-sup probe.

pub mod cases;
pub mod exponents;
pub mod infsup;
pub mod norms;
pub mod rates;
pub mod study;
pub mod table;

pub use cases::{gamma_for_case, pressure_mean_constant, Case, ManufacturedCase};
pub use exponents::{exponents, ExponentSet};
pub use infsup::{infsup_constant, infsup_probe, InfSupEstimate};
pub use norms::{apriori_quantity, dual_modular_diagnostic, error_norms, error_norms_exact, ErrorNorms};
pub use rates::{p_grid, rates_curves, write_rates_csv, RatesRow};
pub use study::{run_cell, run_cell_with, run_study, LevelSolution, StudyConfig};
pub use table::{eoc, parse_csv, EocRow, EocTable};
