//! Productivity estimators and the constant-productivity fit that supplies
//! `μ` and `g`.

pub mod empirical;
pub mod fit;
pub mod likelihood;
pub mod matrix;
pub mod mle;

pub use empirical::{empirical_productivities, DEFAULT_DELTA};
pub use fit::{fit_constant_hawkes, FitOptions, FitResult, ParamTriple};
pub use likelihood::{log_likelihood, Compensator, Productivity};
pub use matrix::{build_triggering_matrix, solve_inverse_intensities, SolveOptions, TriggeringMatrix};
pub use mle::{mle_productivities, productivities_from_intensities, score_residual, MleSolution};
