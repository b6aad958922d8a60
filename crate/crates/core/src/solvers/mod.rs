//! Closed-form Vandermonde solutions and the logarithmic alternant solver.

mod alternant;
mod vandermonde;

pub use alternant::{
    alternant_size, alternant_solve, alternant_solve_adaptive, log_alternant_solve, log_rows,
    residual, AlternantSolution, RowRule, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS, MIN_PRECISION_BITS,
};
pub use vandermonde::{
    solve_vandermonde, translate_coeffs, vandermonde_coeffs, vandermonde_residual,
    VandermondeSolution,
};
