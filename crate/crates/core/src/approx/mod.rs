//! Density construction: polynomial pre-approximation, change of basis to the
//! expansion polynomials, translate recovery per basis index, assembly and
//! grid certification.

mod certify;
mod cheb;
mod combination;
mod grid;
mod pipeline;
mod recovery;
mod target;

pub use certify::{certify, lp_error, ApproximationCertificate, IndexReport, Sample};
pub use cheb::{cheb_approx, cheb_approx_capped, PolyApprox, DEFAULT_DEGREE_CAP};
pub use combination::{eval_combination, Term, TranslateCombination};
pub use grid::{Grid, DEFAULT_GRID_POINTS};
pub use pipeline::{approximate, initial_floor, ApproxOptions};
pub use recovery::{monomial_to_basis, reproduce_basis_poly, terms_needed, BasisCoefficients, Reproduction};
pub use target::{Builtin, Target};
