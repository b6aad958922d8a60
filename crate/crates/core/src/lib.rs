//! Constructive approximation by scattered translates of binomial power
//! functions and related kernels.

pub mod approx;
pub mod error;
pub mod polybasis;
pub mod sequences;
pub mod solvers;

pub use error::{Error, Result};
pub use polybasis::{classify_basis, ExpansionModel, KernelFamily, KernelSpec, Polynomial, Scalar};
pub use sequences::{extract_doubling, DoublingSequence, ScatteredProvider, Sign};
pub use approx::{approximate, certify, ApproxOptions, ApproximationCertificate, Grid, Target, TranslateCombination};
