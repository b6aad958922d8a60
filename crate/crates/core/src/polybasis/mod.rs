//! Exact expansion polynomials `A_k`, `B_k`, `C_k` for each kernel family,
//! basis classification and the supporting rational series machinery.

mod binomial;
mod families;
mod kernel;
mod model;
mod poly;
mod series;

pub use binomial::{ceil, floor, gen_binomial, is_natural, is_nonneg_integer, sum_identity};
pub use families::{
    arctan_binomial_ck, arctan_binomial_series, arctan_bk, arctan_series, binomial_ak,
    binomial_series, log_kernel_series, log_poly_derivative, related_arctan_series,
    related_log_series, LogDerivative, RelatedSeries,
};
pub use kernel::{KernelFamily, KernelSpec};
pub use model::{classify_basis, related_series, ExpansionModel, Scalar, SignRequirement};
pub use poly::Polynomial;
pub use series::{cauchy_product, shift_series, Series};
