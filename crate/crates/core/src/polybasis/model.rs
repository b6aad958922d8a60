use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::binomial::{ceil, is_natural};
use super::families::{
    arctan_series, binomial_series, log_kernel_series, related_arctan_series, related_log_series,
    RelatedSeries,
};
use super::series::Series;
use super::KernelSpec;
use crate::error::{Error, Result};
use crate::sequences::Sign;

/// Which doubling-sequence signs the expansion is valid for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRequirement {
    Positive,
    Negative,
    Either,
}

impl SignRequirement {
    pub fn admits(self, sign: Sign) -> bool {
        match self {
            SignRequirement::Either => true,
            SignRequirement::Positive => sign == Sign::Positive,
            SignRequirement::Negative => sign == Sign::Negative,
        }
    }

    /// Sign used by the pipeline when it is free to choose.
    pub fn preferred(self) -> Sign {
        match self {
            SignRequirement::Negative => Sign::Negative,
            _ => Sign::Positive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignRequirement::Positive => "positive",
            SignRequirement::Negative => "negative",
            SignRequirement::Either => "either",
        }
    }
}

/// A value of `F(y)`: exact when the power is rational, otherwise high precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(Float),
}

impl Scalar {
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Scalar::Exact(q) => Float::with_val(prec, q),
            Scalar::Approx(f) => Float::with_val(prec, f),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.cmp0().is_eq(),
            Scalar::Approx(f) => f.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Approx(f) => f.to_f64(),
        }
    }
}

/// How `phi(x - y)` expands for large `|y|`:
///
/// `phi(x - y) = F(y) sum_k A_k(x) / y^k` with `F(y) = |y|^{f_exponent}`, or, when
/// `f_has_log` is set, `ln|y| sum_k A_k(x) / y^k + sum_k B_k(x) / y^k`.
///
/// `(A_k : k >= basis_offset)` is a basis of the polynomials, with
/// `deg A_{basis_offset + m} = m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionModel {
    pub kernel: KernelSpec,
    pub f_exponent: Rational,
    pub f_has_log: bool,
    pub sign_requirement: SignRequirement,
    pub basis_offset: usize,
}

impl ExpansionModel {
    /// `[A_0, ..., A_{n-1}]`.
    pub fn coefficients(&self, n: usize) -> Series {
        let mut out = match &self.kernel {
            KernelSpec::BinomialPower { q, r, c } => binomial_series(*q, r, c, n),
            KernelSpec::ArctanShifted => arctan_series(n + 1).split_off(1),
            KernelSpec::ArctanBinomial { q, r, c } | KernelSpec::RelatedArctan { q, r, c } => {
                related_arctan_series(*q, r, c, n)
            }
            KernelSpec::InvXLog => log_kernel_series(n).0,
            KernelSpec::RelatedLog { l, q } => related_log_series(*l, *q, n).0,
        };
        out.truncate(n);
        out
    }

    /// The rational companion series `[B_0, ..., B_{n-1}]` of log kernels.
    pub fn companion(&self, n: usize) -> Option<Series> {
        let mut out = match &self.kernel {
            KernelSpec::InvXLog => log_kernel_series(n).1,
            KernelSpec::RelatedLog { l, q } => related_log_series(*l, *q, n).1,
            _ => return None,
        };
        out.truncate(n);
        Some(out)
    }

    /// First index carrying a nonzero log-part coefficient (`L`), for log kernels.
    pub fn log_lead(&self) -> Option<usize> {
        match &self.kernel {
            KernelSpec::InvXLog => Some(1),
            KernelSpec::RelatedLog { l, .. } => Some(*l as usize),
            _ => None,
        }
    }

    /// `F(y)`; exact whenever `|y|^{f_exponent}` is rational.
    pub fn f_value(&self, y: &Rational, prec: u32) -> Scalar {
        let abs = Rational::from(y.abs_ref());
        if self.f_has_log {
            let f = Float::with_val(prec, &abs).ln();
            return if f.is_zero() {
                Scalar::Exact(Rational::new())
            } else {
                Scalar::Approx(f)
            };
        }
        match exact_power(&abs, &self.f_exponent) {
            Some(v) => Scalar::Exact(v),
            None => {
                let base = Float::with_val(prec, &abs);
                let e = Float::with_val(prec, &self.f_exponent);
                Scalar::Approx(Float::with_val(prec, Pow::pow(&base, &e)))
            }
        }
    }
}

/// `base^exponent` when it is rational.
fn exact_power(base: &Rational, exponent: &Rational) -> Option<Rational> {
    let d = exponent.denom().to_u32()?;
    let n = exponent.numer().to_i32()?;
    let root = |z: &Integer| -> Option<Integer> {
        let (r, rem) = z.clone().root_rem(Integer::new(), d);
        rem.is_zero().then_some(r)
    };
    let r = Rational::from((root(base.numer())?, root(base.denom())?));
    Some(Rational::from(Pow::pow(&r, n)))
}

/// Basis offset and admissibility data for a kernel.
pub fn classify_basis(spec: &KernelSpec) -> Result<ExpansionModel> {
    spec.validate()?;
    let model = |f_exponent: Rational, f_has_log, sign_requirement, basis_offset| ExpansionModel {
        kernel: spec.clone(),
        f_exponent,
        f_has_log,
        sign_requirement,
        basis_offset,
    };
    Ok(match spec {
        KernelSpec::BinomialPower { q, r, .. } => {
            let qr = Rational::from(r * *q);
            let even = q % 2 == 0;
            if is_natural(&qr) {
                let offset = (*q as usize) * ceil(r).to_usize().unwrap_or(0);
                let sign = if even {
                    SignRequirement::Either
                } else {
                    SignRequirement::Negative
                };
                model(qr, false, sign, offset)
            } else if even {
                model(qr, false, SignRequirement::Either, 0)
            } else {
                return Err(Error::UnsupportedParameter(format!(
                    "odd q = {q} requires qr in N (got qr = {qr})"
                )));
            }
        }
        KernelSpec::ArctanShifted => model(Rational::from(-1), false, SignRequirement::Positive, 0),
        KernelSpec::ArctanBinomial { q, r, .. } | KernelSpec::RelatedArctan { q, r, .. } => model(
            Rational::from(r * *q),
            false,
            SignRequirement::Positive,
            1,
        ),
        KernelSpec::InvXLog => model(Rational::new(), true, SignRequirement::Positive, 1),
        KernelSpec::RelatedLog { l, .. } => {
            model(Rational::new(), true, SignRequirement::Positive, *l as usize)
        }
    })
}

/// Coefficients of the product kernels, indexed as in [`RelatedSeries`].
pub fn related_series(spec: &KernelSpec, n: usize) -> Result<RelatedSeries> {
    match spec {
        KernelSpec::RelatedLog { l, q } => {
            spec.validate()?;
            let (a, b) = related_log_series(*l, *q, n);
            Ok(RelatedSeries::Log { a, b })
        }
        KernelSpec::RelatedArctan { q, r, c } => {
            spec.validate()?;
            Ok(RelatedSeries::Arctan {
                c: related_arctan_series(*q, r, c, n),
            })
        }
        other => Err(Error::InvalidKernel(format!(
            "{} is not a related-product family",
            other.family()
        ))),
    }
}
