use std::fmt;

use rug::ops::Pow;
use rug::float::Constant;
use rug::{Float, Rational};

use super::binomial::{is_natural, is_nonneg_integer};
use crate::error::{Error, Result};

/// Kernel family names as used in configs and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    BinomialPower,
    ArctanShifted,
    ArctanBinomial,
    InvXLog,
    RelatedLog,
    RelatedArctan,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 6] = [
        KernelFamily::BinomialPower,
        KernelFamily::ArctanShifted,
        KernelFamily::ArctanBinomial,
        KernelFamily::InvXLog,
        KernelFamily::RelatedLog,
        KernelFamily::RelatedArctan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelFamily::BinomialPower => "binomial-power",
            KernelFamily::ArctanShifted => "arctan-shifted",
            KernelFamily::ArctanBinomial => "arctan-binomial",
            KernelFamily::InvXLog => "inv-x-log",
            KernelFamily::RelatedLog => "related-log",
            KernelFamily::RelatedArctan => "related-arctan",
        }
    }
}

impl std::str::FromStr for KernelFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidKernel(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A kernel `phi` together with its parameters.
///
/// * `BinomialPower`: `(c + x^q)^r`
/// * `ArctanShifted`: `arctan(x) + pi/2`
/// * `ArctanBinomial`, `RelatedArctan`: `(c + x^q)^r (arctan(x) + pi/2)`
/// * `InvXLog`: `x^{-1} ln(1 + x^2)`
/// * `RelatedLog`: `x^{-L} ln(1 + x^q)`
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    BinomialPower { q: u32, r: Rational, c: Rational },
    ArctanShifted,
    ArctanBinomial { q: u32, r: Rational, c: Rational },
    InvXLog,
    RelatedLog { l: u32, q: u32 },
    RelatedArctan { q: u32, r: Rational, c: Rational },
}

impl KernelSpec {
    /// Hardy multiquadric `sqrt(1 + x^2)`.
    pub fn multiquadric() -> Self {
        KernelSpec::binomial(2, Rational::from((1, 2)), Rational::from(1))
    }

    /// Poisson kernel `(1 + x^2)^{-1}`.
    pub fn poisson() -> Self {
        KernelSpec::binomial(2, Rational::from(-1), Rational::from(1))
    }

    pub fn binomial(q: u32, r: Rational, c: Rational) -> Self {
        KernelSpec::BinomialPower { q, r, c }
    }

    pub fn family(&self) -> KernelFamily {
        match self {
            KernelSpec::BinomialPower { .. } => KernelFamily::BinomialPower,
            KernelSpec::ArctanShifted => KernelFamily::ArctanShifted,
            KernelSpec::ArctanBinomial { .. } => KernelFamily::ArctanBinomial,
            KernelSpec::InvXLog => KernelFamily::InvXLog,
            KernelSpec::RelatedLog { .. } => KernelFamily::RelatedLog,
            KernelSpec::RelatedArctan { .. } => KernelFamily::RelatedArctan,
        }
    }

    /// Shape parameter `c` (1 for families without one).
    pub fn shape(&self) -> Rational {
        match self {
            KernelSpec::BinomialPower { c, .. }
            | KernelSpec::ArctanBinomial { c, .. }
            | KernelSpec::RelatedArctan { c, .. } => c.clone(),
            _ => Rational::from(1),
        }
    }

    /// Checks the parameter invariants that do not depend on basis theory.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidKernel(m));
        match self {
            KernelSpec::BinomialPower { q, r, c } => {
                if *q == 0 {
                    return bad("q must be a positive integer".into());
                }
                if is_nonneg_integer(r) {
                    return bad(format!("r = {r} must not be a non-negative integer"));
                }
                if c.cmp0().is_le() {
                    return bad(format!("c = {c} must be positive"));
                }
            }
            KernelSpec::ArctanBinomial { q, r, c } | KernelSpec::RelatedArctan { q, r, c } => {
                if *q == 0 || q % 2 == 1 {
                    return bad(format!("q = {q} must be a positive even integer"));
                }
                if r.cmp0().is_eq() {
                    return bad("r must be nonzero".into());
                }
                if c.cmp0().is_le() {
                    return bad(format!("c = {c} must be positive"));
                }
                let qr = Rational::from(r * *q);
                if is_natural(&qr) {
                    return bad(format!("qr = {qr} must not be a positive integer"));
                }
            }
            KernelSpec::RelatedLog { l, q } => {
                if *l == 0 {
                    return bad("L must be a positive integer".into());
                }
                if *q == 0 || q % 2 == 1 {
                    return bad(format!("q = {q} must be a positive even integer"));
                }
            }
            KernelSpec::ArctanShifted | KernelSpec::InvXLog => {}
        }
        Ok(())
    }

    /// Closed-form `phi(t)` at `prec` bits.
    ///
    /// Outside the real domain (odd `q` with `c + t^q <= 0`) the result is NaN.
    pub fn eval(&self, t: &Float, prec: u32) -> Float {
        match self {
            KernelSpec::BinomialPower { q, r, c } => binomial_power(t, *q, r, c, prec),
            KernelSpec::ArctanShifted => shifted_arctan(t, prec),
            KernelSpec::ArctanBinomial { q, r, c } | KernelSpec::RelatedArctan { q, r, c } => {
                binomial_power(t, *q, r, c, prec) * shifted_arctan(t, prec)
            }
            KernelSpec::InvXLog => {
                if t.is_zero() {
                    return Float::with_val(prec, 0);
                }
                let sq = Float::with_val(prec, t.square_ref());
                sq.ln_1p() / t
            }
            KernelSpec::RelatedLog { l, q } => {
                if t.is_zero() {
                    return Float::with_val(
                        prec,
                        match q.cmp(l) {
                            std::cmp::Ordering::Greater => 0.0,
                            std::cmp::Ordering::Equal => 1.0,
                            std::cmp::Ordering::Less => f64::INFINITY,
                        },
                    );
                }
                let tq = Float::with_val(prec, Pow::pow(t, *q));
                let tl = Float::with_val(prec, Pow::pow(t, *l));
                tq.ln_1p() / tl
            }
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.eval(&Float::with_val(128, t), 128).to_f64()
    }
}

fn binomial_power(t: &Float, q: u32, r: &Rational, c: &Rational, prec: u32) -> Float {
    let base = Float::with_val(prec, Pow::pow(t, q)) + c;
    if base.cmp0() != Some(std::cmp::Ordering::Greater) {
        return Float::with_val(prec, f64::NAN);
    }
    let (num, den) = (r.numer(), r.denom());
    let root = match den.to_u32() {
        Some(1) => base,
        Some(2) => base.sqrt(),
        Some(d) => base.root(d),
        None => {
            let e = Float::with_val(prec, r);
            return Float::with_val(prec, Pow::pow(&base, &e));
        }
    };
    match num.to_i32() {
        Some(n) => Float::with_val(prec, Pow::pow(&root, n)),
        None => {
            let e = Float::with_val(prec, num);
            Float::with_val(prec, Pow::pow(&root, &e))
        }
    }
}

/// `arctan(t) + pi/2`, computed as `arctan(-1/t)` for negative `t` so the
/// result keeps full relative precision when it is small.
fn shifted_arctan(t: &Float, prec: u32) -> Float {
    if t.is_sign_negative() && !t.is_zero() {
        let inv = -Float::with_val(prec, t.recip_ref());
        inv.atan()
    } else {
        let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
        Float::with_val(prec, t.atan_ref()) + half_pi
    }
}
