use std::fmt;
use std::sync::Arc;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::polybasis::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Sin,
    Cos,
    Exp,
    Abs,
    /// `1 / (1 + 25 x^2)`
    Runge,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::Sin, Builtin::Cos, Builtin::Exp, Builtin::Abs, Builtin::Runge];

    pub fn as_str(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Exp => "exp",
            Builtin::Abs => "abs",
            Builtin::Runge => "runge",
        }
    }
}

impl std::str::FromStr for Builtin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown builtin target {s:?}")))
    }
}

/// A function to approximate on an interval.
#[derive(Clone)]
pub enum Target {
    Polynomial(Polynomial),
    Builtin(Builtin),
    /// Piecewise-linear interpolation of a table sorted by abscissa.
    Sampled { xs: Vec<f64>, fs: Vec<f64> },
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Polynomial(p) => write!(f, "Polynomial({p})"),
            Target::Builtin(b) => write!(f, "Builtin({})", b.as_str()),
            Target::Sampled { xs, .. } => write!(f, "Sampled({} points)", xs.len()),
            Target::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Target {
    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Target::Function(Arc::new(f))
    }

    pub fn sampled(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a sampled target needs at least two points".into()));
        }
        if points.iter().any(|(x, f)| !x.is_finite() || !f.is_finite()) {
            return Err(Error::InvalidArgument("sampled target contains non-finite values".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("sampled target repeats an abscissa".into()));
        }
        let (xs, fs) = points.into_iter().unzip();
        Ok(Target::Sampled { xs, fs })
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            Target::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Checks that the target is defined on all of `[a, b]`.
    pub fn check_domain(&self, a: &Rational, b: &Rational) -> Result<()> {
        if let Target::Sampled { xs, .. } = self {
            let (lo, hi) = (xs[0], xs[xs.len() - 1]);
            if a.to_f64() < lo || b.to_f64() > hi {
                return Err(Error::InvalidArgument(format!(
                    "sampled target covers [{lo}, {hi}], not [{a}, {b}]"
                )));
            }
        }
        Ok(())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            Target::Polynomial(p) => p.eval_f64(x),
            Target::Builtin(b) => match b {
                Builtin::Sin => x.sin(),
                Builtin::Cos => x.cos(),
                Builtin::Exp => x.exp(),
                Builtin::Abs => x.abs(),
                Builtin::Runge => 1.0 / (1.0 + 25.0 * x * x),
            },
            Target::Sampled { xs, fs } => interpolate(xs, fs, x),
            Target::Function(f) => f(x),
        }
    }

    /// Value at an exact abscissa; polynomials and builtins are evaluated at `prec` bits.
    pub fn eval(&self, x: &Rational, prec: u32) -> Float {
        match self {
            Target::Polynomial(p) => Float::with_val(prec, p.eval(x)),
            Target::Builtin(b) => {
                let t = Float::with_val(prec, x);
                match b {
                    Builtin::Sin => t.sin(),
                    Builtin::Cos => t.cos(),
                    Builtin::Exp => t.exp(),
                    Builtin::Abs => t.abs(),
                    Builtin::Runge => {
                        let d = Float::with_val(prec, t.square_ref()) * 25u32 + 1u32;
                        d.recip()
                    }
                }
            }
            _ => Float::with_val(prec, self.eval_f64(x.to_f64())),
        }
    }
}

fn interpolate(xs: &[f64], fs: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v <= x);
    if i == 0 {
        return fs[0];
    }
    if i == xs.len() {
        return fs[fs.len() - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let t = (x - x0) / (x1 - x0);
    fs[i - 1] + t * (fs[i] - fs[i - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_agree_across_precisions() {
        for b in Builtin::ALL {
            let t = Target::Builtin(b);
            for x in [-0.75, 0.0, 0.3] {
                let exact = Rational::from_f64(x).unwrap();
                let hi = t.eval(&exact, 200).to_f64();
                assert!((hi - t.eval_f64(x)).abs() < 1e-15, "{b:?} at {x}");
            }
            assert_eq!(b.as_str().parse::<Builtin>().unwrap(), b);
        }
    }

    #[test]
    fn sampled_is_piecewise_linear() {
        let t = Target::sampled(vec![(1.0, 3.0), (0.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(t.eval_f64(0.5), 2.0);
        assert_eq!(t.eval_f64(1.5), 2.5);
        assert_eq!(t.eval_f64(2.0), 2.0);
        assert!(t.check_domain(&Rational::from(0), &Rational::from(2)).is_ok());
        assert!(t.check_domain(&Rational::from(-1), &Rational::from(2)).is_err());
        assert!(Target::sampled(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
    }
}
