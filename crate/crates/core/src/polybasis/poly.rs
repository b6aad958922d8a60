use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

/// Dense polynomial with exact rational coefficients in the monomial basis.
///
/// `coeffs[i]` multiplies `x^i`. Trailing zeros are stripped, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Polynomial::new(vec![c.into()])
    }

    /// `c * x^degree`.
    pub fn monomial(c: impl Into<Rational>, degree: usize) -> Self {
        let mut coeffs = vec![Rational::new(); degree + 1];
        coeffs[degree] = c.into();
        Polynomial::new(coeffs)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Polynomial::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation at `x` with `prec` bits.
    pub fn eval_float(&self, x: &Float, prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.eval_float(&Float::with_val(128, x), 128).to_f64()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0().is_eq() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.cmp0().is_lt() { '-' } else { '+' })?;
            } else if c.cmp0().is_lt() {
                write!(f, "-")?;
            }
            first = false;
            let mag = Rational::from(c.abs_ref());
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = Polynomial::new(vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::new(vec![q(0, 1)]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::from_i64s(&[1, 1]);
        let b = Polynomial::from_i64s(&[-1, 1]);
        assert_eq!(&a * &b, Polynomial::from_i64s(&[-1, 0, 1]));
        assert_eq!(&a + &b, Polynomial::from_i64s(&[0, 2]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.shift(2), Polynomial::from_i64s(&[0, 0, 1, 1]));
        assert_eq!(
            Polynomial::from_i64s(&[5, 3, 2]).derivative(),
            Polynomial::from_i64s(&[3, 4])
        );
    }

    #[test]
    fn evaluation_agrees() {
        let p = Polynomial::new(vec![q(1, 3), q(-2, 1), q(5, 7)]);
        let x = q(3, 2);
        let exact = p.eval(&x);
        let approx = p.eval_float(&Float::with_val(200, &x), 200);
        assert!((approx - Float::with_val(200, &exact)).abs() < 1e-50);
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![q(-1, 3), q(0, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "x^2 - 1/3");
        assert_eq!(Polynomial::from_i64s(&[0, -1]).to_string(), "-x");
    }
}
