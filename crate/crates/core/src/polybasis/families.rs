//! Exact expansion polynomials for each kernel family.
//!
//! Every generator returns the coefficients of a formal series in `1/y`
//! describing a translate `phi(x - y)` for `|y|` large. Index `k` of a
//! returned [`Series`] multiplies `y^{-k}`.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Rational};

use super::binomial::{gen_binomial, sign_pow};
use super::series::{cauchy_product, shift_series, Series};
use super::Polynomial;

/// Binomial power coefficient `A_k` for `(c + x^q)^r`:
///
/// `A_k(x) = sum_{j=0}^{floor(k/q)} (-1)^k C(r, j) C(qr - qj, k - qj) c^j x^{k - qj}`
///
/// valid with `F(y) = |y|^{qr}` for either sign of `y` when `q` is even and
/// for negative `y` when `q` is odd.
pub fn binomial_ak(q: u32, r: &Rational, c: &Rational, k: usize) -> Polynomial {
    let q = q as usize;
    let qr = Rational::from(r * q as u32);
    let sign = sign_pow(k);
    let mut coeffs = vec![Rational::new(); k + 1];
    let mut c_pow = Rational::from(1);
    for j in 0..=k / q {
        let top = Rational::from(&qr - (q * j) as u64);
        let b = gen_binomial(r, j) * gen_binomial(&top, k - q * j) * &c_pow;
        coeffs[k - q * j] = b * sign;
        c_pow *= c;
    }
    Polynomial::new(coeffs)
}

pub fn binomial_series(q: u32, r: &Rational, c: &Rational, n: usize) -> Series {
    (0..n).map(|k| binomial_ak(q, r, c, k)).collect()
}

fn poisson_series(n: usize) -> Series {
    binomial_series(2, &Rational::from(-1), &Rational::from(1), n)
}

/// `B_k = Ã_{k-1} / k` for the shifted arctangent `arctan(x) + pi/2`, where
/// `Ã` are the Poisson-kernel coefficients. `B_0` is zero.
pub fn arctan_bk(k: usize) -> Polynomial {
    if k == 0 {
        return Polynomial::zero();
    }
    binomial_ak(2, &Rational::from(-1), &Rational::from(1), k - 1)
        .scale(&Rational::from((1, k as u64)))
}

/// `[B_0, ..., B_{n-1}]` for the shifted arctangent.
pub fn arctan_series(n: usize) -> Series {
    let poisson = poisson_series(n.saturating_sub(1));
    let mut out = vec![Polynomial::zero()];
    out.extend(
        poisson
            .iter()
            .enumerate()
            .map(|(j, p)| p.scale(&Rational::from((1, j as u64 + 1)))),
    );
    out.truncate(n);
    out
}

/// `[C_0, ..., C_{n-1}]` for `(c + x^q)^r (arctan(x) + pi/2)` written as
/// `y^{qr-1} sum_k C_k / y^k`, i.e. `C_k = sum_j A_j B_{k-j+1}`.
pub fn arctan_binomial_series(q: u32, r: &Rational, c: &Rational, n: usize) -> Series {
    let a = binomial_series(q, r, c, n);
    let b = arctan_series(n + 1);
    cauchy_product(&a, &b[1..], n)
}

pub fn arctan_binomial_ck(q: u32, r: &Rational, c: &Rational, k: usize) -> Polynomial {
    arctan_binomial_series(q, r, c, k + 1).pop().unwrap_or_default()
}

/// Log-part and rational-part coefficients of `x^{-1} ln(1 + x^2)`:
///
/// `phi(x - y) = ln|y| sum_{j>=1} A_j / y^j + sum_{k>=2} B_k / y^k`.
///
/// Both returned series have length `n + 1` (indices `0..=n`). The rational
/// part is obtained by differentiating `ln(1 + (x-y)^2)` in `y`, expanding
/// with the Poisson coefficients, integrating term by term and multiplying by
/// the geometric series of `(x - y)^{-1}`.
pub fn log_kernel_series(n: usize) -> (Series, Series) {
    let len = n + 1;
    let pt = poisson_series(len);
    let two = Rational::from(2);
    let x = Polynomial::monomial(1, 1);

    // d/dy ln(1+(x-y)^2) = sum_{j>=1} D_j / y^j with D_1 = 2 Ã_0 and
    // D_j = 2 Ã_{j-1} - 2 x Ã_{j-2}.
    let mut deriv = vec![Polynomial::zero(); len + 1];
    deriv[1] = pt[0].scale(&two);
    for j in 2..=len {
        let prev = pt.get(j - 1).cloned().unwrap_or_default();
        deriv[j] = &prev.scale(&two) - &(&x * &pt[j - 2]).scale(&two);
    }

    // ln(1+(x-y)^2) = 2 ln|y| - sum_{j>=1} D_{j+1} / (j y^j)
    let mut integrated = vec![Polynomial::zero(); len];
    for (j, slot) in integrated.iter_mut().enumerate().skip(1) {
        *slot = deriv[j + 1].scale(&Rational::from((-1, j as u64)));
    }

    // (x - y)^{-1} = -sum_{j>=0} x^j / y^{j+1}
    let geometric: Series = (0..len)
        .map(|j| match j {
            0 => Polynomial::zero(),
            _ => Polynomial::monomial(-1, j - 1),
        })
        .collect();

    let log_part = cauchy_product(&geometric, &[Polynomial::constant(2)], len);
    let rational_part = cauchy_product(&geometric, &integrated, len);
    (log_part, rational_part)
}

/// Coefficients of the product kernels.
#[derive(Clone, Debug, PartialEq)]
pub enum RelatedSeries {
    /// `(x-y)^{-L} ln(1+(x-y)^q) = ln|y| sum A_j y^{-j} + sum B_j y^{-j}`.
    Log { a: Series, b: Series },
    /// `(c+(x-y)^q)^r (arctan(x-y) + pi/2) = y^{qr} sum C_j y^{-j}`.
    Arctan { c: Series },
}

/// Series of `(x-y)^{-L} ln(1 + (x-y)^q)` for `y > 0`, indices `0..=n`.
pub fn related_log_series(l: u32, q: u32, n: usize) -> (Series, Series) {
    let len = n + 1;
    let q_r = Rational::from(q);
    // 1/(1+(x-y)^q) = y^{-q} sum P_j / y^j
    let recip = binomial_series(q, &Rational::from(-1), &Rational::from(1), len);
    // (1 - x/y)^{q-1}
    let head: Series = (0..q as usize)
        .map(|i| {
            let b = gen_binomial(&Rational::from(q - 1), i) * sign_pow(i);
            Polynomial::monomial(b, i)
        })
        .collect();
    // d/dy ln(1+(x-y)^q) = q y^{-1} sum E_m y^{-m}
    let e = cauchy_product(&head, &recip, len);
    // ln(1+(x-y)^q) = q ln|y| - sum_{m>=1} q E_m / (m y^m)
    let mut integrated = vec![Polynomial::zero(); len];
    for (m, slot) in integrated.iter_mut().enumerate().skip(1) {
        *slot = e[m].scale(&Rational::from((-(q as i64), m as u64)));
    }
    // (x-y)^{-L} = (-1)^L y^{-L} sum_i C(L+i-1, i) x^i y^{-i}
    let l = l as usize;
    let lead = sign_pow(l);
    let power: Series = (0..len)
        .map(|j| {
            if j < l {
                Polynomial::zero()
            } else {
                let i = j - l;
                let b = gen_binomial(&Rational::from((l + i - 1) as u64), i) * lead;
                Polynomial::monomial(b, i)
            }
        })
        .collect();
    let a = cauchy_product(&power, &[Polynomial::constant(q_r)], len);
    let b = cauchy_product(&power, &integrated, len);
    (a, b)
}

/// `y^{qr}`-indexed coefficients of `(c+(x-y)^q)^r (arctan(x-y) + pi/2)`,
/// indices `0..=n`; `C_0 = 0` and `C_j` is the `(j-1)`-th arctan-binomial coefficient.
pub fn related_arctan_series(q: u32, r: &Rational, c: &Rational, n: usize) -> Series {
    shift_series(&arctan_binomial_series(q, r, c, n), 1)
}

/// Result of `D^N (p(x) ln x)`: `log_part(x) ln x + sum_e laurent[e] x^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDerivative {
    pub order: usize,
    pub log_part: Polynomial,
    pub laurent: BTreeMap<i64, Rational>,
}

impl LogDerivative {
    /// Coefficients `b_j` in `x^{-N} sum_j b_j x^j` for the rational part
    /// (only meaningful when every Laurent exponent is `>= -N`).
    pub fn numerator(&self) -> Vec<Rational> {
        let n = self.order as i64;
        let top = self.laurent.keys().next_back().copied().unwrap_or(-n);
        (0..=(top + n).max(0))
            .map(|j| self.laurent.get(&(j - n)).cloned().unwrap_or_default())
            .collect()
    }

    pub fn eval(&self, x: &Float, prec: u32) -> Float {
        let mut out = Float::with_val(prec, 0);
        if !self.log_part.is_zero() {
            out += self.log_part.eval_float(x, prec) * Float::with_val(prec, x.ln_ref());
        }
        for (e, c) in &self.laurent {
            let xe = Float::with_val(prec, Pow::pow(x, *e as i32));
            out += xe * c;
        }
        out
    }
}

/// Exact `D^N (p(x) ln x)` by repeated differentiation of
/// `P ln x + R`, with `D(P ln x + R) = P' ln x + P/x + R'`.
pub fn log_poly_derivative(p: &Polynomial, order: usize) -> LogDerivative {
    let mut log_part = p.clone();
    let mut laurent: BTreeMap<i64, Rational> = BTreeMap::new();
    for _ in 0..order {
        let mut next: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in &laurent {
            if *e != 0 {
                *next.entry(e - 1).or_default() += Rational::from(c * *e);
            }
        }
        for (i, c) in log_part.coeffs().iter().enumerate() {
            if c.cmp0().is_ne() {
                *next.entry(i as i64 - 1).or_default() += c;
            }
        }
        next.retain(|_, c| c.cmp0().is_ne());
        laurent = next;
        log_part = log_part.derivative();
    }
    LogDerivative {
        order,
        log_part,
        laurent,
    }
}
