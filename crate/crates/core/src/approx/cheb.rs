use std::f64::consts::PI;

use rayon::prelude::*;
use rug::{Float, Rational};

use super::grid::Grid;
use super::target::Target;
use crate::error::{Error, Result};
use crate::polybasis::Polynomial;

pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Bits used when checking the polynomial step against the target.
const CHECK_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyApprox {
    pub poly: Polynomial,
    /// Measured grid sup error.
    pub error: f64,
}

impl PolyApprox {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

/// Adaptive Chebyshev interpolation on `grid`'s interval with degree cap 64.
pub fn cheb_approx(target: &Target, grid: &Grid, tol: f64) -> Result<PolyApprox> {
    cheb_approx_capped(target, grid, tol, DEFAULT_DEGREE_CAP)
}

/// Smallest-degree Chebyshev interpolant whose grid error is below `tol`.
///
/// The degree search runs in `f64` (Clenshaw); the accepted interpolant is
/// converted exactly to monomial form and re-measured at high precision.
pub fn cheb_approx_capped(target: &Target, grid: &Grid, tol: f64, cap: usize) -> Result<PolyApprox> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if let Some(p) = target.as_polynomial() {
        return Ok(PolyApprox {
            poly: p.clone(),
            error: 0.0,
        });
    }
    target.check_domain(grid.a(), grid.b())?;
    let (a, b) = (grid.a().to_f64(), grid.b().to_f64());
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let nodes = grid.nodes();
    let ts: Vec<f64> = nodes.iter().map(|x| (x.to_f64() - mid) / half).collect();
    let fs: Vec<f64> = nodes.iter().map(|x| target.eval_f64(x.to_f64())).collect();
    let f_hi: Vec<Float> = nodes.par_iter().map(|x| target.eval(x, CHECK_BITS)).collect();

    let mut best = f64::INFINITY;
    for n in 0..=cap {
        let coeffs = cheb_coeffs(target, mid, half, n);
        let err = ts
            .iter()
            .zip(&fs)
            .map(|(&t, &f)| (f - clenshaw(&coeffs, t)).abs())
            .fold(0.0, f64::max);
        if err.is_nan() {
            return Err(Error::InvalidArgument("target is not finite on the interval".into()));
        }
        best = best.min(err);
        if err >= tol {
            continue;
        }
        let poly = to_monomial(&coeffs, grid.a(), grid.b());
        let exact_err = nodes
            .par_iter()
            .zip(&f_hi)
            .map(|(x, f)| {
                let p = Float::with_val(CHECK_BITS, poly.eval(x));
                Float::with_val(CHECK_BITS, f - &p).abs().to_f64()
            })
            .reduce(|| 0.0, f64::max);
        best = best.min(exact_err);
        if exact_err < tol {
            return Ok(PolyApprox {
                poly,
                error: exact_err,
            });
        }
    }
    Err(Error::DegreeCap {
        cap,
        best_error: best,
        tol,
    })
}

/// Coefficients of the degree-`n` interpolant at first-kind Chebyshev points;
/// values negligible next to the largest are dropped.
fn cheb_coeffs(target: &Target, mid: f64, half: f64, n: usize) -> Vec<f64> {
    let m = n + 1;
    let theta: Vec<f64> = (0..m).map(|j| PI * (j as f64 + 0.5) / m as f64).collect();
    let f: Vec<f64> = theta.iter().map(|t| target.eval_f64(mid + half * t.cos())).collect();
    let mut c: Vec<f64> = (0..m)
        .map(|k| {
            let s: f64 = f.iter().zip(&theta).map(|(fj, t)| fj * (k as f64 * t).cos()).sum();
            2.0 * s / m as f64
        })
        .collect();
    c[0] /= 2.0;
    let max = c.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for v in &mut c {
        if v.abs() <= 8.0 * f64::EPSILON * max {
            *v = 0.0;
        }
    }
    c
}

fn clenshaw(c: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

/// `sum_k c_k T_k((2x - a - b) / (b - a))` as an exact monomial polynomial.
fn to_monomial(c: &[f64], a: &Rational, b: &Rational) -> Polynomial {
    let mut in_t = Polynomial::zero();
    let (mut t_prev, mut t_cur) = (Polynomial::constant(Rational::from(1)), Polynomial::from_i64s(&[0, 1]));
    for (k, &ck) in c.iter().enumerate() {
        let tk = if k == 0 { &t_prev } else { &t_cur };
        if ck != 0.0 {
            in_t = &in_t + &tk.scale(&Rational::from_f64(ck).expect("finite coefficient"));
        }
        if k >= 1 {
            let next = &(&Polynomial::from_i64s(&[0, 2]) * &t_cur) - &t_prev;
            t_prev = std::mem::replace(&mut t_cur, next);
        }
    }
    let width = Rational::from(b - a);
    let alpha = Rational::from(2) / &width;
    let beta = -(Rational::from(a + b) / width);
    let affine = Polynomial::new(vec![beta, alpha]);
    // Horner in polynomial arithmetic
    let mut out = Polynomial::zero();
    for coeff in in_t.coeffs().iter().rev() {
        out = &(&out * &affine) + &Polynomial::constant(coeff.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::target::Builtin;

    fn unit_grid() -> Grid {
        Grid::new(Rational::from(-1), Rational::from(1), 1001).unwrap()
    }

    #[test]
    fn polynomial_passthrough() {
        let p = Polynomial::from_i64s(&[0, -2, 0, 1]);
        let r = cheb_approx(&Target::Polynomial(p.clone()), &unit_grid(), 1e-3).unwrap();
        assert_eq!(r.poly, p);
        assert_eq!(r.error, 0.0);
    }

    #[test]
    fn sin_needs_low_degree() {
        let r = cheb_approx(&Target::Builtin(Builtin::Sin), &unit_grid(), 1e-3).unwrap();
        assert!(r.degree() <= 9, "degree {}", r.degree());
        assert!(r.error < 1e-3);
        // numpy's chebinterpolate gives grid error 9.93e-4 at degree 3
        assert_eq!(r.degree(), 3);
        assert!((r.error - 9.930425666556664e-4).abs() < 1e-9);
    }

    #[test]
    fn abs_hits_the_cap() {
        let err = cheb_approx(&Target::Builtin(Builtin::Abs), &unit_grid(), 1e-9).unwrap_err();
        match err {
            Error::DegreeCap { cap, best_error, .. } => {
                assert_eq!(cap, 64);
                assert!(best_error > 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monomial_conversion_is_exact_on_shifted_interval() {
        // interpolating a cubic reproduces it up to f64 rounding of the coefficients
        let grid = Grid::new(Rational::from(1), Rational::from(4), 101).unwrap();
        let cubic = Target::function(|x| x * x * x - 2.0 * x + 1.0);
        let r = cheb_approx(&cubic, &grid, 1e-10).unwrap();
        assert_eq!(r.degree(), 3);
        let c = r.poly.coeffs();
        for (got, want) in c.iter().zip([1.0, -2.0, 0.0, 1.0]) {
            assert!((got.to_f64() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let c = [0.5, -1.0, 0.25, 2.0];
        let t: f64 = 0.3;
        let direct: f64 = c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck * (k as f64 * t.acos()).cos())
            .sum();
        assert!((clenshaw(&c, t) - direct).abs() < 1e-14);
    }
}
