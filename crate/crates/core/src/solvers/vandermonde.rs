use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::polybasis::{ExpansionModel, Scalar};
use crate::sequences::DoublingSequence;

/// Exact solution of `sum_i c_i y_i^{-k} = [k = N-1]`, `k = 0..N-1`, and the
/// translate coefficients `a_i = c_i / F(y_i)` derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeSolution {
    pub nodes: DoublingSequence,
    pub n: usize,
    pub c: Vec<Rational>,
    pub a_tilde: Vec<Scalar>,
}

fn head(y: &DoublingSequence, n: usize) -> Result<&[Rational]> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if y.len() < n {
        return Err(Error::InvalidArgument(format!(
            "need {n} nodes, doubling sequence has {}",
            y.len()
        )));
    }
    Ok(&y.nodes()[..n])
}

/// `c_i = y_i^{N-1} prod_{j != i} (1 - y_i / y_j)^{-1}` over the first `N` nodes.
pub fn vandermonde_coeffs(y: &DoublingSequence, n: usize) -> Result<Vec<Rational>> {
    let nodes = head(y, n)?;
    Ok(cramer(nodes))
}

fn cramer(nodes: &[Rational]) -> Vec<Rational> {
    let n = nodes.len();
    nodes
        .iter()
        .enumerate()
        .map(|(i, yi)| {
            let mut denom = Rational::from(1);
            for (j, yj) in nodes.iter().enumerate() {
                if j != i {
                    denom *= Rational::from(1) - Rational::from(yi / yj);
                }
            }
            Rational::from(Pow::pow(yi, n as i32 - 1)) / denom
        })
        .collect()
}

/// `max_k |sum_i c_i y_i^{-k} - [k = N-1]|` in exact arithmetic.
pub fn vandermonde_residual(nodes: &[Rational], c: &[Rational]) -> Rational {
    let n = c.len();
    (0..n)
        .map(|k| {
            let mut row: Rational = nodes
                .iter()
                .zip(c)
                .map(|(y, ci)| ci / Rational::from(Pow::pow(y, k as i32)) )
                .sum();
            if k + 1 == n {
                row -= 1;
            }
            row.abs()
        })
        .max()
        .unwrap_or_default()
}

/// `a_i = c_i / F(y_i)`, exact whenever `F(y_i)` is rational.
pub fn translate_coeffs(
    y: &DoublingSequence,
    model: &ExpansionModel,
    n: usize,
    prec: u32,
) -> Result<Vec<Scalar>> {
    let c = vandermonde_coeffs(y, n)?;
    divide_by_f(&y.nodes()[..n], &c, model, prec)
}

fn divide_by_f(nodes: &[Rational], c: &[Rational], model: &ExpansionModel, prec: u32) -> Result<Vec<Scalar>> {
    nodes
        .iter()
        .zip(c)
        .map(|(yi, ci)| match model.f_value(yi, prec) {
            f if f.is_zero() => Err(Error::ZeroF {
                node: yi.to_string(),
            }),
            Scalar::Exact(f) => Ok(Scalar::Exact(Rational::from(ci / &f))),
            Scalar::Approx(f) => Ok(Scalar::Approx(Float::with_val(prec, ci) / f)),
        })
        .collect()
}

pub fn solve_vandermonde(
    y: &DoublingSequence,
    model: &ExpansionModel,
    n: usize,
    prec: u32,
) -> Result<VandermondeSolution> {
    let c = vandermonde_coeffs(y, n)?;
    let a_tilde = divide_by_f(&y.nodes()[..n], &c, model, prec)?;
    Ok(VandermondeSolution {
        nodes: y.truncated(n),
        n,
        c,
        a_tilde,
    })
}
