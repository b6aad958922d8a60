use rayon::prelude::*;
use rug::{Float, Rational};

use super::combination::TranslateCombination;
use super::grid::Grid;
use super::target::Target;

/// One row of the certification table.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: Rational,
    pub f: f64,
    pub s: f64,
    pub abs_err: f64,
}

/// Per-basis-index record of the translate step.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub index: usize,
    pub coefficient: Rational,
    pub y1: Rational,
    pub terms: usize,
    pub error: f64,
    pub budget: f64,
    pub constant: f64,
    pub solver_residual: f64,
    pub solver_bits: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationCertificate {
    pub a: Rational,
    pub b: Rational,
    pub grid_points: usize,
    pub sup_error: f64,
    /// `(p, ||f - s||_p)` by the trapezoid rule on the grid.
    pub lp_errors: Vec<(f64, f64)>,
    pub epsilon: Option<f64>,
    /// Largest `|y_1|` over the basis indices.
    pub y1_used: Option<Rational>,
    pub precision_bits: u32,
    pub working_bits: u32,
    pub solver_residuals: Vec<f64>,
    pub poly_degree: Option<usize>,
    pub poly_error: Option<f64>,
    pub indices: Vec<IndexReport>,
    pub samples: Vec<Sample>,
}

/// Sup and `L^p` errors of `s` against `target` on `grid`.
pub fn certify(s: &TranslateCombination, target: &Target, grid: &Grid, ps: &[f64]) -> ApproximationCertificate {
    let prec = s.working_bits.max(128);
    let samples: Vec<Sample> = grid
        .nodes()
        .into_par_iter()
        .map(|x| {
            let f = target.eval(&x, prec);
            let sv = s.eval(&x);
            let abs_err = Float::with_val(prec, &f - &sv).abs().to_f64();
            Sample {
                x,
                f: f.to_f64(),
                s: sv.to_f64(),
                abs_err,
            }
        })
        .collect();
    let errs: Vec<f64> = samples.iter().map(|r| r.abs_err).collect();
    let width = grid.width().to_f64();
    let sup_error = errs.iter().cloned().fold(0.0, f64::max);
    let lp_errors = ps.iter().map(|&p| (p, lp_error(&errs, width, sup_error, p))).collect();
    ApproximationCertificate {
        a: grid.a().clone(),
        b: grid.b().clone(),
        grid_points: grid.points(),
        sup_error,
        lp_errors,
        epsilon: None,
        y1_used: None,
        precision_bits: s.working_bits,
        working_bits: s.working_bits,
        solver_residuals: Vec::new(),
        poly_degree: None,
        poly_error: None,
        indices: Vec::new(),
        samples,
    }
}

/// Composite trapezoid rule for `(int |e|^p)^{1/p}` on equispaced samples,
/// clamped to the Hölder bound `sup * width^{1/p}`.
pub fn lp_error(errs: &[f64], width: f64, sup: f64, p: f64) -> f64 {
    let h = width / (errs.len() - 1) as f64;
    let (first, last) = (errs[0].powf(p), errs[errs.len() - 1].powf(p));
    let inner: f64 = errs[1..errs.len() - 1].iter().map(|e| e.powf(p)).sum();
    let integral = h * (inner + (first + last) / 2.0);
    integral.powf(1.0 / p).min(sup * width.powf(1.0 / p))
}
