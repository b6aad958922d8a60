use rayon::prelude::*;
use rug::{Integer, Rational};

use super::certify::{certify, ApproximationCertificate, IndexReport};
use super::cheb::{cheb_approx_capped, DEFAULT_DEGREE_CAP};
use super::combination::TranslateCombination;
use super::grid::Grid;
use super::recovery::{monomial_to_basis, reproduce_basis_poly, terms_needed, Reproduction};
use super::target::Target;
use crate::error::{Error, Result};
use crate::polybasis::{classify_basis, ExpansionModel, KernelSpec};
use crate::sequences::{extract_doubling, ScatteredProvider};
use crate::solvers::DEFAULT_PRECISION_BITS;

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxOptions {
    pub precision_bits: u32,
    pub degree_cap: usize,
    pub lp: Vec<f64>,
    /// The extraction floor is doubled until it would exceed this.
    pub y1_cap: Rational,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            precision_bits: DEFAULT_PRECISION_BITS,
            degree_cap: DEFAULT_DEGREE_CAP,
            lp: vec![1.0, 2.0],
            y1_cap: Rational::from(Integer::from(1) << 64),
        }
    }
}

/// Initial extraction floor `max(8, 4 max(|a|, |b|), 4c)`.
pub fn initial_floor(grid: &Grid, kernel: &KernelSpec) -> Rational {
    let candidates = [
        Rational::from(8),
        grid.radius() * Rational::from(4),
        kernel.shape() * Rational::from(4),
    ];
    candidates.into_iter().max().expect("nonempty")
}

/// Polynomial step at `epsilon / 2`, change of basis, one translate recovery
/// per basis index with budget `epsilon / (2 #indices |d_k|)`, then assembly
/// and certification on `grid`.
pub fn approximate(
    target: &Target,
    grid: &Grid,
    epsilon: f64,
    kernel: &KernelSpec,
    provider: &ScatteredProvider,
    options: &ApproxOptions,
) -> Result<(TranslateCombination, ApproximationCertificate)> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    let model = classify_basis(kernel).map_err(|e| e.at("classify"))?;
    let poly = cheb_approx_capped(target, grid, epsilon / 2.0, options.degree_cap)
        .map_err(|e| e.at("chebyshev"))?;
    let basis = monomial_to_basis(&poly.poly, &model).map_err(|e| e.at("basis"))?;
    let indices: Vec<(usize, Rational)> = basis.nonzero().map(|(k, d)| (k, d.clone())).collect();

    let share = epsilon / (2.0 * indices.len().max(1) as f64);
    let floor = initial_floor(grid, kernel);
    let recovered: Vec<(Reproduction, f64)> = indices
        .par_iter()
        .map(|(k, d)| {
            let budget = share / d.to_f64().abs();
            recover_index(&model, provider, grid, *k, budget, &floor, options).map(|r| (r, budget))
        })
        .collect::<Result<_>>()?;

    let parts: Vec<TranslateCombination> = recovered
        .iter()
        .zip(&indices)
        .map(|((r, _), (_, d))| r.combination.scaled(d))
        .collect();
    let combination = if parts.is_empty() {
        TranslateCombination::empty(kernel.clone())
    } else {
        TranslateCombination::sum(kernel.clone(), &parts)
    };

    let mut cert = certify(&combination, target, grid, &options.lp);
    cert.epsilon = Some(epsilon);
    cert.precision_bits = options.precision_bits;
    cert.poly_degree = Some(poly.degree());
    cert.poly_error = Some(poly.error);
    cert.solver_residuals = recovered.iter().map(|(r, _)| r.solver_residual).collect();
    cert.y1_used = recovered
        .iter()
        .map(|(r, _)| Rational::from(r.y1.abs_ref()))
        .max();
    cert.indices = recovered
        .iter()
        .zip(&indices)
        .map(|((r, budget), (k, d))| IndexReport {
            index: *k,
            coefficient: d.clone(),
            y1: r.y1.clone(),
            terms: r.combination.len(),
            error: r.error,
            budget: *budget,
            constant: r.constant,
            solver_residual: r.solver_residual,
            solver_bits: r.solver_bits,
        })
        .collect();
    if !(cert.sup_error < epsilon) {
        return Err(Error::NotCertified {
            sup_error: cert.sup_error,
            epsilon,
        }
        .at("certify"));
    }
    Ok((combination, cert))
}

/// Doubles the extraction floor until `|d_k| * error < share`.
fn recover_index(
    model: &ExpansionModel,
    provider: &ScatteredProvider,
    grid: &Grid,
    index: usize,
    budget: f64,
    floor: &Rational,
    options: &ApproxOptions,
) -> Result<Reproduction> {
    let sign = model.sign_requirement.preferred();
    let n = terms_needed(model, index).map_err(|e| e.at("recovery"))?;
    let mut m = floor.clone();
    let mut best = f64::INFINITY;
    while m <= options.y1_cap {
        let y = extract_doubling(provider, sign, &m, n).map_err(|e| e.at("doubling"))?;
        let rep = reproduce_basis_poly(model, &y, index, grid, options.precision_bits, None)
            .map_err(|e| e.at("recovery"))?;
        best = best.min(rep.error);
        if rep.error < budget {
            return Ok(rep);
        }
        m *= 2;
    }
    Err(Error::BudgetCap {
        index,
        best_error: best,
    }
    .at("recovery"))
}
