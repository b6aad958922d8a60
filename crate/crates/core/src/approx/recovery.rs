use rayon::prelude::*;
use rug::{Float, Rational};

use super::combination::{Term, TranslateCombination};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::polybasis::{ExpansionModel, Polynomial, Scalar};
use crate::sequences::DoublingSequence;
use crate::solvers::{alternant_size, alternant_solve_adaptive, solve_vandermonde, vandermonde_residual};

/// `p = sum_m coeffs[m] A_{offset + m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisCoefficients {
    pub offset: usize,
    pub coeffs: Vec<Rational>,
}

impl BasisCoefficients {
    /// `(k, d_k)` for the nonzero coefficients.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.cmp0().is_ne())
            .map(move |(m, d)| (self.offset + m, d))
    }
}

/// Exact change of basis from monomials to `(A_k : k >= K)` by back-substitution.
pub fn monomial_to_basis(p: &Polynomial, model: &ExpansionModel) -> Result<BasisCoefficients> {
    let offset = model.basis_offset;
    let Some(deg) = p.degree() else {
        return Ok(BasisCoefficients {
            offset,
            coeffs: Vec::new(),
        });
    };
    let basis = model.coefficients(offset + deg + 1);
    let mut rest = p.clone();
    let mut coeffs = vec![Rational::new(); deg + 1];
    for m in (0..=deg).rev() {
        let a = &basis[offset + m];
        if a.degree() != Some(m) {
            return Err(Error::Degeneracy { index: offset + m });
        }
        let d = rest.coeff(m) / a.coeff(m);
        if d.cmp0().is_ne() {
            rest = &rest - &a.scale(&d);
        }
        coeffs[m] = d;
    }
    debug_assert!(rest.is_zero());
    Ok(BasisCoefficients { offset, coeffs })
}

/// A translate combination reproducing one expansion polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Reproduction {
    pub index: usize,
    pub combination: TranslateCombination,
    /// Grid sup of `|s - A_index|`.
    pub error: f64,
    /// `error * |y_1|`, or `error * ln |y_1|` for log kernels.
    pub constant: f64,
    pub y1: Rational,
    pub solver_residual: f64,
    pub solver_bits: u32,
}

/// Number of translates used to isolate `A_index`.
pub fn terms_needed(model: &ExpansionModel, index: usize) -> Result<usize> {
    match model.log_lead() {
        None => Ok(index + 1),
        Some(lead) if index >= lead => Ok(alternant_size(lead as u32, index as u32)),
        Some(lead) => Err(Error::InvalidArgument(format!(
            "log-kernel index {index} lies below the lead {lead}"
        ))),
    }
}

/// Combination of translates at the leading nodes of `y` approximating `A_index`.
///
/// Binomial-type kernels use the Cramer solution divided by `F(y_i)`; log
/// kernels solve the alternant system. The error is measured on `grid`.
pub fn reproduce_basis_poly(
    model: &ExpansionModel,
    y: &DoublingSequence,
    index: usize,
    grid: &Grid,
    precision_bits: u32,
    budget: Option<f64>,
) -> Result<Reproduction> {
    if !model.sign_requirement.admits(y.sign()) {
        return Err(Error::InvalidDoubling(format!(
            "{} kernel requires a {} doubling sequence",
            model.kernel.family(),
            model.sign_requirement.as_str()
        )));
    }
    let n = terms_needed(model, index)?;
    if y.len() < n {
        return Err(Error::InvalidArgument(format!(
            "A_{index} needs {n} nodes, doubling sequence has {}",
            y.len()
        )));
    }
    let nodes = &y.nodes()[..n];
    let y1 = nodes[0].clone();

    let (combination, solver_residual, solver_bits) = match model.log_lead() {
        None => {
            let sol = solve_vandermonde(y, model, n, 64)?;
            let residual = vandermonde_residual(nodes, &sol.c).to_f64();
            let c_bits = sol
                .c
                .iter()
                .filter_map(|c| Float::with_val(64, c).get_exp())
                .max()
                .unwrap_or(0)
                .max(0) as u32;
            let bits = precision_bits + c_bits + 16;
            let sol = if sol.a_tilde.iter().any(|a| matches!(a, Scalar::Approx(_))) {
                solve_vandermonde(y, model, n, bits)?
            } else {
                sol
            };
            let terms = sol.a_tilde.iter().zip(nodes).map(|(a, node)| Term {
                coefficient: a.to_float(bits),
                node: node.clone(),
            });
            (TranslateCombination::new(model.kernel.clone(), terms, bits), residual, bits)
        }
        Some(lead) => {
            check_companion_vanishes(model, lead)?;
            let sol = alternant_solve_adaptive(nodes, lead as u32, index as u32, precision_bits)?;
            let terms = sol.a_tilde.iter().zip(nodes).map(|(a, node)| Term {
                coefficient: a.clone(),
                node: node.clone(),
            });
            let provisional = TranslateCombination::new(model.kernel.clone(), terms.clone(), sol.precision_bits);
            let lost = provisional.magnitude_bits(grid).max(0) as u32;
            let bits = (precision_bits + lost + 16).max(sol.precision_bits);
            (
                TranslateCombination::new(model.kernel.clone(), terms, bits),
                sol.residual_f64(),
                sol.precision_bits,
            )
        }
    };

    let a = &model.coefficients(index + 1)[index];
    let prec = combination.working_bits;
    let error = grid
        .nodes()
        .par_iter()
        .map(|x| {
            let s = combination.eval(x);
            let target = Float::with_val(prec, a.eval(x));
            Float::with_val(prec, s - target).abs().to_f64()
        })
        .reduce(|| 0.0, f64::max);
    let y_abs = Float::with_val(64, &y1).abs();
    let constant = if model.f_has_log {
        error * y_abs.ln().to_f64()
    } else {
        error * y_abs.to_f64()
    };
    if let Some(budget) = budget {
        if !(error < budget) {
            return Err(Error::FloorTooSmall {
                error,
                budget,
                y1: y1.to_string(),
            });
        }
    }
    Ok(Reproduction {
        index,
        combination,
        error,
        constant,
        y1,
        solver_residual,
        solver_bits,
    })
}

/// The alternant system does not control the rational part at indices `<= L`,
/// so `B_0..B_L` must vanish.
fn check_companion_vanishes(model: &ExpansionModel, lead: usize) -> Result<()> {
    let b = model.companion(lead + 1).unwrap_or_default();
    match b.iter().position(|p| !p.is_zero()) {
        Some(k) => Err(Error::Degeneracy { index: k }),
        None => Ok(()),
    }
}
