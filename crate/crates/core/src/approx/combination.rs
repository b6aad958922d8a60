use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Float, Rational};

use super::grid::Grid;
use crate::polybasis::KernelSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coefficient: Float,
    pub node: Rational,
}

/// `s(x) = sum_j a_j phi(x - x_j)`, evaluated from the closed-form kernel at
/// `working_bits` of precision.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslateCombination {
    pub kernel: KernelSpec,
    terms: Vec<Term>,
    pub working_bits: u32,
}

impl TranslateCombination {
    pub fn empty(kernel: KernelSpec) -> Self {
        TranslateCombination {
            kernel,
            terms: Vec::new(),
            working_bits: 64,
        }
    }

    /// Terms sharing a node are summed; zero coefficients are dropped.
    pub fn new(kernel: KernelSpec, terms: impl IntoIterator<Item = Term>, working_bits: u32) -> Self {
        let mut merged: BTreeMap<Rational, Float> = BTreeMap::new();
        for t in terms {
            let coeff = Float::with_val(working_bits, &t.coefficient);
            merged
                .entry(t.node)
                .and_modify(|c| *c += &coeff)
                .or_insert(coeff);
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(node, coefficient)| Term { coefficient, node })
            .collect();
        TranslateCombination {
            kernel,
            terms,
            working_bits,
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d * s`
    pub fn scaled(&self, d: &Rational) -> Self {
        let terms = self.terms.iter().map(|t| Term {
            coefficient: Float::with_val(self.working_bits, &t.coefficient * d),
            node: t.node.clone(),
        });
        TranslateCombination::new(self.kernel.clone(), terms, self.working_bits)
    }

    /// Sum of combinations over the same kernel, at the largest working precision.
    pub fn sum(kernel: KernelSpec, parts: &[TranslateCombination]) -> Self {
        let bits = parts.iter().map(|p| p.working_bits).max().unwrap_or(64);
        let terms = parts.iter().flat_map(|p| p.terms.iter().cloned());
        TranslateCombination::new(kernel, terms, bits)
    }

    pub fn eval(&self, x: &Rational) -> Float {
        let prec = self.working_bits;
        let mut acc = Float::with_val(prec, 0);
        for t in &self.terms {
            let arg = Float::with_val(prec, Rational::from(x - &t.node));
            acc += self.kernel.eval(&arg, prec) * &t.coefficient;
        }
        acc
    }

    /// Values on every grid node; parallel, identical to sequential evaluation.
    pub fn eval_grid(&self, grid: &Grid) -> Vec<Float> {
        grid.nodes().par_iter().map(|x| self.eval(x)).collect()
    }

    /// `log2` of the largest `|a_j phi(x - x_j)|` over the interval endpoints;
    /// the number of bits lost to cancellation when the sum is small.
    pub fn magnitude_bits(&self, grid: &Grid) -> i64 {
        let mut worst: i64 = 0;
        for x in [grid.a(), grid.b()] {
            for t in &self.terms {
                let arg = Float::with_val(64, Rational::from(x - &t.node));
                let v = self.kernel.eval(&arg, 64) * &t.coefficient;
                if let Some(e) = v.get_exp() {
                    worst = worst.max(e as i64);
                }
            }
        }
        worst
    }
}

pub fn eval_combination(s: &TranslateCombination, x: &Rational) -> Float {
    s.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(a: f64, node: i64) -> Term {
        Term {
            coefficient: Float::with_val(128, a),
            node: Rational::from(node),
        }
    }

    #[test]
    fn empty_is_zero() {
        let s = TranslateCombination::empty(KernelSpec::multiquadric());
        assert_eq!(s.eval(&Rational::from(3)), 0);
    }

    #[test]
    fn single_multiquadric_term() {
        let s = TranslateCombination::new(KernelSpec::multiquadric(), [term(1.0, 0)], 128);
        assert_eq!(s.eval(&Rational::new()), 1);
    }

    #[test]
    fn merges_shared_nodes() {
        let s = TranslateCombination::new(
            KernelSpec::poisson(),
            [term(1.0, 2), term(0.5, 2), term(1.0, 5), term(-1.0, 5)],
            128,
        );
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coefficient, 1.5);
        let doubled = TranslateCombination::sum(KernelSpec::poisson(), &[s.clone(), s.clone()]);
        assert_eq!(doubled.terms()[0].coefficient, 3);
        assert_eq!(s.scaled(&Rational::from(2)), doubled);
    }

    #[test]
    fn symmetric_terms_give_even_function() {
        let s = TranslateCombination::new(KernelSpec::multiquadric(), [term(0.7, -3), term(0.7, 3)], 128);
        for x in [Rational::from((1, 3)), Rational::from((5, 7)), Rational::from(2)] {
            assert_eq!(s.eval(&x), s.eval(&Rational::from(-&x)));
        }
    }
}
