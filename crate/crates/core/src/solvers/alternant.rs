use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::sequences::DoublingSequence;

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 16;
pub const MAX_PRECISION_BITS: u32 = 4096;

/// One row of an alternant system, evaluated at each node `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowRule {
    /// `y^{-k}`
    Power(u32),
    /// `y^{-k} ln y`
    LogPower(u32),
}

impl RowRule {
    fn exponent(self) -> u32 {
        match self {
            RowRule::Power(k) | RowRule::LogPower(k) => k,
        }
    }

    pub fn eval(self, y: &Rational, prec: u32) -> Float {
        let inv = Float::with_val(prec, Rational::from(Pow::pow(y, self.exponent() as i32)).recip());
        match self {
            RowRule::Power(_) => inv,
            RowRule::LogPower(_) => inv * Float::with_val(prec, y).ln(),
        }
    }
}

/// Rows `y^{-(L+1)}, ..., y^{-m}` followed by `y^{-L} ln y, ..., y^{-m} ln y`.
pub fn log_rows(lead: u32, target: u32) -> Vec<RowRule> {
    let mut rows: Vec<RowRule> = (lead + 1..=target).map(RowRule::Power).collect();
    rows.extend((lead..=target).map(RowRule::LogPower));
    rows
}

/// `max_k |sum_j row_k(y_j) x_j - b_k|` at `prec` bits.
pub fn residual(rows: &[RowRule], nodes: &[Rational], x: &[Float], rhs: &[Float], prec: u32) -> Float {
    assert_eq!(nodes.len(), x.len(), "one unknown per node");
    assert_eq!(rows.len(), rhs.len(), "one right-hand side entry per row");
    let mut worst = Float::with_val(prec, 0);
    for (rule, b) in rows.iter().zip(rhs) {
        let mut acc = Float::with_val(prec, 0);
        for (y, xj) in nodes.iter().zip(x) {
            acc += rule.eval(y, prec) * xj;
        }
        acc -= b;
        let abs = acc.abs();
        if abs > worst {
            worst = abs;
        }
    }
    worst
}

/// Solution of the logarithmic alternant system with unit right-hand side in
/// the `y^{-m} ln y` row.
#[derive(Clone, Debug, PartialEq)]
pub struct AlternantSolution {
    pub nodes: Vec<Rational>,
    pub lead: u32,
    pub target: u32,
    pub a_tilde: Vec<Float>,
    pub residual: Float,
    pub precision_bits: u32,
    /// `|a_i| / (y_i^m (ln y_i)^{m-L})`
    pub growth_ratios: Vec<f64>,
    pub growth_constant: f64,
}

impl AlternantSolution {
    pub fn size(&self) -> usize {
        self.a_tilde.len()
    }

    pub fn residual_f64(&self) -> f64 {
        self.residual.to_f64()
    }
}

/// System size for lead `L` and target `m`.
pub fn alternant_size(lead: u32, target: u32) -> usize {
    2 * (target - lead) as usize + 1
}

/// The displayed `(2N-1) x (2N-1)` system: lead 1, target `N`.
pub fn log_alternant_solve(y: &DoublingSequence, n: usize, bits: u32) -> Result<AlternantSolution> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    alternant_solve(y.nodes(), 1, n as u32, bits)
}

/// Solve with the first `2(m-L)+1` of `nodes` at `bits` of precision.
pub fn alternant_solve(nodes: &[Rational], lead: u32, target: u32, bits: u32) -> Result<AlternantSolution> {
    if lead == 0 || target < lead {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= L <= m (got L = {lead}, m = {target})"
        )));
    }
    let size = alternant_size(lead, target);
    if nodes.len() < size {
        return Err(Error::InvalidArgument(format!(
            "need {size} nodes, got {}",
            nodes.len()
        )));
    }
    let nodes = &nodes[..size];
    if let Some(y) = nodes.iter().find(|y| **y <= 1) {
        return Err(Error::InvalidArgument(format!(
            "alternant nodes must exceed 1 (got {y})"
        )));
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[i + 1..].contains(a) {
            return Err(singular(nodes));
        }
    }
    if bits < MIN_PRECISION_BITS {
        return Err(Error::InvalidArgument(format!(
            "precision {bits} bits is below the minimum {MIN_PRECISION_BITS}"
        )));
    }
    let prec = bits;
    let rows = log_rows(lead, target);
    let m = target as i32;

    // column j scaled by y_j^m keeps the entries O(1)..O(y^{m-L}) instead of O(y^{-m})
    let logs: Vec<Float> = nodes.iter().map(|y| Float::with_val(prec, y).ln()).collect();
    let mut mat: Vec<Vec<Float>> = rows
        .iter()
        .map(|rule| {
            nodes
                .iter()
                .zip(&logs)
                .map(|(y, ln)| {
                    let p = Float::with_val(prec, Rational::from(Pow::pow(y, m - rule.exponent() as i32)));
                    match rule {
                        RowRule::Power(_) => p,
                        RowRule::LogPower(_) => p * ln,
                    }
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<Float> = (0..size)
        .map(|k| Float::with_val(prec, u32::from(k + 1 == size)))
        .collect();
    let z = gauss_solve(&mut mat, &mut rhs, prec).ok_or_else(|| singular(nodes))?;
    let a_tilde: Vec<Float> = z
        .into_iter()
        .zip(nodes)
        .map(|(zj, y)| zj * Float::with_val(prec, Rational::from(Pow::pow(y, m))))
        .collect();

    let unit: Vec<Float> = (0..size)
        .map(|k| Float::with_val(prec, u32::from(k + 1 == size)))
        .collect();
    let res = residual(&rows, nodes, &a_tilde, &unit, prec);
    let threshold = Float::with_val(prec, Float::i_exp(1, -((bits / 2) as i32)));
    if res > threshold {
        return Err(Error::PrecisionFailure {
            residual: res.to_f64(),
            threshold: threshold.to_f64(),
            bits,
        });
    }

    let growth_ratios: Vec<f64> = a_tilde
        .iter()
        .zip(nodes)
        .zip(&logs)
        .map(|((a, y), ln)| {
            let scale = Float::with_val(prec, Rational::from(Pow::pow(y, m)))
                * Float::with_val(prec, Pow::pow(ln, target - lead));
            Float::with_val(prec, a.abs_ref()).to_f64() / scale.to_f64()
        })
        .collect();
    let growth_constant = growth_ratios.iter().cloned().fold(0.0, f64::max);
    Ok(AlternantSolution {
        nodes: nodes.to_vec(),
        lead,
        target,
        a_tilde,
        residual: res,
        precision_bits: bits,
        growth_ratios,
        growth_constant,
    })
}

/// [`alternant_solve`], doubling the precision on failure up to [`MAX_PRECISION_BITS`].
pub fn alternant_solve_adaptive(
    nodes: &[Rational],
    lead: u32,
    target: u32,
    bits: u32,
) -> Result<AlternantSolution> {
    let mut bits = bits;
    loop {
        match alternant_solve(nodes, lead, target, bits) {
            Err(Error::PrecisionFailure { .. }) if bits < MAX_PRECISION_BITS => {
                bits = (bits * 2).min(MAX_PRECISION_BITS);
            }
            other => return other,
        }
    }
}

fn singular(nodes: &[Rational]) -> Error {
    Error::Singular {
        nodes: nodes.iter().map(|y| y.to_string()).collect::<Vec<_>>().join(", "),
    }
}

/// Gaussian elimination with partial pivoting; `None` on an exactly zero pivot.
fn gauss_solve(a: &mut [Vec<Float>], b: &mut [Float], prec: u32) -> Option<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .as_abs()
                .partial_cmp(&*a[j][col].as_abs())
                .expect("finite entries")
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = Float::with_val(prec, &a[row][col] / &a[col][col]);
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let t = Float::with_val(prec, &factor * &a[col][k]);
                a[row][k] -= t;
            }
            let t = Float::with_val(prec, &factor * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Float::new(prec); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= Float::with_val(prec, &a[row][k] * &x[k]);
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Sign;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn rows_follow_the_displayed_system() {
        assert_eq!(
            log_rows(1, 3),
            [
                RowRule::Power(2),
                RowRule::Power(3),
                RowRule::LogPower(1),
                RowRule::LogPower(2),
                RowRule::LogPower(3)
            ]
        );
        assert_eq!(log_rows(2, 2), [RowRule::LogPower(2)]);
    }

    #[test]
    fn n1_is_closed_form() {
        let y = DoublingSequence::new(Sign::Positive, ints(&[55])).unwrap();
        let s = log_alternant_solve(&y, 1, 256).unwrap();
        let expect = Float::with_val(256, 55) / Float::with_val(256, 55).ln();
        let diff = Float::with_val(256, &s.a_tilde[0] - &expect).abs();
        assert!(diff < Float::with_val(256, Float::i_exp(1, -240)));
    }

    #[test]
    fn n2_residual() {
        let y = DoublingSequence::new(Sign::Positive, ints(&[16, 32, 64])).unwrap();
        let s = log_alternant_solve(&y, 2, 256).unwrap();
        assert_eq!(s.size(), 3);
        assert!(s.residual < Float::with_val(256, Float::i_exp(1, -128)));
    }

    #[test]
    fn residual_shrinks_with_precision() {
        let nodes = ints(&[256, 512, 1024, 2048, 4096]);
        let r: Vec<Float> = [128, 256, 512]
            .iter()
            .map(|&b| alternant_solve(&nodes, 1, 3, b).unwrap().residual)
            .collect();
        assert!(r[1] < r[0] && r[2] < r[1]);
    }

    #[test]
    fn duplicate_nodes_are_singular() {
        let err = alternant_solve(&ints(&[16, 16, 64]), 1, 2, 256).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        assert!(err.to_string().contains("16, 16, 64"));
    }

    #[test]
    fn too_few_bits_fails_then_retry_succeeds() {
        let nodes: Vec<Rational> = (0..7).map(|k| Rational::from(1u64 << (20 + 3 * k))).collect();
        let low = alternant_solve(&nodes, 1, 4, 64);
        assert!(matches!(low, Err(Error::PrecisionFailure { .. })));
        let s = alternant_solve_adaptive(&nodes, 1, 4, 64).unwrap();
        assert!(s.precision_bits > 64);
    }

    #[test]
    fn residual_of_zero_solution() {
        let rows = log_rows(1, 2);
        let nodes = ints(&[16, 32, 64]);
        let zero = vec![Float::with_val(64, 0); 3];
        let rhs: Vec<Float> = (0..3).map(|k| Float::with_val(64, u32::from(k == 2))).collect();
        assert_eq!(residual(&rows, &nodes, &zero, &rhs, 64), 1);
    }
}
