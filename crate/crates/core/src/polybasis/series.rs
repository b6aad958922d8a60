use super::Polynomial;

/// Coefficients `[P_0, P_1, ...]` of a formal series `sum_k P_k(x) / y^k`.
pub type Series = Vec<Polynomial>;

fn term(s: &[Polynomial], k: usize) -> Option<&Polynomial> {
    s.get(k).filter(|p| !p.is_zero())
}

/// First `n` coefficients of the product of two formal series in `1/y`.
///
/// Missing trailing coefficients are treated as zero.
pub fn cauchy_product(s: &[Polynomial], t: &[Polynomial], n: usize) -> Series {
    (0..n)
        .map(|k| {
            let mut acc = Polynomial::zero();
            for i in 0..=k {
                if let (Some(a), Some(b)) = (term(s, i), term(t, k - i)) {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Shift a series by `k` powers of `1/y` (prepend `k` zero coefficients).
pub fn shift_series(s: &[Polynomial], k: usize) -> Series {
    let mut out = vec![Polynomial::zero(); k];
    out.extend(s.iter().cloned());
    out
}
