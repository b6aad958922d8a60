use rug::{Integer, Rational};

/// Generalized binomial coefficient `u (u-1) ... (u-k+1) / k!`, exact.
pub fn gen_binomial(u: &Rational, k: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..k {
        acc *= Rational::from(u - i as u64);
        acc /= (i + 1) as u64;
        if acc.cmp0().is_eq() {
            break;
        }
    }
    acc
}

/// Both sides of the alternating partial-sum identity
/// `sum_{j<=k} (-1)^j C(u, j) = (-1)^k C(u-1, k)`.
pub fn sum_identity(u: &Rational, k: usize) -> (Rational, Rational) {
    let mut lhs = Rational::new();
    let mut term = Rational::from(1);
    for j in 0..=k {
        if j > 0 {
            // C(u, j) = C(u, j-1) (u - j + 1) / j, with the sign flip folded in
            term *= Rational::from(u - (j - 1) as u64);
            term /= j as u64;
            term = -term;
        }
        lhs += &term;
    }
    let mut rhs = gen_binomial(&Rational::from(u - 1u32), k);
    if k % 2 == 1 {
        rhs = -rhs;
    }
    (lhs, rhs)
}

/// True for 1, 2, 3, ...
pub fn is_natural(x: &Rational) -> bool {
    x.is_integer() && x.cmp0().is_gt()
}

/// True for 0, 1, 2, ...
pub fn is_nonneg_integer(x: &Rational) -> bool {
    x.is_integer() && !x.cmp0().is_lt()
}

pub fn ceil(x: &Rational) -> Integer {
    x.clone().ceil().into_numer_denom().0
}

pub fn floor(x: &Rational) -> Integer {
    x.clone().floor().into_numer_denom().0
}

/// `(-1)^k`.
pub(crate) fn sign_pow(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
