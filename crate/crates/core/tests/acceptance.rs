//! Acceptance suite: one PASS/FAIL line per criterion, each checked at its
//! stated tolerance and runtime limit. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use scatter_core::approx::{approximate, reproduce_basis_poly, ApproxOptions, Builtin, Grid, Target};
use scatter_core::polybasis::{
    binomial_ak, classify_basis, gen_binomial, log_poly_derivative, related_arctan_series,
    related_log_series, sum_identity, KernelSpec, Polynomial, Scalar,
};
use scatter_core::sequences::{gap_product, DoublingSequence, ScatteredProvider, Sign};
use scatter_core::solvers::{alternant_solve, vandermonde_coeffs, vandermonde_residual};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn pow2(e: u32) -> Rational {
    Rational::from(Integer::from(1) << e)
}

fn random_doubling(rng: &mut ChaCha8Rng, max_len: usize) -> DoublingSequence {
    let n = rng.gen_range(1..=max_len);
    let first = q(rng.gen_range(1..=1000), rng.gen_range(1..=64));
    let neg = rng.gen_bool(0.5);
    let mut nodes = vec![first];
    for _ in 1..n {
        // ratio in [2, 4]
        let ratio = Rational::from(2) + q(rng.gen_range(0..=512), 256);
        let next = Rational::from(nodes.last().unwrap() * &ratio);
        nodes.push(next);
    }
    if neg {
        nodes.iter_mut().for_each(|y| *y = Rational::from(-&*y));
    }
    let sign = if neg { Sign::Negative } else { Sign::Positive };
    DoublingSequence::new(sign, nodes).expect("ratios >= 2")
}

fn gap_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = Rational::new();
    for _ in 0..1000 {
        let y = random_doubling(&mut rng, 30);
        for i in 0..y.len() {
            let g = gap_product(&y, i);
            if g > worst {
                worst = g;
            }
        }
    }
    Outcome::new(worst <= 4, format!("max gap product {:.6} over 1000 sequences", worst.to_f64()))
}

fn exact_vandermonde() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for _ in 0..200 {
        let y = random_doubling(&mut rng, 12);
        let n = y.len();
        let c = vandermonde_coeffs(&y, n).unwrap();
        if vandermonde_residual(y.nodes(), &c) != 0 {
            bad += 1;
            continue;
        }
        for (ci, yi) in c.iter().zip(y.nodes()) {
            let bound = Rational::from(yi.abs_ref()).pow(n as i32 - 1) * 4u32;
            if Rational::from(ci.abs_ref()) > bound {
                bad += 1;
            }
        }
    }
    Outcome::new(bad == 0, format!("{bad} violations in 200 sequences"))
}

/// `|phi(x - y) / F(y) - sum_{k <= 8} A_k(x) y^{-k}|`.
fn truncation_error(kernel: &KernelSpec, x: &Rational, y: &Rational, prec: u32) -> Float {
    let model = classify_basis(kernel).unwrap();
    let coeffs = model.coefficients(9);
    let t = Float::with_val(prec, Rational::from(x - y));
    let f = match model.f_value(y, prec) {
        Scalar::Exact(v) => Float::with_val(prec, v),
        Scalar::Approx(v) => v,
    };
    let lhs = kernel.eval(&t, prec) / f;
    let mut series = Float::with_val(prec, 0);
    for (k, a) in coeffs.iter().enumerate() {
        let yk = Float::with_val(prec, y.clone().pow(k as i32).recip());
        series += Float::with_val(prec, a.eval(x)) * yk;
    }
    (lhs - series).abs()
}

fn series_consistency() -> Outcome {
    let kernels = [
        ("multiquadric", KernelSpec::multiquadric()),
        ("poisson", KernelSpec::poisson()),
        ("gen-mq r=3/2", KernelSpec::binomial(2, q(3, 2), q(1, 1))),
        ("q=4 r=1/3", KernelSpec::binomial(4, q(1, 3), q(1, 1))),
    ];
    let xs = [q(-9, 10), q(-3, 5), q(-1, 5), q(2, 5), q(4, 5)];
    let expected = 2f64.powi(-9);
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for (_, kernel) in &kernels {
        for x in &xs {
            let e: Vec<f64> = [6, 7, 8]
                .iter()
                .map(|&p| truncation_error(kernel, x, &pow2(p), 512).to_f64())
                .collect();
            for w in e.windows(2) {
                let r = w[1] / w[0] / expected;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    let pass = lo >= 0.8 && hi <= 1.2;
    Outcome::new(
        pass,
        format!("error ratio / 2^-9 within [{lo:.4}, {hi:.4}] (allowed [0.8, 1.2])"),
    )
}

fn summation_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    for _ in 0..500 {
        let u = q(rng.gen_range(-200..=200), rng.gen_range(1..=30));
        for k in 0..=20 {
            let (lhs, rhs) = sum_identity(&u, k);
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    Outcome::new(bad == 0, format!("{bad} mismatches over 500 u and k <= 20"))
}

fn degree_pattern() -> Outcome {
    let cases = [(2u32, q(1, 2)), (2, q(3, 2)), (4, q(1, 2))];
    let mut failures = Vec::new();
    for (qq, r) in &cases {
        let big_k = *qq as usize * r.clone().ceil().numer().to_usize().unwrap();
        for k in 0..=40 {
            let a = binomial_ak(*qq, r, &q(1, 1), k);
            let want = if k < big_k { k } else { k - big_k };
            if a.degree() != Some(want) {
                failures.push(format!("q={qq} r={r}: deg A_{k} = {:?}, expected {want}", a.degree()));
                break;
            }
        }
    }
    let detail = if failures.is_empty() {
        "all degrees match for k <= 40".to_string()
    } else {
        failures.join("; ")
    };
    Outcome::new(failures.is_empty(), detail)
}

fn recovery_law() -> Outcome {
    let grid = Grid::new(q(-1, 1), q(1, 1), 1001).unwrap();
    let mq = classify_basis(&KernelSpec::multiquadric()).unwrap();
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for m in 0..=5 {
        let e: Vec<f64> = [10, 11, 12]
            .iter()
            .map(|&p| {
                let y = DoublingSequence::geometric(pow2(p), q(2, 1), m + 1).unwrap();
                reproduce_basis_poly(&mq, &y, m, &grid, 256, None).unwrap().error
            })
            .collect();
        for w in e.windows(2) {
            lo = lo.min(w[1] / w[0]);
            hi = hi.max(w[1] / w[0]);
        }
    }
    let mq_pass = lo >= 0.35 && hi <= 0.65;

    let lg = classify_basis(&KernelSpec::InvXLog).unwrap();
    let exps = [8u32, 16, 32];
    let e: Vec<f64> = exps
        .iter()
        .map(|&p| {
            let y = DoublingSequence::geometric(pow2(p), q(2, 1), 1).unwrap();
            reproduce_basis_poly(&lg, &y, 1, &grid, 256, None).unwrap().error
        })
        .collect();
    let monotone = e.windows(2).all(|w| w[1] < w[0]);
    let mut tracks = true;
    let mut ratios = Vec::new();
    for i in 0..2 {
        // ln y / ln y' for y' = y^2
        let want = exps[i] as f64 / exps[i + 1] as f64;
        let got = e[i + 1] / e[i];
        ratios.push(format!("{got:.3e} vs {want}"));
        tracks &= (got / want - 1.0).abs() <= 0.25;
    }
    Outcome::new(
        mq_pass && monotone && tracks,
        format!(
            "multiquadric ratios in [{lo:.4}, {hi:.4}] ({}); log errors {:.3e}, {:.3e}, {:.3e} monotone={monotone}, ln-ratio tracking {} ({})",
            if mq_pass { "ok" } else { "out of [0.35, 0.65]" },
            e[0],
            e[1],
            e[2],
            if tracks { "ok" } else { "fails" },
            ratios.join(", ")
        ),
    )
}

fn end_to_end() -> Outcome {
    let grid = Grid::new(q(-1, 1), q(1, 1), 1001).unwrap();
    let provider = ScatteredProvider::jittered_integers(q(1, 4), 20240607).unwrap();
    let kernels = [
        ("multiquadric", KernelSpec::multiquadric()),
        ("arctan-shifted", KernelSpec::ArctanShifted),
        ("gen-mq r=3/2", KernelSpec::binomial(2, q(3, 2), q(1, 1))),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, kernel) in &kernels {
        match approximate(
            &Target::Builtin(Builtin::Sin),
            &grid,
            1e-2,
            kernel,
            &provider,
            &ApproxOptions::default(),
        ) {
            Ok((s, cert)) => {
                let l1 = cert.lp_errors.iter().find(|(p, _)| *p == 1.0).unwrap().1;
                let ok = cert.sup_error < 1e-2 && l1 <= cert.sup_error * 2.0;
                pass &= ok;
                parts.push(format!(
                    "{name}: sup {:.3e}, L1 {l1:.3e}, {} terms",
                    cert.sup_error,
                    s.len()
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    Outcome::new(pass, parts.join("; "))
}

fn log_alternant() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let threshold = Float::with_val(256, Float::i_exp(1, -128));
    for n in [2u32, 3] {
        let mut constants = Vec::new();
        for e in [8u32, 16] {
            let nodes: Vec<Rational> = (0..2 * n - 1).map(|j| pow2(e + j)).collect();
            match alternant_solve(&nodes, 1, n, 256) {
                Ok(s) => {
                    pass &= s.residual < threshold;
                    constants.push(s.growth_constant);
                    parts.push(format!("N={n} y1=2^{e}: residual {:.2e}, C {:.3e}", s.residual.to_f64(), s.growth_constant));
                }
                Err(err) => {
                    pass = false;
                    parts.push(format!("N={n} y1=2^{e}: {err}"));
                }
            }
        }
        if constants.len() == 2 {
            pass &= constants[1] <= constants[0];
        }
    }
    Outcome::new(pass, parts.join("; "))
}

/// Central difference of order `n` at `x` with step `h`, in `prec` bits.
fn finite_difference(p: &Polynomial, n: usize, x: &Rational, prec: u32) -> Float {
    let h = Float::with_val(prec, Float::i_exp(1, -40));
    let f = |t: Float| p.eval_float(&t, prec) * Float::with_val(prec, t.ln_ref());
    let mut acc = Float::with_val(prec, 0);
    for i in 0..=n {
        let offset = Float::with_val(prec, (n as f64) / 2.0 - i as f64) * &h;
        let t = Float::with_val(prec, x) + offset;
        let w = gen_binomial(&Rational::from(n as u64), i) * if i % 2 == 0 { 1 } else { -1 };
        acc += f(t) * Float::with_val(prec, &w);
    }
    acc / Float::with_val(prec, Pow::pow(&h, n as u32))
}

fn log_derivative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let xs = [q(1, 2), q(1, 1), q(2, 1), q(5, 1)];
    let mut worst = 0f64;
    let mut sign_failures = 0;
    for _ in 0..50 {
        let deg = rng.gen_range(0..=4usize);
        let coeffs: Vec<Rational> = (0..=deg)
            .map(|_| q(rng.gen_range(-20..=20), rng.gen_range(1..=9)))
            .collect();
        let p = Polynomial::new(coeffs);
        let n = (deg + 1).max(2);
        let d = log_poly_derivative(&p, n);
        if !d.log_part.is_zero() {
            sign_failures += 1;
            continue;
        }
        // D^N(p ln x) = x^{-N} sum_j (-1)^{N-1+j} c_j a_j x^j with c_j > 0
        let num = d.numerator();
        for j in 0..n {
            let a = p.coeff(j);
            let b = num.get(j).cloned().unwrap_or_default();
            let sign = if (n - 1 + j) % 2 == 0 { 1 } else { -1 };
            let ok = if a.cmp0().is_eq() {
                b.cmp0().is_eq()
            } else {
                Rational::from(&b / &a) * sign > 0
            };
            if !ok {
                sign_failures += 1;
            }
        }
        if num.len() > n {
            sign_failures += 1;
        }
        for x in &xs {
            let exact = d.eval(&Float::with_val(256, x), 256);
            let fd = finite_difference(&p, n, x, 256);
            if exact.is_zero() {
                continue;
            }
            let rel = Float::with_val(256, (fd - &exact) / &exact).abs().to_f64();
            worst = worst.max(rel);
        }
    }
    Outcome::new(
        worst < 1e-6 && sign_failures == 0,
        format!("max relative error {worst:.2e}, {sign_failures} sign-pattern violations"),
    )
}

/// `(x - y)^{-L} ln(1 + (x - y)^q)` expanded directly from
/// `ln(1+(y-x)^q) = q ln y + q ln(1 - x/y) + sum_n (-1)^{n+1} (y-x)^{-qn} / n`.
fn related_log_oracle(l: usize, qq: usize, j: usize) -> (Polynomial, Polynomial) {
    let sign_l = if l.is_multiple_of(2) { 1 } else { -1 };
    let neg_binom = |s: usize, i: usize| gen_binomial(&Rational::from((s + i - 1) as u64), i);
    let a = if j >= l {
        Polynomial::monomial(neg_binom(l, j - l) * (qq as i64 * sign_l), j - l)
    } else {
        Polynomial::zero()
    };
    let mut b = Polynomial::zero();
    // -q sum_{m>=1} x^m / m y^{-m} (y-x)^{-L}
    for m in 1..=j {
        if m + l > j {
            break;
        }
        let i = j - m - l;
        let c = neg_binom(l, i) * q(-(qq as i64) * sign_l, m as i64);
        b = &b + &Polynomial::monomial(c, m + i);
    }
    // sum_{n>=1} (-1)^{n+1}/n (y-x)^{-L-qn}
    for n in 1.. {
        if l + qq * n > j {
            break;
        }
        let i = j - l - qq * n;
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let c = neg_binom(l + qq * n, i) * q(sign * sign_l, n as i64);
        b = &b + &Polynomial::monomial(c, i);
    }
    (a, b)
}

/// `(1 + (x-y)^q)^r (arctan(x-y) + pi/2) / y^{qr}` expanded directly as a
/// triple sum over the binomial, arctan and `(1 - x/y)` series.
fn related_arctan_oracle(qq: usize, r: &Rational, j: usize) -> Polynomial {
    let qr = Rational::from(r * qq as u32);
    let mut out = Polynomial::zero();
    for m in 0.. {
        if qq * m + 1 > j {
            break;
        }
        for n in 0.. {
            let base = qq * m + 2 * n + 1;
            if base > j {
                break;
            }
            let i = j - base;
            let s = Rational::from(&qr - (qq * m + 2 * n + 1) as u64);
            let mut c = gen_binomial(r, m) * gen_binomial(&s, i) / Rational::from(2 * n + 1);
            if (n + i) % 2 == 1 {
                c = -c;
            }
            out = &out + &Polynomial::monomial(c, i);
        }
    }
    out
}

fn leading_terms() -> Outcome {
    let mut oracle_mismatch = Vec::new();
    let mut lemma_mismatch = Vec::new();
    for l in [1usize, 2] {
        let (a, b) = related_log_series(l as u32, 2, 12);
        for j in 0..=12 {
            let (oa, ob) = related_log_oracle(l, 2, j);
            if a[j] != oa || b[j] != ob {
                oracle_mismatch.push(format!("related-log L={l} j={j}"));
            }
            if j >= l {
                let sign = if (j + l) % 2 == 0 { 1 } else { -1 };
                let want = gen_binomial(&Rational::from((j - 1) as u64), l - 1) * (2 * sign);
                if a[j].degree() != Some(j - l) || a[j].coeff(j - l) != want {
                    lemma_mismatch.push(format!("A_{j} (L={l}): {} vs lemma {want}", a[j].coeff(j - l)));
                }
            }
            if j > l {
                let sign = if (l + 1) % 2 == 0 { 1 } else { -1 };
                let want: Rational = (1..=j - l)
                    .map(|i| gen_binomial(&Rational::from((j - 1 - i) as u64), l - 1) * q(2 * sign, i as i64))
                    .sum();
                if b[j].degree() != Some(j - l) || b[j].coeff(j - l) != want {
                    lemma_mismatch.push(format!("B_{j} (L={l}): {} vs lemma {want}", b[j].coeff(j - l)));
                }
            }
        }
    }
    let r = q(1, 4);
    let c = related_arctan_series(2, &r, &q(1, 1), 12);
    for j in 0..=12 {
        if c[j] != related_arctan_oracle(2, &r, j) {
            oracle_mismatch.push(format!("related-arctan j={j}"));
        }
        if j >= 1 {
            let mut want = gen_binomial(&(Rational::from(&r * 2u32) - 1u32), j);
            if j % 2 == 1 {
                want = -want;
            }
            if c[j].degree() != Some(j - 1) || c[j].coeff(j - 1) != want {
                lemma_mismatch.push(format!("C_{j}: {} vs lemma {want}", c[j].coeff(j - 1)));
            }
        }
    }
    let pass = oracle_mismatch.is_empty() && lemma_mismatch.is_empty();
    let shown: Vec<_> = lemma_mismatch.iter().take(4).cloned().collect();
    Outcome::new(
        pass,
        format!(
            "oracle mismatches: {}; lemma mismatches: {}{}",
            oracle_mismatch.len(),
            lemma_mismatch.len(),
            if shown.is_empty() {
                String::new()
            } else {
                format!(" (e.g. {})", shown.join(", "))
            }
        ),
    )
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "gap-product bound", 5, gap_products),
        (2, "exact Vandermonde", 10, exact_vandermonde),
        (3, "series consistency", 5, series_consistency),
        (4, "summation identity", 5, summation_identity),
        (5, "basis degree pattern", 5, degree_pattern),
        (6, "recovery law", 60, recovery_law),
        (7, "end-to-end density", 120, end_to_end),
        (8, "log alternant", 10, log_alternant),
        (9, "log-derivative lemma", 10, log_derivative),
        (10, "related-product leading terms", 10, leading_terms),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = outcome.pass && in_time;
        println!(
            "criterion {id:>2} {} {name}: {} [{:.2} s, limit {limit} s{}]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: {} of 10 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
