//! Scattered node providers and doubling-subsequence extraction.
//!
//! A provider is a strictly increasing map from integer indices to rational
//! nodes. Infinite providers are evaluated lazily per index; nothing is
//! materialized beyond the window a caller asks for.

use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Jittered nodes are multiples of `2^-JITTER_BITS`, so every node is an exact rational.
pub const JITTER_BITS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "+" => Ok(Sign::Positive),
            "negative" | "-" => Ok(Sign::Negative),
            _ => Err(Error::InvalidArgument(format!("unknown sign {s:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProviderKind {
    /// `x_i = i`.
    Integers,
    /// `x_i = i + u_i`, `|u_i| <= jitter < 1/3`, `u_i` drawn from a seeded stream.
    JitteredIntegers { jitter: Rational, seed: u64 },
    /// A sorted finite list, optionally continued periodically:
    /// `x_{i + k n} = x_i + k * period`.
    ExplicitList {
        nodes: Vec<Rational>,
        period: Option<Rational>,
    },
    /// `x_i = offset + i * step`.
    AffineLattice { step: Rational, offset: Rational },
}

/// A windowed generator of a scattered sequence with separation `delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteredProvider {
    kind: ProviderKind,
    delta: Rational,
}

impl ScatteredProvider {
    pub fn integers() -> Self {
        ScatteredProvider {
            kind: ProviderKind::Integers,
            delta: Rational::from(1),
        }
    }

    pub fn jittered_integers(jitter: Rational, seed: u64) -> Result<Self> {
        if jitter.cmp0().is_lt() || jitter >= Rational::from((1, 3)) {
            return Err(Error::InvalidArgument(format!(
                "jitter {jitter} must lie in [0, 1/3)"
            )));
        }
        let delta = Rational::from(1) - Rational::from(&jitter * 2u32);
        Ok(ScatteredProvider {
            kind: ProviderKind::JitteredIntegers { jitter, seed },
            delta,
        })
    }

    pub fn affine_lattice(step: Rational, offset: Rational) -> Result<Self> {
        if step.cmp0().is_le() {
            return Err(Error::InvalidArgument(format!("step {step} must be positive")));
        }
        Ok(ScatteredProvider {
            delta: step.clone(),
            kind: ProviderKind::AffineLattice { step, offset },
        })
    }

    /// Build from an explicit node list. When `delta` is omitted it is computed
    /// as the minimum gap (including the wrap-around gap under a period).
    pub fn explicit(
        mut nodes: Vec<Rational>,
        delta: Option<Rational>,
        period: Option<Rational>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("explicit node list is empty".into()));
        }
        nodes.sort();
        if let Some(p) = &period {
            let span = Rational::from(nodes.last().unwrap() - nodes.first().unwrap());
            if *p <= span {
                return Err(Error::InvalidArgument(format!(
                    "extension period {p} must exceed the list span {span}"
                )));
            }
        }
        let delta = match delta {
            Some(d) => d,
            None => {
                let mut gaps: Vec<Rational> = nodes
                    .windows(2)
                    .map(|w| Rational::from(&w[1] - &w[0]))
                    .collect();
                if let Some(p) = &period {
                    gaps.push(Rational::from(nodes.first().unwrap() + p) - nodes.last().unwrap());
                }
                let min = gaps.into_iter().min();
                match min {
                    Some(d) if d.cmp0().is_gt() => d,
                    Some(_) => {
                        return Err(Error::InvalidArgument(
                            "explicit list contains duplicate nodes".into(),
                        ))
                    }
                    // a single node without extension: nothing to separate
                    None => Rational::from(1),
                }
            }
        };
        if delta.cmp0().is_le() {
            return Err(Error::InvalidArgument(format!("delta {delta} must be positive")));
        }
        Ok(ScatteredProvider {
            kind: ProviderKind::ExplicitList { nodes, period },
            delta,
        })
    }

    pub fn kind(&self) -> &ProviderKind {
        &self.kind
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Inclusive index range for finite providers.
    fn finite_range(&self) -> Option<(i128, i128)> {
        match &self.kind {
            ProviderKind::ExplicitList {
                nodes,
                period: None,
            } => Some((0, nodes.len() as i128 - 1)),
            _ => None,
        }
    }

    /// The node at `index`, or `None` outside a finite provider's range.
    pub fn node(&self, index: i128) -> Option<Rational> {
        match &self.kind {
            ProviderKind::Integers => Some(Rational::from(Integer::from(index))),
            ProviderKind::JitteredIntegers { jitter, seed } => {
                Some(Rational::from(Integer::from(index)) + jitter_offset(jitter, *seed, index))
            }
            ProviderKind::AffineLattice { step, offset } => {
                Some(Rational::from(step * Integer::from(index)) + offset)
            }
            ProviderKind::ExplicitList { nodes, period } => {
                let n = nodes.len() as i128;
                match period {
                    None => (0..n).contains(&index).then(|| nodes[index as usize].clone()),
                    Some(p) => {
                        let (k, r) = (index.div_euclid(n), index.rem_euclid(n));
                        Some(Rational::from(p * Integer::from(k)) + &nodes[r as usize])
                    }
                }
            }
        }
    }

    fn node_unchecked(&self, index: i128) -> Rational {
        self.node(index).expect("index inside provider range")
    }

    fn index_guess(&self, bound: &Rational) -> i128 {
        let clamp = |v: f64| v.clamp(-1e36, 1e36) as i128;
        match &self.kind {
            ProviderKind::Integers | ProviderKind::JitteredIntegers { .. } => clamp(bound.to_f64()),
            ProviderKind::AffineLattice { step, offset } => {
                clamp((Rational::from(bound - offset) / step).to_f64())
            }
            ProviderKind::ExplicitList { nodes, period } => match period {
                Some(p) => {
                    let cycles = (Rational::from(bound - &nodes[0]) / p).to_f64();
                    clamp(cycles) * nodes.len() as i128
                }
                None => 0,
            },
        }
    }

    /// Smallest index whose node is `> bound`, if any.
    fn first_index_above(&self, bound: &Rational) -> Option<i128> {
        let above = |i: i128| self.node_unchecked(i) > *bound;
        let (mut lo, mut hi) = match self.finite_range() {
            Some((first, last)) => {
                if !above(last) {
                    return None;
                }
                if above(first) {
                    return Some(first);
                }
                (first, last)
            }
            None => {
                let guess = self.index_guess(bound);
                let mut step: i128 = 1;
                let (mut lo, mut hi) = (guess, guess);
                if above(guess) {
                    while above(lo) {
                        hi = lo;
                        lo -= step;
                        step *= 2;
                    }
                } else {
                    while !above(hi) {
                        lo = hi;
                        hi += step;
                        step *= 2;
                    }
                }
                (lo, hi)
            }
        };
        // invariant: node(lo) <= bound < node(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if above(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Smallest node strictly greater than `bound`.
    pub fn first_above(&self, bound: &Rational) -> Result<Rational> {
        self.first_index_above(bound)
            .map(|i| self.node_unchecked(i))
            .ok_or_else(|| Error::Exhausted {
                direction: "above",
                bound: bound.to_string(),
            })
    }

    /// Largest node strictly less than `bound`.
    pub fn last_below(&self, bound: &Rational) -> Result<Rational> {
        let exhausted = || Error::Exhausted {
            direction: "below",
            bound: bound.to_string(),
        };
        // nodes are strictly increasing, so the answer sits just before the
        // first index whose node is >= bound
        let just_below = bound - &self.delta / Rational::from(2u32);
        let candidate = match self.first_index_above(&just_below) {
            Some(i) => i - 1,
            None => match self.finite_range() {
                Some((_, last)) => last,
                None => return Err(exhausted()),
            },
        };
        let mut i = candidate + 1;
        loop {
            match self.node(i) {
                Some(v) if v < *bound => return Ok(v),
                Some(_) => i -= 1,
                None if self.finite_range().is_some_and(|(first, _)| i < first) => {
                    return Err(exhausted())
                }
                None => i -= 1,
            }
        }
    }
}

fn jitter_offset(jitter: &Rational, seed: u64, index: i128) -> Rational {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..24].copy_from_slice(&index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    let scaled = Rational::from(jitter << JITTER_BITS);
    let amp = crate::polybasis::floor(&scaled).to_i64().unwrap_or(0);
    let k = if amp == 0 { 0 } else { rng.gen_range(-amp..=amp) };
    Rational::from((k, 1i64 << JITTER_BITS))
}

/// Minimum consecutive gap over `window`, checked against the provider's delta.
pub fn verify_separation(provider: &ScatteredProvider, window: RangeInclusive<i128>) -> Result<Rational> {
    let nodes: Vec<(i128, Rational)> = window
        .filter_map(|i| provider.node(i).map(|v| (i, v)))
        .collect();
    if nodes.len() < 2 {
        return Err(Error::InvalidArgument(
            "separation window must contain at least two nodes".into(),
        ));
    }
    let mut min: Option<(Rational, &Rational, &Rational)> = None;
    for w in nodes.windows(2) {
        let gap = Rational::from(&w[1].1 - &w[0].1);
        if min.as_ref().is_none_or(|(g, _, _)| gap < *g) {
            min = Some((gap, &w[0].1, &w[1].1));
        }
    }
    let (gap, left, right) = min.expect("at least one pair");
    if gap < *provider.delta() {
        return Err(Error::SeparationViolation {
            left: left.to_string(),
            right: right.to_string(),
            gap: gap.to_string(),
            delta: provider.delta().to_string(),
        });
    }
    Ok(gap)
}

/// A finite doubling sequence `y_1, ..., y_N` of one sign with
/// `y_{j+1} >= 2 y_j` (positive) or `y_{j+1} <= 2 y_j` (negative).
#[derive(Clone, Debug, PartialEq)]
pub struct DoublingSequence {
    sign: Sign,
    nodes: Vec<Rational>,
    gap_products: Vec<Rational>,
}

impl DoublingSequence {
    pub fn new(sign: Sign, nodes: Vec<Rational>) -> Result<Self> {
        let Some(first) = nodes.first() else {
            return Err(Error::InvalidDoubling("empty node list".into()));
        };
        let sign_ok = match sign {
            Sign::Positive => first.cmp0().is_gt(),
            Sign::Negative => first.cmp0().is_lt(),
        };
        if !sign_ok {
            return Err(Error::InvalidDoubling(format!(
                "first node {first} does not have {sign} sign"
            )));
        }
        for w in nodes.windows(2) {
            let twice = Rational::from(&w[0] * 2u32);
            let ok = match sign {
                Sign::Positive => w[1] >= twice,
                Sign::Negative => w[1] <= twice,
            };
            if !ok {
                return Err(Error::InvalidDoubling(format!(
                    "{} does not double {}",
                    w[1], w[0]
                )));
            }
        }
        let gap_products = (0..nodes.len()).map(|i| gap_product_of(&nodes, i)).collect();
        Ok(DoublingSequence {
            sign,
            nodes,
            gap_products,
        })
    }

    /// `first, first * ratio, first * ratio^2, ...` (`|ratio| >= 2` keeps it doubling).
    pub fn geometric(first: Rational, ratio: Rational, n: usize) -> Result<Self> {
        let sign = if first.cmp0().is_lt() {
            Sign::Negative
        } else {
            Sign::Positive
        };
        let nodes = std::iter::successors(Some(first), |y| Some(Rational::from(y * &ratio)))
            .take(n)
            .collect();
        DoublingSequence::new(sign, nodes)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> &Rational {
        &self.nodes[0]
    }

    pub fn gap_products(&self) -> &[Rational] {
        &self.gap_products
    }

    /// The leading `n` nodes as a doubling sequence of their own.
    pub fn truncated(&self, n: usize) -> DoublingSequence {
        DoublingSequence::new(self.sign, self.nodes[..n.min(self.len())].to_vec())
            .expect("prefix of a doubling sequence")
    }
}

fn gap_product_of(nodes: &[Rational], i: usize) -> Rational {
    let yi = &nodes[i];
    let mut prod = Rational::from(1);
    for (j, yj) in nodes.iter().enumerate() {
        if j != i {
            prod *= Rational::from(1) - Rational::from(yi / yj);
        }
    }
    prod.recip().abs()
}

/// `|prod_{j != i} (1 - y_i / y_j)^{-1}|` for the zero-based index `i`.
pub fn gap_product(y: &DoublingSequence, i: usize) -> Rational {
    y.gap_products[i].clone()
}

/// Greedy doubling extraction: `y_1` is the first node beyond `m` in the
/// requested direction, and each later node is the first one strictly beyond
/// twice its predecessor.
pub fn extract_doubling(
    provider: &ScatteredProvider,
    sign: Sign,
    m: &Rational,
    n: usize,
) -> Result<DoublingSequence> {
    if m.cmp0().is_lt() {
        return Err(Error::InvalidArgument(format!("floor M = {m} must be >= 0")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut bound = match sign {
        Sign::Positive => m.clone(),
        Sign::Negative => Rational::from(-m),
    };
    for _ in 0..n {
        let y = match sign {
            Sign::Positive => provider.first_above(&bound)?,
            Sign::Negative => provider.last_below(&bound)?,
        };
        bound = Rational::from(&y * 2u32);
        nodes.push(y);
    }
    DoublingSequence::new(sign, nodes)
}
