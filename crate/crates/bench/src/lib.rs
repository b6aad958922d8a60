//! Fixed inputs shared by the benchmarks.

use rug::Rational;
use scatter_core::approx::{Builtin, Grid, Target};
use scatter_core::sequences::{extract_doubling, DoublingSequence, ScatteredProvider, Sign};

pub fn jittered() -> ScatteredProvider {
    ScatteredProvider::jittered_integers(Rational::from((1, 5)), 42).expect("jitter below 1/3")
}

pub fn doubling(n: usize, floor: i64) -> DoublingSequence {
    extract_doubling(&jittered(), Sign::Positive, &Rational::from(floor), n).expect("infinite provider")
}

pub fn unit_grid(points: usize) -> Grid {
    Grid::new(Rational::from(-1), Rational::from(1), points).expect("a < b")
}

pub fn targets() -> [(&'static str, Target); 2] {
    [("sin", Target::Builtin(Builtin::Sin)), ("exp", Target::Builtin(Builtin::Exp))]
}
