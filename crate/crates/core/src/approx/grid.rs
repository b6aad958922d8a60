use rug::Rational;

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 1001;

/// Equispaced certification grid `a + (b - a) i / (n - 1)`, `i = 0..n`, with exact nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    a: Rational,
    b: Rational,
    points: usize,
}

impl Grid {
    pub fn new(a: Rational, b: Rational, points: usize) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is empty")));
        }
        if points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points (got {points})"
            )));
        }
        Ok(Grid { a, b, points })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.b - &self.a)
    }

    /// `max(|a|, |b|)`
    pub fn radius(&self) -> Rational {
        let (a, b) = (Rational::from(self.a.abs_ref()), Rational::from(self.b.abs_ref()));
        a.max(b)
    }

    pub fn node(&self, i: usize) -> Rational {
        let step = self.width() / Rational::from(self.points - 1);
        step * Rational::from(i) + &self.a
    }

    pub fn nodes(&self) -> Vec<Rational> {
        (0..self.points).map(|i| self.node(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = Grid::new(Rational::from(-1), Rational::from((1, 3)), 7).unwrap();
        let n = g.nodes();
        assert_eq!(n[0], -1);
        assert_eq!(n[6], Rational::from((1, 3)));
        assert_eq!(n[3], Rational::from((-1, 3)));
        assert_eq!(g.radius(), 1);
        assert!(Grid::new(Rational::from(1), Rational::from(1), 5).is_err());
        assert!(Grid::new(Rational::from(0), Rational::from(1), 1).is_err());
    }
}
