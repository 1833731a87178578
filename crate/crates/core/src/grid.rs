//! Uniform ε-cell partition of the truncated size domain.
//!
//! Cell `i` (1-based) is the half-open interval `[(i - 1/2)ε, (i + 1/2)ε)`
//! with center `iε`. The strip `[0, ε/2)` below cell 1 carries no unknown.

use crate::error::{Error, Result};

/// Fewest cells a domain-built grid may hold.
pub const MIN_CELLS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    epsilon: f64,
    x_max: f64,
    m: usize,
}

impl Grid {
    /// Partition `[0, x_max]` into `m = floor(x_max/ε - 1/2)` cells of width ε.
    pub fn new(epsilon: f64, x_max: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !x_max.is_finite() || x_max <= 0.0 {
            return Err(Error::InvalidArgument { name: "x_max", value: x_max });
        }
        let cells = libm::floor(x_max / epsilon - 0.5);
        if cells < MIN_CELLS as f64 {
            return Err(Error::TooFewCells { m: cells.max(0.0) as usize, required: MIN_CELLS });
        }
        Ok(Grid { epsilon, x_max, m: cells as usize })
    }

    /// Grid with exactly `m` cells; the domain ends at the right edge of cell `m`.
    ///
    /// Used for small hand-checkable systems (`m = 1, 2`) that the
    /// domain-based constructor rejects.
    pub fn with_cells(epsilon: f64, m: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if m == 0 {
            return Err(Error::TooFewCells { m, required: 1 });
        }
        Ok(Grid { epsilon, x_max: (m as f64 + 0.5) * epsilon, m })
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Number of cells.
    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Center `iε` of cell `i`.
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.epsilon * i as f64
    }

    /// Bounds `[(i - 1/2)ε, (i + 1/2)ε)` of cell `i`.
    #[inline]
    pub fn cell_bounds(&self, i: usize) -> (f64, f64) {
        let i = i as f64;
        ((i - 0.5) * self.epsilon, (i + 0.5) * self.epsilon)
    }

    /// Right edge of the last cell, `(m + 1/2)ε`.
    #[inline]
    pub fn right_edge(&self) -> f64 {
        (self.m as f64 + 0.5) * self.epsilon
    }

    /// Cell containing `x`, or `None` in the dust strip or beyond the last cell.
    pub fn cell_of(&self, x: f64) -> Result<Option<usize>> {
        check_size(x)?;
        let k = libm::floor(x / self.epsilon + 0.5);
        if k < 1.0 || k > self.m as f64 {
            return Ok(None);
        }
        Ok(Some(k as usize))
    }

    /// Right endpoint of the cell containing `x`, extended past the grid.
    pub fn r_eps(&self, x: f64) -> f64 {
        libm::floor(x / self.epsilon + 0.5) * self.epsilon + 0.5 * self.epsilon
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(())
}

pub(crate) fn check_size(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument { name: "size", value: x });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cell_counts_on_the_standard_ladder() {
        assert_eq!(Grid::new(0.05, 10.0).unwrap().len(), 199);
        assert_eq!(Grid::new(0.01, 10.0).unwrap().len(), 999);
        assert_eq!(Grid::new(0.005, 10.0).unwrap().len(), 1999);
    }

    #[test]
    fn rejects_grids_with_fewer_than_three_cells() {
        assert_eq!(
            Grid::new(0.5, 1.5),
            Err(Error::TooFewCells { m: 2, required: 3 })
        );
        assert!(Grid::new(1.0, 10.0).is_err());
        assert!(Grid::new(0.0, 10.0).is_err());
        assert!(Grid::new(0.1, -1.0).is_err());
    }

    #[test]
    fn cell_lookup() {
        let g = Grid::new(0.1, 10.0).unwrap();
        assert_eq!(g.len(), 99);
        assert_eq!(g.cell_of(0.26).unwrap(), Some(3));
        assert_eq!(g.cell_of(0.02).unwrap(), None);
        assert_eq!(g.cell_of(10.0).unwrap(), None);
        assert!(g.cell_of(-0.1).is_err());
    }

    #[test]
    fn r_eps_examples() {
        let g = Grid::new(0.1, 10.0).unwrap();
        assert!((g.r_eps(0.26) - 0.35).abs() < 1e-15);
        assert!((g.r_eps(0.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn small_grids_by_cell_count() {
        let g = Grid::with_cells(0.1, 2).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g.right_edge() - 0.25).abs() < 1e-15);
        assert!(Grid::with_cells(0.1, 0).is_err());
    }

    proptest! {
        #[test]
        fn domain_bracket_holds(eps in 0.001f64..0.3, x_max in 1.0f64..50.0) {
            let g = Grid::new(eps, x_max).unwrap();
            let m = g.len() as f64;
            prop_assert!((m + 0.5) * eps <= x_max * (1.0 + 1e-12));
            prop_assert!(x_max < (m + 1.5) * eps);
            prop_assert!(m * eps <= x_max);
        }

        #[test]
        fn lookup_agrees_with_r_eps(eps in 0.01f64..0.5, u in 0.0f64..1.0) {
            let g = Grid::new(eps, 10.0).unwrap();
            let x = 0.5 * eps + u * (g.right_edge() - 0.5 * eps) * (1.0 - 1e-12);
            if let Some(i) = g.cell_of(x).unwrap() {
                let (a, b) = g.cell_bounds(i);
                prop_assert!(a <= x * (1.0 + 1e-12) && x < b * (1.0 + 1e-12));
                prop_assert!((g.r_eps(x) - (i as f64 + 0.5) * eps).abs() < 1e-9);
            }
        }

        #[test]
        fn r_eps_within_one_cell(eps in 0.001f64..0.9, x in 0.0f64..100.0) {
            let g = Grid::new(eps, 100.0).unwrap();
            prop_assert!((g.r_eps(x) - x).abs() <= eps * (1.0 + 1e-12));
        }
    }
}
