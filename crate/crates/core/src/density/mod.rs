//! Grids, discrete probability densities, parametric families and the
//! summary statistics computed on them.

mod family;
mod grid;
mod stats;

pub use family::{discretize, skew_normal_pdf, Family, SkewNormalParams};
pub use grid::{make_grid, Grid};
pub use stats::{kl_divergence, moments, Moments};

use crate::error::{argument, domain, Result};
use crate::scalar::Scalar;

/// Probability mass attached to the points of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T> {
    grid: Grid<T>,
    mass: Vec<T>,
}

impl<T: Scalar> Density<T> {
    /// Validates an already normalized mass vector.
    pub fn new(grid: Grid<T>, mass: Vec<T>) -> Result<Self> {
        check_weights(&grid, &mass)?;
        let total: T = mass.iter().copied().sum();
        if (total - T::one()).abs() > T::tolerance(1e-12) {
            return Err(argument(format!("mass sums to {total}, expected 1")));
        }
        Ok(Density { grid, mass })
    }

    /// Normalizes non-negative weights to unit mass.
    pub fn from_weights(grid: Grid<T>, weights: Vec<T>) -> Result<Self> {
        check_weights(&grid, &weights)?;
        let total: T = weights.iter().copied().sum();
        if total <= T::zero() {
            return Err(domain("density has no mass on the grid"));
        }
        let mass = weights.into_iter().map(|w| w / total).collect();
        Ok(Density { grid, mass })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// `(x_i, p_i)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.grid.points().iter().copied().zip(self.mass.iter().copied())
    }

    pub fn mean(&self) -> T {
        self.iter().map(|(x, p)| x * p).sum()
    }

    pub fn variance(&self) -> T {
        let mu = self.mean();
        self.iter().map(|(x, p)| (x - mu) * (x - mu) * p).sum()
    }

    /// Expectation of `g` under this density.
    pub fn expect<F: Fn(T) -> T>(&self, g: F) -> T {
        self.iter().map(|(x, p)| g(x) * p).sum()
    }

    /// Mass per unit length at each point, `p_i / w_i`.
    pub fn pdf_values(&self) -> Vec<T> {
        self.mass
            .iter()
            .zip(self.grid.widths())
            .map(|(&p, &w)| p / w)
            .collect()
    }
}

fn check_weights<T: Scalar>(grid: &Grid<T>, weights: &[T]) -> Result<()> {
    if grid.len() != weights.len() {
        return Err(argument(format!(
            "{} grid points but {} mass values",
            grid.len(),
            weights.len()
        )));
    }
    if let Some((i, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= T::zero()))
    {
        return Err(argument(format!("mass at bucket {i} is {w}, must be finite and >= 0")));
    }
    Ok(())
}
