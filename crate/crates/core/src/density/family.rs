use serde::{Deserialize, Serialize};

use super::{Density, Grid};
use crate::error::{argument, domain, Result};
use crate::scalar::Scalar;
use crate::special::{norm_cdf, norm_pdf};

/// Skew-normal parameters: shape `xi`, location and scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewNormalParams<T> {
    pub xi: T,
    pub location: T,
    pub scale: T,
}

impl<T: Scalar> SkewNormalParams<T> {
    pub fn new(xi: T, location: T, scale: T) -> Result<Self> {
        let p = SkewNormalParams { xi, location, scale };
        p.validate()?;
        Ok(p)
    }

    /// Standardized form: location 0, scale 1.
    pub fn standard(xi: T) -> Self {
        SkewNormalParams {
            xi,
            location: T::zero(),
            scale: T::one(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.scale > T::zero() && self.scale.is_finite()) {
            return Err(argument(format!("skew-normal scale must be > 0, got {}", self.scale)));
        }
        if !(self.xi.is_finite() && self.location.is_finite()) {
            return Err(argument("skew-normal shape and location must be finite"));
        }
        Ok(())
    }
}

/// `2 φ(z) Φ(ξ z) / scale` with `z = (x - location) / scale`.
pub fn skew_normal_pdf<T: Scalar>(x: T, params: &SkewNormalParams<T>) -> T {
    let z = (x - params.location) / params.scale;
    T::lit(2.0) * norm_pdf(z) * norm_cdf(params.xi * z) / params.scale
}

/// Parametric families that can be laid onto a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family<T> {
    Normal { mean: T, std_dev: T },
    /// Law of `exp(N(mu, sigma²))`.
    LogNormal { mu: T, sigma: T },
    SkewNormal(SkewNormalParams<T>),
}

impl<T: Scalar> Family<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Normal { mean, std_dev } => {
                if !(std_dev > T::zero() && std_dev.is_finite() && mean.is_finite()) {
                    return Err(argument(format!("normal needs std_dev > 0, got {std_dev}")));
                }
            }
            Family::LogNormal { mu, sigma } => {
                if !(sigma > T::zero() && sigma.is_finite() && mu.is_finite()) {
                    return Err(argument(format!("lognormal needs sigma > 0, got {sigma}")));
                }
            }
            Family::SkewNormal(p) => p.validate()?,
        }
        Ok(())
    }

    pub fn pdf(&self, x: T) -> T {
        match *self {
            Family::Normal { mean, std_dev } => norm_pdf((x - mean) / std_dev) / std_dev,
            Family::LogNormal { mu, sigma } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    norm_pdf((x.ln() - mu) / sigma) / (sigma * x)
                }
            }
            Family::SkewNormal(ref p) => skew_normal_pdf(x, p),
        }
    }
}

/// Midpoint-mass discretization: `p_i ∝ pdf(x_i) w_i`.
pub fn discretize<T: Scalar>(family: &Family<T>, grid: &Grid<T>) -> Result<Density<T>> {
    family.validate()?;
    let weights: Vec<T> = grid
        .points()
        .iter()
        .zip(grid.widths())
        .map(|(&x, &w)| family.pdf(x) * w)
        .collect();
    if weights.iter().all(|&w| w == T::zero()) {
        return Err(domain(format!(
            "{family:?} has no mass on grid [{}, {}]",
            grid.lo(),
            grid.hi()
        )));
    }
    Density::from_weights(grid.clone(), weights)
}
