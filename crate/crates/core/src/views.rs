//! Investor views expressed as transformations of the market vol curve.
//!
//! A believed density is obtained by transforming the curve and running the
//! same extraction as for the market density, so every believed density is
//! arbitrage-checked exactly like the market one.

use serde::{Deserialize, Serialize};

use crate::density::{Density, Grid};
use crate::error::{argument, Error, Result};
use crate::market::{implied_density, VolCurve};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViewKind<T> {
    /// Drift `delta` (annualized return); moves the forward to `F e^{δT}`.
    DriftShift { delta: T },
    /// Adds `v` vol points at every strike.
    VolShift { v: T },
    /// Scales each vol's distance from the at-the-money-forward vol by `s`.
    SkewScale { s: T },
}

/// Gaussian weight `exp(-(K - center)² / (2 width²))` used to blend a viewed
/// vol back into the market vol away from `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Localization<T> {
    pub center: T,
    pub width: T,
}

impl<T: Scalar> Localization<T> {
    pub fn weight(&self, strike: T) -> T {
        let z = (strike - self.center) / self.width;
        (-T::lit(0.5) * z * z).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ViewSpec<T> {
    #[serde(flatten)]
    pub kind: ViewKind<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<Localization<T>>,
}

impl<T: Scalar> ViewSpec<T> {
    pub fn global(kind: ViewKind<T>) -> Self {
        ViewSpec {
            kind,
            localization: None,
        }
    }

    pub fn localized(kind: ViewKind<T>, center: T, width: T) -> Self {
        ViewSpec {
            kind,
            localization: Some(Localization { center, width }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ViewKind::SkewScale { s } if !(s >= T::zero() && s.is_finite()) => {
                return Err(argument(format!("skew scale must be >= 0, got {s}")));
            }
            ViewKind::VolShift { v } if !v.is_finite() => {
                return Err(argument("vol shift must be finite"));
            }
            ViewKind::DriftShift { delta } if !delta.is_finite() => {
                return Err(argument("drift shift must be finite"));
            }
            ViewKind::DriftShift { .. } if self.localization.is_some() => {
                return Err(argument(
                    "drift_shift acts on the forward and cannot be localized in strike",
                ));
            }
            _ => {}
        }
        if let Some(loc) = self.localization {
            if !(loc.width > T::zero() && loc.width.is_finite() && loc.center.is_finite()) {
                return Err(argument(format!(
                    "localization width must be > 0, got {}",
                    loc.width
                )));
            }
        }
        Ok(())
    }
}

/// Transformed curve expressing `view`.
pub fn apply_view<T: Scalar>(curve: &VolCurve<T>, view: &ViewSpec<T>) -> Result<VolCurve<T>> {
    view.validate()?;
    let viewed: Vec<T> = match view.kind {
        ViewKind::DriftShift { delta } => {
            let forward = curve.forward() * (delta * curve.maturity()).exp();
            return curve
                .with_forward(forward)
                .map_err(|e| Error::InfeasibleView(e.to_string()));
        }
        ViewKind::VolShift { v } => curve.vols().iter().map(|&s| s + v).collect(),
        ViewKind::SkewScale { s } => {
            let atm = curve.vol(curve.forward());
            curve.vols().iter().map(|&vol| atm + s * (vol - atm)).collect()
        }
    };
    let out: Vec<T> = match view.localization {
        None => viewed,
        Some(loc) => curve
            .quotes()
            .zip(viewed)
            .map(|((k, market), v)| {
                let w = loc.weight(k);
                w * v + (T::one() - w) * market
            })
            .collect(),
    };
    if let Some((k, v)) = curve
        .strikes()
        .iter()
        .zip(&out)
        .find(|(_, v)| !(**v > T::zero()))
    {
        return Err(Error::InfeasibleView(format!("vol {v} at strike {k} is not positive")));
    }
    curve
        .with_vols(out)
        .map_err(|e| Error::InfeasibleView(e.to_string()))
}

/// Applies `views` left to right, then extracts the density once.
pub fn believed_density<T: Scalar>(
    market_curve: &VolCurve<T>,
    views: &[ViewSpec<T>],
    grid: &Grid<T>,
) -> Result<Density<T>> {
    let curve = believed_curve(market_curve, views)?;
    implied_density(&curve, grid)
}

pub fn believed_curve<T: Scalar>(market_curve: &VolCurve<T>, views: &[ViewSpec<T>]) -> Result<VolCurve<T>> {
    views
        .iter()
        .try_fold(market_curve.clone(), |c, v| apply_view(&c, v))
}
