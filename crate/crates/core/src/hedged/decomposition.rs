use serde::Serialize;

use super::{HedgedPnlSpec, ProfileFn};
use crate::error::{argument, domain, Result};
use crate::linalg::least_squares;
use crate::scalar::Scalar;

/// Cubic fit `c₀ + c₁u + c₂u² + c₃u³` of a profile in `u = x - center`,
/// rewritten as gamma-swap and variance-swap weights.
///
/// The half gamma of the cubic is `3c₃u + c₂ = α u - β`, so the Bachelier
/// zero-vol hedged P&L is `α Σ u_i σ_i²Δt_i - β Σ σ_i²Δt_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaVarDecomposition<T> {
    pub alpha: T,
    pub beta: T,
    /// Width-weighted RMS of the fit residual over the grid.
    pub fit_residual: T,
    pub center: T,
    /// `[c₀, c₁, c₂, c₃]` in centered coordinates.
    pub coefficients: [T; 4],
}

impl<T: Scalar> GammaVarDecomposition<T> {
    /// `(Σ (S_{i-1} - center) σ_i² Δt_i, Σ σ_i² Δt_i)`.
    pub fn legs(&self, spec: &HedgedPnlSpec<T>) -> (T, T) {
        let levels = spec.fixings.levels();
        let mut gamma_swap = T::zero();
        let mut variance_swap = T::zero();
        for (i, (&sigma, &dt)) in spec.realized_vols.iter().zip(&spec.dts).enumerate() {
            let var = sigma * sigma * dt;
            gamma_swap = gamma_swap + (levels[i] - self.center) * var;
            variance_swap = variance_swap + var;
        }
        (gamma_swap, variance_swap)
    }

    /// `α · gamma swap - β · variance swap`.
    pub fn two_leg_pnl(&self, spec: &HedgedPnlSpec<T>) -> T {
        let (g, v) = self.legs(spec);
        self.alpha * g - self.beta * v
    }
}

/// Decomposition in raw coordinates (`center = 0`).
pub fn cubic_decomposition<T: Scalar>(profile: &ProfileFn<T>) -> Result<GammaVarDecomposition<T>> {
    cubic_decomposition_about(profile, T::zero())
}

/// Decomposition in coordinates centered at `center`.
pub fn cubic_decomposition_about<T: Scalar>(
    profile: &ProfileFn<T>,
    center: T,
) -> Result<GammaVarDecomposition<T>> {
    let grid = profile.grid();
    if grid.len() < 4 {
        return Err(argument("cubic fit needs at least 4 grid points"));
    }
    let u: Vec<T> = grid.points().iter().map(|&x| x - center).collect();
    let scale = u.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    if scale == T::zero() {
        return Err(domain("degenerate abscissa for cubic fit"));
    }
    let sw: Vec<T> = grid.widths().iter().map(|w| w.sqrt()).collect();
    let columns: Vec<Vec<T>> = (0..4)
        .map(|p| {
            u.iter()
                .zip(&sw)
                .map(|(&v, &s)| s * (v / scale).powi(p))
                .collect()
        })
        .collect();
    let rhs: Vec<T> = profile.values().iter().zip(&sw).map(|(&y, &s)| s * y).collect();
    let d = least_squares(&columns, &rhs)
        .map_err(|_| domain("degenerate abscissa for cubic fit"))?;
    let c = [
        d[0],
        d[1] / scale,
        d[2] / (scale * scale),
        d[3] / (scale * scale * scale),
    ];

    let mut sq = T::zero();
    let mut total_w = T::zero();
    for ((&v, &y), &w) in u.iter().zip(profile.values()).zip(grid.widths()) {
        let fit = c[0] + v * (c[1] + v * (c[2] + v * c[3]));
        sq = sq + w * (y - fit) * (y - fit);
        total_w = total_w + w;
    }
    Ok(GammaVarDecomposition {
        alpha: T::lit(3.0) * c[3],
        beta: -c[2],
        fit_residual: (sq / total_w).sqrt(),
        center,
        coefficients: c,
    })
}
