use super::black::call_on_total_vol;
use super::VolCurve;
use crate::density::{Density, Grid};
use crate::error::{argument, Error, Result};
use crate::scalar::Scalar;

/// Largest negative second-difference mass, as a fraction of the positive
/// mass, that is clipped rather than reported as butterfly arbitrage.
pub const NEGATIVE_MASS_TOLERANCE: f64 = 0.01;

/// Market-implied density of the underlying at the curve's maturity.
///
/// Call prices on interpolated vols are differenced twice in strike around
/// every grid point (step = distance to the nearest neighbour); the result
/// times the bucket width is the unnormalized mass. Small negative lobes are
/// clipped; larger ones fail with [`Error::Arbitrage`].
pub fn implied_density<T: Scalar>(curve: &VolCurve<T>, grid: &Grid<T>) -> Result<Density<T>> {
    if grid.len() < 3 {
        return Err(argument("implied density needs a grid of at least 3 points"));
    }
    if grid.lo() > curve.min_strike() || grid.hi() < curve.max_strike() {
        return Err(argument(format!(
            "grid [{}, {}] does not span quoted strikes [{}, {}]",
            grid.lo(),
            grid.hi(),
            curve.min_strike(),
            curve.max_strike()
        )));
    }
    let sqrt_t = curve.maturity().sqrt();
    let forward = curve.forward();
    let call = |k: T| call_on_total_vol(forward, k, curve.vol(k) * sqrt_t, T::one());

    let pts = grid.points();
    let n = pts.len();
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let x = pts[i];
        let h = match i {
            0 => pts[1] - pts[0],
            _ if i == n - 1 => pts[n - 1] - pts[n - 2],
            _ => (x - pts[i - 1]).min(pts[i + 1] - x),
        };
        let second = (call(x - h) - T::lit(2.0) * call(x) + call(x + h)) / (h * h);
        raw.push(second * grid.widths()[i]);
    }

    let (mut pos, mut neg) = (T::zero(), T::zero());
    for &r in &raw {
        if r > T::zero() {
            pos = pos + r;
        } else {
            neg = neg - r;
        }
    }
    if !(pos > T::zero()) {
        return Err(crate::error::domain("implied density has no positive mass on the grid"));
    }
    let fraction = neg / pos;
    if fraction > T::lit(NEGATIVE_MASS_TOLERANCE) {
        return Err(Error::Arbitrage {
            negative_fraction: fraction.as_f64(),
            tolerance: NEGATIVE_MASS_TOLERANCE,
        });
    }
    let clipped = raw.into_iter().map(|r| r.max(T::zero())).collect();
    Density::from_weights(grid.clone(), clipped)
}
