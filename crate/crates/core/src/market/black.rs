use crate::error::{argument, Result};
use crate::scalar::Scalar;
use crate::special::norm_cdf;

/// Discounted Black call price on a forward.
pub fn bs_call_price<T: Scalar>(forward: T, strike: T, vol: T, maturity: T, df: T) -> Result<T> {
    for (name, v) in [
        ("forward", forward),
        ("strike", strike),
        ("vol", vol),
        ("maturity", maturity),
        ("discount factor", df),
    ] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(argument(format!("{name} must be > 0, got {v}")));
        }
    }
    let sd = vol * maturity.sqrt();
    if sd >= T::lit(100.0) {
        return Err(argument(format!("total vol {sd} too large")));
    }
    Ok(call_on_total_vol(forward, strike, sd, df))
}

/// Black call with total standard deviation `sd = vol √T`.
///
/// Non-positive strikes give the forward payoff `df (F - K)` exactly, which
/// lets finite-difference stencils straddle zero.
pub(crate) fn call_on_total_vol<T: Scalar>(forward: T, strike: T, sd: T, df: T) -> T {
    if strike <= T::zero() {
        return df * (forward - strike);
    }
    if sd <= T::zero() {
        return df * (forward - strike).max(T::zero());
    }
    let d1 = ((forward / strike).ln() + T::lit(0.5) * sd * sd) / sd;
    let d2 = d1 - sd;
    df * (forward * norm_cdf(d1) - strike * norm_cdf(d2))
}
