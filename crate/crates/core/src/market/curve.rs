use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::scalar::Scalar;

/// How vols are continued outside the quoted strike range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WingExtrapolation {
    /// Boundary vol held constant.
    #[default]
    Flat,
    /// Boundary slope of the interpolant continued linearly, floored at half
    /// the boundary vol.
    Linear,
}

/// One-maturity implied volatility curve.
///
/// Vols are interpolated in strike by a shape-preserving (Fritsch–Carlson)
/// monotone cubic, so no interpolated value overshoots its two neighbouring
/// quotes.
#[derive(Debug, Clone, PartialEq)]
pub struct VolCurve<T> {
    maturity: T,
    forward: T,
    strikes: Vec<T>,
    vols: Vec<T>,
    slopes: Vec<T>,
    wings: WingExtrapolation,
}

const MAX_VOL: f64 = 5.0;

impl<T: Scalar> VolCurve<T> {
    pub fn new(maturity: T, forward: T, quotes: Vec<(T, T)>) -> Result<Self> {
        Self::with_wings(maturity, forward, quotes, WingExtrapolation::Flat)
    }

    pub fn with_wings(
        maturity: T,
        forward: T,
        quotes: Vec<(T, T)>,
        wings: WingExtrapolation,
    ) -> Result<Self> {
        if !(maturity > T::zero() && maturity.is_finite()) {
            return Err(argument(format!("maturity must be > 0, got {maturity}")));
        }
        if !(forward > T::zero() && forward.is_finite()) {
            return Err(argument(format!("forward must be > 0, got {forward}")));
        }
        if quotes.len() < 3 {
            return Err(argument(format!(
                "vol curve needs at least 3 quotes, got {}",
                quotes.len()
            )));
        }
        let (strikes, vols): (Vec<T>, Vec<T>) = quotes.into_iter().unzip();
        if let Some(k) = strikes.iter().find(|k| !(**k > T::zero() && k.is_finite())) {
            return Err(argument(format!("strikes must be > 0, got {k}")));
        }
        for w in strikes.windows(2) {
            if w[1] <= w[0] {
                return Err(argument(format!(
                    "strikes must be strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(v) = vols
            .iter()
            .find(|v| !(**v > T::zero() && **v < T::lit(MAX_VOL)))
        {
            return Err(argument(format!("vol {v} outside (0, {MAX_VOL})")));
        }
        let slopes = pchip_slopes(&strikes, &vols);
        Ok(VolCurve {
            maturity,
            forward,
            strikes,
            vols,
            slopes,
            wings,
        })
    }

    pub fn maturity(&self) -> T {
        self.maturity
    }

    pub fn forward(&self) -> T {
        self.forward
    }

    pub fn wings(&self) -> WingExtrapolation {
        self.wings
    }

    pub fn strikes(&self) -> &[T] {
        &self.strikes
    }

    pub fn vols(&self) -> &[T] {
        &self.vols
    }

    pub fn quotes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.strikes.iter().copied().zip(self.vols.iter().copied())
    }

    pub fn min_strike(&self) -> T {
        self.strikes[0]
    }

    pub fn max_strike(&self) -> T {
        self.strikes[self.strikes.len() - 1]
    }

    /// Same maturity, wings and strikes with new vols.
    pub fn with_vols(&self, vols: Vec<T>) -> Result<Self> {
        Self::with_wings(
            self.maturity,
            self.forward,
            self.strikes.iter().copied().zip(vols).collect(),
            self.wings,
        )
    }

    pub fn with_forward(&self, forward: T) -> Result<Self> {
        Self::with_wings(self.maturity, forward, self.quotes().collect(), self.wings)
    }

    pub fn with_wing_extrapolation(&self, wings: WingExtrapolation) -> Self {
        VolCurve {
            wings,
            ..self.clone()
        }
    }

    /// Vol at `strike`; see [`interpolate_vol`].
    pub fn vol(&self, strike: T) -> T {
        let n = self.strikes.len();
        if strike <= self.strikes[0] {
            return self.extrapolate(0, strike);
        }
        if strike >= self.strikes[n - 1] {
            return self.extrapolate(n - 1, strike);
        }
        // strikes[k] < strike < strikes[k + 1] or strike equal to an interior node
        let k = match self
            .strikes
            .binary_search_by(|s| s.partial_cmp(&strike).expect("finite strikes"))
        {
            Ok(i) => return self.vols[i],
            Err(i) => i - 1,
        };
        let h = self.strikes[k + 1] - self.strikes[k];
        let t = (strike - self.strikes[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        h00 * self.vols[k]
            + h10 * h * self.slopes[k]
            + h01 * self.vols[k + 1]
            + h11 * h * self.slopes[k + 1]
    }

    fn extrapolate(&self, node: usize, strike: T) -> T {
        let edge = self.vols[node];
        match self.wings {
            WingExtrapolation::Flat => edge,
            WingExtrapolation::Linear => {
                let v = edge + self.slopes[node] * (strike - self.strikes[node]);
                v.max(edge * T::lit(0.5))
            }
        }
    }
}

/// Monotone cubic interpolation inside the quotes, wing rule outside.
pub fn interpolate_vol<T: Scalar>(curve: &VolCurve<T>, strike: T) -> T {
    curve.vol(strike)
}

/// Fritsch–Carlson derivative estimates with the three-point shape
/// preserving end condition.
fn pchip_slopes<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![T::zero(); n];
    let two = T::lit(2.0);
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == T::zero() || b == T::zero() || a.signum() != b.signum() {
            d[k] = T::zero();
        } else {
            let w1 = two * h[k] + h[k - 1];
            let w2 = h[k] + two * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn edge_slope<T: Scalar>(h0: T, h1: T, d0: T, d1: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let d = ((two * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == T::zero() {
        T::zero()
    } else if d0.signum() != d1.signum() && d.abs() > (three * d0).abs() {
        three * d0
    } else {
        d
    }
}
