//! Delta-hedged P&L as a path-dependent skew variable.
//!
//! `P&L = Σ Γ$(S_i, K) (σ_i² - K²) Δt_i` with the half dollar gamma
//! `Γ$ = ½ S² ∂²V/∂S²`, where `V` is the profile smoothed by the hedging
//! model over the remaining life. A Bachelier variant (`Γ = ½ ∂²V/∂S²`, normal
//! kernel) supports the cubic gamma-swap / variance-swap decomposition.

mod decomposition;
mod profile;

pub use decomposition::{cubic_decomposition, cubic_decomposition_about, GammaVarDecomposition};
pub use profile::ProfileFn;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Error, Result};
use crate::index::PathSample;
use crate::scalar::Scalar;
use profile::gauss_legendre;

/// Hedging model used to smooth the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `S_T = S exp(-½K²τ + K√τ Z)`; gamma weighted by `S²`.
    #[default]
    Lognormal,
    /// `S_T = S + K√τ Z`; plain gamma.
    Bachelier,
}

/// Standard deviations beyond which the profile grid must not be needed.
pub const COVERAGE_STD_DEVS: f64 = 5.0;
const TRUNCATION: f64 = 8.0;
const GL_ORDER: usize = 8;
pub const DEFAULT_PANELS: usize = 128;

/// Quadrature of the transition density over the terminal price.
///
/// Nodes are laid out in price space and split at the profile's knots so that
/// each piece integrates one cubic of the spline.
#[derive(Debug, Clone)]
pub struct GammaEngine<T> {
    kernel: Kernel,
    panels: usize,
    gx: Vec<T>,
    gw: Vec<T>,
}

impl<T: Scalar> GammaEngine<T> {
    /// Composite Gauss–Legendre rule with `panels` panels spanning ±8 kernel
    /// standard deviations, further split at every profile knot inside.
    pub fn new(kernel: Kernel, panels: usize) -> Self {
        let (gx, gw) = gauss_legendre(GL_ORDER);
        GammaEngine {
            kernel,
            panels: panels.max(1),
            gx: gx.into_iter().map(T::lit).collect(),
            gw: gw.into_iter().map(T::lit).collect(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    fn check(&self, spot: T, hedge_vol: T, t_remaining: T) -> Result<()> {
        if !(t_remaining > T::zero()) {
            return Err(argument(format!("remaining time must be > 0, got {t_remaining}")));
        }
        match self.kernel {
            Kernel::Lognormal => {
                if !(spot > T::zero()) {
                    return Err(argument(format!("spot must be > 0, got {spot}")));
                }
                if !(hedge_vol > T::zero()) {
                    return Err(argument(format!("hedge vol must be > 0, got {hedge_vol}")));
                }
            }
            Kernel::Bachelier => {
                if !(hedge_vol >= T::zero()) || !spot.is_finite() {
                    return Err(argument(format!("hedge vol must be >= 0, got {hedge_vol}")));
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn terminal(&self, spot: T, s: T, z: T) -> T {
        match self.kernel {
            Kernel::Lognormal => spot * (s * z - T::lit(0.5) * s * s).exp(),
            Kernel::Bachelier => spot + s * z,
        }
    }

    /// Transition density of the terminal price `y` from `spot` and its
    /// second derivative in `spot`.
    #[inline]
    fn transition(&self, spot: T, s: T, y: T) -> (T, T) {
        let norm = T::lit(1.0 / (2.0 * std::f64::consts::PI).sqrt());
        let one = T::one();
        match self.kernel {
            Kernel::Lognormal => {
                if !(y > T::zero()) {
                    return (T::zero(), T::zero());
                }
                let d = ((y / spot).ln() + T::lit(0.5) * s * s) / s;
                let q = norm * (-T::lit(0.5) * d * d).exp() / (y * s);
                let ss = spot * s;
                (q, q * (d * d - one - s * d) / (ss * ss))
            }
            Kernel::Bachelier => {
                let d = (y - spot) / s;
                let q = norm * (-T::lit(0.5) * d * d).exp() / s;
                (q, q * (d * d - one) / (s * s))
            }
        }
    }

    fn check_coverage(&self, profile: &ProfileFn<T>, spot: T, s: T) -> Result<()> {
        let c = T::lit(COVERAGE_STD_DEVS);
        let (lo, hi) = (self.terminal(spot, s, -c), self.terminal(spot, s, c));
        let g = profile.grid();
        let slack = (g.hi() - g.lo()) * T::tolerance(1e-12);
        if lo < g.lo() - slack || hi > g.hi() + slack {
            return Err(Error::Coverage(format!(
                "spot {spot}: ±{COVERAGE_STD_DEVS} std devs span [{lo}, {hi}], profile grid is [{}, {}]",
                g.lo(),
                g.hi()
            )));
        }
        Ok(())
    }

    /// Nodes `y`, weights and profile values covering the kernel from `spot`.
    fn nodes(&self, profile: &ProfileFn<T>, spot: T, s: T) -> Vec<(T, T, T)> {
        let trunc = T::lit(TRUNCATION);
        let step = T::lit(2.0 * TRUNCATION / self.panels as f64);
        let mut breaks: Vec<T> = (0..=self.panels)
            .map(|j| self.terminal(spot, s, -trunc + step * T::lit(j as f64)))
            .collect();
        let (lo, hi) = (breaks[0], breaks[self.panels]);
        breaks.extend(profile.grid().points().iter().copied().filter(|&k| k > lo && k < hi));
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breaks.dedup();

        let half = T::lit(0.5);
        let mut out = Vec::with_capacity((breaks.len() - 1) * GL_ORDER);
        for w in breaks.windows(2) {
            let (mid, rad) = ((w[0] + w[1]) * half, (w[1] - w[0]) * half);
            for (&x, &wt) in self.gx.iter().zip(&self.gw) {
                let y = mid + rad * x;
                out.push((y, rad * wt, profile.eval(y)));
            }
        }
        out
    }

    /// `(V, ∂²V/∂S²)` at `spot`.
    fn integrate(&self, nodes: &[(T, T, T)], spot: T, s: T) -> (T, T) {
        nodes.iter().fold((T::zero(), T::zero()), |(v, g), &(y, w, p)| {
            let (q, q2) = self.transition(spot, s, y);
            (v + w * p * q, g + w * p * q2)
        })
    }

    /// Model value `E[profile(S_T)]` of the profile at `spot`.
    pub fn value(&self, profile: &ProfileFn<T>, spot: T, hedge_vol: T, t_remaining: T) -> Result<T> {
        self.check(spot, hedge_vol, t_remaining)?;
        let s = hedge_vol * t_remaining.sqrt();
        self.check_coverage(profile, spot, s)?;
        if s == T::zero() {
            return Ok(profile.eval(spot));
        }
        let nodes = self.nodes(profile, spot, s);
        Ok(self.integrate(&nodes, spot, s).0)
    }

    /// `∂²V/∂S²`, differentiating the transition density under the integral.
    /// Without diffusion the profile's own second derivative is returned.
    pub fn gamma(&self, profile: &ProfileFn<T>, spot: T, hedge_vol: T, t_remaining: T) -> Result<T> {
        self.check(spot, hedge_vol, t_remaining)?;
        let s = hedge_vol * t_remaining.sqrt();
        self.check_coverage(profile, spot, s)?;
        let std = match self.kernel {
            Kernel::Lognormal => s * spot,
            Kernel::Bachelier => s,
        };
        if std == T::zero() {
            return Ok(profile.second_derivative(spot));
        }
        let nodes = self.nodes(profile, spot, s);
        Ok(self.integrate(&nodes, spot, s).1)
    }

    /// Half dollar gamma: `½ S² V''` (lognormal) or `½ V''` (Bachelier).
    pub fn dollar_gamma(&self, profile: &ProfileFn<T>, spot: T, hedge_vol: T, t_remaining: T) -> Result<T> {
        let g = self.gamma(profile, spot, hedge_vol, t_remaining)?;
        let half = T::lit(0.5);
        Ok(match self.kernel {
            Kernel::Lognormal => half * spot * spot * g,
            Kernel::Bachelier => half * g,
        })
    }

    /// Literal hedged P&L sum; gamma is taken at the fixing that opens each
    /// hedging interval with the life remaining at that fixing.
    pub fn hedged_pnl(&self, profile: &ProfileFn<T>, spec: &HedgedPnlSpec<T>) -> Result<T> {
        spec.validate()?;
        let k = spec.hedge_vol;
        let k2 = k * k;
        let mut elapsed = T::zero();
        let mut total = T::zero();
        for (i, (&sigma, &dt)) in spec.realized_vols.iter().zip(&spec.dts).enumerate() {
            let spot = spec.fixings.levels()[i];
            let gamma = self.dollar_gamma(profile, spot, k, spec.maturity - elapsed)?;
            total = total + gamma * (sigma * sigma - k2) * dt;
            elapsed = elapsed + dt;
        }
        Ok(total)
    }
}

/// Lognormal half dollar gamma with the default quadrature.
pub fn dollar_gamma<T: Scalar>(profile: &ProfileFn<T>, spot: T, hedge_vol: T, t_remaining: T) -> Result<T> {
    GammaEngine::new(Kernel::Lognormal, DEFAULT_PANELS).dollar_gamma(profile, spot, hedge_vol, t_remaining)
}

/// Hedged P&L under the lognormal kernel.
pub fn hedged_pnl<T: Scalar>(profile: &ProfileFn<T>, spec: &HedgedPnlSpec<T>) -> Result<T> {
    GammaEngine::new(Kernel::Lognormal, DEFAULT_PANELS).hedged_pnl(profile, spec)
}

/// Inputs of the hedged P&L sum.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgedPnlSpec<T> {
    /// Vol `K` used for hedging, annualized.
    pub hedge_vol: T,
    pub maturity: T,
    /// `S_0 … S_n`.
    pub fixings: PathSample<T>,
    /// Realized `σ_i` over interval `i`, annualized.
    pub realized_vols: Vec<T>,
    pub dts: Vec<T>,
}

impl<T: Scalar> HedgedPnlSpec<T> {
    pub fn new(hedge_vol: T, maturity: T, fixings: PathSample<T>, realized_vols: Vec<T>, dts: Vec<T>) -> Result<Self> {
        let s = HedgedPnlSpec {
            hedge_vol,
            maturity,
            fixings,
            realized_vols,
            dts,
        };
        s.validate()?;
        Ok(s)
    }

    /// Equal intervals spanning the maturity.
    pub fn uniform(hedge_vol: T, maturity: T, fixings: PathSample<T>, realized_vols: Vec<T>) -> Result<Self> {
        let n = realized_vols.len().max(1);
        let dt = maturity / T::from_usize_lossy(n);
        Self::new(hedge_vol, maturity, fixings, realized_vols, vec![dt; n])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hedge_vol >= T::zero() && self.hedge_vol.is_finite()) {
            return Err(argument(format!("hedge vol must be >= 0, got {}", self.hedge_vol)));
        }
        if !(self.maturity > T::zero()) {
            return Err(argument(format!("maturity must be > 0, got {}", self.maturity)));
        }
        let n = self.realized_vols.len();
        if self.fixings.levels().len() != n + 1 {
            return Err(argument(format!(
                "{} fixings for {} realized vols; expected {}",
                self.fixings.levels().len(),
                n,
                n + 1
            )));
        }
        if self.dts.len() != n {
            return Err(argument(format!("{} time steps for {} intervals", self.dts.len(), n)));
        }
        if let Some(s) = self.realized_vols.iter().find(|s| !(**s >= T::zero() && s.is_finite())) {
            return Err(argument(format!("realized vol must be >= 0, got {s}")));
        }
        if let Some(d) = self.dts.iter().find(|d| !(**d > T::zero())) {
            return Err(argument(format!("time step must be > 0, got {d}")));
        }
        let opened: T = self.dts[..n.saturating_sub(1)].iter().copied().sum();
        if opened >= self.maturity {
            return Err(argument("last hedging interval opens at or after maturity"));
        }
        Ok(())
    }
}

#[derive(Deserialize, Serialize)]
struct HedgedPnlSpecJson {
    fixings: Vec<f64>,
    vols: Vec<f64>,
    hedge_vol: f64,
    maturity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dts: Option<Vec<f64>>,
}

impl<T: Scalar> HedgedPnlSpec<T> {
    /// Parses `{"fixings":[..],"vols":[..],"hedge_vol":..,"maturity":..,"dts":[..]}`;
    /// `dts` defaults to equal steps.
    pub fn from_json(text: &str) -> std::result::Result<Self, crate::io::FormatError> {
        let raw: HedgedPnlSpecJson = serde_json::from_str(text)?;
        let conv = |v: Vec<f64>| v.into_iter().map(T::lit).collect::<Vec<T>>();
        let fixings = PathSample::from_levels(conv(raw.fixings))?;
        let vols = conv(raw.vols);
        let spec = match raw.dts {
            Some(d) => Self::new(T::lit(raw.hedge_vol), T::lit(raw.maturity), fixings, vols, conv(d))?,
            None => Self::uniform(T::lit(raw.hedge_vol), T::lit(raw.maturity), fixings, vols)?,
        };
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let conv = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<f64>>();
        serde_json::to_string(&HedgedPnlSpecJson {
            fixings: conv(self.fixings.levels()),
            vols: conv(&self.realized_vols),
            hedge_vol: self.hedge_vol.as_f64(),
            maturity: self.maturity.as_f64(),
            dts: Some(conv(&self.dts)),
        })
        .expect("serializable")
    }
}

/// `σ_i² Δt_i` estimated as the squared log return of each interval.
pub fn realized_variances<T: Scalar>(path: &PathSample<T>) -> Vec<T> {
    path.levels()
        .windows(2)
        .map(|w| {
            let r = (w[1] / w[0]).ln();
            r * r
        })
        .collect()
}

/// Annualized realized vols from squared log returns.
pub fn realized_vols<T: Scalar>(path: &PathSample<T>, dts: &[T]) -> Vec<T> {
    realized_variances(path)
        .into_iter()
        .zip(dts)
        .map(|(v, &dt)| (v / dt).sqrt())
        .collect()
}
