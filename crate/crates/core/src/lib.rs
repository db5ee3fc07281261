//! Growth-optimal derivative payoffs.
//!
//! Given a market-implied density `m` (extracted from an implied volatility
//! curve) and an investor-believed density `b` (the same extraction applied
//! to a view-transformed curve), the payoff maximizing expected log return is
//! `f = N b / m`. Around that core the crate provides:
//!
//! - [`density`]: grids, discrete densities, parametric families, KL divergence
//! - [`market`]: vol curves, Black pricing, implied densities, state prices
//! - [`views`]: drift, vol and skew views on a curve
//! - [`payoff`]: payoff construction, expected return decomposition, replication
//! - [`index`]: an exact growth-optimal index on a locally log-normal underlying
//!   and its first-order (vol-targeting) approximation
//! - [`hedged`]: delta-hedged P&L of a payoff profile and its cubic
//!   gamma/variance decomposition
//! - [`model_risk`]: coarse-grained relative entropy and its materiality verdict
//! - [`io`] and [`cli`]: file formats and the command line front end
//!
//! Every numerical type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to one of them.

// `!(a < b)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod density;
pub mod error;
pub mod hedged;
pub mod index;
pub mod io;
mod linalg;
pub mod market;
pub mod model_risk;
pub mod payoff;
pub mod scalar;
pub mod special;
pub mod views;

pub use density::{discretize, kl_divergence, make_grid, moments, Density, Family, Grid, Moments, SkewNormalParams};
pub use error::{Error, Result};
pub use hedged::{
    cubic_decomposition, dollar_gamma, hedged_pnl, GammaEngine, GammaVarDecomposition, HedgedPnlSpec, Kernel,
    ProfileFn,
};
pub use index::{
    index_statistics, kelly_scan, run_index, simulate_paths, DynamicsSpec, IndexSeries, IndexStatistics, KellyRow,
    Measure, PathSample,
};
pub use market::{
    bs_call_price, implied_density, interpolate_vol, state_prices, PricingTerms, StatePrices, VolCurve,
    WingExtrapolation,
};
pub use model_risk::{coarse_grain, model_risk_report, refine_and_compare, BucketGrid, ModelRiskReport, Verdict};
pub use payoff::{
    expected_rate_of_return, growth_optimal_payoff, price, replicate_vanilla, Instrument, Payoff,
    ReplicationBasis, ReplicationPortfolio, ReturnDecomposition,
};
pub use scalar::Scalar;
pub use views::{apply_view, believed_curve, believed_density, Localization, ViewKind, ViewSpec};

pub type GridF64 = Grid<f64>;
pub type DensityF64 = Density<f64>;
pub type VolCurveF64 = VolCurve<f64>;
pub type PricingTermsF64 = PricingTerms<f64>;
pub type ViewSpecF64 = ViewSpec<f64>;
pub type PayoffF64 = Payoff<f64>;
pub type DynamicsSpecF64 = DynamicsSpec<f64>;
pub type ProfileFnF64 = ProfileFn<f64>;
pub type HedgedPnlSpecF64 = HedgedPnlSpec<f64>;
pub type BucketGridF64 = BucketGrid<f64>;
pub type ModelRiskReportF64 = ModelRiskReport<f64>;

pub type GridF32 = Grid<f32>;
pub type DensityF32 = Density<f32>;
pub type VolCurveF32 = VolCurve<f32>;
pub type PricingTermsF32 = PricingTerms<f32>;
pub type PayoffF32 = Payoff<f32>;
pub type DynamicsSpecF32 = DynamicsSpec<f32>;
pub type ProfileFnF32 = ProfileFn<f32>;
pub type BucketGridF32 = BucketGrid<f32>;
