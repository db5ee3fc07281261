//! Vol curves, Black pricing, implied densities and state prices.

mod black;
mod curve;
mod implied;
mod terms;

pub use black::bs_call_price;
pub use curve::{interpolate_vol, VolCurve, WingExtrapolation};
pub use implied::{implied_density, NEGATIVE_MASS_TOLERANCE};
pub use terms::{state_prices, PricingTerms, StatePrices};
