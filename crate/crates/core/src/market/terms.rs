use serde::{Deserialize, Serialize};

use crate::density::{Density, Grid};
use crate::error::{argument, Result};
use crate::scalar::Scalar;

/// Discounting, market-maker commission and the investor's budget.
///
/// Commission is a single multiplicative markup: a product whose state-price
/// value is `P` costs `(1 + c) P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PricingTerms<T> {
    pub discount_factor: T,
    #[serde(default = "zero")]
    pub commission_rate: T,
    #[serde(default = "one")]
    pub budget: T,
}

fn zero<T: Scalar>() -> T {
    T::zero()
}

fn one<T: Scalar>() -> T {
    T::one()
}

impl<T: Scalar> Default for PricingTerms<T> {
    fn default() -> Self {
        PricingTerms {
            discount_factor: T::one(),
            commission_rate: T::zero(),
            budget: T::one(),
        }
    }
}

impl<T: Scalar> PricingTerms<T> {
    pub fn new(discount_factor: T, commission_rate: T, budget: T) -> Result<Self> {
        let t = PricingTerms {
            discount_factor,
            commission_rate,
            budget,
        };
        t.validate()?;
        Ok(t)
    }

    /// Terms from the log returns `RFR = -ln DF` and `CR = ln(1 + c)`.
    pub fn from_returns(rfr: T, cr: T, budget: T) -> Result<Self> {
        Self::new((-rfr).exp(), cr.exp() - T::one(), budget)
    }

    pub fn validate(&self) -> Result<()> {
        let df = self.discount_factor;
        if !(df > T::zero() && df <= T::one()) {
            return Err(argument(format!("discount factor must be in (0, 1], got {df}")));
        }
        if !(self.commission_rate >= T::zero() && self.commission_rate.is_finite()) {
            return Err(argument(format!(
                "commission rate must be >= 0, got {}",
                self.commission_rate
            )));
        }
        if !(self.budget > T::zero() && self.budget.is_finite()) {
            return Err(argument(format!("budget must be > 0, got {}", self.budget)));
        }
        Ok(())
    }

    /// Risk-free return `-ln DF`.
    pub fn rfr(&self) -> T {
        -self.discount_factor.ln()
    }

    /// Commission return `ln(1 + c)`.
    pub fn cr(&self) -> T {
        self.commission_rate.ln_1p()
    }

    /// `N = W / ((1 + c) DF)`, the scale that makes a density ratio cost
    /// exactly the budget.
    pub fn normalization(&self) -> T {
        self.budget / ((T::one() + self.commission_rate) * self.discount_factor)
    }
}

/// Today's price of one unit paid in each bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePrices<T> {
    grid: Grid<T>,
    q: Vec<T>,
}

impl<T: Scalar> StatePrices<T> {
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn prices(&self) -> &[T] {
        &self.q
    }

    /// Price of the sure payoff, equal to the discount factor.
    pub fn total(&self) -> T {
        self.q.iter().copied().sum()
    }
}

/// `q_i = DF p_i`.
pub fn state_prices<T: Scalar>(d: &Density<T>, terms: &PricingTerms<T>) -> StatePrices<T> {
    let df = terms.discount_factor;
    StatePrices {
        grid: d.grid().clone(),
        q: d.mass().iter().map(|&p| df * p).collect(),
    }
}
