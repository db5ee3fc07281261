//! Growth-optimal payoffs: construction, pricing, expected log return and
//! static replication with vanilla instruments.

mod replicate;

pub use replicate::{replicate_vanilla, Instrument, ReplicationBasis, ReplicationPortfolio};

use crate::density::{Density, Grid};
use crate::error::{domain, Error, Result};
use crate::market::{PricingTerms, StatePrices};
use crate::scalar::Scalar;

/// Payout per bucket of a product bought with the budget in `terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct Payoff<T> {
    grid: Grid<T>,
    values: Vec<T>,
    terms: PricingTerms<T>,
}

impl<T: Scalar> Payoff<T> {
    /// Arbitrary non-negative payout profile.
    pub fn new(grid: Grid<T>, values: Vec<T>, terms: PricingTerms<T>) -> Result<Self> {
        terms.validate()?;
        if values.len() != grid.len() {
            return Err(crate::error::argument(format!(
                "{} payoff values on a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= T::zero())) {
            return Err(crate::error::argument(format!("payoff value {v} must be finite and >= 0")));
        }
        Ok(Payoff { grid, values, terms })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn terms(&self) -> &PricingTerms<T> {
        &self.terms
    }

    /// Price including the commission markup.
    pub fn cost(&self, sp: &StatePrices<T>) -> Result<T> {
        Ok((T::one() + self.terms.commission_rate) * price(self, sp)?)
    }
}

/// `f_i = N b_i / m_i` with `N = W / ((1 + c) DF)`.
///
/// Buckets the investor gives no probability pay nothing. A bucket with
/// believed mass but no market mass cannot be priced and is rejected.
pub fn growth_optimal_payoff<T: Scalar>(
    m: &Density<T>,
    b: &Density<T>,
    terms: &PricingTerms<T>,
) -> Result<Payoff<T>> {
    terms.validate()?;
    m.grid().ensure_matches(b.grid())?;
    let n = terms.normalization();
    let values = m
        .mass()
        .iter()
        .zip(b.mass())
        .enumerate()
        .map(|(i, (&mi, &bi))| {
            if bi == T::zero() {
                Ok(T::zero())
            } else if mi == T::zero() {
                Err(Error::NonEquivalence {
                    bucket: i,
                    x: m.grid().points()[i].as_f64(),
                    detail: format!("believed mass {bi} where market mass is 0"),
                })
            } else {
                Ok(n * bi / mi)
            }
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Payoff {
        grid: m.grid().clone(),
        values,
        terms: *terms,
    })
}

/// Pre-commission value `Σ q_i f_i`.
pub fn price<T: Scalar>(p: &Payoff<T>, sp: &StatePrices<T>) -> Result<T> {
    p.grid.ensure_matches(sp.grid())?;
    Ok(p.values.iter().zip(sp.prices()).map(|(&f, &q)| f * q).sum())
}

/// Expected log return and its decomposition.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ReturnDecomposition<T> {
    /// `Σ b_i ln(f_i / W)`.
    pub er: T,
    /// `Σ b_i ln(f_i / N)`; equals `KL(b‖m)` for the growth-optimal payoff.
    pub mrr: T,
    pub rfr: T,
    pub cr: T,
}

/// Expected log return of `p` under the believed density `b`, per unit of
/// budget. A bucket with believed mass and zero payout is certain ruin and
/// is reported as an error.
pub fn expected_rate_of_return<T: Scalar>(
    p: &Payoff<T>,
    b: &Density<T>,
) -> Result<ReturnDecomposition<T>> {
    p.grid.ensure_matches(b.grid())?;
    let w = p.terms.budget;
    let n = p.terms.normalization();
    let (mut er, mut mrr) = (T::zero(), T::zero());
    for (i, (&f, &bi)) in p.values.iter().zip(b.mass()).enumerate() {
        if bi == T::zero() {
            continue;
        }
        if f == T::zero() {
            return Err(domain(format!(
                "certain ruin: bucket {i} has believed mass {bi} and zero payout"
            )));
        }
        er = er + bi * (f / w).ln();
        mrr = mrr + bi * (f / n).ln();
    }
    Ok(ReturnDecomposition {
        er,
        mrr,
        rfr: p.terms.rfr(),
        cr: p.terms.cr(),
    })
}
