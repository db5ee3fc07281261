use std::fmt;

use super::Payoff;
use crate::density::Density;
use crate::error::{argument, Error, Result};
use crate::linalg::least_squares;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instrument<T> {
    Bond,
    Call(T),
    Put(T),
    /// Pays 1 above the strike, 1/2 at it, 0 below.
    Digital(T),
}

impl<T: Scalar> Instrument<T> {
    pub fn payout(&self, x: T) -> T {
        match *self {
            Instrument::Bond => T::one(),
            Instrument::Call(k) => (x - k).max(T::zero()),
            Instrument::Put(k) => (k - x).max(T::zero()),
            Instrument::Digital(k) => {
                if x > k {
                    T::one()
                } else if x == k {
                    T::lit(0.5)
                } else {
                    T::zero()
                }
            }
        }
    }

    fn strike(&self) -> Option<T> {
        match *self {
            Instrument::Bond => None,
            Instrument::Call(k) | Instrument::Put(k) | Instrument::Digital(k) => Some(k),
        }
    }
}

impl<T: Scalar> fmt::Display for Instrument<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instrument::Bond => write!(f, "bond"),
            Instrument::Call(k) => write!(f, "call@{k}"),
            Instrument::Put(k) => write!(f, "put@{k}"),
            Instrument::Digital(k) => write!(f, "digital@{k}"),
        }
    }
}

/// Caller-chosen instruments to replicate with. The bond is always included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplicationBasis<T> {
    pub calls: Vec<T>,
    pub puts: Vec<T>,
    pub digitals: Vec<T>,
}

impl<T: Scalar> ReplicationBasis<T> {
    /// Puts below `pivot`, calls at or above it.
    pub fn out_of_the_money(strikes: &[T], pivot: T) -> Self {
        ReplicationBasis {
            calls: strikes.iter().copied().filter(|&k| k >= pivot).collect(),
            puts: strikes.iter().copied().filter(|&k| k < pivot).collect(),
            digitals: Vec::new(),
        }
    }

    pub fn with_digitals(mut self, strikes: &[T]) -> Self {
        self.digitals.extend_from_slice(strikes);
        self
    }

    pub fn instruments(&self) -> Vec<Instrument<T>> {
        std::iter::once(Instrument::Bond)
            .chain(self.calls.iter().map(|&k| Instrument::Call(k)))
            .chain(self.puts.iter().map(|&k| Instrument::Put(k)))
            .chain(self.digitals.iter().map(|&k| Instrument::Digital(k)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationPortfolio<T> {
    pub bond_notional: T,
    pub call_weights: Vec<(T, T)>,
    pub put_weights: Vec<(T, T)>,
    pub digital_weights: Vec<(T, T)>,
    /// Largest absolute gap between payoff and portfolio over the grid.
    pub residual_sup_error: T,
}

impl<T: Scalar> ReplicationPortfolio<T> {
    pub fn value_at(&self, x: T) -> T {
        let mut v = self.bond_notional;
        for &(k, w) in &self.call_weights {
            v = v + w * Instrument::Call(k).payout(x);
        }
        for &(k, w) in &self.put_weights {
            v = v + w * Instrument::Put(k).payout(x);
        }
        for &(k, w) in &self.digital_weights {
            v = v + w * Instrument::Digital(k).payout(x);
        }
        v
    }
}

/// Least-squares fit of the payoff by the basis, weighting grid points by
/// the market mass `m`.
pub fn replicate_vanilla<T: Scalar>(
    p: &Payoff<T>,
    m: &Density<T>,
    basis: &ReplicationBasis<T>,
) -> Result<ReplicationPortfolio<T>> {
    p.grid().ensure_matches(m.grid())?;
    let instruments = basis.instruments();
    let (lo, hi) = (p.grid().lo(), p.grid().hi());
    if !instruments
        .iter()
        .filter_map(Instrument::strike)
        .any(|k| k >= lo && k <= hi)
    {
        return Err(argument(format!("no replication strike inside [{lo}, {hi}]")));
    }

    let rows: Vec<(T, T, T)> = p
        .grid()
        .points()
        .iter()
        .zip(p.values())
        .zip(m.mass())
        .filter(|(_, &w)| w > T::zero())
        .map(|((&x, &f), &w)| (x, f, w.sqrt()))
        .collect();
    let columns: Vec<Vec<T>> = instruments
        .iter()
        .map(|ins| rows.iter().map(|&(x, _, s)| s * ins.payout(x)).collect())
        .collect();
    let rhs: Vec<T> = rows.iter().map(|&(_, f, s)| s * f).collect();

    let weights = least_squares(&columns, &rhs).map_err(|d| Error::RankDeficient {
        instrument: instruments[d.column].to_string(),
        collinear_with: d.depends_on.iter().map(|&j| instruments[j].to_string()).collect(),
    })?;

    let mut out = ReplicationPortfolio {
        bond_notional: T::zero(),
        call_weights: Vec::new(),
        put_weights: Vec::new(),
        digital_weights: Vec::new(),
        residual_sup_error: T::zero(),
    };
    for (ins, &w) in instruments.iter().zip(&weights) {
        match *ins {
            Instrument::Bond => out.bond_notional = w,
            Instrument::Call(k) => out.call_weights.push((k, w)),
            Instrument::Put(k) => out.put_weights.push((k, w)),
            Instrument::Digital(k) => out.digital_weights.push((k, w)),
        }
    }
    out.residual_sup_error = p
        .grid()
        .points()
        .iter()
        .zip(p.values())
        .map(|(&x, &f)| (f - out.value_at(x)).abs())
        .fold(T::zero(), T::max);
    Ok(out)
}
