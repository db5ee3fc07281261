//! Drift-view index: exact likelihood-ratio payoff along a path of returns,
//! its first-order (vol-targeted excess return) approximation, path
//! simulation and a growth-rate scan over leverage.

mod dynamics;
mod kelly;
mod simulate;

pub use dynamics::DynamicsSpec;
pub use kelly::{kelly_scan, KellyRow, MAX_WIPEOUT_FRACTION};
pub use simulate::{path_returns, path_rng, simulate_paths, PathSample};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, Error, Result};
use crate::scalar::Scalar;

/// Log of the exact one-step ratio `f_i / f_{i-1}`.
#[inline]
pub fn exact_log_step<T: Scalar>(x: T, r: T, mu: T, sigma: T, dt: T) -> T {
    let var = sigma * sigma;
    (mu - r) / var * x + (r * r - mu * mu) / (T::lit(2.0) * var) * dt
}

/// `f_i / f_{i-1} = exp(((μ - r)/σ²) x + ((r² - μ²)/(2σ²)) dt)`.
pub fn exact_ratio_step<T: Scalar>(x: T, r: T, mu: T, sigma: T, dt: T) -> T {
    exact_log_step(x, r, mu, sigma, dt).exp()
}

/// Relative index increment `((μ - r)/σ²)(x - r dt)`.
///
/// Leverage is the Sharpe ratio over vol. An increment at or below `-1`
/// wipes the index out.
pub fn index_step<T: Scalar>(x: T, r: T, mu: T, sigma: T, dt: T) -> Result<T> {
    let inc = (mu - r) / (sigma * sigma) * (x - r * dt);
    if inc <= -T::one() {
        return Err(Error::Wipeout(format!("increment {inc} <= -1")));
    }
    Ok(inc)
}

/// Exact and first-order index levels along one path, both starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSeries<T> {
    /// `f_0, …, f_n`.
    pub exact: Vec<T>,
    /// `I_0, …`; stops at the wipeout step if there is one.
    pub first_order: Vec<T>,
    /// Step at which the first-order index was wiped out.
    pub wipeout_step: Option<usize>,
}

impl<T: Scalar> IndexSeries<T> {
    pub fn terminal_exact(&self) -> T {
        self.exact[self.exact.len() - 1]
    }

    /// `None` after a wipeout.
    pub fn terminal_first_order(&self) -> Option<T> {
        match self.wipeout_step {
            Some(_) => None,
            None => self.first_order.last().copied(),
        }
    }
}

fn check_pair<T: Scalar>(market: &DynamicsSpec<T>, believed: &DynamicsSpec<T>) -> Result<()> {
    if market.steps() != believed.steps() || !market.differs_only_in_drift(believed) {
        return Err(Error::UnsupportedView(
            "market and believed dynamics must share steps, vols and time steps; only the drift may differ"
                .into(),
        ));
    }
    Ok(())
}

/// Exact and first-order series along `path`.
pub fn run_index<T: Scalar>(
    path: &PathSample<T>,
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
) -> Result<IndexSeries<T>> {
    check_pair(market, believed)?;
    if path.steps() != market.steps() {
        return Err(argument(format!(
            "path has {} steps, dynamics have {}",
            path.steps(),
            market.steps()
        )));
    }
    Ok(series_from_returns(path.returns(), market, believed))
}

fn series_from_returns<T: Scalar>(
    returns: &[T],
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
) -> IndexSeries<T> {
    let n = returns.len();
    let mut exact = Vec::with_capacity(n + 1);
    let mut first_order = Vec::with_capacity(n + 1);
    exact.push(T::one());
    first_order.push(T::one());
    let mut log_f = T::zero();
    let mut level = T::one();
    let mut wipeout_step = None;
    for i in 0..n {
        let (x, r, mu, s, dt) = step_inputs(returns, market, believed, i);
        log_f = log_f + exact_log_step(x, r, mu, s, dt);
        exact.push(log_f.exp());
        if wipeout_step.is_none() {
            match index_step(x, r, mu, s, dt) {
                Ok(inc) => {
                    level = level * (T::one() + inc);
                    first_order.push(level);
                }
                Err(_) => wipeout_step = Some(i + 1),
            }
        }
    }
    IndexSeries {
        exact,
        first_order,
        wipeout_step,
    }
}

#[inline]
fn step_inputs<T: Scalar>(
    returns: &[T],
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
    i: usize,
) -> (T, T, T, T, T) {
    (
        returns[i],
        market.drift()[i],
        believed.drift()[i],
        market.vol()[i],
        market.dt()[i],
    )
}

/// Terminal log levels of both series along a path of returns, without
/// storing the series. `None` for the first-order log on wipeout.
pub fn terminal_logs<T: Scalar>(
    returns: &[T],
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
) -> (T, Option<T>) {
    let mut log_f = T::zero();
    let mut log_i = Some(T::zero());
    for i in 0..returns.len() {
        let (x, r, mu, s, dt) = step_inputs(returns, market, believed, i);
        log_f = log_f + exact_log_step(x, r, mu, s, dt);
        log_i = log_i.and_then(|acc| index_step(x, r, mu, s, dt).ok().map(|inc| acc + inc.ln_1p()));
    }
    (log_f, log_i)
}

/// Which dynamics drive simulated paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Market,
    Believed,
}

/// Monte Carlo summary of terminal index values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexStatistics {
    pub measure: Measure,
    pub paths: usize,
    pub mean_exact: f64,
    pub std_error_exact: f64,
    pub mean_log_exact: f64,
    pub std_error_log_exact: f64,
    pub mean_log_first_order: f64,
    pub std_error_log_first_order: f64,
    /// Mean of `|ln f_n - ln I_n|` over paths without wipeout.
    pub mean_abs_log_gap: f64,
    /// 95th percentile of `|ln f_n - ln I_n|`.
    pub p95_abs_log_gap: f64,
    pub wipeouts: usize,
}

/// Simulates `n_paths` under `measure` and summarizes terminal values.
pub fn index_statistics<T: Scalar>(
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
    measure: Measure,
    n_paths: usize,
    seed: u64,
) -> Result<IndexStatistics> {
    check_pair(market, believed)?;
    if n_paths == 0 {
        return Err(argument("n_paths must be >= 1"));
    }
    let driver = match measure {
        Measure::Market => market,
        Measure::Believed => believed,
    };
    let per_path: Vec<(f64, Option<f64>)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let x = path_returns(driver, seed, i);
            let (lf, li) = terminal_logs(&x, market, believed);
            (lf.as_f64(), li.map(Scalar::as_f64))
        })
        .collect();

    let (mean_exact, se_exact) = mean_and_se(per_path.iter().map(|p| p.0.exp()));
    let (mean_log_exact, se_log_exact) = mean_and_se(per_path.iter().map(|p| p.0));
    let (mean_log_fo, se_log_fo) = mean_and_se(per_path.iter().filter_map(|p| p.1));
    let mut gaps: Vec<f64> = per_path
        .iter()
        .filter_map(|&(lf, li)| li.map(|li| (lf - li).abs()))
        .collect();
    let (mean_gap, _) = mean_and_se(gaps.iter().copied());
    gaps.sort_by(|a, b| a.total_cmp(b));
    let p95 = if gaps.is_empty() {
        f64::NAN
    } else {
        gaps[((gaps.len() as f64 * 0.95).ceil() as usize).clamp(1, gaps.len()) - 1]
    };
    Ok(IndexStatistics {
        measure,
        paths: n_paths,
        mean_exact,
        std_error_exact: se_exact,
        mean_log_exact,
        std_error_log_exact: se_log_exact,
        mean_log_first_order: mean_log_fo,
        std_error_log_first_order: se_log_fo,
        mean_abs_log_gap: mean_gap,
        p95_abs_log_gap: p95,
        wipeouts: per_path.iter().filter(|p| p.1.is_none()).count(),
    })
}

/// Sample mean and standard error, summed in iteration order.
pub(crate) fn mean_and_se(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
    for v in values {
        n += 1;
        let d = v - mean;
        mean += d / n as f64;
        m2 += d * (v - mean);
    }
    match n {
        0 => (f64::NAN, f64::NAN),
        1 => (mean, 0.0),
        _ => (mean, (m2 / (n - 1) as f64 / n as f64).sqrt()),
    }
}
