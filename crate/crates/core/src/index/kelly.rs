use rayon::prelude::*;
use serde::Serialize;

use super::{check_pair, mean_and_se, path_returns, DynamicsSpec};
use crate::error::{argument, Error, Result};
use crate::scalar::Scalar;

/// Fraction of wiped-out paths above which a scan is rejected.
pub const MAX_WIPEOUT_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KellyRow {
    pub leverage: f64,
    pub mean_log_growth: f64,
    pub std_error: f64,
    pub wipeouts: usize,
}

/// Mean terminal log wealth of `ΔV/V = λ (x - r dt)` for each leverage `λ`,
/// over paths simulated under the believed dynamics. All leverages see the
/// same paths.
pub fn kelly_scan<T: Scalar>(
    market: &DynamicsSpec<T>,
    believed: &DynamicsSpec<T>,
    leverages: &[T],
    n_paths: usize,
    seed: u64,
) -> Result<Vec<KellyRow>> {
    check_pair(market, believed)?;
    if leverages.is_empty() {
        return Err(argument("leverage grid is empty"));
    }
    if n_paths == 0 {
        return Err(argument("n_paths must be >= 1"));
    }
    let per_path: Vec<Vec<Option<f64>>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let x = path_returns(believed, seed, i);
            leverages
                .iter()
                .map(|&lambda| log_wealth(&x, market, lambda).map(Scalar::as_f64))
                .collect()
        })
        .collect();

    leverages
        .iter()
        .enumerate()
        .map(|(j, &lambda)| {
            let wipeouts = per_path.iter().filter(|p| p[j].is_none()).count();
            if wipeouts as f64 > MAX_WIPEOUT_FRACTION * n_paths as f64 {
                return Err(Error::Wipeout(format!(
                    "{wipeouts} of {n_paths} paths wiped out at leverage {lambda}"
                )));
            }
            let (mean, se) = mean_and_se(per_path.iter().filter_map(|p| p[j]));
            Ok(KellyRow {
                leverage: lambda.as_f64(),
                mean_log_growth: mean,
                std_error: se,
                wipeouts,
            })
        })
        .collect()
}

fn log_wealth<T: Scalar>(x: &[T], market: &DynamicsSpec<T>, lambda: T) -> Option<T> {
    let mut acc = T::zero();
    for ((&xi, &r), &dt) in x.iter().zip(market.drift()).zip(market.dt()) {
        let inc = lambda * (xi - r * dt);
        if inc <= -T::one() {
            return None;
        }
        acc = acc + inc.ln_1p();
    }
    Some(acc)
}
