use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::DynamicsSpec;
use crate::error::{argument, domain, Result};
use crate::scalar::Scalar;

/// Realized fixings of one path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample<T> {
    s0: T,
    returns: Vec<T>,
    levels: Vec<T>,
}

impl<T: Scalar> PathSample<T> {
    /// Builds levels `S_i = S_{i-1} (1 + x_i)`; every level must stay positive.
    pub fn from_returns(s0: T, returns: Vec<T>) -> Result<Self> {
        if !(s0 > T::zero() && s0.is_finite()) {
            return Err(argument(format!("initial level must be > 0, got {s0}")));
        }
        let mut levels = Vec::with_capacity(returns.len() + 1);
        levels.push(s0);
        let mut s = s0;
        for (i, &x) in returns.iter().enumerate() {
            s = s * (T::one() + x);
            if !(s > T::zero() && s.is_finite()) {
                return Err(domain(format!("level at step {} is {s}", i + 1)));
            }
            levels.push(s);
        }
        Ok(PathSample { s0, returns, levels })
    }

    /// Inverse of [`PathSample::from_returns`].
    pub fn from_levels(levels: Vec<T>) -> Result<Self> {
        if levels.is_empty() {
            return Err(argument("a path needs at least the initial level"));
        }
        let returns = levels.windows(2).map(|w| w[1] / w[0] - T::one()).collect();
        let s0 = levels[0];
        if let Some(s) = levels.iter().find(|s| !(**s > T::zero() && s.is_finite())) {
            return Err(argument(format!("levels must be > 0, got {s}")));
        }
        Ok(PathSample { s0, returns, levels })
    }

    pub fn s0(&self) -> T {
        self.s0
    }

    pub fn returns(&self) -> &[T] {
        &self.returns
    }

    /// `S_0, …, S_n`.
    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn steps(&self) -> usize {
        self.returns.len()
    }
}

/// Independent generator for path `index` under `seed`: ChaCha8 keyed by the
/// seed, one stream per path.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Returns of path `index`; identical whatever else is simulated alongside.
pub fn path_returns<T: Scalar>(spec: &DynamicsSpec<T>, seed: u64, index: u64) -> Vec<T> {
    let mut rng = path_rng(seed, index);
    spec.drift()
        .iter()
        .zip(spec.vol())
        .zip(spec.dt())
        .map(|((&mu, &sigma), &dt)| {
            let eps: f64 = StandardNormal.sample(&mut rng);
            mu * dt + sigma * dt.sqrt() * T::lit(eps)
        })
        .collect()
}

/// `n_paths` paths starting at `s0`; path `i` uses stream `i` of `seed`.
pub fn simulate_paths<T: Scalar>(
    spec: &DynamicsSpec<T>,
    s0: T,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<PathSample<T>>> {
    if n_paths == 0 {
        return Err(argument("n_paths must be >= 1"));
    }
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| PathSample::from_returns(s0, path_returns(spec, seed, i)))
        .collect()
}
