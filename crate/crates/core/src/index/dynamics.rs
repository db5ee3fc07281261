use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{argument, Result};
use crate::scalar::Scalar;

/// Locally log-normal return dynamics `x_i = drift_i dt_i + vol_i √dt_i ε_i`.
///
/// `drift` is the market rate `r_i` or the investor's `μ_i` depending on
/// which measure the value describes.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSpec<T> {
    drift: Vec<T>,
    vol: Vec<T>,
    dt: Vec<T>,
}

impl<T: Scalar> DynamicsSpec<T> {
    pub fn new(drift: Vec<T>, vol: Vec<T>, dt: Vec<T>) -> Result<Self> {
        let n = drift.len();
        if n == 0 {
            return Err(argument("dynamics need at least one step"));
        }
        if vol.len() != n || dt.len() != n {
            return Err(argument(format!(
                "per-step arrays differ in length: drift {}, vol {}, dt {}",
                n,
                vol.len(),
                dt.len()
            )));
        }
        if let Some(d) = drift.iter().find(|d| !d.is_finite()) {
            return Err(argument(format!("drift {d} is not finite")));
        }
        if let Some(s) = vol.iter().find(|s| !(**s > T::zero() && s.is_finite())) {
            return Err(argument(format!("vol must be > 0, got {s}")));
        }
        if let Some(t) = dt.iter().find(|t| !(**t > T::zero() && t.is_finite())) {
            return Err(argument(format!("dt must be > 0, got {t}")));
        }
        Ok(DynamicsSpec { drift, vol, dt })
    }

    pub fn constant(drift: T, vol: T, dt: T, steps: usize) -> Result<Self> {
        Self::new(vec![drift; steps], vec![vol; steps], vec![dt; steps])
    }

    pub fn steps(&self) -> usize {
        self.drift.len()
    }

    pub fn drift(&self) -> &[T] {
        &self.drift
    }

    pub fn vol(&self) -> &[T] {
        &self.vol
    }

    pub fn dt(&self) -> &[T] {
        &self.dt
    }

    pub fn horizon(&self) -> T {
        self.dt.iter().copied().sum()
    }

    /// Same spec with a different drift.
    pub fn with_drift(&self, drift: Vec<T>) -> Result<Self> {
        Self::new(drift, self.vol.clone(), self.dt.clone())
    }

    /// Both specs share steps, vols and time steps, so they disagree at most
    /// on the drift.
    pub fn differs_only_in_drift(&self, other: &DynamicsSpec<T>) -> bool {
        self.vol == other.vol && self.dt == other.dt
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PerStep<T> {
    Constant(T),
    Series(Vec<T>),
}

#[derive(Serialize, Deserialize)]
struct SpecJson<T> {
    drift: PerStep<T>,
    vol: PerStep<T>,
    dt: PerStep<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
}

impl<'de, T: Scalar> Deserialize<'de> for DynamicsSpec<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SpecJson::<T>::deserialize(deserializer)?;
        let lens = [&raw.drift, &raw.vol, &raw.dt]
            .iter()
            .filter_map(|p| match p {
                PerStep::Series(v) => Some(v.len()),
                PerStep::Constant(_) => None,
            })
            .collect::<Vec<_>>();
        let steps = match (raw.steps, lens.first()) {
            (Some(s), _) => s,
            (None, Some(&l)) => l,
            (None, None) => {
                return Err(serde::de::Error::custom(
                    "`steps` is required when drift, vol and dt are all constants",
                ))
            }
        };
        let expand = |p: PerStep<T>, name: &str| match p {
            PerStep::Constant(c) => Ok(vec![c; steps]),
            PerStep::Series(v) if v.len() == steps => Ok(v),
            PerStep::Series(v) => Err(serde::de::Error::custom(format!(
                "{name} has {} entries, expected {steps}",
                v.len()
            ))),
        };
        let drift = expand(raw.drift, "drift")?;
        let vol = expand(raw.vol, "vol")?;
        let dt = expand(raw.dt, "dt")?;
        DynamicsSpec::new(drift, vol, dt).map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> Serialize for DynamicsSpec<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let compact = |v: &[T]| {
            if v.iter().all(|&x| x == v[0]) {
                PerStep::Constant(v[0])
            } else {
                PerStep::Series(v.to_vec())
            }
        };
        SpecJson {
            drift: compact(&self.drift),
            vol: compact(&self.vol),
            dt: compact(&self.dt),
            steps: Some(self.steps()),
        }
        .serialize(serializer)
    }
}
