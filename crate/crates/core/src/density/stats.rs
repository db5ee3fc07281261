use super::Density;
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub mean: T,
    pub variance: T,
    pub skewness: T,
}

/// Mean, variance and third standardized moment by discrete summation.
pub fn moments<T: Scalar>(d: &Density<T>) -> Result<Moments<T>> {
    let mean = d.mean();
    let variance = d.variance();
    if !(variance > T::zero()) {
        return Err(domain("zero variance: skewness undefined"));
    }
    let third: T = d.iter().map(|(x, p)| (x - mean).powi(3) * p).sum();
    Ok(Moments {
        mean,
        variance,
        skewness: third / variance.powf(T::lit(1.5)),
    })
}

/// Relative entropy `Σ p_i ln(p_i / q_i)` in nats.
///
/// Buckets with `p_i = 0` contribute nothing. A bucket with `p_i > 0` and
/// `q_i = 0` is an error rather than `+∞`.
pub fn kl_divergence<T: Scalar>(p: &Density<T>, q: &Density<T>) -> Result<T> {
    p.grid().ensure_matches(q.grid())?;
    let mut total = T::zero();
    for (i, (&pi, &qi)) in p.mass().iter().zip(q.mass()).enumerate() {
        if pi == T::zero() {
            continue;
        }
        if qi == T::zero() {
            return Err(Error::NonEquivalence {
                bucket: i,
                x: p.grid().points()[i].as_f64(),
                detail: format!("p = {pi} but q = 0"),
            });
        }
        total = total + pi * (pi / qi).ln();
    }
    // Rounding can leave a tiny negative total when p ≈ q.
    Ok(total.max(T::zero()))
}
