//! Relative-entropy model risk with an economic materiality threshold.
//!
//! Two densities for the same variable (model vs market, model vs model, or
//! two implementations of one model) are coarse-grained onto explicit
//! buckets. The model risk return `MRR = Σ b_j ln(b_j / m_j)` is immaterial
//! when it is smaller than the commission return, equivalently when the
//! expected return `ER = MRR + RFR - CR` stays below the risk-free return.

use serde::{Deserialize, Serialize};

use crate::density::{kl_divergence, Density, Grid};
use crate::error::{argument, Error, Result};
use crate::market::PricingTerms;
use crate::scalar::Scalar;

/// Mass that may fall outside the buckets and be dropped.
pub const UNCOVERED_MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BucketGrid<T> {
    edges: Vec<T>,
}

impl<T: Scalar> BucketGrid<T> {
    pub fn new(edges: Vec<T>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(argument("bucket grid needs at least 2 edges"));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return Err(argument("bucket edges must be finite"));
        }
        for w in edges.windows(2) {
            if w[1] <= w[0] {
                return Err(argument(format!(
                    "bucket edges must be strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(BucketGrid { edges })
    }

    /// `count` equal buckets on `[lo, hi]`.
    pub fn uniform(lo: T, hi: T, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(argument("bucket count must be >= 1"));
        }
        let step = (hi - lo) / T::from_usize_lossy(count);
        let mut edges: Vec<T> = (0..=count).map(|i| lo + step * T::from_usize_lossy(i)).collect();
        edges[count] = hi;
        Self::new(edges)
    }

    /// One bucket per grid cell.
    pub fn from_grid(grid: &Grid<T>) -> Result<Self> {
        Self::new(grid.cell_edges())
    }

    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn bucket_count(&self) -> usize {
        self.edges.len() - 1
    }

    /// Every edge of `self` is (within `1e-12` relative) an edge of `fine`.
    pub fn is_refined_by(&self, fine: &BucketGrid<T>) -> bool {
        let tol = T::tolerance(1e-12);
        self.edges.iter().all(|&e| {
            fine.edges
                .iter()
                .any(|&f| (e - f).abs() <= tol * e.abs().max(f.abs()).max(T::one()))
        })
    }

    /// Bucket holding `x`: `[e_j, e_{j+1})`, the last bucket closed on the right.
    fn locate(&self, x: T) -> Option<usize> {
        let n = self.edges.len();
        if x < self.edges[0] || x > self.edges[n - 1] {
            return None;
        }
        if x == self.edges[n - 1] {
            return Some(n - 2);
        }
        Some(self.edges.partition_point(|&e| e <= x) - 1)
    }
}

/// Sums grid mass into buckets; the result lives on the bucket midpoints.
pub fn coarse_grain<T: Scalar>(d: &Density<T>, buckets: &BucketGrid<T>) -> Result<Density<T>> {
    let mut mass = vec![T::zero(); buckets.bucket_count()];
    let mut uncovered = T::zero();
    for (x, p) in d.iter() {
        match buckets.locate(x) {
            Some(j) => mass[j] = mass[j] + p,
            None => uncovered = uncovered + p,
        }
    }
    if uncovered > T::lit(UNCOVERED_MASS_TOLERANCE) {
        return Err(Error::Coverage(format!(
            "mass {uncovered} lies outside buckets [{}, {}]",
            buckets.edges[0],
            buckets.edges[buckets.edges.len() - 1]
        )));
    }
    let half = T::lit(0.5);
    let (mids, widths): (Vec<T>, Vec<T>) = buckets
        .edges
        .windows(2)
        .map(|w| ((w[0] + w[1]) * half, w[1] - w[0]))
        .unzip();
    Density::from_weights(Grid::with_widths(mids, widths)?, mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Safe,
    Material,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelRiskReport<T> {
    pub mrr: T,
    pub rfr: T,
    pub cr: T,
    pub er: T,
    pub verdict: Verdict,
    pub bucket_count: usize,
    #[serde(rename = "contributions")]
    pub per_bucket_contribution: Vec<T>,
}

impl<T: Scalar> ModelRiskReport<T> {
    /// The same verdict read off the expected return: safe iff `ER < RFR`.
    pub fn verdict_from_returns(&self) -> Verdict {
        if self.er < self.rfr {
            Verdict::Safe
        } else {
            Verdict::Material
        }
    }
}

/// Scores `b` against `m` over `buckets`.
pub fn model_risk_report<T: Scalar>(
    b: &Density<T>,
    m: &Density<T>,
    buckets: &BucketGrid<T>,
    terms: &PricingTerms<T>,
) -> Result<ModelRiskReport<T>> {
    terms.validate()?;
    let bc = coarse_grain(b, buckets)?;
    let mc = coarse_grain(m, buckets)?;
    let mut contributions = Vec::with_capacity(bc.len());
    for (j, (&bj, &mj)) in bc.mass().iter().zip(mc.mass()).enumerate() {
        if bj == T::zero() {
            contributions.push(T::zero());
        } else if mj == T::zero() {
            return Err(Error::NonEquivalence {
                bucket: j,
                x: bc.grid().points()[j].as_f64(),
                detail: format!(
                    "bucket [{}, {}) has believed mass {bj} and no reference mass",
                    buckets.edges[j],
                    buckets.edges[j + 1]
                ),
            });
        } else {
            contributions.push(bj * (bj / mj).ln());
        }
    }
    let mrr = contributions.iter().copied().sum::<T>().max(T::zero());
    let (rfr, cr) = (terms.rfr(), terms.cr());
    Ok(ModelRiskReport {
        mrr,
        rfr,
        cr,
        er: mrr + rfr - cr,
        verdict: if mrr < cr { Verdict::Safe } else { Verdict::Material },
        bucket_count: buckets.bucket_count(),
        per_bucket_contribution: contributions,
    })
}

/// MRR at two nested resolutions; the fine value is never below the coarse one.
pub fn refine_and_compare<T: Scalar>(
    b: &Density<T>,
    m: &Density<T>,
    coarse: &BucketGrid<T>,
    fine: &BucketGrid<T>,
) -> Result<(T, T)> {
    if !coarse.is_refined_by(fine) {
        return Err(argument("fine buckets do not refine the coarse buckets"));
    }
    let mrr_coarse = kl_divergence(&coarse_grain(b, coarse)?, &coarse_grain(m, coarse)?)?;
    let mrr_fine = kl_divergence(&coarse_grain(b, fine)?, &coarse_grain(m, fine)?)?;
    debug_assert!(mrr_fine >= mrr_coarse - T::tolerance(1e-12));
    Ok((mrr_coarse, mrr_fine))
}
