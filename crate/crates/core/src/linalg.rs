//! Dense least squares by Householder QR.
//!
//! Only what the replication and cubic-fit code need: a tall design matrix
//! given as columns, no pivoting, and rank-deficiency reporting that names
//! which earlier columns a dependent column is built from.

use crate::scalar::Scalar;

/// Column `column` lies in the span of the earlier columns `depends_on`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RankDeficiency {
    pub column: usize,
    pub depends_on: Vec<usize>,
}

const RANK_TOL: f64 = 1e-10;

/// Minimizes `‖A c − b‖₂` for `A` given column by column.
pub(crate) fn least_squares<T: Scalar>(
    columns: &[Vec<T>],
    rhs: &[T],
) -> Result<Vec<T>, RankDeficiency> {
    let n = columns.len();
    let m = rhs.len();
    debug_assert!(columns.iter().all(|c| c.len() == m));

    let mut a: Vec<Vec<T>> = columns.to_vec();
    let mut b = rhs.to_vec();
    let mut diag = vec![T::zero(); n];
    let tol = T::tolerance(RANK_TOL);

    for k in 0..n {
        let scale = norm(&columns[k]);
        let tail_norm = if k < m { norm(&a[k][k..]) } else { T::zero() };
        if scale == T::zero() || tail_norm <= tol * scale {
            return Err(RankDeficiency {
                column: k,
                depends_on: dependencies(columns, k),
            });
        }
        let x0 = a[k][k];
        let alpha = if x0 >= T::zero() { -tail_norm } else { tail_norm };
        let mut v: Vec<T> = a[k][k..].to_vec();
        v[0] = v[0] - alpha;
        let v_norm2: T = v.iter().map(|&t| t * t).sum();
        for col in a.iter_mut().skip(k) {
            reflect(&v, v_norm2, &mut col[k..]);
        }
        reflect(&v, v_norm2, &mut b[k..]);
        diag[k] = alpha;
    }

    let mut coef = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in (i + 1)..n {
            s = s - a[j][i] * coef[j];
        }
        coef[i] = s / diag[i];
    }
    Ok(coef)
}

fn reflect<T: Scalar>(v: &[T], v_norm2: T, x: &mut [T]) {
    if v_norm2 == T::zero() {
        return;
    }
    let dot: T = v.iter().zip(x.iter()).map(|(&a, &b)| a * b).sum();
    let s = T::lit(2.0) * dot / v_norm2;
    for (xi, &vi) in x.iter_mut().zip(v) {
        *xi = *xi - s * vi;
    }
}

fn norm<T: Scalar>(x: &[T]) -> T {
    x.iter().map(|&t| t * t).sum::<T>().sqrt()
}

fn dependencies<T: Scalar>(columns: &[Vec<T>], k: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    let target = &columns[k];
    let target_norm = norm(target);
    match least_squares(&columns[..k], target) {
        Ok(c) => c
            .iter()
            .enumerate()
            .filter(|(j, &cj)| (cj * norm(&columns[*j])).abs() > T::tolerance(1e-8) * target_norm)
            .map(|(j, _)| j)
            .collect(),
        Err(_) => (0..k).collect(),
    }
}
