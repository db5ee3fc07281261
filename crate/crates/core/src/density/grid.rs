use crate::error::{argument, Result};
use crate::scalar::Scalar;

/// Strictly increasing abscissa with a positive width attached to every point.
///
/// A point carries the probability of the bucket around it; see
/// [`Grid::cell_edges`] for the bucket boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    points: Vec<T>,
    widths: Vec<T>,
}

/// Uniform grid of `count` points on `[lo, hi]`.
///
/// Interior points get the full spacing `(hi - lo) / (count - 1)` as width,
/// the two end points get half of it.
pub fn make_grid<T: Scalar>(lo: T, hi: T, count: usize) -> Result<Grid<T>> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(argument(format!("grid bounds must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Err(argument(format!("grid needs at least 2 points, got {count}")));
    }
    let step = (hi - lo) / T::from_usize_lossy(count - 1);
    let mut points: Vec<T> = (0..count)
        .map(|i| lo + step * T::from_usize_lossy(i))
        .collect();
    points[count - 1] = hi;
    let mut widths = vec![step; count];
    widths[0] = step * T::lit(0.5);
    widths[count - 1] = step * T::lit(0.5);
    Ok(Grid { points, widths })
}

impl<T: Scalar> Grid<T> {
    /// Grid on arbitrary strictly increasing points; widths follow the
    /// trapezoid rule (half the distance between the two neighbours).
    pub fn from_points(points: Vec<T>) -> Result<Self> {
        if points.len() < 2 {
            return Err(argument("grid needs at least 2 points"));
        }
        check_increasing(&points)?;
        let k = points.len();
        let half = T::lit(0.5);
        let widths = (0..k)
            .map(|i| {
                let left = if i == 0 { points[0] } else { points[i - 1] };
                let right = if i + 1 == k { points[k - 1] } else { points[i + 1] };
                (right - left) * half
            })
            .collect();
        Ok(Grid { points, widths })
    }

    /// Grid with explicitly supplied bucket widths. A single point is allowed
    /// here (a coarse-grained density may consist of one bucket).
    pub fn with_widths(points: Vec<T>, widths: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(argument("grid needs at least 1 point"));
        }
        if points.len() != widths.len() {
            return Err(argument(format!(
                "{} points but {} widths",
                points.len(),
                widths.len()
            )));
        }
        check_increasing(&points)?;
        if let Some(w) = widths.iter().find(|w| !(**w > T::zero() && w.is_finite())) {
            return Err(argument(format!("grid widths must be positive, got {w}")));
        }
        Ok(Grid { points, widths })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn widths(&self) -> &[T] {
        &self.widths
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lo(&self) -> T {
        self.points[0]
    }

    pub fn hi(&self) -> T {
        self.points[self.points.len() - 1]
    }

    /// Bucket boundaries, `len() + 1` values. Interior boundaries sit halfway
    /// between neighbouring points; the outer ones are placed so the end
    /// buckets have their stated widths.
    pub fn cell_edges(&self) -> Vec<T> {
        let k = self.len();
        let half = T::lit(0.5);
        if k == 1 {
            let c = self.points[0];
            let w = self.widths[0] * half;
            return vec![c - w, c + w];
        }
        let mut edges = Vec::with_capacity(k + 1);
        edges.push(self.points[0] - (self.widths[0] - (self.points[1] - self.points[0]) * half));
        for i in 1..k {
            edges.push((self.points[i - 1] + self.points[i]) * half);
        }
        edges.push(
            self.points[k - 1] + (self.widths[k - 1] - (self.points[k - 1] - self.points[k - 2]) * half),
        );
        edges
    }

    /// Same abscissa within a relative `1e-12`.
    pub fn matches(&self, other: &Grid<T>) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let tol = T::tolerance(1e-12);
        self.points.iter().zip(&other.points).all(|(&a, &b)| {
            let scale = a.abs().max(b.abs()).max(T::one());
            (a - b).abs() <= tol * scale
        })
    }

    pub(crate) fn ensure_matches(&self, other: &Grid<T>) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(argument(format!(
                "grid mismatch: {} points on [{}, {}] vs {} points on [{}, {}]",
                self.len(),
                self.lo(),
                self.hi(),
                other.len(),
                other.lo(),
                other.hi()
            )))
        }
    }
}

fn check_increasing<T: Scalar>(points: &[T]) -> Result<()> {
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(argument(format!("grid point {p} is not finite")));
    }
    for w in points.windows(2) {
        if w[1] <= w[0] {
            return Err(argument(format!(
                "grid points must be strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}
