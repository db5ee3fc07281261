use crate::density::Grid;
use crate::error::{argument, Result};
use crate::scalar::Scalar;

/// Payoff profile sampled on a grid, evaluated between (and just beyond)
/// the samples by a not-a-knot cubic spline. Cubic profiles are therefore
/// reproduced exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFn<T> {
    grid: Grid<T>,
    values: Vec<T>,
    /// Spline second derivatives at the grid points.
    curvature: Vec<T>,
}

impl<T: Scalar> ProfileFn<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(argument(format!(
                "{} profile values on {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if grid.len() < 2 {
            return Err(argument("profile needs at least 2 points"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(argument(format!("profile value {v} is not finite")));
        }
        let curvature = not_a_knot_curvature(grid.points(), &values);
        Ok(ProfileFn {
            grid,
            values,
            curvature,
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn<F: Fn(T) -> T>(grid: Grid<T>, f: F) -> Result<Self> {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `a * self + other` on the same grid.
    pub fn combine(&self, a: T, other: &ProfileFn<T>) -> Result<Self> {
        self.grid.ensure_matches(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&p, &q)| a * p + q)
            .collect();
        Self::new(self.grid.clone(), values)
    }

    fn segment(&self, x: T) -> usize {
        let pts = self.grid.points();
        let n = pts.len();
        if x <= pts[1] {
            return 0;
        }
        if x >= pts[n - 2] {
            return n - 2;
        }
        pts.partition_point(|&p| p <= x) - 1
    }

    /// Spline value; the end pieces are continued outside the grid.
    pub fn eval(&self, x: T) -> T {
        let k = self.segment(x);
        let pts = self.grid.points();
        let (x0, x1) = (pts[k], pts[k + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - x, x - x0);
        let six = T::lit(6.0);
        let (m0, m1) = (self.curvature[k], self.curvature[k + 1]);
        m0 * a * a * a / (six * h)
            + m1 * b * b * b / (six * h)
            + (self.values[k] / h - m0 * h / six) * a
            + (self.values[k + 1] / h - m1 * h / six) * b
    }

    /// Spline second derivative.
    pub fn second_derivative(&self, x: T) -> T {
        let k = self.segment(x);
        let pts = self.grid.points();
        let h = pts[k + 1] - pts[k];
        let t = (x - pts[k]) / h;
        self.curvature[k] * (T::one() - t) + self.curvature[k + 1] * t
    }
}

fn not_a_knot_curvature<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    if n == 2 {
        return vec![T::zero(); 2];
    }
    let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 3 {
        // a single parabola through the three points
        let m = two * (delta[1] - delta[0]) / (h[0] + h[1]);
        return vec![m; 3];
    }
    // unknowns M_1..M_{n-2}; M_0 and M_{n-1} eliminated with the
    // continuity of the third derivative at x_1 and x_{n-2}
    let m = n - 2;
    let mut sub = vec![T::zero(); m];
    let mut diag = vec![T::zero(); m];
    let mut sup = vec![T::zero(); m];
    let mut rhs = vec![T::zero(); m];
    for j in 0..m {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = two * (h[i - 1] + h[i]);
        sup[j] = h[i];
        rhs[j] = six * (delta[i] - delta[i - 1]);
    }
    let (h0, h1) = (h[0], h[1]);
    diag[0] = diag[0] + sub[0] * (h0 + h1) / h1;
    sup[0] = sup[0] - sub[0] * h0 / h1;
    sub[0] = T::zero();
    let (ha, hb) = (h[n - 3], h[n - 2]);
    diag[m - 1] = diag[m - 1] + sup[m - 1] * (ha + hb) / ha;
    sub[m - 1] = sub[m - 1] - sup[m - 1] * hb / ha;
    sup[m - 1] = T::zero();
    let inner = thomas(&sub, &diag, &sup, &rhs);
    let mut out = Vec::with_capacity(n);
    out.push(((h0 + h1) * inner[0] - h0 * inner[1]) / h1);
    out.extend_from_slice(&inner);
    out.push(((ha + hb) * inner[m - 1] - hb * inner[m - 2]) / ha);
    out
}

fn thomas<T: Scalar>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![T::zero(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if order == 1 { z } else { p1 };
            let pn1 = if order == 1 { 1.0 } else { p0 };
            dp = n * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[order - 1 - i] = z;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}
