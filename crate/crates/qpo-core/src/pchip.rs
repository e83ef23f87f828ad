//! Monotonicity-preserving piecewise-cubic interpolation (Fritsch–Carlson).
//!
//! Used for tabulated growth functions in (log t, log A) coordinates: the
//! interpolant never overshoots the data, so monotone knot values produce a
//! monotone function.

use serde::{Deserialize, Serialize};

use crate::{QpoError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Knot derivatives after the monotonicity limiter.
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(QpoError::Parameter(format!(
                "interpolation needs ≥ 2 matching knots, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        for w in x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(QpoError::Parameter(
                    "interpolation knots must be strictly increasing".into(),
                ));
            }
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(QpoError::Parameter(
                "interpolation knots must be finite".into(),
            ));
        }
        let n = x.len();
        let mut h = Vec::with_capacity(n - 1);
        let mut delta = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            h.push(x[i + 1] - x[i]);
            delta.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
        }
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            // interior: weighted harmonic mean when secants share a sign
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = edge_derivative(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = edge_derivative(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Pchip { x, y, d })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        // index i with x in [x_i, x_{i+1}]; arguments outside are clamped
        match self.x.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Evaluate the interpolant; arguments outside the knot range evaluate the
    /// boundary cubic (callers enforce domains).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.x[i + 1] - self.x[i];
        let s = (x - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i], self.d[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }

    /// Derivative of the interpolant.
    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.x[i + 1] - self.x[i];
        let s = (x - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i], self.d[i + 1]);
        let dh00 = 6.0 * s * s - 6.0 * s;
        let dh10 = 3.0 * s * s - 4.0 * s + 1.0;
        let dh01 = -6.0 * s * s + 6.0 * s;
        let dh11 = 3.0 * s * s - 2.0 * s;
        (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
    }
}

/// Three-point one-sided endpoint derivative with the standard shape limiter.
fn edge_derivative(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_exactly() {
        let x = vec![0.0, 1.0, 2.5, 4.0];
        let y = vec![1.0, 2.0, 2.0, 5.0];
        let p = Pchip::new(x.clone(), y.clone()).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((p.eval(*xi) - yi).abs() < 1e-14);
        }
    }

    #[test]
    fn preserves_monotonicity_between_knots() {
        let x = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let y = vec![0.0, 0.1, 3.0, 3.05, 10.0];
        let p = Pchip::new(x, y).unwrap();
        let mut prev = p.eval(0.0);
        for i in 1..=400 {
            let v = p.eval(i as f64 * 0.01);
            assert!(v >= prev - 1e-12, "dip at {}", i as f64 * 0.01);
            prev = v;
        }
    }

    #[test]
    fn linear_data_reproduced_exactly() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let p = Pchip::new(x, y).unwrap();
        for i in 0..90 {
            let xi = i as f64 * 0.1;
            assert!((p.eval(xi) - (2.0 * xi + 1.0)).abs() < 1e-12);
            assert!((p.deriv(xi) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(Pchip::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Pchip::new(vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let x = vec![0.0, 0.7, 1.9, 3.0, 4.2];
        let y = vec![0.0, 1.0, 1.5, 4.0, 4.5];
        let p = Pchip::new(x, y).unwrap();
        for i in 1..40 {
            let xi = 0.1 * i as f64;
            let eps = 1e-6;
            let fd = (p.eval(xi + eps) - p.eval(xi - eps)) / (2.0 * eps);
            assert!((p.deriv(xi) - fd).abs() < 1e-5);
        }
    }
}
