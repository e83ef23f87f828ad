//! Sampling grids and tail-window statistics.
//!
//! Growth exponents are defined through limits as t → ∞ (or r → 1⁻). On a
//! finite grid those limits are surrogated by running extrema and window ends
//! over the tail half of the grid; every estimator here reports the windows it
//! used so callers can judge stabilization.

use serde::{Deserialize, Serialize};

use crate::{QpoError, Result};

/// Log-uniform sampling grid on `[t_min, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    /// Sampling density: number of points per factor-of-ten in t.
    pub points_per_decade: usize,
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite()) || t_min <= 0.0 {
            return Err(QpoError::Parameter(format!(
                "grid endpoints must be finite and positive, got [{t_min}, {t_max}]"
            )));
        }
        if t_max <= t_min {
            return Err(QpoError::Parameter(format!(
                "grid needs t_max > t_min, got [{t_min}, {t_max}]"
            )));
        }
        if points_per_decade == 0 {
            return Err(QpoError::Parameter(
                "points_per_decade must be at least 1".into(),
            ));
        }
        Ok(GridSpec {
            t_min,
            t_max,
            points_per_decade,
        })
    }

    /// Number of grid points (at least 2; endpoints always included).
    pub fn len(&self) -> usize {
        let decades = (self.t_max / self.t_min).log10();
        ((decades * self.points_per_decade as f64).ceil() as usize).max(1) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The grid points, uniform in log t, endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let n = self.len();
        let ln_lo = self.t_min.ln();
        let ln_hi = self.t_max.ln();
        let step = (ln_hi - ln_lo) / (n - 1) as f64;
        let mut pts = Vec::with_capacity(n);
        pts.push(self.t_min);
        for i in 1..n - 1 {
            pts.push((ln_lo + i as f64 * step).exp());
        }
        pts.push(self.t_max);
        pts
    }
}

/// Radial grid in the unit disc approaching r = 1, with an angular resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscGrid {
    /// Strictly increasing radii in (0, 1).
    pub radii: Vec<f64>,
    /// Base angular sample count per circle (quadratures may refine further).
    pub n_theta: usize,
}

impl DiscGrid {
    /// Dyadic approach r_j = 1 − 2^{−j}, j = 1..=j_max.
    pub fn dyadic(j_max: u32, n_theta: usize) -> Result<Self> {
        if j_max == 0 {
            return Err(QpoError::Parameter("dyadic grid needs j_max ≥ 1".into()));
        }
        let radii = (1..=j_max).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect();
        Self::from_radii(radii, n_theta)
    }

    /// Radii with 1 − r log-uniform from `eps_max` down to `eps_min`.
    pub fn geometric(
        eps_max: f64,
        eps_min: f64,
        points_per_decade: usize,
        n_theta: usize,
    ) -> Result<Self> {
        if !(0.0 < eps_min && eps_min < eps_max && eps_max < 1.0) {
            return Err(QpoError::Parameter(format!(
                "need 0 < eps_min < eps_max < 1, got ({eps_min}, {eps_max})"
            )));
        }
        let spec = GridSpec::new(eps_min, eps_max, points_per_decade)?;
        let mut radii: Vec<f64> = spec.points().iter().map(|eps| 1.0 - eps).collect();
        radii.reverse();
        Self::from_radii(radii, n_theta)
    }

    pub fn from_radii(radii: Vec<f64>, n_theta: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(QpoError::Parameter("radial grid is empty".into()));
        }
        if n_theta < 64 {
            return Err(QpoError::Parameter(format!(
                "angular resolution must be ≥ 64, got {n_theta}"
            )));
        }
        for w in radii.windows(2) {
            if w[1] <= w[0] {
                return Err(QpoError::Parameter(
                    "radii must be strictly increasing".into(),
                ));
            }
        }
        if radii[0] <= 0.0 || *radii.last().unwrap() >= 1.0 {
            return Err(QpoError::Parameter("radii must lie in (0, 1)".into()));
        }
        Ok(DiscGrid { radii, n_theta })
    }
}

/// One tail window: the running extrema of the sampled values accumulated from
/// the start of the grid up to `x_end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowStat {
    pub x_end: f64,
    pub running_sup: f64,
    pub running_inf: f64,
}

/// Running extrema of a sampled sequence plus its tail-window report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremaReport {
    pub sup: f64,
    pub inf: f64,
    /// Abscissa where the supremum was first attained.
    pub arg_sup: f64,
    /// Abscissa where the infimum was first attained.
    pub arg_inf: f64,
    pub windows: Vec<WindowStat>,
}

/// Running sup/inf of `ys` against increasing abscissas `xs`, reported at the
/// ends of `n_windows` equal windows spanning the tail half of the x-range.
pub fn running_extrema(xs: &[f64], ys: &[f64], n_windows: usize) -> Result<ExtremaReport> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(QpoError::Parameter(format!(
            "running_extrema needs matching samples with ≥ 2 points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if n_windows == 0 {
        return Err(QpoError::Parameter("window count must be ≥ 1".into()));
    }
    let x_first = xs[0];
    let x_last = *xs.last().unwrap();
    let tail_start = 0.5 * (x_first + x_last);
    let width = (x_last - tail_start) / n_windows as f64;

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut arg_sup = x_first;
    let mut arg_inf = x_first;
    let mut windows = Vec::with_capacity(n_windows);
    let mut next_window = 0usize;

    for (&x, &y) in xs.iter().zip(ys) {
        if y > sup {
            sup = y;
            arg_sup = x;
        }
        if y < inf {
            inf = y;
            arg_inf = x;
        }
        while next_window < n_windows && x >= tail_start + (next_window + 1) as f64 * width - 1e-12
        {
            windows.push(WindowStat {
                x_end: tail_start + (next_window + 1) as f64 * width,
                running_sup: sup,
                running_inf: inf,
            });
            next_window += 1;
        }
    }
    // The last sample closes the final window even under floating drift.
    while next_window < n_windows {
        windows.push(WindowStat {
            x_end: tail_start + (next_window + 1) as f64 * width,
            running_sup: sup,
            running_inf: inf,
        });
        next_window += 1;
    }

    Ok(ExtremaReport {
        sup,
        inf,
        arg_sup,
        arg_inf,
        windows,
    })
}

/// Least-squares slope of y against x over all supplied samples.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(QpoError::Parameter(
            "slope fit needs at least two matching samples".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return Err(QpoError::Parameter(
            "slope fit needs non-degenerate abscissas".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// Per-window least-squares slope over the tail half of the x-range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSlope {
    pub x_start: f64,
    pub x_end: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub max_slope: f64,
    pub min_slope: f64,
    pub windows: Vec<WindowSlope>,
}

/// Windowed least-squares slopes of y against x: the tail half of the x-range
/// is split into `n_windows` equal pieces and each window with at least two
/// samples contributes a slope. Extremal slopes estimate limsup/liminf of the
/// local growth rate with additive constants cancelled.
pub fn tail_window_slopes(xs: &[f64], ys: &[f64], n_windows: usize) -> Result<SlopeReport> {
    if xs.len() != ys.len() || xs.len() < 4 {
        return Err(QpoError::Parameter(
            "windowed slope fit needs at least four matching samples".into(),
        ));
    }
    if n_windows == 0 {
        return Err(QpoError::Parameter("window count must be ≥ 1".into()));
    }
    let x_first = xs[0];
    let x_last = *xs.last().unwrap();
    let tail_start = 0.5 * (x_first + x_last);
    let width = (x_last - tail_start) / n_windows as f64;

    let mut windows = Vec::new();
    for w in 0..n_windows {
        let lo = tail_start + w as f64 * width;
        let hi = lo + width;
        let mut wx = Vec::new();
        let mut wy = Vec::new();
        for (&x, &y) in xs.iter().zip(ys) {
            if x >= lo - 1e-12 && x <= hi + 1e-12 {
                wx.push(x);
                wy.push(y);
            }
        }
        if wx.len() >= 2 && wx.last().unwrap() > &wx[0] {
            windows.push(WindowSlope {
                x_start: lo,
                x_end: hi,
                slope: least_squares_slope(&wx, &wy)?,
            });
        }
    }
    if windows.is_empty() {
        return Err(QpoError::Parameter(
            "no tail window contains two samples; densify the grid".into(),
        ));
    }
    let max_slope = windows.iter().map(|w| w.slope).fold(f64::NEG_INFINITY, f64::max);
    let min_slope = windows.iter().map(|w| w.slope).fold(f64::INFINITY, f64::min);
    Ok(SlopeReport {
        max_slope,
        min_slope,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact_and_log_uniform() {
        let g = GridSpec::new(std::f64::consts::E, 1e8, 200).unwrap();
        let pts = g.points();
        assert_eq!(pts[0], std::f64::consts::E);
        assert_eq!(*pts.last().unwrap(), 1e8);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        // log-uniform: ratios constant
        let r0 = pts[1] / pts[0];
        for w in pts.windows(2).take(50) {
            assert!((w[1] / w[0] / r0 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_density_matches_decades() {
        let g = GridSpec::new(1.0, 1e3, 100).unwrap();
        assert_eq!(g.len(), 301);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(GridSpec::new(-1.0, 10.0, 10).is_err());
        assert!(GridSpec::new(10.0, 1.0, 10).is_err());
        assert!(GridSpec::new(1.0, 10.0, 0).is_err());
    }

    #[test]
    fn dyadic_disc_grid() {
        let g = DiscGrid::dyadic(4, 64).unwrap();
        assert_eq!(g.radii, vec![0.5, 0.75, 0.875, 0.9375]);
        assert!(DiscGrid::dyadic(4, 32).is_err());
    }

    #[test]
    fn running_extrema_reports_global_bounds_at_final_window() {
        // y dips to 0 early and peaks at 5 early; tail is flat at 2.
        let xs: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                if x == 3.0 {
                    0.0
                } else if x == 7.0 {
                    5.0
                } else {
                    2.0
                }
            })
            .collect();
        let rep = running_extrema(&xs, &ys, 32).unwrap();
        assert_eq!(rep.sup, 5.0);
        assert_eq!(rep.inf, 0.0);
        assert_eq!(rep.arg_sup, 7.0);
        assert_eq!(rep.arg_inf, 3.0);
        assert_eq!(rep.windows.len(), 32);
        let last = rep.windows.last().unwrap();
        assert_eq!(last.running_sup, 5.0);
        assert_eq!(last.running_inf, 0.0);
        // windows only cover the tail half
        assert!(rep.windows[0].x_end > 99.0);
    }

    #[test]
    fn least_squares_slope_exact_on_line() {
        let xs: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x - 2.0).collect();
        let s = least_squares_slope(&xs, &ys).unwrap();
        assert!((s - 3.5).abs() < 1e-12);
    }

    #[test]
    fn tail_window_slopes_bracket_oscillating_slope() {
        // y = 2x + sin(x): local slope oscillates in [1, 3].
        let xs: Vec<f64> = (0..4000).map(|i| 0.01 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x + x.sin()).collect();
        let rep = tail_window_slopes(&xs, &ys, 16).unwrap();
        assert!(rep.max_slope > 2.0 && rep.max_slope < 3.2);
        assert!(rep.min_slope < 2.0 && rep.min_slope > 0.8);
    }
}
