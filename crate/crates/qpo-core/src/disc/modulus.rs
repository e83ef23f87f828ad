//! Maximum modulus on circles and the growth orders derived from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::model::AnalyticFunctionModel;
use crate::grid::DiscGrid;
use crate::{QpoError, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;
const GOLDEN_RATIO_CONJ: f64 = 0.618_033_988_749_894_9;

/// Maximum of |f| over a circle, carried in log form (`value` is exp of it
/// and saturates to +∞ when out of f64 range).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxModulus {
    pub log_value: f64,
    pub value: f64,
    /// Angle where the maximum was located.
    pub theta: f64,
    pub n_samples: usize,
}

/// Max of |f(re^{iθ})| over a uniform angular grid of `n_theta` points,
/// refined by golden-section search around the best grid cell. Deterministic;
/// the returned `value` overflows to +∞ gracefully while `log_value` stays
/// exact.
pub fn max_modulus(
    f: &AnalyticFunctionModel,
    r: f64,
    n_theta: usize,
) -> Result<MaxModulus> {
    if n_theta < 64 {
        return Err(QpoError::Parameter(format!(
            "angular grid needs ≥ 64 points, got {n_theta}"
        )));
    }
    if !(0.0 <= r && r <= f.r_max) {
        return Err(QpoError::Domain(format!(
            "circle radius {r} outside [0, {}]",
            f.r_max
        )));
    }
    if r == 0.0 {
        return Ok(MaxModulus {
            log_value: f.origin_log_modulus,
            value: f.origin_log_modulus.exp(),
            theta: 0.0,
            n_samples: 1,
        });
    }
    let g = |theta: f64| -> Result<f64> {
        f.log_modulus(Complex64::from_polar(r, theta))
    };
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n_theta {
        let v = g(i as f64 / n_theta as f64 * TAU)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    // Golden-section refinement on the two cells adjacent to the best sample.
    let step = TAU / n_theta as f64;
    let mut a = (best_i as f64 - 1.0) * step;
    let mut b = (best_i as f64 + 1.0) * step;
    let mut x1 = b - GOLDEN_RATIO_CONJ * (b - a);
    let mut x2 = a + GOLDEN_RATIO_CONJ * (b - a);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    for _ in 0..80 {
        if b - a < 1e-13 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_RATIO_CONJ * (b - a);
            f2 = g(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_RATIO_CONJ * (b - a);
            f1 = g(x1)?;
        }
    }
    let (log_value, theta) = if f1 >= best.max(f2) {
        (f1, x1)
    } else if f2 >= best {
        (f2, x2)
    } else {
        (best, best_i as f64 * step)
    };
    Ok(MaxModulus {
        log_value,
        value: log_value.exp(),
        theta: theta.rem_euclid(TAU),
        n_samples: n_theta,
    })
}

/// Tail-window estimates of the growth orders of an analytic function in the
/// disc: limsup and liminf of log⁺log⁺M(r,f) / log(1/(1−r)) as r → 1⁻,
/// surrogated by the extrema of the ratio over the tail half of the sampled
/// log(1/(1−r)) range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscOrders {
    pub sigma_m: f64,
    pub lambda_m: f64,
    /// log(1/(1−r)) range of the samples that entered the tail extrema.
    pub tail_range: (f64, f64),
    /// Per-radius rows (r, log M(r), ratio) for export.
    pub samples: Vec<(f64, f64, f64)>,
}

/// Growth orders from max-modulus samples along a radial grid.
pub fn disc_orders(f: &AnalyticFunctionModel, grid: &DiscGrid) -> Result<DiscOrders> {
    let mut samples = Vec::new();
    for &r in &grid.radii {
        if r > f.r_max {
            break;
        }
        let m = max_modulus(f, r, grid.n_theta)?;
        let x = -(1.0 - r).ln();
        let log_plus_m = m.log_value.max(0.0);
        let y = if log_plus_m > 0.0 {
            log_plus_m.ln().max(0.0)
        } else {
            0.0
        };
        samples.push((r, m.log_value, if x > 0.0 { y / x } else { 0.0 }));
    }
    if samples.len() < 4 {
        return Err(QpoError::Config(format!(
            "order estimation needs ≥ 4 usable radii, got {}",
            samples.len()
        )));
    }
    let xs: Vec<f64> = samples.iter().map(|&(r, _, _)| -(1.0 - r).ln()).collect();
    let x_mid = 0.5 * (xs[0] + xs[xs.len() - 1]);
    let mut sigma_m = f64::NEG_INFINITY;
    let mut lambda_m = f64::INFINITY;
    for (i, &(_, _, ratio)) in samples.iter().enumerate() {
        if xs[i] >= x_mid {
            sigma_m = sigma_m.max(ratio);
            lambda_m = lambda_m.min(ratio);
        }
    }
    Ok(DiscOrders {
        sigma_m,
        lambda_m,
        tail_range: (x_mid, xs[xs.len() - 1]),
        samples,
    })
}
