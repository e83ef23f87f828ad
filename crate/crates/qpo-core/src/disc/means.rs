//! Integral means m_p(r, log|f|) on circles and the growth orders they induce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::model::AnalyticFunctionModel;
use crate::grid::{tail_window_slopes, DiscGrid};
use crate::{QpoError, Result};

/// Hard cap on angular sample counts for circle quadratures.
pub const MAX_CIRCLE_SAMPLES: usize = 1 << 20;

/// L^p mean of |log|f|| over the circle of radius r:
/// (1/2π ∫ |log|f(re^{iθ})||^p dθ)^{1/p}.
///
/// Trapezoid quadrature with sample doubling until the relative change falls
/// below 1e−6 (or the sample cap). A zero of f lying exactly on a sampled
/// point makes the integrand −∞; the radius is then perturbed inward by one
/// angular-step equivalent, (1−r)/n_theta, and the computation retried once.
pub fn integral_mean_p(
    f: &AnalyticFunctionModel,
    r: f64,
    p: f64,
    n_theta: usize,
) -> Result<f64> {
    Ok(integral_means(f, r, &[p], n_theta)?[0])
}

/// Joint means for several exponents p from one shared sample set (the
/// samples of log|f| on the circle are reused across all p).
pub fn integral_means(
    f: &AnalyticFunctionModel,
    r: f64,
    ps: &[f64],
    n_theta: usize,
) -> Result<Vec<f64>> {
    if ps.iter().any(|&p| !(p >= 1.0) || !p.is_finite()) {
        return Err(QpoError::Parameter(
            "integral means need finite exponents p ≥ 1".into(),
        ));
    }
    if !(0.0 < r && r <= f.r_max) {
        return Err(QpoError::Domain(format!(
            "circle radius {r} outside (0, {}]",
            f.r_max
        )));
    }
    if n_theta < 64 {
        return Err(QpoError::Parameter(format!(
            "angular grid needs ≥ 64 points, got {n_theta}"
        )));
    }
    match try_means(f, r, ps, n_theta) {
        Ok(v) => Ok(v),
        Err(QpoError::Singularity(_)) => {
            // A sampled point hit a zero of f: move the circle inward by one
            // angular-step equivalent and retry once.
            let r2 = r - (1.0 - r) / n_theta as f64;
            try_means(f, r2, ps, n_theta)
        }
        Err(e) => Err(e),
    }
}

fn try_means(
    f: &AnalyticFunctionModel,
    r: f64,
    ps: &[f64],
    n_theta: usize,
) -> Result<Vec<f64>> {
    let means = crate::quad::circle_abs_power_means(
        |theta| {
            f.log_modulus(Complex64::from_polar(r, theta))
                .unwrap_or(f64::NEG_INFINITY)
        },
        ps,
        1e-6,
        n_theta,
        MAX_CIRCLE_SAMPLES,
    )?;
    Ok(means
        .values
        .iter()
        .zip(ps)
        .map(|(&m, &p)| m.powf(1.0 / p))
        .collect())
}

/// Tail-window estimates of the integral-mean orders: limsup and liminf of
/// log⁺ m_p(r) / log(1/(1−r)) as r → 1⁻, surrogated by windowed least-squares
/// slopes of log m_p against log(1/(1−r)) over the tail half of the grid
/// (slopes cancel the constant offsets that make ratio estimators converge
/// slowly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanOrders {
    pub rho_p: f64,
    pub lambda_p: f64,
    /// Per-radius rows (r, m_p(r)) for export; the mean is stored directly.
    pub samples: Vec<(f64, f64)>,
}

/// Orders of the p-th integral mean along a radial grid.
pub fn mean_orders(f: &AnalyticFunctionModel, p: f64, grid: &DiscGrid) -> Result<MeanOrders> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut samples = Vec::new();
    for &r in &grid.radii {
        if r > f.r_max {
            break;
        }
        let m = integral_mean_p(f, r, p, grid.n_theta)?;
        samples.push((r, m));
        if m > 1.0 {
            xs.push(-(1.0 - r).ln());
            ys.push(m.ln());
        }
    }
    if xs.len() < 8 {
        return Err(QpoError::Config(format!(
            "mean-order estimation needs ≥ 8 radii with m_p > 1, got {}",
            xs.len()
        )));
    }
    let slopes = tail_window_slopes(&xs, &ys, 4)?;
    Ok(MeanOrders {
        rho_p: slopes.max_slope.max(0.0),
        lambda_p: slopes.min_slope.max(0.0),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::model::{ClosedForm, ZeroSequence};

    #[test]
    fn constant_e_has_unit_means() {
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::Constant {
                re: std::f64::consts::E,
                im: 0.0,
            },
            0.99,
        )
        .unwrap();
        for &p in &[1.0, 2.0, 4.0] {
            for &r in &[0.1, 0.5, 0.9] {
                let m = integral_mean_p(&f, r, p, 64).unwrap();
                assert!((m - 1.0).abs() < 1e-12, "m_{p}({r}) = {m}");
            }
        }
    }

    #[test]
    fn identity_function_means_are_log_two() {
        let f =
            AnalyticFunctionModel::closed_form(ClosedForm::Monomial { degree: 1 }, 0.99).unwrap();
        for &p in &[1.0, 2.0, 4.0] {
            let m = integral_mean_p(&f, 0.5, p, 64).unwrap();
            assert!((m - 2f64.ln()).abs() < 1e-12, "m_{p} = {m}");
        }
    }

    #[test]
    fn poisson_kernel_mean_is_one() {
        // log|exp((1+z)/(1−z))| is the Poisson kernel; its circle mean is 1.
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpMobius, 0.999).unwrap();
        let m = integral_mean_p(&f, 0.9, 1.0, 64).unwrap();
        assert!((m - 1.0).abs() < 1e-6, "m_1 = {m}");
    }

    #[test]
    fn means_increase_in_p() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 2.0 }, 0.999)
            .unwrap();
        for &r in &[0.5, 0.9, 0.99] {
            let ms = integral_means(&f, r, &[1.0, 2.0, 4.0], 256).unwrap();
            assert!(ms[0] <= ms[1] * (1.0 + 1e-9) && ms[1] <= ms[2] * (1.0 + 1e-9));
        }
    }

    #[test]
    fn zero_on_sampled_circle_retries_inward() {
        // Product with a zero exactly at 0.5 on the positive axis: θ = 0 is a
        // sampled point, so the first pass hits −∞ and the retry must land.
        let zeros = ZeroSequence::new(vec![Complex64::new(0.5, 0.0)]).unwrap();
        let f = AnalyticFunctionModel::product(zeros, 1, 0.999).unwrap();
        let m = integral_mean_p(&f, 0.5, 1.0, 64).unwrap();
        assert!(m.is_finite() && m > 0.0);
    }

    #[test]
    fn mean_orders_track_exponent_minus_inverse_p() {
        // For f = exp((1−z)^{−2}), log m_p grows like (2 − 1/p)·log(1/(1−r)).
        let grid = DiscGrid::geometric(0.5, 1e-3, 20, 256).unwrap();
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 2.0 }, 0.9999)
            .unwrap();
        for &(p, expect) in &[(1.0, 1.0), (2.0, 1.5), (4.0, 1.75)] {
            let mo = mean_orders(&f, p, &grid).unwrap();
            assert!(
                (mo.rho_p - expect).abs() < 0.1,
                "p = {p}: rho_p = {}, expected ≈ {expect}",
                mo.rho_p
            );
        }
    }
}
