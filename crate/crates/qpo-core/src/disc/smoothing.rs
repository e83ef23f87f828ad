//! Weighted radial smoothing of log⁺M: the integral transform that converts
//! pointwise maximum-modulus growth into the averaged quantity controlling
//! zero counts.

use num_complex::Complex64;

use crate::disc::model::AnalyticFunctionModel;
use crate::disc::modulus::max_modulus;
use crate::{QpoError, Result};

/// (1−R)^{−1/α} · ( ∫₀^R log⁺M(t,f)·(R−t)^{1/α−1} dt + log⁺M(R0,f) ).
///
/// The integrand vanishes at t = R with a fractional power (1/α−1 ∈ (0,1]),
/// so the integral is computed in the variable u = R−t where the adaptive
/// rule can subdivide toward the endpoint. `n_theta` controls the angular
/// resolution of each max-modulus evaluation.
pub fn smoothing_integral_i_alpha(
    f: &AnalyticFunctionModel,
    r_outer: f64,
    alpha: f64,
    r0: f64,
    n_theta: usize,
) -> Result<f64> {
    if !(0.5 <= alpha && alpha < 1.0) {
        return Err(QpoError::Parameter(format!(
            "smoothing exponent needs 1/2 ≤ α < 1, got {alpha}"
        )));
    }
    if !(0.0 <= r0 && r0 < r_outer && r_outer < 1.0) {
        return Err(QpoError::Parameter(format!(
            "smoothing radii need 0 ≤ R0 < R < 1, got (R0, R) = ({r0}, {r_outer})"
        )));
    }
    if r_outer > f.r_max {
        return Err(QpoError::Domain(format!(
            "R = {r_outer} exceeds the declared evaluation radius {}",
            f.r_max
        )));
    }
    let beta = 1.0 / alpha - 1.0;
    let log_plus_m = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(f.origin_log_modulus.max(0.0));
        }
        Ok(max_modulus(f, t, n_theta)?.log_value.max(0.0))
    };
    // Scale-aware absolute tolerance: the integral is bounded by
    // log⁺M(R) · R^{β+1}/(β+1).
    let m_top = log_plus_m(r_outer)?;
    let scale = (m_top * r_outer.powf(beta + 1.0) / (beta + 1.0)).max(1.0);
    let mut integrand_err: Option<QpoError> = None;
    let integral = crate::quad::adaptive_simpson(
        |u| match log_plus_m(r_outer - u) {
            Ok(v) => v * u.powf(beta),
            Err(e) => {
                integrand_err = Some(e);
                f64::NAN
            }
        },
        0.0,
        r_outer,
        1e-10 * scale,
        44,
    );
    if let Some(e) = integrand_err {
        return Err(e);
    }
    let integral = integral?;
    let boundary_term = log_plus_m(r0)?;
    Ok((1.0 - r_outer).powf(-1.0 / alpha) * (integral + boundary_term))
}

/// Convenience wrapper evaluating log⁺M directly from a closed-form radial
/// profile instead of a model (used to cross-check the quadrature).
pub fn smoothing_integral_from_profile<F: FnMut(f64) -> f64>(
    mut log_plus_m: F,
    r_outer: f64,
    alpha: f64,
    r0: f64,
) -> Result<f64> {
    if !(0.5 <= alpha && alpha < 1.0) {
        return Err(QpoError::Parameter(format!(
            "smoothing exponent needs 1/2 ≤ α < 1, got {alpha}"
        )));
    }
    if !(0.0 <= r0 && r0 < r_outer && r_outer < 1.0) {
        return Err(QpoError::Parameter(format!(
            "smoothing radii need 0 ≤ R0 < R < 1, got (R0, R) = ({r0}, {r_outer})"
        )));
    }
    let beta = 1.0 / alpha - 1.0;
    let scale = (log_plus_m(r_outer).max(1.0) * r_outer.powf(beta + 1.0) / (beta + 1.0)).max(1.0);
    let integral = crate::quad::adaptive_simpson(
        |u| log_plus_m(r_outer - u).max(0.0) * u.powf(beta),
        0.0,
        r_outer,
        1e-10 * scale,
        44,
    )?;
    Ok((1.0 - r_outer).powf(-1.0 / alpha) * (integral + log_plus_m(r0).max(0.0)))
}

/// Real-part circle maximum: max over the sampled circle of Re f(re^{iθ}),
/// golden-refined like max_modulus. Needed by growth-from-real-part
/// experiments where |f| alone is not enough.
pub fn max_real_part(f: &AnalyticFunctionModel, r: f64, n_theta: usize) -> Result<(f64, f64)> {
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
    let tau = 2.0 * std::f64::consts::PI;
    let g = |theta: f64| -> Result<f64> {
        Ok(f.eval(Complex64::from_polar(r, theta))?.re)
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    for i in 0..n_theta {
        let v = g(i as f64 / n_theta as f64 * tau)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let step = tau / n_theta as f64;
    let (mut a, mut b) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    let gr = 0.618_033_988_749_894_9;
    let (mut x1, mut x2) = (b - gr * (b - a), a + gr * (b - a));
    let (mut f1, mut f2) = (g(x1)?, g(x2)?);
    for _ in 0..80 {
        if b - a < 1e-13 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = g(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = g(x1)?;
        }
    }
    let (v, th) = if f1 >= best.max(f2) {
        (f1, x1)
    } else if f2 >= best {
        (f2, x2)
    } else {
        (best, best_i as f64 * step)
    };
    Ok((v, th.rem_euclid(tau)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::model::ClosedForm;

    #[test]
    fn constant_one_gives_zero() {
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::Constant { re: 1.0, im: 0.0 },
            0.99,
        )
        .unwrap();
        let v = smoothing_integral_i_alpha(&f, 0.75, 0.5, 0.0, 64).unwrap();
        assert!(v.abs() < 1e-9, "I = {v}");
    }

    #[test]
    fn constant_e_closed_form_value() {
        // log⁺M ≡ 1, α = 1/2, R = 3/4, R0 = 0:
        // (1−R)^{−2}·(∫₀^R (R−t) dt + 1) = 16·(9/32 + 1) = 20.5.
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::Constant {
                re: std::f64::consts::E,
                im: 0.0,
            },
            0.99,
        )
        .unwrap();
        let v = smoothing_integral_i_alpha(&f, 0.75, 0.5, 0.0, 64).unwrap();
        assert!((v - 20.5).abs() < 1e-7, "I = {v}");
    }

    #[test]
    fn profile_wrapper_matches_model_path() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 1.0 }, 0.999)
            .unwrap();
        let a = smoothing_integral_i_alpha(&f, 0.8, 0.6, 0.1, 64).unwrap();
        let b = smoothing_integral_from_profile(|t| 1.0 / (1.0 - t), 0.8, 0.6, 0.1).unwrap();
        assert!((a - b).abs() / b < 1e-6, "model {a} vs profile {b}");
    }

    #[test]
    fn monotone_in_outer_radius() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 1.0 }, 0.999)
            .unwrap();
        let mut prev = 0.0;
        for &r in &[0.5, 0.6, 0.7, 0.8, 0.9] {
            let v = smoothing_integral_i_alpha(&f, r, 0.5, 0.0, 64).unwrap();
            assert!(v > prev, "I({r}) = {v} not above {prev}");
            prev = v;
        }
    }

    #[test]
    fn parameter_validation() {
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::Constant { re: 1.0, im: 0.0 },
            0.99,
        )
        .unwrap();
        assert!(smoothing_integral_i_alpha(&f, 0.75, 0.4, 0.0, 64).is_err());
        assert!(smoothing_integral_i_alpha(&f, 0.75, 1.0, 0.0, 64).is_err());
        assert!(smoothing_integral_i_alpha(&f, 0.75, 0.5, 0.8, 64).is_err());
    }

    #[test]
    fn real_part_maximum_of_mobius_exponential() {
        // Re exp((1+z)/(1−z)) at θ = 0 equals exp((1+r)/(1−r)); that is the max.
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpMobius, 0.9).unwrap();
        let (v, th) = max_real_part(&f, 0.5, 64).unwrap();
        let expect = (1.5f64 / 0.5).exp();
        assert!((v - expect).abs() < 1e-9, "max Re = {v}, expect {expect}");
        let tau = 2.0 * std::f64::consts::PI;
        assert!(th.min(tau - th) < 1e-6);
    }
}
