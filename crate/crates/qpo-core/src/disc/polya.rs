//! Doubling-scale order of non-decreasing functions and the log-averaged
//! transform ψ̃. The order ρ* is the threshold exponent at which scaled
//! ratios ψ(Cx)/(C^ρ ψ(x)) stop being able to diverge; it exists (finitely)
//! exactly when ψ has bounded doubling ψ(2t) ≲ ψ(t).

use crate::{QpoError, Result};

/// Divergence threshold for scaled ratios: a ratio above this counts as
/// "can be made arbitrarily large" at desk scale.
pub const DIVERGENCE_THRESHOLD: f64 = 1e3;

/// Doubling-ratio bound above which ψ is treated as failing the doubling
/// condition, making the order +∞.
pub const DOUBLING_LIMIT: f64 = 1e6;

/// Result of a doubling-scale order estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleOrder {
    /// Estimated order (+∞ when the doubling check fails).
    pub rho_star: f64,
    /// Largest sampled doubling ratio ψ(2t)/ψ(t).
    pub max_doubling_ratio: f64,
}

/// Order estimate for a positive non-decreasing sampler on [1, x_max]:
/// ρ̂* = sup of the exponents ρ (bisected to 0.01) at which some tested pair
/// (C, x) with C·x ≤ x_max pushes ψ(Cx)/(C^ρ·ψ(x)) above the divergence
/// threshold. Scale factors C must exceed 1; pairs exceeding x_max are
/// skipped. Fails the doubling check → ρ̂* = +∞.
pub fn polya_order<F: Fn(f64) -> f64>(
    psi: F,
    x_max: f64,
    c_list: &[f64],
    x_list: &[f64],
) -> Result<ScaleOrder> {
    if c_list.is_empty() || x_list.is_empty() {
        return Err(QpoError::Parameter("scale order needs non-empty grids".into()));
    }
    if c_list.iter().any(|&c| !(c > 1.0) || !c.is_finite()) {
        return Err(QpoError::Parameter(
            "scale factors must be finite and exceed 1".into(),
        ));
    }
    if x_list.iter().any(|&x| !(x >= 1.0) || x > x_max) {
        return Err(QpoError::Parameter(format!(
            "sample points must lie in [1, x_max = {x_max}]"
        )));
    }
    // Sampler sanity: positive, non-decreasing along the sorted samples.
    let mut sorted = x_list.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut prev = 0.0;
    for &x in &sorted {
        let v = psi(x);
        if !(v > 0.0) || !v.is_finite() {
            return Err(QpoError::Parameter(format!(
                "sampler must be positive and finite, ψ({x}) = {v}"
            )));
        }
        if v < prev * (1.0 - 1e-9) {
            return Err(QpoError::Parameter(format!(
                "sampler must be non-decreasing, decrease found at x = {x}"
            )));
        }
        prev = v;
    }
    // Doubling check on the sample points.
    let mut max_doubling_ratio = 0.0f64;
    for &x in &sorted {
        if 2.0 * x <= x_max {
            max_doubling_ratio = max_doubling_ratio.max(psi(2.0 * x) / psi(x));
        }
    }
    if max_doubling_ratio > DOUBLING_LIMIT {
        return Ok(ScaleOrder {
            rho_star: f64::INFINITY,
            max_doubling_ratio,
        });
    }
    // Largest log-ratio over tested pairs at exponent ρ: the maximum of
    // log ψ(Cx) − log ψ(x) − ρ log C is monotone decreasing in ρ, so a
    // bisection over ρ locates the divergence threshold.
    let pairs: Vec<(f64, f64, f64)> = {
        let mut v = Vec::new();
        for &c in c_list {
            for &x in x_list {
                if c * x <= x_max {
                    let lr = psi(c * x).ln() - psi(x).ln();
                    v.push((c.ln(), lr, x));
                }
            }
        }
        v
    };
    if pairs.is_empty() {
        return Err(QpoError::Parameter(
            "no (C, x) pair satisfies C·x ≤ x_max".into(),
        ));
    }
    let diverges = |rho: f64| -> bool {
        pairs
            .iter()
            .any(|&(ln_c, lr, _)| lr - rho * ln_c > DIVERGENCE_THRESHOLD.ln())
    };
    let mut lo = -8.0;
    let mut hi = 24.0;
    if !diverges(lo) {
        // Not even strongly negative exponents diverge: ψ is flat at the
        // sampled resolution; report the bracket floor.
        return Ok(ScaleOrder {
            rho_star: lo,
            max_doubling_ratio,
        });
    }
    if diverges(hi) {
        return Ok(ScaleOrder {
            rho_star: f64::INFINITY,
            max_doubling_ratio,
        });
    }
    while hi - lo > 0.01 {
        let mid = 0.5 * (lo + hi);
        if diverges(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ScaleOrder {
        rho_star: 0.5 * (lo + hi),
        max_doubling_ratio,
    })
}

/// Log-uniform grids for the scale-order estimate: scale factors C from 10⁴
/// to 10^{c_decades} and sample points x from 1 to x_top, both log-spaced.
pub fn default_scale_grids(x_top: f64, c_decades: u32) -> (Vec<f64>, Vec<f64>) {
    let c_decades = c_decades.max(5);
    let c_list: Vec<f64> = (1..=20)
        .map(|k| 10f64.powf(4.0 + (c_decades as f64 - 4.0) * k as f64 / 20.0))
        .collect();
    let n = 40;
    let x_list: Vec<f64> = (0..n)
        .map(|k| 10f64.powf(x_top.log10() * k as f64 / (n - 1) as f64))
        .collect();
    (c_list, x_list)
}

/// ψ̃(t) = ∫₁^t ψ(x)/x dx, computed as ∫₀^{ln t} ψ(e^u) du so the adaptive
/// rule works on a well-conditioned interval.
pub fn psi_tilde<F: Fn(f64) -> f64>(psi: F, t: f64) -> Result<f64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(QpoError::Parameter(format!(
            "log-averaged transform needs t ≥ 1, got {t}"
        )));
    }
    if t == 1.0 {
        return Ok(0.0);
    }
    let ln_t = t.ln();
    // Scale-aware absolute tolerance relative to a crude integral bound.
    let scale = (psi(t).abs().max(psi(1.0).abs()) * ln_t).max(1.0);
    crate::quad::adaptive_simpson(|u| psi(u.exp()), 0.0, ln_t, 1e-12 * scale, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_growth_has_order_two() {
        let (c_list, x_list) = default_scale_grids(1e10, 120);
        let est = polya_order(|x| x * x, 1e150, &c_list, &x_list).unwrap();
        assert!(
            (est.rho_star - 2.0).abs() < 0.05,
            "rho_star = {}",
            est.rho_star
        );
    }

    #[test]
    fn logarithmic_growth_has_order_zero() {
        let (c_list, x_list) = default_scale_grids(1e10, 120);
        let est = polya_order(|x| (1.0 + x).ln(), 1e150, &c_list, &x_list).unwrap();
        assert!(est.rho_star.abs() < 0.05, "rho_star = {}", est.rho_star);
    }

    #[test]
    fn exponential_growth_fails_doubling() {
        let x_list: Vec<f64> = (0..40).map(|k| 1.0 + k as f64 * 10.0).collect();
        let c_list = vec![10.0, 100.0];
        let est = polya_order(|x| x.exp(), 1e3, &c_list, &x_list).unwrap();
        assert!(est.rho_star.is_infinite());
        assert!(est.max_doubling_ratio > DOUBLING_LIMIT);
    }

    #[test]
    fn rejects_bad_samplers() {
        let (c_list, x_list) = default_scale_grids(1e6, 20);
        // negative values
        assert!(polya_order(|x| x - 2.0, 1e30, &c_list, &x_list).is_err());
        // decreasing
        assert!(polya_order(|x| 1.0 / x, 1e30, &c_list, &x_list).is_err());
        // bad scale factors
        assert!(polya_order(|x| x, 1e30, &[0.5], &x_list).is_err());
    }

    #[test]
    fn log_average_closed_forms() {
        // ψ ≡ 1 → log t
        let v = psi_tilde(|_| 1.0, 100.0).unwrap();
        assert!((v - 100f64.ln()).abs() < 1e-10);
        // ψ(x) = x → t − 1
        let v = psi_tilde(|x| x, 50.0).unwrap();
        assert!((v - 49.0).abs() < 1e-8);
        // ψ(x) = x^{3/2} → (t^{3/2} − 1)/1.5 to relative 1e−8
        let t: f64 = 10.0;
        let v = psi_tilde(|x: f64| x.powf(1.5), t).unwrap();
        let expect = (t.powf(1.5) - 1.0) / 1.5;
        assert!(
            ((v - expect) / expect).abs() < 1e-8,
            "v = {v}, expect = {expect}"
        );
        // t = 1 edge
        assert_eq!(psi_tilde(|x| x, 1.0).unwrap(), 0.0);
    }
}
