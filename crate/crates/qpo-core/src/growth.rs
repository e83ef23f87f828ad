//! Growth functions A(t): positive, non-decreasing records of how fast an
//! entire or analytic function grows, together with the growth index
//! d(t) = log⁺A(t)/log t, order/lower-order estimation, and the staircase
//! test function whose index oscillates between two prescribed exponents.

use serde::{Deserialize, Serialize};

use crate::grid::{running_extrema, GridSpec, WindowStat};
use crate::pchip::Pchip;
use crate::{QpoError, Result};

/// Threshold below which the growth index is undefined (log t must exceed 1).
pub const INDEX_DOMAIN_START: f64 = std::f64::consts::E;

/// Estimated order (limsup of d) and lower order (liminf of d) with the
/// tail-window trace used to produce them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub rho_hat: f64,
    pub lambda_hat: f64,
    /// Running sup/inf of d reported at window ends over the grid's tail half
    /// (`x_end` is a t value).
    pub window_report: Vec<WindowStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Kind {
    /// A(t) = coeff · t^exponent
    Power { coeff: f64, exponent: f64 },
    /// A(t) = value
    Constant { value: f64 },
    /// A(t) = t^(base + amp·sin(log log log t)); index oscillates in
    /// [base − amp, base + amp] ever more slowly.
    OscillatingPower { base: f64, amp: f64 },
    /// Tabulated knots interpolated monotonically in (log t, log A).
    Table {
        t_knots: Vec<f64>,
        a_values: Vec<f64>,
        interp: Pchip,
    },
    /// Staircase A(r) = r_n^rho on (r_n, r_{n+1} − w_n] with a linear ramp of
    /// width w_n = ramp_fraction·(r_{n+1} − r_n) up to r_{n+1}^rho, where
    /// r_{n+1} = r_n^{rho/lambda}, r_1 = 2.
    StepWithRamps {
        lambda: f64,
        rho: f64,
        ramp_fraction: f64,
        knots: Vec<f64>,
    },
}

/// A growth function on [domain_start, domain_end].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFunction {
    kind: Kind,
    domain_start: f64,
    domain_end: f64,
}

impl GrowthFunction {
    pub fn power(coeff: f64, exponent: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if coeff <= 0.0 || !coeff.is_finite() || !exponent.is_finite() || exponent < 0.0 {
            return Err(QpoError::Parameter(format!(
                "power growth needs coeff > 0 and exponent ≥ 0, got ({coeff}, {exponent})"
            )));
        }
        check_domain(t_min, t_max)?;
        Ok(GrowthFunction {
            kind: Kind::Power { coeff, exponent },
            domain_start: t_min,
            domain_end: t_max,
        })
    }

    pub fn constant(value: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if value <= 0.0 || !value.is_finite() {
            return Err(QpoError::Parameter(format!(
                "constant growth needs a positive value, got {value}"
            )));
        }
        check_domain(t_min, t_max)?;
        Ok(GrowthFunction {
            kind: Kind::Constant { value },
            domain_start: t_min,
            domain_end: t_max,
        })
    }

    /// Slowly oscillating exponent. The domain starts where the sine argument
    /// equals −π/2 (the exponent's minimum), which is also the first point
    /// after which A is non-decreasing.
    pub fn oscillating_power(base: f64, amp: f64, t_max: f64) -> Result<Self> {
        if !(amp >= 0.0 && base.is_finite() && amp.is_finite()) || base < 1.01 * amp || base <= 0.0
        {
            return Err(QpoError::Parameter(format!(
                "oscillating power needs base ≥ 1.01·amp > 0, got ({base}, {amp})"
            )));
        }
        let start = oscillating_domain_start();
        check_domain(start, t_max)?;
        Ok(GrowthFunction {
            kind: Kind::OscillatingPower { base, amp },
            domain_start: start,
            domain_end: t_max,
        })
    }

    /// Tabulated growth data; values must be positive and non-decreasing.
    pub fn table(t_knots: Vec<f64>, a_values: Vec<f64>) -> Result<Self> {
        if t_knots.len() != a_values.len() || t_knots.len() < 2 {
            return Err(QpoError::Parameter(
                "table growth needs ≥ 2 matching knots".into(),
            ));
        }
        if t_knots[0] <= 1.0 {
            return Err(QpoError::Parameter(
                "table knots must start above t = 1".into(),
            ));
        }
        for w in a_values.windows(2) {
            if w[1] < w[0] * (1.0 - 1e-12) {
                return Err(QpoError::Parameter(
                    "table values must be non-decreasing".into(),
                ));
            }
        }
        if a_values.iter().any(|&a| a <= 0.0) {
            return Err(QpoError::Parameter("table values must be positive".into()));
        }
        let ln_t: Vec<f64> = t_knots.iter().map(|t| t.ln()).collect();
        let ln_a: Vec<f64> = a_values.iter().map(|a| a.ln()).collect();
        let interp = Pchip::new(ln_t, ln_a)?;
        let domain_start = t_knots[0];
        let domain_end = *t_knots.last().unwrap();
        Ok(GrowthFunction {
            kind: Kind::Table {
                t_knots,
                a_values,
                interp,
            },
            domain_start,
            domain_end,
        })
    }

    /// The staircase test function: its growth index repeatedly climbs to rho
    /// (at the top of each ramp) and sags toward lambda (just before the next
    /// ramp), so its order and lower order differ by construction.
    pub fn build_counterexample(
        lambda: f64,
        rho: f64,
        ramp_fraction: f64,
        t_max: f64,
    ) -> Result<Self> {
        if !(lambda > 0.0 && lambda < rho && rho.is_finite()) {
            return Err(QpoError::Parameter(format!(
                "staircase growth needs 0 < lambda < rho, got ({lambda}, {rho})"
            )));
        }
        if !(ramp_fraction > 0.0 && ramp_fraction < 1.0) {
            return Err(QpoError::Parameter(format!(
                "ramp_fraction must lie in (0, 1), got {ramp_fraction}"
            )));
        }
        if !(t_max > 4.0) || !t_max.is_finite() {
            return Err(QpoError::Parameter(format!(
                "staircase domain end must exceed 4, got {t_max}"
            )));
        }
        let mut knots = vec![2.0f64];
        loop {
            let last = *knots.last().unwrap();
            if last > t_max || knots.len() >= 500 {
                break;
            }
            let next = last.powf(rho / lambda);
            if !next.is_finite() || next <= last {
                break;
            }
            knots.push(next);
        }
        Ok(GrowthFunction {
            kind: Kind::StepWithRamps {
                lambda,
                rho,
                ramp_fraction,
                knots,
            },
            domain_start: 2.0,
            domain_end: t_max,
        })
    }

    pub fn domain_start(&self) -> f64 {
        self.domain_start
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    /// Staircase knot sequence (empty for other kinds).
    pub fn knots(&self) -> &[f64] {
        match &self.kind {
            Kind::StepWithRamps { knots, .. } => knots,
            Kind::Table { t_knots, .. } => t_knots,
            _ => &[],
        }
    }

    /// Points where the function changes analytic piece (staircase knots and
    /// ramp feet, table knots). Scan grids are augmented with these so that
    /// level crossings and local maxima of the index are bracketed exactly.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match &self.kind {
            Kind::StepWithRamps {
                ramp_fraction,
                knots,
                ..
            } => {
                for w in knots.windows(2) {
                    let ramp_start = w[1] - ramp_fraction * (w[1] - w[0]);
                    out.push(w[0]);
                    out.push(ramp_start);
                }
                if let Some(&last) = knots.last() {
                    out.push(last);
                }
            }
            Kind::Table { t_knots, .. } => out.extend_from_slice(t_knots),
            _ => {}
        }
        out.retain(|&t| t >= self.domain_start && t <= self.domain_end);
        out
    }

    fn check_t(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(QpoError::Domain(format!("non-finite argument t = {t}")));
        }
        let slack = 1e-9;
        if t < self.domain_start * (1.0 - slack) || t > self.domain_end * (1.0 + slack) {
            return Err(QpoError::Domain(format!(
                "t = {t} outside domain [{}, {}]",
                self.domain_start, self.domain_end
            )));
        }
        Ok(t.clamp(self.domain_start, self.domain_end))
    }

    /// A(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        let t = self.check_t(t)?;
        Ok(match &self.kind {
            Kind::Power { coeff, exponent } => coeff * t.powf(*exponent),
            Kind::Constant { value } => *value,
            Kind::OscillatingPower { base, amp } => {
                t.powf(base + amp * t.ln().ln().ln().sin())
            }
            Kind::Table { interp, .. } => interp.eval(t.ln()).exp(),
            Kind::StepWithRamps {
                rho,
                ramp_fraction,
                knots,
                ..
            } => step_eval(knots, *rho, *ramp_fraction, t),
        })
    }

    /// log A(t), computed directly where a closed form exists.
    pub fn log_eval(&self, t: f64) -> Result<f64> {
        let t = self.check_t(t)?;
        Ok(match &self.kind {
            Kind::Power { coeff, exponent } => coeff.ln() + exponent * t.ln(),
            Kind::Constant { value } => value.ln(),
            Kind::OscillatingPower { base, amp } => {
                (base + amp * t.ln().ln().ln().sin()) * t.ln()
            }
            Kind::Table { interp, .. } => interp.eval(t.ln()),
            Kind::StepWithRamps {
                rho,
                ramp_fraction,
                knots,
                ..
            } => step_eval(knots, *rho, *ramp_fraction, t).ln(),
        })
    }

    /// Growth index d(t) = log⁺A(t) / log t, defined for t ≥ e.
    pub fn growth_index(&self, t: f64) -> Result<f64> {
        if !(t >= INDEX_DOMAIN_START) {
            return Err(QpoError::Domain(format!(
                "growth index needs t ≥ e ≈ 2.71828, got {t}"
            )));
        }
        let log_a = self.log_eval(t)?;
        Ok(log_a.max(0.0) / t.ln())
    }

    /// Tail-window estimates of order (limsup d) and lower order (liminf d).
    pub fn estimate_orders(&self, grid: &GridSpec) -> Result<OrderEstimate> {
        let lo = self.domain_start.max(INDEX_DOMAIN_START);
        let mut ln_xs = Vec::new();
        let mut ds = Vec::new();
        for t in grid.points() {
            if t < lo || t > self.domain_end {
                continue;
            }
            ln_xs.push(t.ln());
            ds.push(self.growth_index(t)?);
        }
        if ds.len() < 100 {
            return Err(QpoError::Config(format!(
                "order estimation needs ≥ 100 in-domain grid points, got {}",
                ds.len()
            )));
        }
        let rep = running_extrema(&ln_xs, &ds, 32)?;
        let window_report = rep
            .windows
            .iter()
            .map(|w| WindowStat {
                x_end: w.x_end.exp(),
                running_sup: w.running_sup,
                running_inf: w.running_inf,
            })
            .collect();
        Ok(OrderEstimate {
            rho_hat: rep.sup,
            lambda_hat: rep.inf,
            window_report,
        })
    }

    /// Serialize as {"kind", "params", "domain"}.
    pub fn to_spec_json(&self) -> serde_json::Value {
        let (kind, params) = match &self.kind {
            Kind::Power { coeff, exponent } => (
                "power",
                serde_json::json!({"coeff": coeff, "exponent": exponent}),
            ),
            Kind::Constant { value } => ("constant", serde_json::json!({ "value": value })),
            Kind::OscillatingPower { base, amp } => (
                "oscillating_power",
                serde_json::json!({"base": base, "amp": amp}),
            ),
            Kind::Table {
                t_knots, a_values, ..
            } => ("table", serde_json::json!({"t": t_knots, "a": a_values})),
            Kind::StepWithRamps {
                lambda,
                rho,
                ramp_fraction,
                ..
            } => (
                "step_with_ramps",
                serde_json::json!({
                    "lambda": lambda, "rho": rho, "ramp_fraction": ramp_fraction
                }),
            ),
        };
        serde_json::json!({
            "kind": kind,
            "params": params,
            "domain": [self.domain_start, self.domain_end],
        })
    }

    pub fn from_spec_json(v: &serde_json::Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| QpoError::Config("growth function JSON needs a 'kind'".into()))?;
        let domain = v
            .get("domain")
            .and_then(|d| d.as_array())
            .ok_or_else(|| QpoError::Config("growth function JSON needs 'domain': [t0, t1]".into()))?;
        if domain.len() != 2 {
            return Err(QpoError::Config("'domain' must have two entries".into()));
        }
        let t0 = domain[0].as_f64().ok_or_else(bad_domain)?;
        let t1 = domain[1].as_f64().ok_or_else(bad_domain)?;
        let params = v.get("params").cloned().unwrap_or(serde_json::json!({}));
        let num = |name: &str| -> Result<f64> {
            params
                .get(name)
                .and_then(|x| x.as_f64())
                .ok_or_else(|| QpoError::Config(format!("params.{name} missing or not a number")))
        };
        match kind {
            "power" => GrowthFunction::power(num("coeff")?, num("exponent")?, t0, t1),
            "constant" => GrowthFunction::constant(num("value")?, t0, t1),
            "oscillating_power" => GrowthFunction::oscillating_power(num("base")?, num("amp")?, t1),
            "table" => {
                let arr = |name: &str| -> Result<Vec<f64>> {
                    params
                        .get(name)
                        .and_then(|x| x.as_array())
                        .map(|a| a.iter().filter_map(|e| e.as_f64()).collect())
                        .ok_or_else(|| {
                            QpoError::Config(format!("params.{name} missing or not an array"))
                        })
                };
                GrowthFunction::table(arr("t")?, arr("a")?)
            }
            "step_with_ramps" => GrowthFunction::build_counterexample(
                num("lambda")?,
                num("rho")?,
                num("ramp_fraction")?,
                t1,
            ),
            other => Err(QpoError::Config(format!(
                "unknown growth function kind '{other}'"
            ))),
        }
    }
}

fn bad_domain() -> QpoError {
    QpoError::Config("'domain' entries must be numbers".into())
}

/// First admissible abscissa for the oscillating-power kind: the sine argument
/// log log log t equals −π/2 here.
pub fn oscillating_domain_start() -> f64 {
    (-std::f64::consts::FRAC_PI_2).exp().exp().exp()
}

fn check_domain(t_min: f64, t_max: f64) -> Result<()> {
    if !(t_min.is_finite() && t_max.is_finite() && t_min > 1.0 && t_max > t_min) {
        return Err(QpoError::Parameter(format!(
            "growth domain must satisfy 1 < t_min < t_max (finite), got [{t_min}, {t_max}]"
        )));
    }
    Ok(())
}

fn step_eval(knots: &[f64], rho: f64, ramp_fraction: f64, t: f64) -> f64 {
    // index of the last knot ≤ t
    let i = match knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) => i - 1,
    };
    if i + 1 >= knots.len() {
        return knots[i].powf(rho);
    }
    let (k0, k1) = (knots[i], knots[i + 1]);
    let ramp_start = k1 - ramp_fraction * (k1 - k0);
    if t <= ramp_start {
        k0.powf(rho)
    } else {
        let lo = k0.powf(rho);
        let hi = k1.powf(rho);
        lo + (t - ramp_start) / (k1 - ramp_start) * (hi - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn staircase_knot_sequence() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        let knots = a.knots();
        assert!(knots.len() >= 5);
        assert_eq!(&knots[..5], &[2.0, 4.0, 16.0, 256.0, 65536.0]);
        // one knot beyond the domain end keeps the last plateau defined
        assert!(*knots.last().unwrap() > 1e6);
    }

    #[test]
    fn staircase_plateau_and_ramp_values() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        assert_eq!(a.eval(3.0).unwrap(), 4.0);
        assert_eq!(a.eval(4.0).unwrap(), 16.0);
        assert_eq!(a.eval(256.0).unwrap(), 65536.0);
        // midpoint of the ramp before 4: ramp on [3.98, 4.0]
        let mid = a.eval(3.99).unwrap();
        assert!((mid - 10.0).abs() < 1e-9, "ramp midpoint {mid}");
    }

    #[test]
    fn staircase_two_sided_power_bound() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        let grid = GridSpec::new(2.0, 1e6, 10_000 / 6).unwrap();
        let mut checked = 0;
        for t in grid.points() {
            let v = a.eval(t).unwrap();
            assert!(v > t.powf(1.0) * (1.0 - 1e-12), "lower bound fails at {t}");
            assert!(v <= t.powf(2.0) * (1.0 + 1e-12), "upper bound fails at {t}");
            checked += 1;
        }
        assert!(checked >= 10_000 / 2);
    }

    #[test]
    fn staircase_monotone_on_grid() {
        let a = GrowthFunction::build_counterexample(0.3, 0.8, 0.01, 1e8).unwrap();
        let pts = GridSpec::new(2.0, 1e8, 400).unwrap().points();
        let mut prev = 0.0;
        for t in pts {
            let v = a.eval(t).unwrap();
            assert!(v >= prev * (1.0 - 1e-12));
            prev = v;
        }
    }

    #[test]
    fn staircase_rejects_bad_parameters() {
        assert!(GrowthFunction::build_counterexample(2.0, 1.0, 0.01, 1e6).is_err());
        assert!(GrowthFunction::build_counterexample(0.0, 1.0, 0.01, 1e6).is_err());
        assert!(GrowthFunction::build_counterexample(1.0, 2.0, 1.5, 1e6).is_err());
    }

    #[test]
    fn constant_table_evaluates() {
        let a = GrowthFunction::table(vec![E, E * E], vec![1.0, 1.0]).unwrap();
        assert!((a.eval(E).unwrap() - 1.0).abs() < 1e-14);
        assert!((a.eval(5.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn growth_index_basics() {
        let one = GrowthFunction::constant(1.0, 2.0, 1e6).unwrap();
        assert_eq!(one.growth_index(10.0).unwrap(), 0.0);

        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        assert!((a.growth_index(4.0).unwrap() - 2.0).abs() < 1e-14);

        let p = GrowthFunction::power(1.0, 1.5, 2.0, 1e9).unwrap();
        assert!((p.growth_index(E.powi(3)).unwrap() - 1.5).abs() < 1e-13);

        assert!(matches!(
            p.growth_index(2.0),
            Err(QpoError::Domain(_))
        ));
    }

    #[test]
    fn growth_index_of_power_is_exact_on_grid() {
        for c in [0.0, 0.7, 2.0, 3.25] {
            let p = GrowthFunction::power(1.0, c, 3.0, 1e10).unwrap();
            for t in GridSpec::new(3.0, 1e10, 37).unwrap().points() {
                let d = p.growth_index(t).unwrap();
                assert!((d - c).abs() < 1e-12, "c={c} t={t} d={d}");
            }
        }
    }

    #[test]
    fn eval_outside_domain_errors() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        assert!(matches!(a.eval(1.5), Err(QpoError::Domain(_))));
        assert!(matches!(a.eval(2e6), Err(QpoError::Domain(_))));
    }

    #[test]
    fn order_estimates_for_pure_power() {
        let p = GrowthFunction::power(1.0, 2.0, E, 1e8).unwrap();
        let grid = GridSpec::new(E, 1e8, 200).unwrap();
        let est = p.estimate_orders(&grid).unwrap();
        assert!((est.rho_hat - 2.0).abs() < 1e-9);
        assert!((est.lambda_hat - 2.0).abs() < 1e-9);
        assert_eq!(est.window_report.len(), 32);
        assert!(est.lambda_hat <= est.rho_hat);
    }

    #[test]
    fn order_estimates_for_staircase() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        let grid = GridSpec::new(E, 1e6, 200).unwrap();
        let est = a.estimate_orders(&grid).unwrap();
        assert!(
            est.rho_hat >= 1.9 && est.rho_hat <= 2.0,
            "rho_hat = {}",
            est.rho_hat
        );
        assert!(
            est.lambda_hat >= 1.0 && est.lambda_hat <= 1.1,
            "lambda_hat = {}",
            est.lambda_hat
        );
    }

    #[test]
    fn order_estimates_for_oscillating_power() {
        let a = GrowthFunction::oscillating_power(1.5, 0.5, 1e12).unwrap();
        // sanity: the domain starts where the sine bottoms out
        let t0 = a.domain_start();
        assert!((t0.ln().ln().ln() + std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let grid = GridSpec::new(t0, 1e12, 200).unwrap();
        let est = a.estimate_orders(&grid).unwrap();
        assert!((est.rho_hat - 2.0).abs() < 0.15, "rho_hat = {}", est.rho_hat);
        assert!(
            (est.lambda_hat - 1.0).abs() < 0.15,
            "lambda_hat = {}",
            est.lambda_hat
        );
    }

    #[test]
    fn order_estimation_requires_enough_points() {
        let p = GrowthFunction::power(1.0, 2.0, E, 1e8).unwrap();
        let grid = GridSpec::new(E, 1e8, 5).unwrap();
        assert!(matches!(
            p.estimate_orders(&grid),
            Err(QpoError::Config(_))
        ));
    }

    #[test]
    fn scale_consistency_of_order_estimates() {
        // replacing A by A^c multiplies the index, hence both estimates, by c
        let t: Vec<f64> = (0..40).map(|i| 3.0 * 1.6f64.powi(i)).collect();
        let a: Vec<f64> = t.iter().map(|x| x.powf(1.3) * (2.0 + x.ln().sin())).collect();
        let mut a_sorted = a.clone();
        for i in 1..a_sorted.len() {
            if a_sorted[i] < a_sorted[i - 1] {
                a_sorted[i] = a_sorted[i - 1];
            }
        }
        let c = 1.7;
        let a_pow: Vec<f64> = a_sorted.iter().map(|v| v.powf(c)).collect();
        let base = GrowthFunction::table(t.clone(), a_sorted).unwrap();
        let scaled = GrowthFunction::table(t, a_pow).unwrap();
        let grid = GridSpec::new(3.0, base.domain_end(), 40).unwrap();
        let e0 = base.estimate_orders(&grid).unwrap();
        let e1 = scaled.estimate_orders(&grid).unwrap();
        assert!((e1.rho_hat - c * e0.rho_hat).abs() < 1e-9);
        assert!((e1.lambda_hat - c * e0.lambda_hat).abs() < 1e-9);
    }

    #[test]
    fn spec_json_round_trip() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        let j = a.to_spec_json();
        assert_eq!(j["kind"], "step_with_ramps");
        let b = GrowthFunction::from_spec_json(&j).unwrap();
        assert_eq!(a, b);

        let p = GrowthFunction::power(2.0, 1.5, 3.0, 1e5).unwrap();
        let q = GrowthFunction::from_spec_json(&p.to_spec_json()).unwrap();
        assert_eq!(p, q);

        let t = GrowthFunction::table(vec![3.0, 9.0, 27.0], vec![1.0, 4.0, 9.0]).unwrap();
        let u = GrowthFunction::from_spec_json(&t.to_spec_json()).unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn breakpoints_cover_ramps() {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e6).unwrap();
        let bps = a.breakpoints();
        assert!(bps.contains(&4.0));
        assert!(bps.contains(&256.0));
        // ramp foot before 4: 4 − 0.01·2 = 3.98
        assert!(bps.iter().any(|&b| (b - 3.98).abs() < 1e-12));
    }
}
