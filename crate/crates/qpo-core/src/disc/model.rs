//! Function models on the unit disc.
//!
//! Every model evaluates in log form — `log_eval` returns (log-modulus,
//! argument) — so growth diagnostics stay inside f64 range even when |f|
//! reaches exp(10⁹). Plain complex evaluation is derived from the log form
//! and fails loudly on overflow instead of returning infinities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{QpoError, Result};

/// Proximity (in |z − a|) at which a model is considered to sit exactly on a
/// zero, where the log-modulus is −∞.
pub const ZERO_PROXIMITY: f64 = 1e-13;

/// One power-series term `c·zⁿ` stored as `log|c|` and `arg c`, so the series
/// can carry coefficients as large as exp(10⁸) and as small as exp(−10⁸).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub n: u64,
    pub log_abs: f64,
    pub phase: f64,
}

/// Closed-form test functions used throughout growth experiments. Each case
/// has a direct log-modulus formula; none requires evaluating exp first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClosedForm {
    /// f ≡ c.
    Constant { re: f64, im: f64 },
    /// f(z) = z^degree.
    Monomial { degree: u32 },
    /// f(z) = exp((1−z)^{−power}); unbounded order `power` at z → 1.
    ExpInvPower { power: f64 },
    /// f(z) = exp((1+z)/(1−z)); log|f| is the Poisson kernel scaled by (1−|z|²)…
    /// precisely Re((1+z)/(1−z)) = (1−|z|²)/|1−z|².
    ExpMobius,
    /// f(z) = (1−z)^{−power} − 1; vanishes at the origin, polynomial-type
    /// blow-up at z → 1 (used for bounded-order real-part experiments).
    InvPowerMinusOne { power: f64 },
}

/// How a model computes f(z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evaluator {
    /// Finite (possibly sparse) power series in log-coefficient form.
    PowerSeries { terms: Vec<SeriesTerm> },
    /// A named closed form.
    ClosedForm { form: ClosedForm },
    /// Product of primary factors over a zero sequence with the given genus.
    Product { zeros: ZeroSequence, genus: u32 },
}

/// Zeros a_k in the unit disc ordered by non-decreasing modulus, plus the
/// convergence exponent estimated from the stored prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSequence {
    points: Vec<Complex64>,
    /// Smallest μ̂ ≥ 0 (on a 0.01 grid) whose tail sums Σ(1−|a_k|)^{μ̂+1} look
    /// Cauchy on the stored prefix; 0 for short sequences.
    convergence_exponent_mu: f64,
}

impl ZeroSequence {
    /// Sorts by modulus, validates |a_k| < 1, estimates the convergence
    /// exponent from the stored prefix.
    pub fn new(mut points: Vec<Complex64>) -> Result<Self> {
        if points.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QpoError::Parameter("zero sequence has non-finite entries".into()));
        }
        if points.iter().any(|a| a.norm() >= 1.0) {
            return Err(QpoError::Parameter(
                "zero moduli must be strictly below 1".into(),
            ));
        }
        points.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        let convergence_exponent_mu = estimate_convergence_exponent(&points);
        Ok(ZeroSequence {
            points,
            convergence_exponent_mu,
        })
    }

    pub fn empty() -> Self {
        ZeroSequence {
            points: Vec::new(),
            convergence_exponent_mu: 0.0,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn convergence_exponent(&self) -> f64 {
        self.convergence_exponent_mu
    }

    /// Partial sum Σ(1−|a_k|)^{s+1} over the stored prefix together with the
    /// fraction contributed by the last half of the sequence (a Cauchy-style
    /// convergence instrument: near 0 means the prefix has stabilized).
    pub fn genus_sum(&self, s: u32) -> (f64, f64) {
        if self.points.is_empty() {
            return (0.0, 0.0);
        }
        let p = (s + 1) as f64;
        let mut total = 0.0;
        let mut tail = 0.0;
        let half = self.points.len() / 2;
        for (k, a) in self.points.iter().enumerate() {
            let term = (1.0 - a.norm()).powf(p);
            total += term;
            if k >= half {
                tail += term;
            }
        }
        let frac = if total > 0.0 { tail / total } else { 0.0 };
        (total, frac)
    }

    /// Reads zeros from CSV text with `re,im` rows (header optional).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.chars().any(|c| c.is_alphabetic())) {
                continue;
            }
            let mut it = line.split(',');
            let re: f64 = it
                .next()
                .ok_or_else(|| QpoError::Io(format!("line {}: missing re", i + 1)))?
                .trim()
                .parse()
                .map_err(|e| QpoError::Io(format!("line {}: {e}", i + 1)))?;
            let im: f64 = it
                .next()
                .ok_or_else(|| QpoError::Io(format!("line {}: missing im", i + 1)))?
                .trim()
                .parse()
                .map_err(|e| QpoError::Io(format!("line {}: {e}", i + 1)))?;
            pts.push(Complex64::new(re, im));
        }
        ZeroSequence::new(pts)
    }

    /// Writes zeros as CSV text with a `re,im` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for a in &self.points {
            out.push_str(&format!("{},{}\n", a.re, a.im));
        }
        out
    }
}

/// Smallest exponent (0.01 grid) whose tail sums look convergent on the
/// stored prefix: the last half of the sequence must contribute under 25% of
/// Σ(1−|a_k|)^{μ+1}. Short sequences report 0 (every sum is trivially finite).
fn estimate_convergence_exponent(points: &[Complex64]) -> f64 {
    if points.len() < 32 {
        return 0.0;
    }
    let one_minus: Vec<f64> = points.iter().map(|a| 1.0 - a.norm()).collect();
    let half = points.len() / 2;
    let mut mu = 0.0f64;
    while mu <= 10.0 {
        let p = mu + 1.0;
        let total: f64 = one_minus.iter().map(|d| d.powf(p)).sum();
        let tail: f64 = one_minus[half..].iter().map(|d| d.powf(p)).sum();
        if total > 0.0 && tail / total < 0.25 {
            return mu;
        }
        mu += 0.01;
    }
    10.0
}

/// An analytic function on {|z| ≤ r_max} with log-form evaluation, optional
/// attached zero data, and the recorded origin value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFunctionModel {
    evaluator: Evaluator,
    /// Zeros attached for counting experiments (for products these are the
    /// construction zeros themselves).
    pub zeros: Option<ZeroSequence>,
    /// Largest radius at which the evaluator is declared accurate.
    pub r_max: f64,
    /// log|f(0)| (−∞ when f(0) = 0) and arg f(0), recorded at construction.
    pub origin_log_modulus: f64,
    pub origin_argument: f64,
}

impl AnalyticFunctionModel {
    fn finish(evaluator: Evaluator, zeros: Option<ZeroSequence>, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(QpoError::Parameter(format!(
                "declared evaluation radius must lie in (0, 1), got {r_max}"
            )));
        }
        let mut model = AnalyticFunctionModel {
            evaluator,
            zeros,
            r_max,
            origin_log_modulus: 0.0,
            origin_argument: 0.0,
        };
        let (lm, arg) = model.log_eval(Complex64::new(0.0, 0.0))?;
        model.origin_log_modulus = lm;
        model.origin_argument = arg;
        Ok(model)
    }

    /// Dense power series from plain complex coefficients (index = degree).
    pub fn power_series(coeffs: &[Complex64], r_max: f64) -> Result<Self> {
        let mut terms = Vec::new();
        for (n, c) in coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            terms.push(SeriesTerm {
                n: n as u64,
                log_abs: c.norm().ln(),
                phase: c.arg(),
            });
        }
        Self::finish(Evaluator::PowerSeries { terms }, None, r_max)
    }

    /// Sparse power series with positive coefficients given as (degree,
    /// log-coefficient); degrees must be strictly increasing.
    pub fn power_series_sparse_log(support: &[(u64, f64)], r_max: f64) -> Result<Self> {
        for w in support.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(QpoError::Parameter(
                    "sparse series degrees must be strictly increasing".into(),
                ));
            }
        }
        if support.iter().any(|&(_, l)| !l.is_finite()) {
            return Err(QpoError::Parameter(
                "sparse series log-coefficients must be finite".into(),
            ));
        }
        let terms = support
            .iter()
            .map(|&(n, log_abs)| SeriesTerm {
                n,
                log_abs,
                phase: 0.0,
            })
            .collect();
        Self::finish(Evaluator::PowerSeries { terms }, None, r_max)
    }

    /// A named closed form; all cases are total on |z| < 1 in log form.
    pub fn closed_form(form: ClosedForm, r_max: f64) -> Result<Self> {
        match &form {
            ClosedForm::Constant { re, im } => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(QpoError::Parameter("constant must be finite".into()));
                }
            }
            ClosedForm::ExpInvPower { power } | ClosedForm::InvPowerMinusOne { power } => {
                if !(*power > 0.0 && power.is_finite()) {
                    return Err(QpoError::Parameter(format!(
                        "closed-form power must be positive, got {power}"
                    )));
                }
            }
            _ => {}
        }
        Self::finish(Evaluator::ClosedForm { form }, None, r_max)
    }

    /// Product of primary factors over `zeros` with the given genus; the zero
    /// sequence is attached for counting experiments. Zeros at the origin are
    /// carried as an explicit monomial factor.
    pub fn product(zeros: ZeroSequence, genus: u32, r_max: f64) -> Result<Self> {
        if genus == 0 {
            return Err(QpoError::Parameter("product genus must be ≥ 1".into()));
        }
        Self::finish(
            Evaluator::Product {
                zeros: zeros.clone(),
                genus,
            },
            Some(zeros),
            r_max,
        )
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    /// f(0) where representable (log-modulus within exp range).
    pub fn origin_value(&self) -> Complex64 {
        if self.origin_log_modulus == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.origin_log_modulus.exp(), self.origin_argument)
    }

    fn check_radius(&self, z: Complex64) -> Result<()> {
        let r = z.norm();
        if !(r <= self.r_max * (1.0 + 1e-12)) {
            return Err(QpoError::Domain(format!(
                "|z| = {r} exceeds the declared evaluation radius {}",
                self.r_max
            )));
        }
        Ok(())
    }

    /// (log|f(z)|, arg f(z)). The argument is accumulated without 2π
    /// reduction for series/products; log-modulus is −∞ exactly on zeros.
    pub fn log_eval(&self, z: Complex64) -> Result<(f64, f64)> {
        self.check_radius(z)?;
        match &self.evaluator {
            Evaluator::PowerSeries { terms } => Ok(series_log_eval(terms, z)),
            Evaluator::ClosedForm { form } => closed_form_log_eval(form, z),
            Evaluator::Product { zeros, genus } => {
                crate::disc::product::canonical_product(z, zeros, *genus)
                    .map(|v| (v.log_modulus, v.argument))
            }
        }
    }

    /// log|f(z)|.
    pub fn log_modulus(&self, z: Complex64) -> Result<f64> {
        self.log_eval(z).map(|(lm, _)| lm)
    }

    /// f(z) as a complex number; errors if |f| overflows f64.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (lm, arg) = self.log_eval(z)?;
        if lm == f64::NEG_INFINITY {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if lm > 700.0 {
            return Err(QpoError::Numeric(format!(
                "|f(z)| = exp({lm:.3}) overflows f64; use log_eval"
            )));
        }
        Ok(Complex64::from_polar(lm.exp(), arg))
    }

    /// For power series: log of the ratio between the highest-degree term's
    /// modulus and the max term at radius r — a truncation instrument (very
    /// negative means the cap does not bite at this radius). `None` for
    /// non-series models.
    pub fn truncation_tail_ratio(&self, r: f64) -> Option<f64> {
        match &self.evaluator {
            Evaluator::PowerSeries { terms } => {
                if terms.is_empty() {
                    return Some(f64::NEG_INFINITY);
                }
                let ln_r = r.ln();
                let mut max_l = f64::NEG_INFINITY;
                for t in terms {
                    max_l = max_l.max(t.log_abs + t.n as f64 * ln_r);
                }
                let last = terms.last().unwrap();
                Some(last.log_abs + last.n as f64 * ln_r - max_l)
            }
            _ => None,
        }
    }
}

/// Series evaluation in log form: factor out the max term, sum the rest in
/// ordinary arithmetic (every scaled term has modulus ≤ 1).
fn series_log_eval(terms: &[SeriesTerm], z: Complex64) -> (f64, f64) {
    if terms.is_empty() {
        return (f64::NEG_INFINITY, 0.0);
    }
    let r = z.norm();
    let theta = z.arg();
    if r == 0.0 {
        // Only the constant term survives.
        for t in terms {
            if t.n == 0 {
                return (t.log_abs, t.phase);
            }
        }
        return (f64::NEG_INFINITY, 0.0);
    }
    let ln_r = r.ln();
    let tau = 2.0 * std::f64::consts::PI;
    let mut max_l = f64::NEG_INFINITY;
    for t in terms {
        let l = t.log_abs + t.n as f64 * ln_r;
        if l > max_l {
            max_l = l;
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in terms {
        let l = t.log_abs + t.n as f64 * ln_r;
        let ang = (t.phase + (t.n as f64) * theta) % tau;
        acc += Complex64::from_polar((l - max_l).exp(), ang);
    }
    let m = acc.norm();
    if m == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    (max_l + m.ln(), acc.arg())
}

fn closed_form_log_eval(form: &ClosedForm, z: Complex64) -> Result<(f64, f64)> {
    match form {
        ClosedForm::Constant { re, im } => {
            let c = Complex64::new(*re, *im);
            if c.norm() == 0.0 {
                Ok((f64::NEG_INFINITY, 0.0))
            } else {
                Ok((c.norm().ln(), c.arg()))
            }
        }
        ClosedForm::Monomial { degree } => {
            let r = z.norm();
            if r == 0.0 && *degree > 0 {
                return Ok((f64::NEG_INFINITY, 0.0));
            }
            Ok((*degree as f64 * r.ln(), *degree as f64 * z.arg()))
        }
        ClosedForm::ExpInvPower { power } => {
            // f = exp(v) with v = (1−z)^{−power}: log|f| = Re v, arg f = Im v.
            let v = one_minus_z_neg_power(z, *power)?.exp();
            Ok((v.re, v.im))
        }
        ClosedForm::ExpMobius => {
            let den = Complex64::new(1.0, 0.0) - z;
            if den.norm() == 0.0 {
                return Err(QpoError::Singularity("evaluation at z = 1".into()));
            }
            let w = (Complex64::new(1.0, 0.0) + z) / den;
            Ok((w.re, w.im))
        }
        ClosedForm::InvPowerMinusOne { power } => {
            let w = one_minus_z_neg_power(z, *power)?;
            // |w| ≤ (1−r)^{−power}: representable for every usable radius.
            let v = w.exp() - Complex64::new(1.0, 0.0);
            if v.norm() == 0.0 {
                return Ok((f64::NEG_INFINITY, 0.0));
            }
            Ok((v.norm().ln(), v.arg()))
        }
    }
}

/// Principal-branch log of (1−z)^{−power}, i.e. −power·Ln(1−z).
fn one_minus_z_neg_power(z: Complex64, power: f64) -> Result<Complex64> {
    let w = Complex64::new(1.0, 0.0) - z;
    if w.norm() == 0.0 {
        return Err(QpoError::Singularity("evaluation at z = 1".into()));
    }
    Ok(-power * w.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_sequence_sorts_and_validates() {
        let zs = ZeroSequence::new(vec![c(0.9, 0.0), c(0.0, 0.5), c(-0.7, 0.0)]).unwrap();
        let mods: Vec<f64> = zs.points().iter().map(|a| a.norm()).collect();
        assert_eq!(mods, vec![0.5, 0.7, 0.9]);
        assert!(ZeroSequence::new(vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn zero_sequence_csv_roundtrip() {
        let zs = ZeroSequence::new(vec![c(0.25, -0.5), c(0.1, 0.0)]).unwrap();
        let text = zs.to_csv();
        let back = ZeroSequence::from_csv(&text).unwrap();
        assert_eq!(zs.points(), back.points());
    }

    #[test]
    fn genus_sum_tail_fraction_reflects_convergence() {
        // Rapidly approaching zeros: 1−|a_k| = 2^{−k}; Σ(1−|a_k|)² converges
        // fast so the tail fraction is tiny.
        let pts: Vec<Complex64> = (1..40).map(|k| c(1.0 - 0.5f64.powi(k), 0.0)).collect();
        let zs = ZeroSequence::new(pts).unwrap();
        let (total, frac) = zs.genus_sum(1);
        assert!(total > 0.0 && total < 1.0);
        assert!(frac < 1e-5, "tail fraction {frac}");
    }

    #[test]
    fn constant_and_monomial_log_eval() {
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::Constant { re: 3.0, im: 0.0 },
            0.99,
        )
        .unwrap();
        assert!((f.log_modulus(c(0.2, 0.1)).unwrap() - 3.0f64.ln()).abs() < 1e-15);
        assert!((f.origin_value() - c(3.0, 0.0)).norm() < 1e-12);

        let g =
            AnalyticFunctionModel::closed_form(ClosedForm::Monomial { degree: 1 }, 0.99).unwrap();
        let v = g.eval(c(0.3, 0.4)).unwrap();
        assert!((v - c(0.3, 0.4)).norm() < 1e-15);
        assert_eq!(g.origin_log_modulus, f64::NEG_INFINITY);
    }

    #[test]
    fn exp_inv_power_log_modulus_on_axis() {
        // log|exp((1−z)^{−1})| at z = r is 1/(1−r).
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 1.0 }, 0.9999)
            .unwrap();
        let lm = f.log_modulus(c(0.9, 0.0)).unwrap();
        assert!((lm - 10.0).abs() < 1e-12, "lm = {lm}");
        // Far beyond exp overflow, log form still works.
        let lm = f.log_modulus(c(0.9999, 0.0)).unwrap();
        assert!((lm - 10000.0).abs() < 1e-8);
        assert!(f.eval(c(0.9999, 0.0)).is_err());
    }

    #[test]
    fn mobius_exponential_is_poisson_kernel() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpMobius, 0.999).unwrap();
        let r = 0.9;
        for k in 0..8 {
            let th = k as f64 * 0.7;
            let z = Complex64::from_polar(r, th);
            let lm = f.log_modulus(z).unwrap();
            let pk = (1.0 - r * r) / (c(1.0, 0.0) - z).norm_sqr();
            assert!((lm - pk).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_series_matches_direct_polynomial() {
        // f(z) = 2 − z + 0.5i z³
        let f = AnalyticFunctionModel::power_series(
            &[c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.5)],
            0.99,
        )
        .unwrap();
        let z = c(0.3, -0.2);
        let direct = c(2.0, 0.0) - z + c(0.0, 0.5) * z * z * z;
        let v = f.eval(z).unwrap();
        assert!((v - direct).norm() < 1e-14);
        assert!((f.origin_value() - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sparse_series_handles_huge_log_coefficients() {
        // f(z) = e^{1000} + e^{5000} z^{10}: log M(r) = max of the two term logs
        // plus at most log 2.
        let f = AnalyticFunctionModel::power_series_sparse_log(&[(0, 1000.0), (10, 5000.0)], 0.99)
            .unwrap();
        let r: f64 = 0.5;
        let lm = f.log_modulus(c(r, 0.0)).unwrap();
        let t0 = 1000.0;
        let t1 = 5000.0 + 10.0 * r.ln();
        let expect = t1.max(t0) + (1.0 + (t0 - t1).exp()).ln();
        assert!((lm - expect).abs() < 1e-9, "lm = {lm}, expect = {expect}");
        assert!(f.truncation_tail_ratio(r).unwrap() > -1e-9);
    }

    #[test]
    fn inv_power_minus_one_vanishes_at_origin() {
        let f = AnalyticFunctionModel::closed_form(
            ClosedForm::InvPowerMinusOne { power: 1.5 },
            0.999,
        )
        .unwrap();
        assert_eq!(f.origin_log_modulus, f64::NEG_INFINITY);
        let z = c(0.5, 0.0);
        let v = f.eval(z).unwrap();
        let direct = (c(1.0, 0.0) - z).powf(-1.5) - 1.0;
        assert!((v - direct).norm() < 1e-12);
    }

    #[test]
    fn radius_guard_rejects_out_of_range() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpMobius, 0.9).unwrap();
        assert!(f.log_modulus(c(0.95, 0.0)).is_err());
    }

    #[test]
    fn model_json_roundtrip() {
        let f = AnalyticFunctionModel::closed_form(ClosedForm::ExpInvPower { power: 2.0 }, 0.999)
            .unwrap();
        let j = serde_json::to_string(&f).unwrap();
        let back: AnalyticFunctionModel = serde_json::from_str(&j).unwrap();
        assert_eq!(f, back);
    }
}
