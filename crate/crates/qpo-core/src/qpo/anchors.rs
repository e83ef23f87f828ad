//! Anchor sequences: where the growth index hits its excursion levels.
//!
//! Each construction cycle n is pinned by four abscissas found by scanning the
//! growth index d left to right: r_n (first hit of rho − eps_n after the
//! previous cycle), r_prime_n (a down-crossing of lambda + eta/2, thinned so
//! the induced r_star_n lands strictly right of r_n), the derived
//! r_star_n with (lambda+eta)·log r_star_n = (lambda+eta/2)·log r_prime_n, and
//! the argmax R_n of d over [r_n, r_star_n].

use crate::grid::GridSpec;
use crate::growth::{GrowthFunction, INDEX_DOMAIN_START};
use crate::qpo::ledger::SequenceLedger;
use crate::{QpoError, Result};

/// Rule producing the excursion tolerances eps_n = eps_1 · 2^{1−n}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsRule {
    /// First tolerance; defaults to min{1, eta}/2 when `None`.
    pub eps1: Option<f64>,
}

impl Default for EpsRule {
    fn default() -> Self {
        EpsRule { eps1: None }
    }
}

impl EpsRule {
    pub fn resolve(&self, eta: f64) -> Result<f64> {
        let eps1 = self.eps1.unwrap_or_else(|| 0.5 * eta.min(1.0));
        if !(eps1 > 0.0 && eps1 < eta.min(1.0) + 1e-15) {
            return Err(QpoError::Parameter(format!(
                "eps_1 must lie in (0, min(1, eta)], got {eps1} for eta = {eta}"
            )));
        }
        Ok(eps1)
    }

    pub fn eps_n(&self, eta: f64, n: usize) -> Result<f64> {
        Ok(self.resolve(eta)? * 0.5f64.powi(n as i32 - 1))
    }
}

/// The scan table: growth-index samples on the log-uniform grid augmented with
/// the growth function's breakpoints, so level crossings and index maxima are
/// bracketed exactly for piecewise kinds.
#[derive(Debug, Clone)]
pub struct IndexScan {
    pub t: Vec<f64>,
    pub d: Vec<f64>,
}

impl IndexScan {
    pub fn build(a: &GrowthFunction, t_end: f64, points_per_decade: usize) -> Result<Self> {
        let lo = a.domain_start().max(INDEX_DOMAIN_START);
        let hi = t_end.min(a.domain_end());
        if !(hi > lo) {
            return Err(QpoError::Parameter(format!(
                "scan range empty: [{lo}, {hi}]"
            )));
        }
        let mut t = GridSpec::new(lo, hi, points_per_decade)?.points();
        for b in a.breakpoints() {
            if b > lo && b < hi {
                t.push(b);
            }
        }
        t.sort_by(|x, y| x.partial_cmp(y).unwrap());
        t.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
        let d = t
            .iter()
            .map(|&ti| a.growth_index(ti))
            .collect::<Result<Vec<f64>>>()?;
        Ok(IndexScan { t, d })
    }

    fn first_index_at_or_after(&self, t: f64) -> usize {
        self.t.partition_point(|&x| x < t)
    }
}

/// Bisect d(t) = level inside [lo, hi] to relative precision 1e−12.
fn bisect_level(a: &GrowthFunction, level: f64, lo: f64, hi: f64) -> Result<f64> {
    let d_lo = a.growth_index(lo)? - level;
    if d_lo == 0.0 {
        return Ok(lo);
    }
    let mut lo = lo;
    let mut hi = hi;
    for _ in 0..200 {
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let d_mid = a.growth_index(mid)? - level;
        if d_mid == 0.0 {
            return Ok(mid);
        }
        if (d_mid > 0.0) == (d_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// First t ≥ cursor with d(t) = level (either crossing direction).
fn first_level_hit(
    a: &GrowthFunction,
    scan: &IndexScan,
    cursor: f64,
    level: f64,
) -> Result<Option<f64>> {
    let i0 = scan.first_index_at_or_after(cursor);
    // partial cell [cursor, t[i0])
    let mut prev_t = cursor;
    let mut prev_d = a.growth_index(cursor)? - level;
    if prev_d == 0.0 {
        return Ok(Some(cursor));
    }
    for i in i0..scan.t.len() {
        let cur_t = scan.t[i];
        let cur_d = scan.d[i] - level;
        if cur_d == 0.0 {
            return Ok(Some(cur_t));
        }
        if prev_d * cur_d < 0.0 {
            return Ok(Some(bisect_level(a, level, prev_t, cur_t)?));
        }
        prev_t = cur_t;
        prev_d = cur_d;
    }
    Ok(None)
}

/// First t ≥ cursor where d crosses `level` from above (d > level just
/// before, d ≤ level at the crossing).
fn first_down_crossing(
    a: &GrowthFunction,
    scan: &IndexScan,
    cursor: f64,
    level: f64,
) -> Result<Option<f64>> {
    let i0 = scan.first_index_at_or_after(cursor);
    let mut prev_t = cursor;
    let mut prev_d = a.growth_index(cursor)? - level;
    for i in i0..scan.t.len() {
        let cur_t = scan.t[i];
        let cur_d = scan.d[i] - level;
        if prev_d > 0.0 && cur_d <= 0.0 {
            return Ok(Some(bisect_level(a, level, prev_t, cur_t)?));
        }
        prev_t = cur_t;
        prev_d = cur_d;
    }
    Ok(None)
}

/// Maximum of the growth index over [lo, hi] on the scan (endpoints included
/// via direct evaluation); ties resolve to the smallest abscissa.
pub fn index_max_on(
    a: &GrowthFunction,
    scan: &IndexScan,
    lo: f64,
    hi: f64,
) -> Result<(f64, f64)> {
    let mut best_d = a.growth_index(lo)?;
    let mut best_t = lo;
    let i0 = scan.first_index_at_or_after(lo);
    for i in i0..scan.t.len() {
        if scan.t[i] > hi {
            break;
        }
        if scan.d[i] > best_d {
            best_d = scan.d[i];
            best_t = scan.t[i];
        }
    }
    let d_hi = a.growth_index(hi)?;
    if d_hi > best_d {
        best_d = d_hi;
        best_t = hi;
    }
    Ok((best_d, best_t))
}

/// Scan the growth index of `a` and return every complete anchor cycle below
/// `t_max`.
///
/// The down-crossing candidates for r_prime_n are consumed greedily left to
/// right, discarding any candidate whose induced r_star_n would not land
/// strictly right of r_n; this realizes the subsequence-thinning step
/// deterministically.
#[allow(clippy::too_many_arguments)]
pub fn find_anchor_sequences(
    a: &GrowthFunction,
    rho: f64,
    lambda: f64,
    eta: f64,
    eps_rule: EpsRule,
    max_depth: usize,
    t_max: f64,
    points_per_decade: usize,
) -> Result<SequenceLedger> {
    if !(lambda >= 0.0 && lambda < rho) {
        return Err(QpoError::Parameter(format!(
            "need 0 ≤ lambda < rho, got ({lambda}, {rho})"
        )));
    }
    if !(eta > 0.0 && eta < rho - lambda) {
        return Err(QpoError::Parameter(format!(
            "eta must lie in (0, rho − lambda), got {eta}"
        )));
    }
    if max_depth == 0 {
        return Err(QpoError::Parameter("max_depth must be ≥ 1".into()));
    }
    let eps1 = eps_rule.resolve(eta)?;
    let scan = IndexScan::build(a, t_max, points_per_decade)?;
    let down_level = lambda + eta / 2.0;
    let star_factor = (lambda + eta / 2.0) / (lambda + eta);

    let mut ledger = SequenceLedger {
        lambda,
        rho,
        eta,
        ..Default::default()
    };

    let mut cursor = scan.t[0];
    for n in 1..=max_depth {
        let eps_n = eps1 * 0.5f64.powi(n as i32 - 1);
        ledger.eps.push(eps_n);
        let Some(r_n) = first_level_hit(a, &scan, cursor, rho - eps_n)? else {
            if n == 1 {
                return Err(QpoError::Infeasible(format!(
                    "growth index never reaches rho − eps_1 = {} below t = {t_max}",
                    rho - eps1
                )));
            }
            ledger.truncated = true;
            ledger
                .flags
                .push(format!("cycle {n}: no hit of rho − eps_n below the domain end"));
            break;
        };
        // r_prime: first admissible down-crossing of lambda + eta/2 after r_n
        let mut search_from = r_n;
        let r_prime = loop {
            match first_down_crossing(a, &scan, search_from, down_level)? {
                None => break None,
                Some(cand) => {
                    let star = (star_factor * cand.ln()).exp();
                    if star > r_n * (1.0 + 1e-12) {
                        break Some(cand);
                    }
                    ledger.flags.push(format!(
                        "cycle {n}: discarded down-crossing at {cand:.6e} (induced excursion end not right of r_n)"
                    ));
                    search_from = cand * (1.0 + 1e-9);
                }
            }
        };
        let Some(r_prime) = r_prime else {
            if n == 1 {
                return Err(QpoError::Infeasible(format!(
                    "growth index never descends through lambda + eta/2 = {down_level} below t = {t_max}"
                )));
            }
            ledger.truncated = true;
            ledger
                .flags
                .push(format!("cycle {n}: no admissible down-crossing below the domain end"));
            // keep the partial cycle's r_n out of the ledger: only complete
            // quadruples are stored
            break;
        };
        let r_star = (star_factor * r_prime.ln()).exp();
        let (m_n, r_argmax) = index_max_on(a, &scan, r_n, r_star)?;
        ledger.r.push(r_n);
        ledger.r_prime.push(r_prime);
        ledger.r_star.push(r_star);
        ledger.m.push(m_n);
        ledger.r_argmax.push(r_argmax);
        ledger.stairs.push(Vec::new());
        cursor = r_prime;
    }
    if ledger.r.is_empty() {
        return Err(QpoError::Infeasible(
            "no complete anchor cycle fits below the domain end".into(),
        ));
    }
    if ledger.r.len() == max_depth && !ledger.truncated {
        ledger
            .flags
            .push(format!("stopped at the requested maximum depth {max_depth}"));
    }
    ledger.eps.truncate(ledger.r.len());
    ledger.check_invariants()?;
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn staircase() -> GrowthFunction {
        GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e8).unwrap()
    }

    #[test]
    fn staircase_anchor_cycle_positions() {
        let a = staircase();
        let led =
            find_anchor_sequences(&a, 2.0, 1.0, 0.5, EpsRule::default(), 64, 1e8, 200).unwrap();
        assert_eq!(led.depth(), 4);
        // r_1: first index hit of 1.75, on the ramp just before t = 4
        assert!(led.r[0] > 3.98 && led.r[0] < 4.0, "r_1 = {}", led.r[0]);
        // index at every r_n equals rho − eps_n
        for (n, &r) in led.r.iter().enumerate() {
            let d = a.growth_index(r).unwrap();
            let want = 2.0 - led.eps[n];
            assert!((d - want).abs() < 1e-9, "cycle {}: d(r_n) = {d}, want {want}", n + 1);
        }
        // r_prime: index equals lambda + eta/2 there
        for &rp in &led.r_prime {
            let d = a.growth_index(rp).unwrap();
            assert!((d - 1.25).abs() < 1e-9, "d(r_prime) = {d}");
        }
        // argmax of each excursion is the staircase knot, with M_n = 2
        assert_eq!(led.r_argmax, vec![4.0, 16.0, 256.0, 65536.0]);
        for &m in &led.m {
            assert!((m - 2.0).abs() < 1e-12);
        }
        // the defining power relation between r_star and r_prime
        for (rs, rp) in led.r_star.iter().zip(&led.r_prime) {
            let lhs = rs.powf(1.5).ln();
            let rhs = rp.powf(1.25).ln();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs());
        }
        // truncation: the fifth cycle's target sits beyond 1e8
        assert!(led.truncated);
    }

    #[test]
    fn anchor_index_values_at_r_star() {
        // on the staircase each excursion ends exactly where the index has
        // sagged to lambda + eta
        let a = staircase();
        let led =
            find_anchor_sequences(&a, 2.0, 1.0, 0.5, EpsRule::default(), 64, 1e8, 200).unwrap();
        for &rs in &led.r_star {
            let d = a.growth_index(rs).unwrap();
            assert!((d - 1.5).abs() < 1e-9, "d(r_star) = {d}");
        }
    }

    #[test]
    fn constant_index_is_infeasible() {
        let a = GrowthFunction::power(1.0, 2.0, 2.0, 1e8).unwrap();
        let r = find_anchor_sequences(&a, 2.0, 1.0, 0.5, EpsRule::default(), 8, 1e8, 100);
        assert!(matches!(r, Err(QpoError::Infeasible(_))));
    }

    #[test]
    fn intermediate_constant_index_is_infeasible() {
        // index constant in (lambda+eta, rho): never reaches rho − eps_1
        let a = GrowthFunction::power(1.0, 1.7, 2.0, 1e8).unwrap();
        let r = find_anchor_sequences(&a, 2.0, 1.0, 0.5, EpsRule::default(), 8, 1e8, 100);
        assert!(matches!(r, Err(QpoError::Infeasible(_))));
    }

    #[test]
    fn eps_rule_default_and_override() {
        assert_eq!(EpsRule::default().resolve(0.5).unwrap(), 0.25);
        assert_eq!(EpsRule::default().resolve(3.0).unwrap(), 0.5);
        assert_eq!(EpsRule { eps1: Some(0.1) }.resolve(0.5).unwrap(), 0.1);
        assert!(EpsRule { eps1: Some(0.9) }.resolve(0.5).is_err());
    }

    #[test]
    fn deeper_domain_yields_more_cycles() {
        // the fifth cycle's down-crossing sits near 2.6e15, so a horizon of
        // 1e12 still yields four cycles while 1e16 completes the fifth
        let a12 = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e12).unwrap();
        let led12 =
            find_anchor_sequences(&a12, 2.0, 1.0, 0.5, EpsRule::default(), 64, 1e12, 200).unwrap();
        assert_eq!(led12.depth(), 4);
        let a16 = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e16).unwrap();
        let led16 =
            find_anchor_sequences(&a16, 2.0, 1.0, 0.5, EpsRule::default(), 64, 1e16, 200).unwrap();
        assert_eq!(led16.depth(), 5);
        assert_eq!(led16.r_argmax[4], 4294967296.0);
        let rp5 = led16.r_prime[4];
        assert!(rp5 > 2.5e15 && rp5 < 2.7e15, "r_prime_5 = {rp5:.4e}");
    }
}
