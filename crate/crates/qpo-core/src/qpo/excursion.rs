//! Excursion profiles: the running-maximum envelope of the growth index over
//! one excursion window [R_n, r_star_n].
//!
//! Two views of the same suffix-maximum data serve different purposes:
//!
//! * `staircase_value` (cell-constant, includes the cell's left sample) drives
//!   the stair descent — the quasi proximate order must majorize it;
//! * `continuous_value` (max of the floor, the exact index at t, and the
//!   suffix maximum strictly to the right) is what the associated majorant
//!   exponentiates — t^{continuous_value} is non-decreasing because the
//!   underlying growth function is.

use crate::growth::GrowthFunction;
use crate::qpo::ledger::SequenceLedger;
use crate::{QpoError, Result};

/// Hard cap on envelope cells per excursion; refinement beyond this is
/// truncated and flagged.
pub const MAX_ENVELOPE_CELLS: usize = 400_000;

/// Suffix-maximum envelope of the growth index over one excursion window.
#[derive(Debug, Clone)]
pub struct EnvelopeSampler {
    /// Window in ln t (ln R_n, ln r_star_n).
    pub ln_lo: f64,
    pub ln_hi: f64,
    /// Floor level lambda + eta.
    pub floor: f64,
    /// Sample abscissas (t units), strictly increasing, endpoints exact.
    pub t: Vec<f64>,
    /// suffix_incl[i] = max of the sampled index over samples i..end.
    pub suffix_incl: Vec<f64>,
    /// Whether the refinement rule was truncated by `MAX_ENVELOPE_CELLS`.
    pub capped: bool,
    growth: GrowthFunction,
}

impl EnvelopeSampler {
    /// Index of the cell [t[i], t[i+1]) containing t (clamped to valid cells).
    fn cell_of(&self, t: f64) -> usize {
        let i = self.t.partition_point(|&x| x <= t);
        i.saturating_sub(1).min(self.t.len() - 2)
    }

    /// Cell-constant staircase envelope: max(floor, suffix max from the
    /// cell's left sample onward). Weakly decreasing in t.
    pub fn staircase_value(&self, t: f64) -> f64 {
        self.suffix_incl[self.cell_of(t)].max(self.floor)
    }

    /// Continuous envelope: max(floor, index at t, suffix max strictly right
    /// of t's cell). t^{continuous_value(t)} is non-decreasing.
    pub fn continuous_value(&self, t: f64) -> Result<f64> {
        let i = self.cell_of(t);
        let right = if i + 2 < self.t.len() {
            self.suffix_incl[i + 1]
        } else {
            f64::NEG_INFINITY
        };
        Ok(self.growth.growth_index(t)?.max(right).max(self.floor))
    }

    /// Number of cells.
    pub fn n_cells(&self) -> usize {
        self.t.len() - 1
    }

    /// Cell boundaries and staircase values, for walking the stair descent.
    pub fn cell(&self, i: usize) -> (f64, f64, f64) {
        (self.t[i], self.t[i + 1], self.suffix_incl[i].max(self.floor))
    }
}

/// Cell width (in ln t) for the excursion window of cycle n.
///
/// The window's sampling must be fine enough that the staircase the descent
/// tracks stays within the per-cycle slack budgets: the sandwich slack
/// log(1 + 9^{rho+1}/R_n) on [R_n, r_star_n] and the end-level slack
/// 9^{rho+1}/(R_n · log R_n) at r_star_n. The index varies at rate at most
/// (rho + eps_1)/log R_n per unit of ln t inside the window, which turns each
/// budget into a width bound; the base grid density is kept as an upper bound.
pub fn refinement_width(
    rho: f64,
    eps1: f64,
    r_cap: f64,
    r_star: f64,
    points_per_decade: usize,
) -> f64 {
    let base = std::f64::consts::LN_10 / points_per_decade as f64;
    let ln_r = r_cap.ln();
    let pow = 9f64.powf(rho + 1.0);
    let dmax_rate = (rho + eps1) / ln_r;
    let budget_c = (1.0 + pow / r_cap).ln();
    let budget_d = pow / (r_cap * ln_r);
    let delta_c = budget_c / (9.0 * dmax_rate * r_star.ln());
    let delta_d = budget_d / (5.0 * dmax_rate);
    base.min(delta_c).min(delta_d)
}

/// Recompute the excursion maximum of cycle `n` (1-based) and build its
/// envelope sampler.
///
/// Returns (M_n, R_n, sampler). The sample set is a uniform ln-t grid at the
/// refinement width joined with the growth function's breakpoints, so the
/// suffix maxima agree with the true running maximum for piecewise-monotone
/// kinds.
pub fn excursion_profile(
    a: &GrowthFunction,
    ledger: &SequenceLedger,
    n: usize,
    points_per_decade: usize,
) -> Result<(f64, f64, EnvelopeSampler)> {
    if n == 0 || n > ledger.depth() {
        return Err(QpoError::Parameter(format!(
            "cycle index {n} out of range 1..={}",
            ledger.depth()
        )));
    }
    let idx = n - 1;
    let r_n = ledger.r[idx];
    let r_star = ledger.r_star[idx];
    let eps1 = ledger.eps[0];
    let floor = ledger.lambda + ledger.eta;

    // establish R_n: the argmax is stable once breakpoints are sampled, so a
    // coarse scan over [r_n, r_star] at the base density suffices
    let scan = super::anchors::IndexScan::build(a, r_star, points_per_decade)?;
    let (m_n, r_cap) = super::anchors::index_max_on(a, &scan, r_n, r_star)?;

    let ln_lo = r_cap.ln();
    let ln_hi = r_star.ln();
    if !(ln_hi > ln_lo) {
        return Err(QpoError::Numeric(format!(
            "degenerate excursion window [{r_cap}, {r_star}] in cycle {n}"
        )));
    }
    let width = refinement_width(ledger.rho, eps1, r_cap, r_star, points_per_decade);
    let mut n_cells = ((ln_hi - ln_lo) / width).ceil() as usize;
    n_cells = n_cells.max(8);
    let capped = n_cells > MAX_ENVELOPE_CELLS;
    if capped {
        n_cells = MAX_ENVELOPE_CELLS;
    }
    let step = (ln_hi - ln_lo) / n_cells as f64;
    let mut t: Vec<f64> = (0..=n_cells)
        .map(|i| {
            if i == n_cells {
                r_star
            } else {
                (ln_lo + step * i as f64).exp()
            }
        })
        .collect();
    t[0] = r_cap;
    for b in a.breakpoints() {
        if b > r_cap && b < r_star {
            t.push(b);
        }
    }
    t.sort_by(|x, y| x.partial_cmp(y).unwrap());
    t.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * y.abs());

    let d: Vec<f64> = t
        .iter()
        .map(|&ti| a.growth_index(ti))
        .collect::<Result<Vec<f64>>>()?;
    let mut suffix_incl = d.clone();
    for i in (0..suffix_incl.len() - 1).rev() {
        if suffix_incl[i + 1] > suffix_incl[i] {
            suffix_incl[i] = suffix_incl[i + 1];
        }
    }
    // the refined window may expose a marginally larger maximum than the
    // coarse scan; the reported level must match what the descent starts from
    let m_n = m_n.max(suffix_incl[0]);

    Ok((
        m_n,
        r_cap,
        EnvelopeSampler {
            ln_lo,
            ln_hi,
            floor,
            t,
            suffix_incl,
            capped,
            growth: a.clone(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpo::anchors::{find_anchor_sequences, EpsRule};

    fn setup() -> (GrowthFunction, SequenceLedger) {
        let a = GrowthFunction::build_counterexample(1.0, 2.0, 0.01, 1e8).unwrap();
        let led =
            find_anchor_sequences(&a, 2.0, 1.0, 0.5, EpsRule::default(), 64, 1e8, 200).unwrap();
        (a, led)
    }

    #[test]
    fn profile_matches_ledger_anchor_maxima() {
        let (a, led) = setup();
        for n in 1..=led.depth() {
            let (m, r_cap, env) = excursion_profile(&a, &led, n, 200).unwrap();
            assert!((m - led.m[n - 1]).abs() < 1e-12, "cycle {n}: M = {m}");
            assert_eq!(r_cap, led.r_argmax[n - 1], "cycle {n}");
            assert_eq!(env.t[0], r_cap);
            assert_eq!(*env.t.last().unwrap(), led.r_star[n - 1]);
        }
    }

    #[test]
    fn staircase_envelope_is_weakly_decreasing_and_majorizes_index() {
        let (a, led) = setup();
        let (_, _, env) = excursion_profile(&a, &led, 2, 200).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..env.n_cells() {
            let (lo, hi, v) = env.cell(i);
            assert!(v <= prev + 1e-15);
            prev = v;
            // staircase dominates the index at both cell ends
            let d_lo = a.growth_index(lo).unwrap();
            assert!(v >= d_lo - 1e-13, "cell {i}: {v} < d({lo}) = {d_lo}");
            let mid = (lo * hi).sqrt();
            assert!(env.staircase_value(mid) == v);
        }
    }

    #[test]
    fn continuous_envelope_power_is_nondecreasing() {
        let (a, led) = setup();
        for n in 1..=led.depth() {
            let (_, _, env) = excursion_profile(&a, &led, n, 200).unwrap();
            // log A*(t) = continuous_value(t) * ln t, sampled finely
            let mut prev = f64::NEG_INFINITY;
            let k = 4000;
            for i in 0..=k {
                let ln_t = env.ln_lo + (env.ln_hi - env.ln_lo) * i as f64 / k as f64;
                let t = ln_t.exp().clamp(env.t[0], *env.t.last().unwrap());
                let v = env.continuous_value(t).unwrap() * t.ln();
                assert!(
                    v >= prev - 1e-11,
                    "cycle {n}: log-majorant decreased at t = {t}: {v} < {prev}"
                );
                prev = v;
            }
        }
    }

    #[test]
    fn continuous_envelope_sandwich() {
        // floor ≤ continuous ≤ staircase at sampled points away from cell
        // boundaries, and both dominate the raw index
        let (a, led) = setup();
        let (_, _, env) = excursion_profile(&a, &led, 3, 200).unwrap();
        for i in 0..env.n_cells() {
            let (lo, hi, stair) = env.cell(i);
            let mid = (lo * hi).sqrt();
            let cont = env.continuous_value(mid).unwrap();
            let d = a.growth_index(mid).unwrap();
            assert!(cont >= env.floor - 1e-15);
            assert!(cont >= d - 1e-13);
            assert!(cont <= stair + 1e-12, "cell {i}: cont {cont} > stair {stair}");
        }
    }

    #[test]
    fn refinement_width_tightens_with_larger_windows() {
        // later cycles sit at larger R_n where the budgets loosen, so the
        // width is driven by the end-level budget yet stays positive
        let w1 = refinement_width(2.0, 0.25, 4.0, 6.354, 200);
        let w4 = refinement_width(2.0, 0.25, 65536.0, 2.65e6, 200);
        assert!(w1 > 0.0 && w4 > 0.0);
        assert!(w4 < w1);
        // cycle 4 needs roughly 1e4 cells, well under the cap
        let cells = ((2.65e6f64.ln() - 65536f64.ln()) / w4).ceil() as usize;
        assert!(cells > 2_000 && cells < 100_000, "cells = {cells}");
    }
}
