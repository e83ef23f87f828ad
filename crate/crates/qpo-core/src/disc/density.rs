//! Radial exceptional sets in [0, 1) and their upper density at the boundary.

use serde::{Deserialize, Serialize};

use crate::{QpoError, Result};

/// A finite union of disjoint intervals [lo, hi) inside [0, 1), kept sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSet {
    intervals: Vec<(f64, f64)>,
}

impl RadialSet {
    /// Normalizes raw intervals: drops empty ones, sorts, merges overlaps.
    pub fn new(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &raw {
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 {
                return Err(QpoError::Parameter(format!(
                    "radial intervals must sit inside [0, 1), got [{lo}, {hi})"
                )));
            }
        }
        raw.retain(|&(lo, hi)| hi > lo);
        raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        Ok(RadialSet { intervals })
    }

    pub fn empty() -> Self {
        RadialSet { intervals: Vec::new() }
    }

    /// Dyadic comb ∪_k [1−2^{−g(k)}, 1−2^{−g(k)−1}) for g(k) = stride·k,
    /// k = 1..=n — a set whose tail density oscillates.
    pub fn dyadic_comb(stride: u32, n: u32) -> Result<Self> {
        if stride == 0 || n == 0 {
            return Err(QpoError::Parameter("comb needs stride ≥ 1 and n ≥ 1".into()));
        }
        let mut raw = Vec::new();
        for k in 1..=n {
            let e = (stride * k) as i32;
            raw.push((1.0 - 0.5f64.powi(e), 1.0 - 0.5f64.powi(e + 1)));
        }
        RadialSet::new(raw)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Lebesgue measure of the whole set.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// Exact measure of E ∩ [r, 1).
    pub fn measure_from(&self, r: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi - lo.max(r)).max(0.0))
            .sum()
    }

    pub fn contains(&self, r: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= r && r < hi)
    }
}

/// Upper boundary density of a radial set: limsup_{r→1⁻} m(E ∩ [r,1))/(1−r),
/// surrogated by the maximum of the exact ratio over the tail half of the
/// supplied grid radii (tail in the log(1/(1−r)) scale).
pub fn upper_density(set: &RadialSet, r_grid: &[f64]) -> Result<f64> {
    if r_grid.len() < 2 {
        return Err(QpoError::Parameter("density grid needs ≥ 2 radii".into()));
    }
    if r_grid.iter().any(|&r| !(0.0 <= r && r < 1.0)) {
        return Err(QpoError::Parameter("density radii must lie in [0, 1)".into()));
    }
    let xs: Vec<f64> = r_grid.iter().map(|&r| -(1.0 - r).ln()).collect();
    let x_mid = 0.5 * (xs[0] + xs[xs.len() - 1]);
    let mut best = f64::NEG_INFINITY;
    for (&r, &x) in r_grid.iter().zip(&xs) {
        if x >= x_mid {
            best = best.max(set.measure_from(r) / (1.0 - r));
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(QpoError::Parameter(
            "no grid radius fell in the tail window".into(),
        ));
    }
    Ok(best)
}
