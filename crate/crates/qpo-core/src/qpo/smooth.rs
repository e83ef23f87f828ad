//! Corner rounding: replace every slope break of the piecewise function with
//! a parabolic arc in s = log log t, keeping the result C¹ without raising
//! the slope bound.
//!
//! Arc windows are kept clear of a caller-supplied set of protected
//! abscissas (evaluation grids, growth-function breakpoints, anchor points),
//! so discrete majorization and sandwich checks sample the unmodified
//! piecewise values.

use crate::qpo::segments::{Blend, PiecewiseProximateOrder};
use crate::Result;

/// Sizing rule for the corner arcs.
#[derive(Debug, Clone)]
pub struct BlendRule {
    /// Hard cap on the half-width, measured in ln t.
    pub max_half_width_ln: f64,
    /// Fraction of each adjacent piece's ln-length the window may take.
    pub segment_fraction: f64,
    /// Fraction of the gap to the nearest protected abscissa (and to the
    /// nearest neighbouring corner) the window may take.
    pub guard_fraction: f64,
    /// Sorted ln t of abscissas the windows must not cover.
    pub protected_ln: Vec<f64>,
}

impl Default for BlendRule {
    fn default() -> Self {
        BlendRule {
            max_half_width_ln: 0.1,
            segment_fraction: 0.01,
            guard_fraction: 0.45,
            protected_ln: Vec::new(),
        }
    }
}

impl BlendRule {
    pub fn with_protected(mut self, mut ln_points: Vec<f64>) -> Self {
        ln_points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ln_points.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs().max(1.0));
        self.protected_ln = ln_points;
        self
    }

    /// Distance from ln_c to the nearest protected abscissa, ignoring any
    /// point indistinguishable from the corner itself (corners at anchors or
    /// breakpoints must not zero out their own window).
    fn protected_gap(&self, ln_c: f64) -> f64 {
        let same = 1e-9 * ln_c.abs().max(1.0);
        let i = self.protected_ln.partition_point(|&p| p < ln_c);
        let mut gap = f64::INFINITY;
        // nearest distinct neighbour on each side
        for j in (0..i).rev() {
            let d = ln_c - self.protected_ln[j];
            if d > same {
                gap = gap.min(d);
                break;
            }
        }
        for j in i..self.protected_ln.len() {
            let d = self.protected_ln[j] - ln_c;
            if d > same {
                gap = gap.min(d);
                break;
            }
        }
        gap
    }
}

/// Round every interior slope break of `sigma` with a parabolic arc sized by
/// `rule`. Returns the smoothed function and notes for any window that had to
/// be shrunk below the nominal rule.
pub fn smooth_corners(
    sigma: &PiecewiseProximateOrder,
    rule: &BlendRule,
) -> Result<(PiecewiseProximateOrder, Vec<String>)> {
    let mut out = sigma.clone();
    out.blends.clear();
    let mut notes = Vec::new();

    // corner candidates: (s_c, half-width in s, m0, m1, left piece index)
    let mut corners: Vec<(f64, f64, f64, f64, usize)> = Vec::new();
    for i in 0..sigma.segments.len() - 1 {
        let left = &sigma.segments[i];
        let right = &sigma.segments[i + 1];
        if (left.slope - right.slope).abs() <= 1e-15 {
            continue;
        }
        let ln_c = right.ln_lo;
        let s_c = right.s_lo();
        let h_ln = rule
            .max_half_width_ln
            .min(rule.segment_fraction * (left.ln_hi - left.ln_lo))
            .min(rule.segment_fraction * (right.ln_hi - right.ln_lo))
            .min(rule.guard_fraction * rule.protected_gap(ln_c));
        // convert to s units and keep the window inside both pieces
        let h_s = (h_ln / ln_c)
            .min(0.45 * (s_c - left.s_lo()))
            .min(0.45 * (right.s_hi() - s_c));
        if !(h_s > 0.0) || !h_s.is_finite() {
            notes.push(format!(
                "corner at t = {:.6e} left unsmoothed (no admissible window)",
                ln_c.exp()
            ));
            continue;
        }
        corners.push((s_c, h_s, left.slope, right.slope, i));
    }

    // neighbouring corners must not share territory
    for j in 0..corners.len() {
        let mut h = corners[j].1;
        if j > 0 {
            let gap = corners[j].0 - corners[j - 1].0;
            if h > rule.guard_fraction * gap {
                h = rule.guard_fraction * gap;
            }
        }
        if j + 1 < corners.len() {
            let gap = corners[j + 1].0 - corners[j].0;
            if h > rule.guard_fraction * gap {
                h = rule.guard_fraction * gap;
            }
        }
        if h < corners[j].1 {
            notes.push(format!(
                "blend window at s = {:.6} shrunk to avoid a neighbouring corner",
                corners[j].0
            ));
            corners[j].1 = h;
        }
    }

    for &(s_c, h_s, m0, m1, i) in &corners {
        let s0 = s_c - h_s;
        let s1 = s_c + h_s;
        let p0 = sigma.segments[i].value_at_s(s0);
        out.blends.push(Blend { s0, s1, p0, m0, m1 });
    }
    out.blends
        .sort_by(|a, b| a.s0.partial_cmp(&b.s0).unwrap());
    Ok((out, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpo::segments::{SegmentKind, SigmaSegment};

    fn corner_example() -> PiecewiseProximateOrder {
        // constant 2 on ln t in [2, 4], then descent at −3 to ln t = 8
        let segs = vec![
            SigmaSegment {
                ln_lo: 2.0,
                ln_hi: 4.0,
                value_lo: 2.0,
                slope: 0.0,
                kind: SegmentKind::Constant,
            },
            SigmaSegment {
                ln_lo: 4.0,
                ln_hi: 8.0,
                value_lo: 2.0,
                slope: -3.0,
                kind: SegmentKind::Descent,
            },
        ];
        PiecewiseProximateOrder::from_segments(segs, 1.0, 2.0, 0.5, 3.0).unwrap()
    }

    #[test]
    fn blend_is_c1_and_matches_endpoints() {
        let sigma = corner_example();
        let (smooth, notes) = smooth_corners(&sigma, &BlendRule::default()).unwrap();
        assert!(notes.is_empty());
        assert_eq!(smooth.blends.len(), 1);
        let b = smooth.blends[0];
        // endpoint values and slopes match the host pieces exactly
        let t0 = b.s0.exp().exp();
        let t1 = b.s1.exp().exp();
        assert!((b.value(b.s0) - sigma.eval(t0).unwrap()).abs() < 1e-14);
        assert!((b.value(b.s1) - sigma.eval(t1).unwrap()).abs() < 1e-13);
        assert_eq!(b.slope(b.s0), 0.0);
        assert_eq!(b.slope(b.s1), -3.0);
        // no remaining slope break anywhere
        let (miss, _) = smooth.worst_corner_mismatch();
        assert!(miss < 1e-12, "mismatch {miss}");
        // slope bound is not exceeded inside the arc
        for k in 0..=100 {
            let s = b.s0 + (b.s1 - b.s0) * k as f64 / 100.0;
            assert!(b.slope(s).abs() <= 3.0 + 1e-15);
        }
    }

    #[test]
    fn windows_avoid_protected_points() {
        let sigma = corner_example();
        // protect a point very close to the corner at ln t = 4
        let rule = BlendRule::default().with_protected(vec![3.995, 4.0, 6.0]);
        let (smooth, _) = smooth_corners(&sigma, &rule).unwrap();
        let b = smooth.blends[0];
        let s_protected = 3.995f64.ln();
        assert!(
            b.s0 > s_protected || b.s1 < s_protected,
            "window [{}, {}] covers the protected abscissa {s_protected}",
            b.s0,
            b.s1
        );
        // the corner's own entry in the protected list does not zero the window
        assert!(b.s1 - b.s0 > 1e-6);
    }

    #[test]
    fn evaluation_inside_window_uses_the_arc() {
        let sigma = corner_example();
        let (smooth, _) = smooth_corners(&sigma, &BlendRule::default()).unwrap();
        let b = smooth.blends[0];
        let s_mid = 0.5 * (b.s0 + b.s1);
        let t_mid = s_mid.exp().exp();
        let arc = b.value(s_mid);
        let raw = sigma.eval(t_mid).unwrap();
        assert!((smooth.eval(t_mid).unwrap() - arc).abs() < 1e-14);
        // the arc dips below the corner by (m0 − m1)·h/4 at the centre
        let h = 0.5 * (b.s1 - b.s0);
        assert!(((raw - arc) - 3.0 * h / 4.0).abs() < 1e-12);
    }
}
