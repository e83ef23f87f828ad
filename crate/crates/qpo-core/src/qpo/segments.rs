//! The quasi proximate order as a piecewise-linear function of s = log log t.
//!
//! Every constituent piece — constant plateaus, the steep stair descents with
//! slope −(rho+1), and the logarithmic rises with per-cycle slope C_n — is
//! linear in s, so the derivative witness |sigma'(t)| · t · log t equals the
//! stored s-slope exactly and corner smoothing reduces to one-dimensional
//! blending in s.

use serde::{Deserialize, Serialize};

use crate::qpo::excursion::EnvelopeSampler;
use crate::qpo::ledger::StairStep;
use crate::{QpoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// Constant level (plateau at an excursion maximum or the final tail).
    Constant,
    /// Descent at slope −(rho+1) in s, tracking the staircase envelope.
    Descent,
    /// Rise at slope C_n in s, reconnecting to the next excursion maximum.
    Rise,
}

/// One linear-in-s piece of sigma on [exp(ln_lo), exp(ln_hi)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaSegment {
    pub ln_lo: f64,
    pub ln_hi: f64,
    /// Value at ln_lo.
    pub value_lo: f64,
    /// d sigma / d s on this piece, s = log log t.
    pub slope: f64,
    pub kind: SegmentKind,
}

impl SigmaSegment {
    pub fn s_lo(&self) -> f64 {
        self.ln_lo.ln()
    }

    pub fn s_hi(&self) -> f64 {
        self.ln_hi.ln()
    }

    pub fn value_at_s(&self, s: f64) -> f64 {
        self.value_lo + self.slope * (s - self.s_lo())
    }

    pub fn value_hi(&self) -> f64 {
        self.value_at_s(self.s_hi())
    }
}

/// A slope-interpolating parabolic arc replacing a corner of the piecewise
/// function on the s-window [s0, s1]: the slope ramps linearly from m0 to m1,
/// so the value is quadratic, matches both adjacent pieces' values and slopes
/// at the window ends exactly, and never exceeds max(|m0|, |m1|) in slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Blend {
    pub s0: f64,
    pub s1: f64,
    /// Value of the left piece at s0.
    pub p0: f64,
    /// Incoming slope.
    pub m0: f64,
    /// Outgoing slope.
    pub m1: f64,
}

impl Blend {
    pub fn value(&self, s: f64) -> f64 {
        let w = self.s1 - self.s0;
        let u = s - self.s0;
        self.p0 + self.m0 * u + 0.5 * (self.m1 - self.m0) * u * u / w
    }

    pub fn slope(&self, s: f64) -> f64 {
        let w = self.s1 - self.s0;
        self.m0 + (self.m1 - self.m0) * (s - self.s0) / w
    }
}

/// A quasi proximate order: continuous, piecewise linear in s = log log t
/// with corners rounded by parabolic arcs, together with the parameters it
/// was built for and the uniform bound on its s-slope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseProximateOrder {
    pub lambda: f64,
    pub rho: f64,
    pub eta: f64,
    /// Uniform bound max(rho + 1, sup_n C_n) on |d sigma / d s|.
    pub k_bound: f64,
    /// Contiguous pieces ordered by ln_lo.
    pub segments: Vec<SigmaSegment>,
    /// Disjoint corner arcs ordered by s0.
    pub blends: Vec<Blend>,
}

impl PiecewiseProximateOrder {
    pub fn from_segments(
        segments: Vec<SigmaSegment>,
        lambda: f64,
        rho: f64,
        eta: f64,
        k_bound: f64,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(QpoError::Parameter("sigma needs at least one piece".into()));
        }
        for w in segments.windows(2) {
            let gap = (w[0].ln_hi - w[1].ln_lo).abs();
            if gap > 1e-9 * w[1].ln_lo.abs().max(1.0) {
                return Err(QpoError::Numeric(format!(
                    "sigma pieces not contiguous at ln t = {}",
                    w[0].ln_hi
                )));
            }
            let jump = (w[0].value_hi() - w[1].value_lo).abs();
            if jump > 1e-9 {
                return Err(QpoError::Numeric(format!(
                    "sigma pieces discontinuous at ln t = {} (jump {jump:.3e})",
                    w[0].ln_hi
                )));
            }
        }
        for seg in &segments {
            if !(seg.ln_hi > seg.ln_lo) {
                return Err(QpoError::Numeric(format!(
                    "degenerate sigma piece at ln t = {}",
                    seg.ln_lo
                )));
            }
        }
        Ok(PiecewiseProximateOrder {
            lambda,
            rho,
            eta,
            k_bound,
            segments,
            blends: Vec::new(),
        })
    }

    /// Domain in t.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.segments[0].ln_lo.exp(),
            self.segments[self.segments.len() - 1].ln_hi.exp(),
        )
    }

    fn clamp_ln(&self, t: f64) -> Result<f64> {
        if !(t > 1.0) || !t.is_finite() {
            return Err(QpoError::Domain(format!(
                "sigma is defined for t > 1 only, got {t}"
            )));
        }
        let ln_t = t.ln();
        let lo = self.segments[0].ln_lo;
        let hi = self.segments[self.segments.len() - 1].ln_hi;
        let slack = 1e-9 * hi.abs().max(1.0);
        if ln_t < lo - slack || ln_t > hi + slack {
            return Err(QpoError::Domain(format!(
                "t = {t} outside the sigma domain [{}, {}]",
                lo.exp(),
                hi.exp()
            )));
        }
        Ok(ln_t.clamp(lo, hi))
    }

    fn segment_at_ln(&self, ln_t: f64) -> &SigmaSegment {
        let i = self
            .segments
            .partition_point(|seg| seg.ln_lo <= ln_t)
            .saturating_sub(1);
        &self.segments[i]
    }

    fn blend_at_s(&self, s: f64) -> Option<&Blend> {
        let i = self.blends.partition_point(|b| b.s1 < s);
        self.blends.get(i).filter(|b| b.s0 <= s)
    }

    /// sigma(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        let ln_t = self.clamp_ln(t)?;
        let s = ln_t.ln();
        if let Some(b) = self.blend_at_s(s) {
            return Ok(b.value(s));
        }
        Ok(self.segment_at_ln(ln_t).value_at_s(s))
    }

    /// d sigma / d s at t (s = log log t); this equals sigma'(t) · t · log t.
    pub fn slope_in_s(&self, t: f64) -> Result<f64> {
        let ln_t = self.clamp_ln(t)?;
        let s = ln_t.ln();
        if let Some(b) = self.blend_at_s(s) {
            return Ok(b.slope(s));
        }
        Ok(self.segment_at_ln(ln_t).slope)
    }

    /// sigma'(t).
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let ln_t = self.clamp_ln(t)?;
        Ok(self.slope_in_s(t)? / (t * ln_t))
    }

    /// |sigma'(t)| · t · log t, the quantity the uniform slope bound controls.
    pub fn derivative_witness(&self, t: f64) -> Result<f64> {
        Ok(self.slope_in_s(t)?.abs())
    }

    /// Exact supremum of |d sigma / d s| over the whole domain (piecewise
    /// slopes are constant and blend slopes interpolate between them).
    pub fn max_abs_slope(&self) -> f64 {
        self.segments
            .iter()
            .map(|seg| seg.slope.abs())
            .fold(0.0, f64::max)
    }

    /// Largest value jump across interior piece junctions, with its location;
    /// blends replace corners but junction values remain the tiling's seams.
    pub fn worst_junction_jump(&self) -> (f64, f64) {
        let mut worst = 0.0;
        let mut at = self.segments[0].ln_lo.exp();
        for w in self.segments.windows(2) {
            let jump = (w[0].value_hi() - w[1].value_lo).abs();
            if jump > worst {
                worst = jump;
                at = w[1].ln_lo.exp();
            }
        }
        (worst, at)
    }

    /// One-sided slope mismatches that survive smoothing: for every interior
    /// junction and every blend boundary, |left slope − right slope| of
    /// sigma as a function of s. Returns the worst mismatch and its abscissa.
    pub fn worst_corner_mismatch(&self) -> (f64, f64) {
        let mut worst = 0.0f64;
        let mut at = self.segments[0].ln_lo.exp();
        for w in self.segments.windows(2) {
            let s = w[1].s_lo();
            // a junction strictly inside a blend window is smoothed away
            let covered = self
                .blend_at_s(s)
                .map(|b| b.s0 < s && s < b.s1)
                .unwrap_or(false);
            if covered {
                continue;
            }
            let left = self
                .blend_at_s(s - 1e-13)
                .map(|b| b.slope(s))
                .unwrap_or(w[0].slope);
            let right = self
                .blend_at_s(s + 1e-13)
                .map(|b| b.slope(s))
                .unwrap_or(w[1].slope);
            let miss = (left - right).abs();
            if miss > worst {
                worst = miss;
                at = w[1].ln_lo.exp();
            }
        }
        for b in &self.blends {
            // at blend ends the arc meets the host segment; measure both
            for (s, arc_slope) in [(b.s0, b.m0), (b.s1, b.m1)] {
                let ln_t = s.exp();
                let host = self.segment_at_ln(ln_t).slope;
                // the host lookup at the end abscissa may land on either
                // neighbour; accept whichever matches and record the other
                let miss = (arc_slope - host).abs();
                let neighbour = self.segment_at_ln(ln_t - 1e-12).slope;
                let miss = miss.min((arc_slope - neighbour).abs());
                if miss > worst {
                    worst = miss;
                    at = ln_t.exp();
                }
            }
        }
        (worst, at)
    }
}

/// Walk the stair descent of one excursion: constant stretches at the current
/// level alternating with slope −(rho+1) descents, each ending where it meets
/// the staircase envelope. Returns the sigma pieces on [R_n, r_star], the
/// step records, whether the final descent was clamped at r_star, and the
/// value sigma(r_star).
pub fn stair_descent(
    env: &EnvelopeSampler,
    r_cap: f64,
    r_star: f64,
    m_n: f64,
    rho: f64,
) -> Result<(Vec<SigmaSegment>, Vec<StairStep>, bool, f64)> {
    if !(r_star > r_cap) {
        return Err(QpoError::Parameter(format!(
            "excursion window empty: [{r_cap}, {r_star}]"
        )));
    }
    let rate = rho + 1.0;
    let mut segments = Vec::new();
    let mut steps = Vec::new();
    let mut level = m_n;
    let mut u = r_cap;
    let max_iters = env.n_cells() + 2;

    for _ in 0..max_iters {
        // smallest integer > u with staircase value < level
        let t_next = next_integer_below(env, u, level, r_star);
        let Some(t_next) = t_next else {
            // level never drops below the staircase again: constant to r_star
            if r_star > u {
                segments.push(SigmaSegment {
                    ln_lo: u.ln(),
                    ln_hi: r_star.ln(),
                    value_lo: level,
                    slope: 0.0,
                    kind: SegmentKind::Constant,
                });
            }
            return Ok((segments, steps, false, level));
        };
        if t_next > u {
            segments.push(SigmaSegment {
                ln_lo: u.ln(),
                ln_hi: t_next.ln(),
                value_lo: level,
                slope: 0.0,
                kind: SegmentKind::Constant,
            });
        }
        // descend from (t_next, level) at slope −(rho+1) until the staircase
        let s_next = t_next.ln().ln();
        match descent_meet(env, t_next, s_next, level, rate, r_star) {
            Some((t_meet, new_level)) => {
                segments.push(SigmaSegment {
                    ln_lo: t_next.ln(),
                    ln_hi: t_meet.ln(),
                    value_lo: level,
                    slope: -rate,
                    kind: SegmentKind::Descent,
                });
                steps.push(StairStep {
                    u,
                    t_next,
                    u_next: t_meet,
                    level,
                });
                u = t_meet;
                level = new_level;
            }
            None => {
                // still above the staircase at r_star: clamp there
                let end_value = level - rate * (r_star.ln().ln() - s_next);
                segments.push(SigmaSegment {
                    ln_lo: t_next.ln(),
                    ln_hi: r_star.ln(),
                    value_lo: level,
                    slope: -rate,
                    kind: SegmentKind::Descent,
                });
                steps.push(StairStep {
                    u,
                    t_next,
                    u_next: r_star,
                    level,
                });
                return Ok((segments, steps, true, end_value));
            }
        }
        if u >= r_star * (1.0 - 1e-15) {
            return Ok((segments, steps, false, level));
        }
    }
    Err(QpoError::Numeric(
        "stair descent failed to terminate within the cell budget".into(),
    ))
}

/// Smallest integer t with t ≥ u + 1, t ≤ r_star and staircase(t) < level,
/// if any. Staircase cell values are weakly decreasing, so every point at or
/// right of the first qualifying cell qualifies too.
fn next_integer_below(env: &EnvelopeSampler, u: f64, level: f64, r_star: f64) -> Option<f64> {
    let start = env
        .t
        .partition_point(|&x| x <= u)
        .saturating_sub(1)
        .min(env.n_cells() - 1);
    for i in start..env.n_cells() {
        let (a, _, v) = env.cell(i);
        if v < level {
            let c = (u + 1.0).ceil().max(a.ceil());
            return if c <= r_star { Some(c) } else { None };
        }
    }
    None
}

/// First meeting point of the descent y(s) = level − rate·(s − s_next) with
/// the staircase envelope, walking cells rightward from t_next.
fn descent_meet(
    env: &EnvelopeSampler,
    t_next: f64,
    s_next: f64,
    level: f64,
    rate: f64,
    r_star: f64,
) -> Option<(f64, f64)> {
    let s_end = r_star.ln().ln();
    let start = env
        .t
        .partition_point(|&x| x <= t_next)
        .saturating_sub(1)
        .min(env.n_cells() - 1);
    for i in start..env.n_cells() {
        let (a, b, v) = env.cell(i);
        if v >= level {
            continue;
        }
        let s_meet = s_next + (level - v) / rate;
        if s_meet > s_end {
            return None;
        }
        let t_meet = s_meet.exp().exp();
        // the meet belongs to this cell if it lands before the cell end; the
        // staircase only falls, so walking on can only push the meet later
        if t_meet <= b || i == env.n_cells() - 1 {
            let t_meet = t_meet.clamp(a.max(t_next), b.min(r_star));
            return Some((t_meet, v));
        }
    }
    None
}

/// Connect the end of one excursion to the next maximum. The rise has slope
/// C_n = (m_next − sigma_star) / log((lambda+eta)/(lambda+eta/2)) in s, which
/// lands exactly on m_next at r_prime because
/// (lambda+eta)·log r_star = (lambda+eta/2)·log r_prime.
pub fn connect_rise(
    sigma_star: f64,
    m_next: f64,
    r_star: f64,
    r_prime: f64,
    lambda: f64,
    eta: f64,
) -> Result<(f64, SigmaSegment)> {
    if !(r_prime > r_star) {
        return Err(QpoError::Parameter(format!(
            "rise window empty: [{r_star}, {r_prime}]"
        )));
    }
    let denom = ((lambda + eta) / (lambda + eta / 2.0)).ln();
    if !(denom > 0.0) {
        return Err(QpoError::Parameter(
            "rise slope undefined: need eta > 0 and lambda + eta/2 > 0".into(),
        ));
    }
    let c = (m_next - sigma_star) / denom;
    Ok((
        c,
        SigmaSegment {
            ln_lo: r_star.ln(),
            ln_hi: r_prime.ln(),
            value_lo: sigma_star,
            slope: c,
            kind: SegmentKind::Rise,
        },
    ))
}
