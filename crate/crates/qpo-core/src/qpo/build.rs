//! End-to-end construction of a quasi proximate order from a growth
//! function, the property verifier for the result, and the eta-necessity
//! sweep that measures how the derivative witness blows up as eta shrinks.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;
use crate::growth::GrowthFunction;
use crate::qpo::anchors::{find_anchor_sequences, EpsRule};
use crate::qpo::excursion::excursion_profile;
use crate::qpo::ledger::SequenceLedger;
use crate::qpo::majorant::{AssociatedMajorant, MajorantPiece};
use crate::qpo::report::{PropertyCheck, PropertyReport};
use crate::qpo::segments::{
    connect_rise, stair_descent, PiecewiseProximateOrder, SegmentKind, SigmaSegment,
};
use crate::qpo::smooth::{smooth_corners, BlendRule};
use crate::{QpoError, Result};

/// Maximum number of anchor cycles the builder will chase.
pub const MAX_CYCLES: usize = 64;

/// Construct a quasi proximate order for the growth function `a` with target
/// limit levels rho (upper) and lambda + eta (lower).
///
/// Returns the smoothed order sigma, its associated majorant, and the ledger
/// of anchor cycles (with stair steps, rise slopes, and builder notes).
pub fn build_qpo(
    a: &GrowthFunction,
    rho: f64,
    lambda: f64,
    eta: f64,
    grid: &GridSpec,
    t_max: f64,
) -> Result<(PiecewiseProximateOrder, AssociatedMajorant, SequenceLedger)> {
    build_qpo_with_rule(a, rho, lambda, eta, EpsRule::default(), grid, t_max)
}

/// [`build_qpo`] with an explicit excursion-tolerance rule (custom eps_1).
pub fn build_qpo_with_rule(
    a: &GrowthFunction,
    rho: f64,
    lambda: f64,
    eta: f64,
    rule: EpsRule,
    grid: &GridSpec,
    t_max: f64,
) -> Result<(PiecewiseProximateOrder, AssociatedMajorant, SequenceLedger)> {
    let t_end = t_max.min(a.domain_end());
    let start = a.domain_start().max(E);
    if !(t_end > start) {
        return Err(QpoError::Parameter(format!(
            "construction range empty: [{start}, {t_end}]"
        )));
    }
    let ppd = grid.points_per_decade;
    let mut ledger = find_anchor_sequences(a, rho, lambda, eta, rule, MAX_CYCLES, t_end, ppd)?;
    let depth = ledger.depth();

    // excursion profiles (refined envelopes) per cycle
    let mut envs = Vec::with_capacity(depth);
    for n in 1..=depth {
        let (m, r_cap, env) = excursion_profile(a, &ledger, n, ppd)?;
        if (m - ledger.m[n - 1]).abs() > 1e-9 * m.abs().max(1.0) {
            ledger.flags.push(format!(
                "cycle {n}: refined excursion maximum {m} differs from the scan value {}",
                ledger.m[n - 1]
            ));
        }
        ledger.m[n - 1] = m;
        ledger.r_argmax[n - 1] = r_cap;
        if env.capped {
            ledger
                .flags
                .push(format!("cycle {n}: envelope refinement capped at the cell budget"));
        }
        envs.push(env);
    }

    let mut segments: Vec<SigmaSegment> = Vec::new();
    let mut pieces: Vec<MajorantPiece> = Vec::new();
    ledger.c.clear();

    // leading plateau: the index stays below rho − eps_1 before the first
    // anchor, so the first excursion maximum majorizes it there
    let r_cap_1 = ledger.r_argmax[0];
    if r_cap_1 > start * (1.0 + 1e-14) {
        segments.push(SigmaSegment {
            ln_lo: start.ln(),
            ln_hi: r_cap_1.ln(),
            value_lo: ledger.m[0],
            slope: 0.0,
            kind: SegmentKind::Constant,
        });
        pieces.push(MajorantPiece::SigmaPower {
            ln_lo: start.ln(),
            ln_hi: r_cap_1.ln(),
        });
    }

    let mut k_bound = rho + 1.0;
    for n in 1..=depth {
        let idx = n - 1;
        let r_cap = ledger.r_argmax[idx];
        let r_star = ledger.r_star[idx];
        let (stair_segs, steps, clamped, end_value) =
            stair_descent(&envs[idx], r_cap, r_star, ledger.m[idx], rho)?;
        segments.extend(stair_segs);
        ledger.stairs[idx] = steps;
        if clamped {
            ledger.flags.push(format!(
                "cycle {n}: descent clamped at the excursion end (level {end_value:.6})"
            ));
        }
        pieces.push(MajorantPiece::EnvelopePower {
            env: envs[idx].clone(),
        });

        if n < depth {
            let m_next = ledger.m[idx + 1];
            let r_prime = ledger.r_prime[idx];
            let (c_n, rise) = connect_rise(end_value, m_next, r_star, r_prime, lambda, eta)?;
            ledger.c.push(c_n);
            k_bound = k_bound.max(c_n.abs());
            segments.push(rise);
            let r_cap_next = ledger.r_argmax[idx + 1];
            segments.push(SigmaSegment {
                ln_lo: r_prime.ln(),
                ln_hi: r_cap_next.ln(),
                value_lo: m_next,
                slope: 0.0,
                kind: SegmentKind::Constant,
            });
            pieces.push(MajorantPiece::SigmaPower {
                ln_lo: r_star.ln(),
                ln_hi: r_cap_next.ln(),
            });
        } else if t_end > r_star * (1.0 + 1e-14) {
            // no further maximum to rise to: extend at the final level
            segments.push(SigmaSegment {
                ln_lo: r_star.ln(),
                ln_hi: t_end.ln(),
                value_lo: end_value,
                slope: 0.0,
                kind: SegmentKind::Constant,
            });
            pieces.push(MajorantPiece::SigmaPower {
                ln_lo: r_star.ln(),
                ln_hi: t_end.ln(),
            });
            ledger
                .flags
                .push(format!("constant extension past the final excursion of cycle {n}"));
        }
    }

    let raw = PiecewiseProximateOrder::from_segments(segments, lambda, rho, eta, k_bound)?;

    // protected abscissas: evaluation grid, growth breakpoints, anchors
    let mut protected: Vec<f64> = GridSpec::new(start, t_end, ppd)?
        .points()
        .iter()
        .map(|t| t.ln())
        .collect();
    for b in a.breakpoints() {
        if b > start && b < t_end {
            protected.push(b.ln());
        }
    }
    for v in ledger
        .r
        .iter()
        .chain(&ledger.r_star)
        .chain(&ledger.r_prime)
        .chain(&ledger.r_argmax)
    {
        protected.push(v.ln());
    }
    let rule = BlendRule::default().with_protected(protected);
    let (sigma, notes) = smooth_corners(&raw, &rule)?;
    ledger.flags.extend(notes);

    let majorant = AssociatedMajorant::from_pieces(pieces)?;
    ledger.check_invariants()?;
    Ok((sigma, majorant, ledger))
}

/// Verify the defining properties of a constructed order against its growth
/// function on the evaluation grid. Every row carries the measured quantity
/// and the bound it must stay within.
pub fn verify_qpo(
    sigma: &PiecewiseProximateOrder,
    a_star: &AssociatedMajorant,
    a: &GrowthFunction,
    grid: &GridSpec,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::default();
    let (lo, hi) = sigma.domain();
    let mut ts: Vec<f64> = grid
        .points()
        .into_iter()
        .filter(|&t| t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12))
        .map(|t| t.clamp(lo, hi))
        .collect();
    for b in a.breakpoints() {
        if b > lo && b < hi {
            ts.push(b);
        }
    }
    let windows = a_star.excursion_windows();
    for &(r_cap, r_star, _) in &windows {
        ts.push(r_cap);
        ts.push(r_star);
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * y.abs());
    if ts.len() < 16 {
        return Err(QpoError::Config(
            "verification grid too sparse for the order's domain".into(),
        ));
    }

    // piecewise structure: continuity and post-smoothing C¹
    let (jump, jump_at) = sigma.worst_junction_jump();
    report.push(PropertyCheck::new(
        "sigma_continuity",
        jump <= 1e-9,
        jump,
        Some(1e-9),
        jump_at,
        "largest value jump across piece junctions",
    ));
    let (miss, miss_at) = sigma.worst_corner_mismatch();
    report.push(PropertyCheck::new(
        "sigma_smooth_c1",
        miss <= 1e-6,
        miss,
        Some(1e-6),
        miss_at,
        "largest one-sided slope mismatch after corner rounding",
    ));

    // pointwise data along the grid
    let mut log_astar = Vec::with_capacity(ts.len());
    let mut sig_ln = Vec::with_capacity(ts.len());
    let mut sig = Vec::with_capacity(ts.len());
    for &t in &ts {
        let s = sigma.eval(t)?;
        sig.push(s);
        sig_ln.push(s * t.ln());
        log_astar.push(a_star.log_eval(sigma, t)?);
    }

    // majorant monotone along the grid
    let mut worst_drop = 0.0f64;
    let mut drop_at = ts[0];
    for i in 1..ts.len() {
        let scale = log_astar[i].abs().max(1.0);
        let drop = (log_astar[i - 1] - log_astar[i]) / scale;
        if drop > worst_drop {
            worst_drop = drop;
            drop_at = ts[i];
        }
    }
    report.push(PropertyCheck::new(
        "majorant_nondecreasing",
        worst_drop <= 1e-12,
        worst_drop,
        Some(1e-12),
        drop_at,
        "largest relative decrease of log A* between grid neighbours",
    ));

    // A* ≤ t^sigma everywhere
    let mut worst_deficit = 0.0f64;
    let mut deficit_at = ts[0];
    for i in 0..ts.len() {
        let scale = sig_ln[i].abs().max(1.0);
        let deficit = (log_astar[i] - sig_ln[i]) / scale;
        if deficit > worst_deficit {
            worst_deficit = deficit;
            deficit_at = ts[i];
        }
    }
    report.push(PropertyCheck::new(
        "power_dominates_majorant",
        worst_deficit <= 1e-12,
        worst_deficit,
        Some(1e-12),
        deficit_at,
        "largest relative excess of log A* over sigma·log t",
    ));

    // sandwich upper bound per excursion window
    let pow9 = 9f64.powf(sigma.rho + 1.0);
    let mut worst_ratio = 0.0f64;
    let mut ratio_at = ts[0];
    for &(r_cap, r_star, _) in &windows {
        let budget = (pow9 / r_cap).ln_1p();
        let i0 = ts.partition_point(|&t| t < r_cap * (1.0 - 1e-13));
        for i in i0..ts.len() {
            if ts[i] > r_star * (1.0 + 1e-13) {
                break;
            }
            let slack = sig_ln[i] - log_astar[i];
            let ratio = slack / budget;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                ratio_at = ts[i];
            }
        }
    }
    report.push(PropertyCheck::new(
        "sandwich_upper",
        worst_ratio <= 1.0,
        worst_ratio,
        Some(1.0),
        ratio_at,
        "worst (sigma·log t − log A*) over its per-cycle budget log(1 + 9^{rho+1}/R_n)",
    ));

    // excursion end levels
    let floor = sigma.lambda + sigma.eta;
    let mut worst_end = f64::NEG_INFINITY;
    let mut end_at = ts[0];
    let mut worst_end_low = 0.0f64;
    let mut end_low_at = ts[0];
    for &(r_cap, r_star, _) in &windows {
        let budget = pow9 / (r_cap * r_cap.ln());
        let v = sigma.eval(r_star)?;
        let ratio = (v - floor) / budget;
        if ratio > worst_end {
            worst_end = ratio;
            end_at = r_star;
        }
        let deficit = floor - v;
        if deficit > worst_end_low {
            worst_end_low = deficit;
            end_low_at = r_star;
        }
    }
    report.push(PropertyCheck::new(
        "end_level_upper",
        worst_end <= 1.0,
        worst_end,
        Some(1.0),
        end_at,
        "worst (sigma(r_star) − lambda − eta) over its budget 9^{rho+1}/(R_n log R_n)",
    ));
    report.push(PropertyCheck::new(
        "end_level_lower",
        worst_end_low <= 1e-12,
        worst_end_low,
        Some(1e-12),
        end_low_at,
        "largest deficit of sigma(r_star) below lambda + eta",
    ));

    // growth function stays below the power of sigma
    let mut worst_excess = f64::NEG_INFINITY;
    let mut excess_at = ts[0];
    for i in 0..ts.len() {
        let log_a = a.log_eval(ts[i])?;
        let scale = sig_ln[i].abs().max(1.0);
        let excess = (log_a - sig_ln[i]) / scale;
        if excess > worst_excess {
            worst_excess = excess;
            excess_at = ts[i];
        }
    }
    report.push(PropertyCheck::new(
        "growth_below_power",
        worst_excess <= 1e-12,
        worst_excess,
        Some(1e-12),
        excess_at,
        "largest relative excess of log A over sigma·log t",
    ));

    // tail attainment of the two limit levels
    let ln_lo = lo.ln();
    let ln_hi = hi.ln();
    let tail_start = 0.5 * (ln_lo + ln_hi);
    let mut tail_sup = f64::NEG_INFINITY;
    let mut tail_inf = f64::INFINITY;
    let mut sup_at = hi;
    let mut inf_at = hi;
    for i in 0..ts.len() {
        if ts[i].ln() < tail_start {
            continue;
        }
        if sig[i] > tail_sup {
            tail_sup = sig[i];
            sup_at = ts[i];
        }
        if sig[i] < tail_inf {
            tail_inf = sig[i];
            inf_at = ts[i];
        }
    }
    let sup_gap = (tail_sup - sigma.rho).abs();
    report.push(PropertyCheck::new(
        "tail_sup_gap",
        sup_gap <= 0.1,
        sup_gap,
        Some(0.1),
        sup_at,
        "distance of the tail-half supremum of sigma from rho",
    ));
    let inf_gap = (tail_inf - floor).abs();
    report.push(PropertyCheck::new(
        "tail_inf_gap",
        inf_gap <= 0.1,
        inf_gap,
        Some(0.1),
        inf_at,
        "distance of the tail-half infimum of sigma from lambda + eta",
    ));

    // uniform slope witness
    let witness = sigma.max_abs_slope();
    report.push(PropertyCheck::new(
        "slope_witness",
        witness <= 1.1 * sigma.k_bound,
        witness,
        Some(1.1 * sigma.k_bound),
        hi,
        "exact sup of |sigma'(t)|·t·log t against 1.1 times the declared bound",
    ));

    Ok(report)
}

/// One row of the eta-necessity sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtaNecessityRow {
    pub eta: f64,
    /// Measured sup of |sigma'(t)|·t·log t for the order built at this eta.
    pub witness: f64,
    /// The blow-up floor (rho − lambda − eta) / log((lambda+eta)/lambda) that
    /// any order with these limit levels must exceed asymptotically.
    pub lower_bound: f64,
    /// Complete anchor cycles found below the horizon.
    pub cycles: usize,
    pub truncated: bool,
}

/// Build the blow-up counterexample for (lambda, rho) and measure how the
/// derivative witness grows as eta decreases.
pub fn eta_necessity_sweep(
    lambda: f64,
    rho: f64,
    eta_list: &[f64],
    t_max: f64,
    points_per_decade: usize,
) -> Result<Vec<EtaNecessityRow>> {
    if !(lambda > 0.0) {
        return Err(QpoError::Parameter(
            "the sweep's lower bound needs lambda > 0".into(),
        ));
    }
    if eta_list.is_empty() {
        return Err(QpoError::Parameter("eta list must not be empty".into()));
    }
    let a = GrowthFunction::build_counterexample(lambda, rho, 0.01, t_max)?;
    let grid = GridSpec::new(a.domain_start().max(E), t_max, points_per_decade)?;
    let mut rows = Vec::with_capacity(eta_list.len());
    for &eta in eta_list {
        if !(eta > 0.0 && eta < rho - lambda) {
            return Err(QpoError::Parameter(format!(
                "eta must lie in (0, rho − lambda), got {eta}"
            )));
        }
        let (sigma, _, ledger) = build_qpo(&a, rho, lambda, eta, &grid, t_max)?;
        rows.push(EtaNecessityRow {
            eta,
            witness: sigma.max_abs_slope(),
            lower_bound: (rho - lambda - eta) / ((lambda + eta) / lambda).ln(),
            cycles: ledger.depth(),
            truncated: ledger.truncated,
        });
    }
    Ok(rows)
}
