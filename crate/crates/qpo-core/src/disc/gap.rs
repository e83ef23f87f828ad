//! Factory for sparse power series whose max term tracks a prescribed radial
//! growth profile: the discrete Legendre transform of the profile in the
//! variable y = log(1/r) yields log-coefficients, contact radii, and a proxy
//! zero set concentrated where the dominant degree jumps.

use num_complex::Complex64;

use crate::disc::model::{AnalyticFunctionModel, ZeroSequence};
use crate::{QpoError, Result};

/// One contact: a support degree together with the sampled radius where the
/// max term equals the target profile exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapContact {
    pub n: u64,
    pub r: f64,
    /// Target profile value at the contact radius (= log max term there).
    pub b: f64,
}

/// A built gap series: the function model, its sparse support, the contact
/// set, any profile knots dropped for breaking convexity, and whether the
/// degree cap truncated the support.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    pub model: AnalyticFunctionModel,
    /// (degree, log-coefficient), degrees strictly increasing.
    pub support: Vec<(u64, f64)>,
    pub contacts: Vec<GapContact>,
    /// Sampled radii whose profile points lie strictly above the convex
    /// minorant in y = log(1/r) (convexity violations; the minorant is used).
    pub dropped_radii: Vec<f64>,
    pub truncated: bool,
    /// Hull vertices as (radius, profile value, degree jump across the
    /// vertex) — the degree jump is the multiplicity of the proxy zero
    /// cluster at that radius.
    pub vertex_jumps: Vec<(f64, f64, u64)>,
}

impl GapSeries {
    /// log of the max term at radius r: max over support of
    /// log a_n + n·log r.
    pub fn log_max_term(&self, r: f64) -> Result<f64> {
        if !(0.0 < r && r < 1.0) {
            return Err(QpoError::Domain(format!(
                "max term needs r in (0,1), got {r}"
            )));
        }
        let ln_r = r.ln();
        Ok(self
            .support
            .iter()
            .map(|&(n, la)| la + n as f64 * ln_r)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Degree of the max term at radius r (ties → smaller degree).
    pub fn max_term_degree(&self, r: f64) -> Result<u64> {
        if !(0.0 < r && r < 1.0) {
            return Err(QpoError::Domain(format!(
                "max term needs r in (0,1), got {r}"
            )));
        }
        let ln_r = r.ln();
        let mut best = f64::NEG_INFINITY;
        let mut deg = 0u64;
        for &(n, la) in &self.support {
            let v = la + n as f64 * ln_r;
            if v > best {
                best = v;
                deg = n;
            }
        }
        Ok(deg)
    }

    /// Proxy zero set: at each hull vertex the dominant degree jumps by m,
    /// and a series behaves there like a two-term binomial whose m zeros
    /// cluster at the vertex modulus; the proxy places m zeros at that
    /// modulus with golden-angle-spread arguments. Errors if the total
    /// multiplicity exceeds `cap` (pick a shallower profile instead).
    pub fn zero_proxy(&self, cap: usize) -> Result<ZeroSequence> {
        let total: u64 = self.vertex_jumps.iter().map(|&(_, _, m)| m).sum();
        if total > cap as u64 {
            return Err(QpoError::Parameter(format!(
                "proxy zero multiplicity {total} exceeds cap {cap}"
            )));
        }
        let golden_angle = 2.0 * std::f64::consts::PI * (1.0 - 0.618_033_988_749_894_9);
        let tau = 2.0 * std::f64::consts::PI;
        let mut pts = Vec::with_capacity(total as usize);
        let mut counter = 0u64;
        for &(r, _, m) in &self.vertex_jumps {
            for _ in 0..m {
                counter += 1;
                let phi = (counter as f64 * golden_angle) % tau;
                pts.push(Complex64::from_polar(r, phi));
            }
        }
        ZeroSequence::new(pts)
    }
}

/// Builds a sparse power series whose log max term equals the sampled profile
/// at the reported contact radii and never exceeds it at any sampled radius.
///
/// `radii` (strictly increasing, in (0,1)) and `b_values` sample the target
/// log-max-term profile B(r), which must be non-decreasing; convexity of B in
/// y = log(1/r) is required for exact representation, and knots violating it
/// are dropped onto the convex minorant (reported in `dropped_radii`).
/// Support degrees are the rounded hull-edge slopes, capped at `n_cap`;
/// coefficients are log a_n = min_j (B_j + n·y_j).
pub fn gap_series_from_profile(
    radii: &[f64],
    b_values: &[f64],
    n_cap: u64,
) -> Result<GapSeries> {
    if radii.len() != b_values.len() || radii.len() < 2 {
        return Err(QpoError::Parameter(
            "gap profile needs ≥ 2 matching (radius, value) samples".into(),
        ));
    }
    for w in radii.windows(2) {
        if !(w[0] < w[1]) {
            return Err(QpoError::Parameter(
                "gap profile radii must be strictly increasing".into(),
            ));
        }
    }
    if radii[0] <= 0.0 || *radii.last().unwrap() >= 1.0 {
        return Err(QpoError::Parameter("gap profile radii must lie in (0,1)".into()));
    }
    if b_values.iter().any(|b| !b.is_finite()) {
        return Err(QpoError::Parameter("gap profile values must be finite".into()));
    }
    for w in b_values.windows(2) {
        if w[1] < w[0] - 1e-9 * (1.0 + w[0].abs()) {
            return Err(QpoError::Parameter(
                "gap profile must be non-decreasing in r".into(),
            ));
        }
    }
    // Points in y = log(1/r), ascending y = descending r.
    let m = radii.len();
    let ys: Vec<f64> = (0..m).map(|j| -radii[m - 1 - j].ln()).collect();
    let bs: Vec<f64> = (0..m).map(|j| b_values[m - 1 - j]).collect();
    let rs: Vec<f64> = (0..m).map(|j| radii[m - 1 - j]).collect();

    // Lower convex hull by monotone chain: slopes must be non-decreasing.
    let mut hull: Vec<usize> = Vec::new();
    for j in 0..m {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // (y_b − y_a)(B_j − B_a) − (y_j − y_a)(B_b − B_a) ≤ 0 keeps b.
            let cross = (ys[b] - ys[a]) * (bs[j] - bs[a]) - (ys[j] - ys[a]) * (bs[b] - bs[a]);
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(j);
    }
    let on_hull: std::collections::HashSet<usize> = hull.iter().copied().collect();
    let mut dropped_radii: Vec<f64> = (0..m).filter(|j| !on_hull.contains(j)).map(|j| rs[j]).collect();
    dropped_radii.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Edge degrees: rounded negated slopes, non-increasing along ascending y.
    let mut truncated = false;
    let mut edge_degrees: Vec<u64> = Vec::with_capacity(hull.len().saturating_sub(1));
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let slope = (bs[b] - bs[a]) / (ys[b] - ys[a]);
        let n_real = (-slope).max(0.0);
        let n = if n_real > n_cap as f64 {
            truncated = true;
            n_cap
        } else {
            n_real.round() as u64
        };
        edge_degrees.push(n);
    }

    // Support: deduplicated degrees with exact transform coefficients.
    let mut degrees: Vec<u64> = edge_degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let mut support: Vec<(u64, f64)> = Vec::with_capacity(degrees.len());
    let mut contacts: Vec<GapContact> = Vec::with_capacity(degrees.len());
    for &n in &degrees {
        let mut best = f64::INFINITY;
        let mut arg = 0usize;
        for j in 0..m {
            let v = bs[j] + n as f64 * ys[j];
            if v < best {
                best = v;
                arg = j;
            }
        }
        support.push((n, best));
        contacts.push(GapContact {
            n,
            r: rs[arg],
            b: bs[arg],
        });
    }
    contacts.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());

    // Vertex degree jumps (proxy zero multiplicities). Edges along ascending
    // y have non-increasing degrees; at the vertex between edge k−1 and k the
    // dominant degree drops from edge_degrees[k−1]… in ascending radius it
    // jumps up by the difference.
    let mut vertex_jumps = Vec::new();
    for k in 1..edge_degrees.len() {
        let hi = edge_degrees[k - 1];
        let lo = edge_degrees[k];
        if hi > lo {
            let v = hull[k];
            vertex_jumps.push((rs[v], bs[v], hi - lo));
        }
    }
    vertex_jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let model = AnalyticFunctionModel::power_series_sparse_log(&support, *radii.last().unwrap())?;
    Ok(GapSeries {
        model,
        support,
        contacts,
        dropped_radii,
        truncated,
        vertex_jumps,
    })
}
