//! The anchor-sequence ledger: every scalar sequence produced while building a
//! piecewise proximate order, in construction order, with its own invariant
//! checks and JSON export.

use serde::{Deserialize, Serialize};

use crate::{QpoError, Result};

/// Stair bookkeeping for one excursion: plateau start, descent start (first
/// admissible integer), and the meeting point with the envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StairStep {
    /// Plateau abscissa u_k (level holds on [u_k, t_next]).
    pub u: f64,
    /// First integer ≥ u_k + 1 where the envelope has dropped below the level.
    pub t_next: f64,
    /// Abscissa where the descent meets the envelope (u_{k+1}).
    pub u_next: f64,
    /// Level held on the plateau.
    pub level: f64,
}

/// All anchor sequences of one construction run.
///
/// For each complete cycle n the ledger stores the excursion start r_n (index
/// first hits rho − eps_n), the argmax R_n, the excursion end r_star_n (tied
/// to r_prime_n by (lambda+eta)·log r_star = (lambda+eta/2)·log r_prime), the
/// down-crossing r_prime_n of lambda + eta/2, the excursion maximum M_n, the
/// rise slope C_n (present for cycles whose successor is complete), and the
/// stair steps of the descent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SequenceLedger {
    pub lambda: f64,
    pub rho: f64,
    pub eta: f64,
    /// eps_n, strictly decreasing, eps_1 < min{1, eta}.
    pub eps: Vec<f64>,
    pub r: Vec<f64>,
    pub r_prime: Vec<f64>,
    pub r_star: Vec<f64>,
    pub m: Vec<f64>,
    pub r_argmax: Vec<f64>,
    /// C_n for every cycle n with a complete successor (may be one shorter).
    pub c: Vec<f64>,
    /// Per-cycle stair steps (filled by the descent stage).
    pub stairs: Vec<Vec<StairStep>>,
    /// True when the scan hit the domain end before completing another cycle.
    pub truncated: bool,
    /// Construction notices (clamped descents, thinning skips, …).
    pub flags: Vec<String>,
}

impl SequenceLedger {
    /// Number of complete cycles (r, r_star, r_prime all present).
    pub fn depth(&self) -> usize {
        self.r.len().min(self.r_star.len()).min(self.r_prime.len())
    }

    /// Verify the structural invariants; returns the first violation.
    pub fn check_invariants(&self) -> Result<()> {
        if self.eps.is_empty() {
            return Err(QpoError::Parameter("ledger has no eps sequence".into()));
        }
        let eta = self.eta;
        if !(self.eps[0] < 1.0f64.min(eta) + 1e-15) {
            return Err(QpoError::Parameter(format!(
                "eps_1 = {} must be below min(1, eta) = {}",
                self.eps[0],
                1.0f64.min(eta)
            )));
        }
        for w in self.eps.windows(2) {
            if !(w[1] < w[0] && w[1] > 0.0) {
                return Err(QpoError::Parameter(
                    "eps sequence must be strictly decreasing and positive".into(),
                ));
            }
        }
        let depth = self.depth();
        for n in 0..depth {
            let (r, rs, rp) = (self.r[n], self.r_star[n], self.r_prime[n]);
            if !(r < rs && rs < rp) {
                return Err(QpoError::Numeric(format!(
                    "interleaving fails at cycle {}: r={r}, r_star={rs}, r_prime={rp}",
                    n + 1
                )));
            }
            if n + 1 < depth && !(rp < self.r[n + 1]) {
                return Err(QpoError::Numeric(format!(
                    "interleaving fails between cycles {} and {}",
                    n + 1,
                    n + 2
                )));
            }
            // the defining relation between r_star and r_prime
            let lhs = (self.lambda + eta) * rs.ln();
            let rhs = (self.lambda + eta / 2.0) * rp.ln();
            if (lhs - rhs).abs() > 1e-10 * rhs.abs().max(1.0) {
                return Err(QpoError::Numeric(format!(
                    "r_star/r_prime relation fails at cycle {}: {lhs} vs {rhs}",
                    n + 1
                )));
            }
        }
        for (n, (&m, &eps)) in self.m.iter().zip(&self.eps).enumerate() {
            if n >= 1 && !(self.rho - eps <= m + 1e-12 && m <= self.rho + self.eps[0] + 1e-12) {
                return Err(QpoError::Numeric(format!(
                    "excursion maximum M_{} = {m} outside [rho - eps, rho + eps_1]",
                    n + 1
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("ledger serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone())
            .map_err(|e| QpoError::Config(format!("ledger JSON invalid: {e}")))
    }
}
