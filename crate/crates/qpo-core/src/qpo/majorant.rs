//! The associated majorant A*: equal to t^sigma outside the excursion
//! windows, and to t^{envelope} inside them, where the continuous envelope
//! view makes the product non-decreasing.
//!
//! Values are kept in log form; t^sigma overflows f64 long before log A*
//! loses accuracy.

use crate::qpo::excursion::EnvelopeSampler;
use crate::qpo::segments::PiecewiseProximateOrder;
use crate::{QpoError, Result};

#[derive(Debug, Clone)]
pub enum MajorantPiece {
    /// log A*(t) = sigma(t) · log t on [exp(ln_lo), exp(ln_hi)].
    SigmaPower { ln_lo: f64, ln_hi: f64 },
    /// log A*(t) = envelope(t) · log t over the excursion window the sampler
    /// covers.
    EnvelopePower { env: EnvelopeSampler },
}

impl MajorantPiece {
    pub fn ln_lo(&self) -> f64 {
        match self {
            MajorantPiece::SigmaPower { ln_lo, .. } => *ln_lo,
            MajorantPiece::EnvelopePower { env } => env.ln_lo,
        }
    }

    pub fn ln_hi(&self) -> f64 {
        match self {
            MajorantPiece::SigmaPower { ln_hi, .. } => *ln_hi,
            MajorantPiece::EnvelopePower { env } => env.ln_hi,
        }
    }
}

/// The non-decreasing majorant associated with a quasi proximate order.
#[derive(Debug, Clone)]
pub struct AssociatedMajorant {
    pieces: Vec<MajorantPiece>,
}

impl AssociatedMajorant {
    pub fn from_pieces(pieces: Vec<MajorantPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(QpoError::Parameter("majorant needs at least one piece".into()));
        }
        for w in pieces.windows(2) {
            let gap = (w[0].ln_hi() - w[1].ln_lo()).abs();
            if gap > 1e-9 * w[1].ln_lo().abs().max(1.0) {
                return Err(QpoError::Numeric(format!(
                    "majorant pieces not contiguous at ln t = {}",
                    w[0].ln_hi()
                )));
            }
        }
        Ok(AssociatedMajorant { pieces })
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces[0].ln_lo().exp(),
            self.pieces[self.pieces.len() - 1].ln_hi().exp(),
        )
    }

    fn piece_at(&self, ln_t: f64) -> Result<&MajorantPiece> {
        let lo = self.pieces[0].ln_lo();
        let hi = self.pieces[self.pieces.len() - 1].ln_hi();
        let slack = 1e-9 * hi.abs().max(1.0);
        if ln_t < lo - slack || ln_t > hi + slack {
            return Err(QpoError::Domain(format!(
                "t = {} outside the majorant domain [{}, {}]",
                ln_t.exp(),
                lo.exp(),
                hi.exp()
            )));
        }
        let i = self
            .pieces
            .partition_point(|p| p.ln_lo() <= ln_t)
            .saturating_sub(1);
        Ok(&self.pieces[i])
    }

    /// log A*(t).
    pub fn log_eval(&self, sigma: &PiecewiseProximateOrder, t: f64) -> Result<f64> {
        if !(t > 1.0) || !t.is_finite() {
            return Err(QpoError::Domain(format!(
                "the majorant is defined for t > 1 only, got {t}"
            )));
        }
        let ln_t = t.ln();
        match self.piece_at(ln_t)? {
            MajorantPiece::SigmaPower { .. } => Ok(sigma.eval(t)? * ln_t),
            MajorantPiece::EnvelopePower { env } => {
                let t_c = t.clamp(env.t[0], *env.t.last().unwrap());
                Ok(env.continuous_value(t_c)? * t_c.ln())
            }
        }
    }

    /// A*(t); may overflow to infinity for large exponents — prefer
    /// `log_eval` for comparisons.
    pub fn eval(&self, sigma: &PiecewiseProximateOrder, t: f64) -> Result<f64> {
        Ok(self.log_eval(sigma, t)?.exp())
    }

    /// The excursion windows (cap abscissa R_n, window end r_star_n, floor),
    /// in order.
    pub fn excursion_windows(&self) -> Vec<(f64, f64, f64)> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                MajorantPiece::EnvelopePower { env } => {
                    Some((env.ln_lo.exp(), env.ln_hi.exp(), env.floor))
                }
                MajorantPiece::SigmaPower { .. } => None,
            })
            .collect()
    }
}
