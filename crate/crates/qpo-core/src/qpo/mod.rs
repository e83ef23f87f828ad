//! Construction of piecewise proximate orders from growth functions: anchor
//! sequences, excursion envelopes, stair descents, rise connectors, corner
//! smoothing, and the associated majorant, plus verification and the
//! small-oscillation necessity sweep.

pub mod anchors;
pub mod build;
pub mod excursion;
pub mod ledger;
pub mod majorant;
pub mod report;
pub mod segments;
pub mod smooth;

pub use anchors::{find_anchor_sequences, EpsRule};
pub use build::{build_qpo, build_qpo_with_rule, eta_necessity_sweep, verify_qpo, EtaNecessityRow};
pub use excursion::{excursion_profile, EnvelopeSampler};
pub use ledger::{SequenceLedger, StairStep};
pub use majorant::{AssociatedMajorant, MajorantPiece};
pub use report::{PropertyCheck, PropertyReport};
pub use segments::{connect_rise, stair_descent, Blend, PiecewiseProximateOrder, SegmentKind, SigmaSegment};
pub use smooth::{smooth_corners, BlendRule};
