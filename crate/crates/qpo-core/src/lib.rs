//! Growth scales for entire and analytic functions: construction of piecewise
//! proximate-order refinements from admissible growth functions, diagnostics for
//! analytic functions in the unit disc (maximum modulus, integral means, zero
//! counting, canonical products), and conformal strip-map asymptotics.

pub mod disc;
pub mod error;
pub mod grid;
pub mod growth;
pub mod harness;
pub mod pchip;
pub mod qpo;
pub mod quad;
pub mod strip;

pub use error::QpoError;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, QpoError>;
