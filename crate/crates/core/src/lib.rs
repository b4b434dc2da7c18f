//! Binary Kloosterman sums over GF(2^m).
//!
//! The crate evaluates `K(a) = Σ_{x ≠ 0} (-1)^Tr(x + a/x)` exactly, classifies
//! `K(a) mod 24` for even `m` from trace data alone, and carries the counting
//! machinery (equation solution counts, cubic and curve censuses, character
//! sums, value-distribution tables) needed to check every step exhaustively on
//! small fields.

pub mod error;
pub mod field;
pub mod charsum;
pub mod cubic;
pub mod distribution;
pub mod equation;
pub mod kloosterman;
mod poly2;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement};
