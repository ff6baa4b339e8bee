//! Structural and numerical homeostasis analysis for mass-action reaction
//! networks.
//!
//! The crate decides, from network structure alone, whether a mass-action
//! system can exhibit infinitesimal homeostasis (by testing injectivity of a
//! homeostasis-associated network through exact determinant enumeration and
//! the DSR-graph criterion) or must exhibit perfect homeostasis, and locates
//! homeostasis points numerically when the structural test is inconclusive.

pub mod corpus;
pub mod dsr;
pub mod error;
pub mod exact;
pub mod homeostasis;
pub mod injectivity;
pub mod massaction;
pub mod model;
pub mod numeric;
pub mod parser;
pub mod poly;

pub use error::{CrnError, Result};
pub use model::{Complex, RateSymbol, RawReaction, Reaction, ReactionNetwork, SpeciesId};
