//! Exact density fingerprints of periodic point sequences on the real line.
//!
//! A periodic sequence `S = {p_1, ..., p_m} + ℤ` is fingerprinted by the
//! family of density functions `ψ_k(t)`: the fraction of a unit cell covered
//! by exactly `k` of the closed intervals `[p_i - t, p_i + t]`. Every `ψ_k` is
//! piecewise linear with rational corners, and everything here is computed
//! exactly.
//!
//! - [`sequence`]: sequences, gap vectors, primitive cells, isometry classes.
//! - [`pwl`]: exact piecewise-linear function algebra and trapezoid summands.
//! - [`density`]: closed-form `ψ_k`, fingerprints, areas `ρ_k`, symmetries.
//! - [`oracle`]: direct coverage sweep used to cross-check [`density`].
//! - [`reconstruct`]: recovery of a generic sequence from `ψ_1`.
//! - [`io`]: JSON and CSV document formats.

pub mod density;
pub mod error;
pub mod io;
pub mod oracle;
pub mod pwl;
pub mod rational;
pub mod reconstruct;
pub mod sequence;

pub use density::{Fingerprint, FingerprintOptions};
pub use error::{Error, Result};
pub use pwl::{Corner, PiecewiseLinear, TrapezoidTriple};
pub use rational::Rational;
pub use sequence::{GapVector, PeriodicSequence};
