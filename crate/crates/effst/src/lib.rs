//! Sato-Tate trace statistics at desk scale.
//!
//! The crate has three layers:
//!
//! * exact Lie-theoretic machinery for small-rank root systems (`lie`):
//!   Kostant partition function, weight multiplicities and their inverse
//!   matrix, Weyl dimensions, character evaluation;
//! * a catalog of connected Sato-Tate groups with their Cartan embeddings
//!   (`groups`), trace measures, and the trigonometric smoothing of
//!   interval indicators (`vinogradov`);
//! * an unconditional arithmetic side (`primes`, `curve`, `ap`, `traces`)
//!   computing Frobenius traces of elliptic curves over Q by three
//!   cross-validating algorithms, plus the experiment layer (`analytics`)
//!   that compares the two against each other.
//!
//! Everything is deterministic: randomized internals (point sampling in
//! the baby-step/giant-step order computation) are driven by a caller
//! seed, and all container iteration visible in outputs is ordered.

pub mod analytics;
pub mod ap;
pub mod curve;
pub mod error;
pub mod fmt;
pub mod groups;
pub mod input;
pub mod lie;
pub mod modarith;
pub mod primes;
pub mod quad;
pub mod report;
pub mod traces;
pub mod vinogradov;

pub use error::{Error, Result};
pub use groups::{Interval, StGroup};
pub use lie::{RootSystem, Weight};
pub use traces::{TraceRecord, TraceSequence};
