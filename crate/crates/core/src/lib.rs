//! Certification of fractional revival, periodicity and subset state transfer
//! for continuous quantum walks `U(t) = exp(itA)` on simple graphs.
//!
//! The numeric path works for any graph through a dense symmetric
//! eigen-solve. Stellar fusion graphs `X(a,k,c)` also have an exact path in
//! which every quantity that decides revival lives in `Q(√Δ)`.

pub mod arith;
pub mod error;
pub mod graphs;
pub mod poly;
pub mod quadratic;
pub mod revival;
pub mod spectral;
pub mod states;
pub mod stellar;
pub mod time;
pub mod transfer;

pub use error::{Error, Result};
pub use graphs::{Graph, Partition, WeightedGraph};
pub use quadratic::QuadraticValue;
pub use revival::{certify_fr, verify_fr_at, FrObservation, RevivalCertificate, Verdict};
pub use spectral::{decompose, stellar_decompose, SpectralDecomposition, TransitionMatrix};
pub use states::StateMatrix;
pub use time::WalkTime;

/// Default eigenvalue grouping tolerance (relative to `max(1, ρ(A))`).
pub const DEFAULT_GROUPING_TOL: f64 = 1e-9;
