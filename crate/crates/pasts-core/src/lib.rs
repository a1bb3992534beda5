//! Photon-added squeezed thermal states (PASTS).
//!
//! A squeezed thermal state is a thermal state of mean photon number `n_c`
//! acted on by the single-mode squeeze operator `S(λ) = exp[λ(a² − a†²)/2]`;
//! repeatedly applying the creation operator and renormalizing,
//!
//! ```text
//! ρ = a†^m ρ_s a^m / C_{a,m},
//! ```
//!
//! yields the (non-Gaussian) photon-added squeezed thermal state. This crate
//! implements the closed-form theory of these states —
//!
//! * normalization constants `C_{a,m}` and photon moments ([`analytics`]),
//! * photon-number distributions and Wigner functions ([`analytics`]),
//! * evolution in a thermal channel and the negativity-loss time
//!   thresholds ([`decoherence`]),
//! * the overlap-based non-Gaussianity fidelity ([`gaussianity`]),
//!
//! and cross-validates every closed form against an independent brute-force
//! reference built on truncated Fock-space density matrices ([`fock`]).
//!
//! # Conventions
//!
//! * The squeeze parameter `λ` is real and nonnegative; the squeeze unitary
//!   is `S(λ) = exp[λ(a² − a†²)/2]` and the squeezed thermal state is
//!   `ρ_s = S(−λ) ρ_th S(−λ)†`.
//! * The Wigner function is normalized so that `∬ W d²α = 1/2` (equivalently
//!   it integrates to one over `dq dp` with `q = √2 Re α`, `p = √2 Im α`).
//!   This is half the common `(2/π)`-normalized convention; every value this
//!   crate reports uses it consistently. Multiply by 2 to convert.
//! * The thermal channel is parameterized by the bath mean photon number `N`
//!   and the dimensionless decay time `κt`; no formula depends on `κ` and `t`
//!   separately.
//!
//! All closed-form evaluation funnels through square-root-free polynomial
//! kernels ([`kernels`]), so parameter points that look singular in the
//! printed formulas (`λ = 0`, the threshold time itself, negative
//! discriminants at large squeezing) are evaluated smoothly with no special
//! cases downstream.

pub mod analytics;
pub mod decoherence;
pub mod fock;
pub mod gaussianity;
pub mod grid;
pub mod kernels;
pub mod states;
pub mod validate;

pub use states::{ChannelSpec, StateSpec};

/// Errors surfaced by state construction, evaluation, and the Fock-space
/// reference implementation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A parameter violated its domain (negative `n_c`, negative `λ`, …).
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// A quantity is mathematically undefined at the requested point
    /// (e.g. Mandel Q of the vacuum, whose mean photon number is zero).
    #[error("undefined quantity: {0}")]
    Undefined(String),

    /// The negativity-threshold equation has no real solution at the
    /// requested parameters: the state's origin Wigner value is nonnegative
    /// for every evolution time, so no finite threshold exists.
    #[error("no finite threshold: {0}")]
    NoFiniteThreshold(String),

    /// A truncated Fock-space computation would not be trustworthy at the
    /// requested dimension (thermal tail or squeezing leakage too large).
    #[error("truncation dimension {dim} too small: {message}")]
    Truncation { dim: usize, message: String },

    /// Numerical integration of the master equation lost more trace than
    /// the acceptance tolerance allows.
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// A phase-space point lies outside the region where the truncated
    /// displaced-parity evaluation is trustworthy.
    #[error("phase point out of trusted range: {0}")]
    OutOfTrustedRange(String),

    /// An internal cross-identity failed by far more than rounding can
    /// explain; indicates a bug rather than an input problem.
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    /// Reading or writing an output artifact failed.
    #[error("i/o failure: {0}")]
    Io(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
