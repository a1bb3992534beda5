//! Non-Gaussianity measures: overlap fidelity with the Gaussian reference
//! and the added/subtracted normalization ratio.
//!
//! Photon addition turns the Gaussian squeezed thermal state `ρ_s` into a
//! non-Gaussian state `ρ`. How far it moved is measured by the reference
//! overlap
//!
//! ```text
//! F = tr(ρ_s ρ) / tr(ρ_s²) = m! S_m(K₁, K₂) / C_{a,m},
//! ```
//!
//! where `S_m` is the scaled Legendre kernel, `C_{a,m}` the `m`-photon-added
//! normalization, and `K₁`, `K₂` the overlap coefficients of
//! [`crate::states::FidelityCoefficients`]. `F = 1` exactly at `m = 0` and
//! decreases with each added photon: more addition, less Gaussian.
//!
//! The same kernel with coefficients `(H, Z)` gives the normalization
//! `C_{s,m} = tr(a†^m a^m ρ_s) = m! S_m(H, Z)` of the `m`-photon-*subtracted*
//! state, and the ratio `C_{s,m}/C_{a,m}` — always below one, because the
//! anti-normally ordered moment dominates the normally ordered one —
//! quantifies how much rarer subtraction events are than additions on the
//! same input.

use crate::kernels::{factorial, scaled_legendre};
use crate::states::{FidelityCoefficients, StateSpec};
use crate::{Error, Result};

/// Purity `tr(ρ_s²) = 1/(2n_c+1)` of the squeezed thermal state.
///
/// Squeezing is unitary, so the purity is that of the underlying thermal
/// state and depends only on `n_c`.
pub fn purity_sts(n_c: f64) -> Result<f64> {
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "n_c",
            message: format!("must be finite and nonnegative, got {n_c}"),
        });
    }
    Ok(1.0 / (2.0 * n_c + 1.0))
}

/// Overlap fidelity `F = tr(ρ_s ρ)/tr(ρ_s²)` between the `m`-photon-added
/// state and its Gaussian reference.
///
/// The factorials in numerator and denominator cancel, so this is computed
/// as the kernel ratio `S_m(K₁, K₂)/S_m(B̄, A)`, which stays finite for any
/// addition order.
pub fn fidelity(spec: &StateSpec) -> f64 {
    if spec.m() == 0 {
        return 1.0;
    }
    let f = FidelityCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let c = crate::states::StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    scaled_legendre(spec.m(), f.k1, f.k2) / scaled_legendre(spec.m(), c.b_bar, c.a)
}

/// Normalization `C_{s,m} = tr(a†^m a^m ρ_s) = m! S_m(H, Z)` of the
/// `m`-photon-subtracted squeezed thermal state.
///
/// Returns `0` in the degenerate vacuum case (`λ = n_c = 0`, `m ≥ 1`), where
/// subtraction annihilates the state.
pub fn subtracted_normalization(spec: &StateSpec) -> f64 {
    let f = FidelityCoefficients::from_trusted(spec.lambda(), spec.n_c());
    factorial(spec.m() as u64) * scaled_legendre(spec.m(), f.h, f.z)
}

/// Normalization ratio `C_{s,m}/C_{a,m}` between the subtracted and added
/// states built from the same squeezed thermal input.
///
/// Strictly below one for `m ≥ 1`: the added-state normalization is an
/// anti-normally ordered moment, which always exceeds its normally ordered
/// counterpart.
pub fn fidelity_ratio(spec: &StateSpec) -> f64 {
    if spec.m() == 0 {
        return 1.0;
    }
    let f = FidelityCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let c = crate::states::StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    scaled_legendre(spec.m(), f.h, f.z) / scaled_legendre(spec.m(), c.b_bar, c.a)
}
