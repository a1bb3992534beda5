//! Parameter types and the named coefficient sets.
//!
//! Two small value types describe the physics inputs: [`StateSpec`] (the
//! squeeze parameter `λ`, thermal mean `n_c`, and added-photon count `m`)
//! and [`ChannelSpec`] (bath mean `N` and dimensionless decay time `κt`).
//! Both validate on construction, so downstream evaluation never re-checks
//! domains.
//!
//! The coefficient structs collect every derived symbol the closed forms
//! are written in. They are computed eagerly, once per parameter set, and
//! shared immutably across grid workers; only the per-point kernel
//! arguments are recomputed at each phase-space point.

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

fn check_finite_nonneg(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            message: format!("must be finite, got {value}"),
        });
    }
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            message: format!("must be nonnegative, got {value}"),
        });
    }
    Ok(())
}

/// Defining parameters of a photon-added squeezed thermal state.
///
/// `λ ≥ 0` is the squeeze parameter of `S(λ) = exp[λ(a² − a†²)/2]`, `n_c ≥ 0`
/// the thermal mean photon number, and `m` the number of added photons.
/// Negative `λ` would flip the squeezing axis; every formula here remains
/// well-defined under that flip, but none of the threshold or figure-level
/// claims were exercised there, so the constructor rejects it rather than
/// silently entering untested territory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateSpec {
    lambda: f64,
    n_c: f64,
    m: u32,
}

impl StateSpec {
    pub fn new(lambda: f64, n_c: f64, m: u32) -> Result<Self> {
        check_finite_nonneg("lambda", lambda)?;
        check_finite_nonneg("n_c", n_c)?;
        Ok(Self { lambda, n_c, m })
    }

    /// Squeeze parameter `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Thermal mean photon number `n_c`.
    pub fn n_c(&self) -> f64 {
        self.n_c
    }

    /// Added-photon count `m`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// The same state with a different added-photon count.
    pub fn with_m(&self, m: u32) -> Self {
        Self { m, ..*self }
    }
}

/// Thermal-environment parameters: bath mean photon number `N ≥ 0` and the
/// dimensionless decay time `κt ≥ 0`.
///
/// Only the product `κt` ever enters a formula, so the two factors are not
/// kept separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSpec {
    bath_mean: f64,
    kt: f64,
}

impl ChannelSpec {
    pub fn new(bath_mean: f64, kt: f64) -> Result<Self> {
        check_finite_nonneg("N", bath_mean)?;
        check_finite_nonneg("kt", kt)?;
        Ok(Self { bath_mean, kt })
    }

    /// Bath mean photon number `N`.
    pub fn bath_mean(&self) -> f64 {
        self.bath_mean
    }

    /// Dimensionless decay time `κt`.
    pub fn kt(&self) -> f64 {
        self.kt
    }

    /// The same bath at a different decay time.
    pub fn with_kt(&self, kt: f64) -> Self {
        Self { kt, ..*self }
    }
}

/// Coefficients of the normally ordered squeezed thermal state.
///
/// ```text
/// A  = n_c² + (2n_c+1) cosh²λ          τ₁² = [(2n_c+1)e^{2λ} + 1]/2
/// B  = n_c(n_c+1)/A                    τ₂² = [(2n_c+1)e^{−2λ} + 1]/2
/// C  = (2n_c+1) sinh 2λ / (2A)         (so τ₁²τ₂² = A)
/// B̄  = n_c cosh 2λ + cosh²λ = A − n_c(n_c+1)
/// D  = B² − C²
/// ```
///
/// `D` is the discriminant of the photon-number-distribution kernel; it
/// turns negative once `sinh²λ > n_c²/(2n_c+1)`, which is why the
/// distribution is evaluated through the scaled Legendre polynomial rather
/// than the `√D` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StsCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub b_bar: f64,
    pub d: f64,
    pub tau1_sq: f64,
    pub tau2_sq: f64,
}

impl StsCoefficients {
    pub fn new(lambda: f64, n_c: f64) -> Result<Self> {
        check_finite_nonneg("lambda", lambda)?;
        check_finite_nonneg("n_c", n_c)?;
        Ok(Self::from_trusted(lambda, n_c))
    }

    pub(crate) fn from_trusted(lambda: f64, n_c: f64) -> Self {
        let cosh_l = lambda.cosh();
        let two_nc1 = 2.0 * n_c + 1.0;
        let a = n_c * n_c + two_nc1 * cosh_l * cosh_l;
        let b = n_c * (n_c + 1.0) / a;
        let c = two_nc1 * (2.0 * lambda).sinh() / (2.0 * a);
        let b_bar = n_c * (2.0 * lambda).cosh() + cosh_l * cosh_l;
        let d = b * b - c * c;
        let tau1_sq = (two_nc1 * (2.0 * lambda).exp() + 1.0) / 2.0;
        let tau2_sq = (two_nc1 * (-2.0 * lambda).exp() + 1.0) / 2.0;
        Self {
            a,
            b,
            c,
            b_bar,
            d,
            tau1_sq,
            tau2_sq,
        }
    }
}

/// Coefficients of the initial-state Wigner function.
///
/// ```text
/// A₁ = A/(2n_c+1)²     A₂ = sinh 2λ/(2n_c+1)
/// A₃ = cosh 2λ/(2n_c+1)     A₄ = A₃ + 1
/// ```
///
/// The Gaussian factor is `exp[A₂(α² + α*²) − 2A₃|α|²]/[π(2n_c+1)]`, and the
/// photon-addition prefactor is the bilinear Hermite sum with kernel scale
/// `d = A₂/4`, weight `χ = −A₄/2`, and per-point argument `u = A₂α* − A₄α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl WignerCoefficients {
    pub fn new(lambda: f64, n_c: f64) -> Result<Self> {
        check_finite_nonneg("lambda", lambda)?;
        check_finite_nonneg("n_c", n_c)?;
        Ok(Self::from_trusted(lambda, n_c))
    }

    pub(crate) fn from_trusted(lambda: f64, n_c: f64) -> Self {
        let two_nc1 = 2.0 * n_c + 1.0;
        let sts = StsCoefficients::from_trusted(lambda, n_c);
        let a3 = (2.0 * lambda).cosh() / two_nc1;
        Self {
            a1: sts.a / (two_nc1 * two_nc1),
            a2: (2.0 * lambda).sinh() / two_nc1,
            a3,
            a4: a3 + 1.0,
        }
    }

    /// Per-point kernel argument `u = A₂α* − A₄α`.
    pub fn kernel_argument(&self, alpha: Complex64) -> Complex64 {
        self.a2 * alpha.conj() - self.a4 * alpha
    }
}

/// Coefficients of the thermal-channel-evolved Wigner function.
///
/// With `T = 1 − e^{−2κt}` and `E = e^{−κt}`:
///
/// ```text
/// g₀ = cosh 2λ/(2n_c+1)      g₂ = sinh 2λ/(2n_c+1)
/// g₁ = (n_c + cosh²λ)/(2n_c+1)      g₃ = 2E/[(2N+1)T]
/// G  = (2g₀ + g₃E)² − 4g₂²
/// Δ₁ = g₃e^{κt} − (g₃²/G)(2g₀ + g₃E)
/// Δ₂ = (g₂/G)(g₃E/2 − 1)²
/// χ  = [(2 − g₃E)/G]·[g₀ + g₁g₃E + 1/(2n_c+1)²]
/// ω  = 2g₃/(g₃E − 2)·(2Δ₂η* + χη)                 (per phase point)
/// ```
///
/// `ω`'s printed prefactor diverges exactly at the negativity threshold
/// (`g₃E = 2`), where `Δ₂` and `χ` both vanish; the product is finite, so
/// `ω` is stored in the equivalent cancellation-free form
///
/// ```text
/// ω = [g₃g₂(g₃E − 2)/G]·η*  −  [2g₃(g₀ + g₁g₃E + 1/(2n_c+1)²)/G]·η,
/// ```
///
/// which evaluates smoothly across the threshold (see [`Self::omega`]).
/// Everything independent of the phase point — including the Gaussian-factor
/// prefactor and quadratic coefficient of
///
/// ```text
/// W₀(η, t) = [2/(2n_c+1)] / [π(2N+1)T√G] · exp[−Δ₁|η|² + (g₂g₃²/G)(η² + η*²)]
/// ```
///
/// — is hoisted here so a grid evaluation pays only the per-point kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedCoefficients {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub big_g: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub chi: f64,
    /// `e^{−κt}`, kept because `g₃` always appears in the combination `g₃E`.
    pub exp_minus_kt: f64,
    /// Coefficient of `η*` in the cancellation-free `ω`.
    pub omega_conj_coeff: f64,
    /// Coefficient of `η` in the cancellation-free `ω`.
    pub omega_coeff: f64,
    /// `[2/(2n_c+1)] / [π(2N+1)T√G]`.
    pub w0_prefactor: f64,
    /// `g₂g₃²/G`, the coefficient of `η² + η*²` in the Gaussian exponent.
    pub quad_coeff: f64,
}

impl EvolvedCoefficients {
    /// Computes the evolved coefficient set.
    ///
    /// Rejects `κt ≤ 0`: the kernel parameterization degenerates there
    /// (`T → 0`, `g₃ → ∞`), and the `t → 0` limit is the initial-state
    /// Wigner function, which callers evaluate directly instead.
    pub fn new(lambda: f64, n_c: f64, channel: &ChannelSpec) -> Result<Self> {
        check_finite_nonneg("lambda", lambda)?;
        check_finite_nonneg("n_c", n_c)?;
        let kt = channel.kt();
        if kt <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kt",
                message: format!(
                    "evolved coefficients require kt > 0 (got {kt}); \
                     use the initial-state evaluation at t = 0"
                ),
            });
        }
        let big_n = channel.bath_mean();
        let two_nc1 = 2.0 * n_c + 1.0;
        let two_n1 = 2.0 * big_n + 1.0;
        let e = (-kt).exp();
        let t = -(-2.0 * kt).exp_m1(); // 1 − e^{−2κt}, accurate for small κt

        let g0 = (2.0 * lambda).cosh() / two_nc1;
        let g1 = (n_c + lambda.cosh().powi(2)) / two_nc1;
        let g2 = (2.0 * lambda).sinh() / two_nc1;
        let g3 = 2.0 * e / (two_n1 * t);
        let g3e = g3 * e;
        let big_g = (2.0 * g0 + g3e).powi(2) - 4.0 * g2 * g2;
        let delta1 = g3 * kt.exp() - g3 * g3 / big_g * (2.0 * g0 + g3e);
        let delta2 = g2 / big_g * (g3e / 2.0 - 1.0).powi(2);
        let bracket = g0 + g1 * g3e + 1.0 / (two_nc1 * two_nc1);
        let chi = (2.0 - g3e) / big_g * bracket;

        Ok(Self {
            g0,
            g1,
            g2,
            g3,
            big_g,
            delta1,
            delta2,
            chi,
            exp_minus_kt: e,
            omega_conj_coeff: g3 * g2 * (g3e - 2.0) / big_g,
            omega_coeff: -2.0 * g3 * bracket / big_g,
            w0_prefactor: 2.0 / two_nc1 / (std::f64::consts::PI * two_n1 * t * big_g.sqrt()),
            quad_coeff: g2 * g3 * g3 / big_g,
        })
    }

    /// Per-point kernel argument `ω(η)`.
    pub fn omega(&self, eta: Complex64) -> Complex64 {
        self.omega_conj_coeff * eta.conj() + self.omega_coeff * eta
    }
}

/// Coefficients of the overlap fidelity and the photon-subtracted
/// normalization.
///
/// ```text
/// K₁ = n_c(n_c+1) cosh 2λ/(2n_c+1)
/// K₀ = (2n_c² + 2n_c + 1) sinh 2λ/[4(2n_c+1)]
/// K₂ = n_c²(n_c+1)²/(2n_c+1)² − sinh²2λ/4      (= K₁² − 4K₀², an identity)
/// Z  = n_c² − (2n_c+1) sinh²λ
/// H  = n_c cosh 2λ + sinh²λ
/// ```
///
/// `K₂` and `Z` go negative at large squeezing; both only ever enter scaled
/// Legendre kernels, which are polynomial in them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityCoefficients {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub z: f64,
    pub h: f64,
}

impl FidelityCoefficients {
    pub fn new(lambda: f64, n_c: f64) -> Result<Self> {
        check_finite_nonneg("lambda", lambda)?;
        check_finite_nonneg("n_c", n_c)?;
        Ok(Self::from_trusted(lambda, n_c))
    }

    pub(crate) fn from_trusted(lambda: f64, n_c: f64) -> Self {
        let two_nc1 = 2.0 * n_c + 1.0;
        let sinh2l = (2.0 * lambda).sinh();
        let cosh2l = (2.0 * lambda).cosh();
        let sinh_l_sq = lambda.sinh().powi(2);
        let ncn1 = n_c * (n_c + 1.0);
        Self {
            k0: (2.0 * n_c * n_c + 2.0 * n_c + 1.0) * sinh2l / (4.0 * two_nc1),
            k1: ncn1 * cosh2l / two_nc1,
            k2: (ncn1 / two_nc1).powi(2) - sinh2l * sinh2l / 4.0,
            z: n_c * n_c - two_nc1 * sinh_l_sq,
            h: n_c * cosh2l + sinh_l_sq,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_relative_eq, relative_eq};
    use proptest::prelude::*;

    #[test]
    fn spec_constructors_validate_domains() {
        assert!(StateSpec::new(0.3, 0.5, 2).is_ok());
        assert!(StateSpec::new(-0.1, 0.5, 0).is_err());
        assert!(StateSpec::new(0.1, -0.5, 0).is_err());
        assert!(StateSpec::new(f64::NAN, 0.5, 0).is_err());
        assert!(ChannelSpec::new(0.0, 0.0).is_ok());
        assert!(ChannelSpec::new(-1.0, 0.1).is_err());
        assert!(ChannelSpec::new(0.2, f64::INFINITY).is_err());
    }

    #[test]
    fn sts_coefficients_vacuum() {
        let c = StsCoefficients::new(0.0, 0.0).unwrap();
        assert_eq!(c.a, 1.0);
        assert_eq!(c.b, 0.0);
        assert_eq!(c.c, 0.0);
        assert_eq!(c.b_bar, 1.0);
        assert_eq!(c.d, 0.0);
    }

    #[test]
    fn sts_coefficients_thermal_limit() {
        // λ = 0: A = (n_c+1)², D = n_c²/(n_c+1)².
        for &n_c in &[0.2, 1.0, 3.0] {
            let c = StsCoefficients::new(0.0, n_c).unwrap();
            assert_relative_eq!(c.a, (n_c + 1.0).powi(2), max_relative = 1e-14);
            assert_relative_eq!(c.d, (n_c / (n_c + 1.0)).powi(2), max_relative = 1e-13);
        }
    }

    #[test]
    fn sts_coefficients_reference_point() {
        let c = StsCoefficients::new(0.3, 1.0).unwrap();
        assert_relative_eq!(c.a, 4.278198, max_relative = 1e-6);
        assert_relative_eq!(c.b_bar, 2.278198, max_relative = 1e-6);
        assert_relative_eq!(c.d, 0.168716, max_relative = 1e-5);
    }

    #[test]
    fn wigner_coefficients_structure() {
        let w = WignerCoefficients::new(0.4, 0.7).unwrap();
        let c = StsCoefficients::new(0.4, 0.7).unwrap();
        let two_nc1: f64 = 2.4;
        assert_relative_eq!(w.a1, c.a / two_nc1.powi(2), max_relative = 1e-14);
        assert_relative_eq!(w.a4 - w.a3, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn evolved_rejects_nonpositive_kt() {
        let ch = ChannelSpec::new(0.2, 0.0).unwrap();
        assert!(EvolvedCoefficients::new(0.3, 0.3, &ch).is_err());
    }

    #[test]
    fn evolved_short_time_limits() {
        // As κt → 0: Δ₂ → sinh 2λ/[4(2n_c+1)], χ → −(cosh²λ + n_c)/(2n_c+1),
        // and the Gaussian factor approaches the initial one (Δ₁ → 2g₀,
        // prefactor → 1/[π(2n_c+1)]).
        let (lambda, n_c) = (0.3f64, 0.3f64);
        let ch = ChannelSpec::new(0.2, 1e-6).unwrap();
        let ev = EvolvedCoefficients::new(lambda, n_c, &ch).unwrap();
        let two_nc1 = 2.0 * n_c + 1.0;
        assert_relative_eq!(
            ev.delta2,
            (2.0 * lambda).sinh() / (4.0 * two_nc1),
            max_relative = 1e-4
        );
        assert_relative_eq!(
            ev.chi,
            -(lambda.cosh().powi(2) + n_c) / two_nc1,
            max_relative = 1e-4
        );
        assert_relative_eq!(ev.delta1, 2.0 * ev.g0, max_relative = 1e-4);
        assert_relative_eq!(
            ev.w0_prefactor,
            1.0 / (std::f64::consts::PI * two_nc1),
            max_relative = 1e-4
        );
    }

    #[test]
    fn evolved_long_time_limits() {
        // As κt → ∞: Δ₂ → (2n_c+1) sinh 2λ/4 and χ → n_c cosh 2λ + cosh²λ,
        // for which the kernel collapses to C_{a,m} and the state is the
        // bath thermal Gaussian.
        let (lambda, n_c) = (0.3f64, 1.0f64);
        let ch = ChannelSpec::new(0.2, 40.0).unwrap();
        let ev = EvolvedCoefficients::new(lambda, n_c, &ch).unwrap();
        let two_nc1 = 2.0 * n_c + 1.0;
        assert_relative_eq!(
            ev.delta2,
            two_nc1 * (2.0 * lambda).sinh() / 4.0,
            max_relative = 1e-10
        );
        let b_bar = StsCoefficients::new(lambda, n_c).unwrap().b_bar;
        assert_relative_eq!(ev.chi, b_bar, max_relative = 1e-10);
    }

    #[test]
    fn omega_rearrangement_matches_printed_form_away_from_threshold() {
        let (lambda, n_c) = (0.4f64, 0.6f64);
        for &kt in &[0.05, 0.2, 0.9, 2.0] {
            let ch = ChannelSpec::new(0.3, kt).unwrap();
            let ev = EvolvedCoefficients::new(lambda, n_c, &ch).unwrap();
            let g3e = ev.g3 * ev.exp_minus_kt;
            for &(re, im) in &[(0.7, -0.2), (-1.1, 0.4)] {
                let eta = Complex64::new(re, im);
                let printed =
                    2.0 * ev.g3 / (g3e - 2.0) * (2.0 * ev.delta2 * eta.conj() + ev.chi * eta);
                let smooth = ev.omega(eta);
                assert!(
                    (printed - smooth).norm() <= 1e-10 * printed.norm().max(1e-12),
                    "kt={kt} eta={eta}: {printed} vs {smooth}"
                );
            }
        }
    }

    #[test]
    fn omega_finite_at_threshold_time() {
        // g₃e^{−κt} = 2 exactly at κt = ½ln[(2N+2)/(2N+1)]; the printed ω is
        // 0/0 there while the rearranged form stays finite.
        let big_n = 0.2f64;
        let ktc = 0.5 * ((2.0 * big_n + 2.0) / (2.0 * big_n + 1.0)).ln();
        let ch = ChannelSpec::new(big_n, ktc).unwrap();
        let ev = EvolvedCoefficients::new(0.3, 0.3, &ch).unwrap();
        let w = ev.omega(Complex64::new(0.8, -0.5));
        assert!(w.is_finite(), "omega at threshold: {w}");
        assert!(ev.delta2.abs() < 1e-12, "delta2 should vanish at threshold");
        assert!(ev.chi.abs() < 1e-12, "chi should vanish at threshold");
    }

    proptest! {
        /// `D = B² − C²`, `B̄ = A − n_c(n_c+1)`, and `τ₁²τ₂² = A` across the
        /// full parameter region.
        #[test]
        fn sts_identities(
            lambda in 0.0f64..2.0,
            n_c in 0.0f64..5.0,
        ) {
            let c = StsCoefficients::new(lambda, n_c).unwrap();
            prop_assert!(relative_eq!(c.d, c.b * c.b - c.c * c.c,
                max_relative = 1e-12, epsilon = 1e-12));
            prop_assert!(relative_eq!(c.b_bar, c.a - n_c * (n_c + 1.0),
                max_relative = 1e-12, epsilon = 1e-12));
            prop_assert!(relative_eq!(c.tau1_sq * c.tau2_sq, c.a,
                max_relative = 1e-12, epsilon = 1e-12));
        }

        /// `K₂ = K₁² − 4K₀²` across the full parameter region.
        #[test]
        fn fidelity_k2_identity(
            lambda in 0.0f64..2.0,
            n_c in 0.0f64..5.0,
        ) {
            let f = FidelityCoefficients::new(lambda, n_c).unwrap();
            prop_assert!(relative_eq!(f.k2, f.k1 * f.k1 - 4.0 * f.k0 * f.k0,
                max_relative = 1e-12, epsilon = 1e-12));
        }

        /// The evolved-kernel discriminant `G` stays strictly positive.
        #[test]
        fn evolved_discriminant_positive(
            lambda in 0.0f64..1.5,
            n_c in 0.0f64..3.0,
            big_n in 0.0f64..3.0,
            kt in 1e-4f64..5.0,
        ) {
            let ch = ChannelSpec::new(big_n, kt).unwrap();
            let ev = EvolvedCoefficients::new(lambda, n_c, &ch).unwrap();
            prop_assert!(ev.big_g > 0.0, "G = {} at λ={} n_c={} N={} κt={}",
                ev.big_g, lambda, n_c, big_n, kt);
        }
    }
}
