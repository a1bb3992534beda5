//! Closed-form photon statistics and Wigner functions.
//!
//! All quantities of the photon-added squeezed thermal state
//! `ρ = a†^m ρ_s a^m / C_{a,m}` reduce to scaled Legendre/Hermite kernel
//! evaluations over the coefficient sets of [`crate::states`]:
//!
//! * normalization `C_{a,m} = m! S_m(B̄, A)`;
//! * factorial moments as ratios of consecutive normalizations;
//! * photon-number distributions as scaled Legendre polynomials in `(B, D)`;
//! * Wigner functions as a squeezed-thermal Gaussian times the bilinear
//!   Hermite prefactor.
//!
//! Every function here is pure; the hoisted [`PastsWigner`] evaluator exists
//! so that grid sweeps compute the parameter-dependent coefficients once.

use num_complex::Complex64;
use serde::Serialize;

use crate::kernels::{bilinear_hermite_sum, factorial, laguerre, scaled_legendre};
use crate::states::{StateSpec, StsCoefficients, WignerCoefficients};
use crate::{Error, Result};

/// A point of the complex phase-space coordinate `α = re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub re: f64,
    pub im: f64,
}

impl PhasePoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// The origin of phase space.
    pub fn origin() -> Self {
        Self { re: 0.0, im: 0.0 }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for PhasePoint {
    fn from(alpha: Complex64) -> Self {
        Self { re: alpha.re, im: alpha.im }
    }
}

/// Values this close to zero from below are rounding residue of an exactly
/// zero probability and are clamped to zero.
const PND_CLAMP: f64 = -1e-12;
/// Values below this are far more negative than rounding can explain and
/// indicate an internal error.
const PND_NEGATIVITY_BUG: f64 = -1e-9;

/// Normalization constant `C_{a,m} = m! S_m(B̄, A)` of the photon-added
/// squeezed thermal state; equals `tr(a^m a†^m ρ_s)`.
///
/// At `λ = 0` this collapses to `m!(n_c+1)^m`, the photon-added thermal
/// normalization.
pub fn normalization(spec: &StateSpec) -> f64 {
    let c = StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    factorial(spec.m().into()) * scaled_legendre(spec.m(), c.b_bar, c.a)
}

/// Ratio `C_{a,m+k}/C_{a,m}` computed without forming either factorial,
/// so moment formulas stay finite at large `m`.
fn normalization_ratio(spec: &StateSpec, k: u32) -> f64 {
    let c = StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let m = spec.m();
    let mut falling = 1.0;
    for j in 1..=k as u64 {
        falling *= (m as u64 + j) as f64;
    }
    falling * scaled_legendre(m + k, c.b_bar, c.a) / scaled_legendre(m, c.b_bar, c.a)
}

/// Mean photon number `⟨a†a⟩ = C_{a,m+1}/C_{a,m} − 1`.
pub fn mean_photon(spec: &StateSpec) -> f64 {
    normalization_ratio(spec, 1) - 1.0
}

/// Second factorial moment
/// `⟨a†²a²⟩ = C_{a,m+2}/C_{a,m} − 4C_{a,m+1}/C_{a,m} + 2`.
pub fn second_factorial_moment(spec: &StateSpec) -> f64 {
    normalization_ratio(spec, 2) - 4.0 * normalization_ratio(spec, 1) + 2.0
}

/// Mandel parameter `Q = ⟨a†²a²⟩/⟨a†a⟩ − ⟨a†a⟩`; negative values signal
/// sub-Poissonian photon statistics.
///
/// Undefined for the vacuum (`m = 0`, `λ = 0`, `n_c = 0`), the only state
/// in the family with zero mean photon number.
pub fn mandel_q(spec: &StateSpec) -> Result<f64> {
    let mean = mean_photon(spec);
    if mean <= 0.0 {
        return Err(Error::Undefined(format!(
            "Mandel Q requires a nonzero mean photon number; \
             the state (lambda={}, n_c={}, m={}) has mean {mean}",
            spec.lambda(),
            spec.n_c(),
            spec.m()
        )));
    }
    Ok(second_factorial_moment(spec) / mean - mean)
}

/// Clamp policy shared by the distribution functions: tiny negative rounding
/// residue becomes exactly zero; anything materially negative is a bug.
fn clamp_probability(value: f64, context: &str) -> Result<f64> {
    if value < PND_NEGATIVITY_BUG {
        return Err(Error::InternalConsistency(format!(
            "{context} produced probability {value}, beyond rounding residue"
        )));
    }
    Ok(if value < PND_CLAMP {
        0.0
    } else {
        value.max(0.0)
    })
}

/// Photon-number distribution of the squeezed thermal state itself:
/// `P(n) = S_n(B, D)/√A`.
///
/// At `λ = 0` this is the thermal distribution `n_c^n/(n_c+1)^{n+1}`; at
/// large squeezing `D` turns negative and the scaled Legendre kernel keeps
/// the evaluation real and exact.
pub fn pnd_sts(n: u32, lambda: f64, n_c: f64) -> Result<f64> {
    let c = StsCoefficients::new(lambda, n_c)?;
    clamp_probability(
        scaled_legendre(n, c.b, c.d) / c.a.sqrt(),
        "squeezed-thermal photon-number distribution",
    )
}

/// Photon-number distribution of the photon-added squeezed thermal state:
///
/// ```text
/// P(n) = 0                                           for n < m
/// P(n) = n!/[(n−m)! C_{a,m} √A] · S_{n−m}(B, D)      for n ≥ m
/// ```
///
/// The vanishing below `n = m` reflects that adding `m` photons leaves no
/// amplitude on fewer than `m` photons.
pub fn pnd_pasts(n: u32, spec: &StateSpec) -> Result<f64> {
    let m = spec.m();
    if n < m {
        return Ok(0.0);
    }
    let c = StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let c_am = normalization(spec);
    // n!/(n−m)! as an explicit falling product; exact in f64 throughout the
    // m ≤ 20 regime the closed forms are used in.
    let mut falling = 1.0;
    for j in 0..m as u64 {
        falling *= (n as u64 - j) as f64;
    }
    clamp_probability(
        falling / (c_am * c.a.sqrt()) * scaled_legendre(n - m, c.b, c.d),
        "photon-added photon-number distribution",
    )
}

/// The distribution `P(0..len)` in one pass, sharing the scaled Legendre
/// recurrence across all orders instead of restarting it per `n`.
pub fn pnd_pasts_distribution(spec: &StateSpec, len: usize) -> Result<Vec<f64>> {
    let m = spec.m();
    let c = StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let scale = 1.0 / (normalization(spec) * c.a.sqrt());
    let mut out = Vec::with_capacity(len);
    // s_k = S_k(B, D) advanced by the transported Legendre recurrence.
    let (mut prev, mut cur) = (1.0, c.b);
    let mut falling = factorial(m.into()); // n!/(n−m)! at n = m
    for n in 0..len as u64 {
        let value = if n < m as u64 {
            0.0
        } else {
            if n > m as u64 {
                // Advance the falling product to the new n.
                falling *= n as f64 / (n - m as u64) as f64;
                // Advance s to order n − m.
                let k = n - m as u64 - 1;
                let kf = k as f64;
                if k == 0 {
                    // s_1 = B is already in `cur`; nothing to do.
                } else {
                    let next = ((2.0 * kf + 1.0) * c.b * cur - kf * c.d * prev) / (kf + 1.0);
                    prev = cur;
                    cur = next;
                }
            }
            let s = if n == m as u64 { 1.0 } else { cur };
            clamp_probability(
                falling * scale * s,
                "photon-added photon-number distribution",
            )?
        };
        out.push(value);
    }
    Ok(out)
}

/// Hard upper cutoff for the adaptive distribution sum.
pub const PND_CUTOFF_CAP: u32 = 4000;
/// A term below this, past the distribution peak, ends the adaptive sum.
pub const PND_TAIL_THRESHOLD: f64 = 1e-16;

/// Total probability of the distribution under the adaptive cutoff policy:
/// terms are accumulated until two consecutive terms fall below
/// [`PND_TAIL_THRESHOLD`] beyond `n = m + 10`, or [`PND_CUTOFF_CAP`] is
/// reached. Returns the sum and the number of terms taken.
///
/// Two consecutive small terms are required because a squeezed vacuum input
/// (`n_c = 0`) populates only every other photon number: a single interior
/// zero must not be mistaken for the tail.
pub fn pnd_pasts_total(spec: &StateSpec) -> Result<(f64, u32)> {
    let m = spec.m();
    let c = StsCoefficients::from_trusted(spec.lambda(), spec.n_c());
    let scale = 1.0 / (normalization(spec) * c.a.sqrt());
    let mut sum = 0.0;
    let (mut prev, mut cur) = (1.0, c.b);
    let mut falling = factorial(m.into());
    let mut n = m as u64;
    let mut tiny_run = 0u32;
    loop {
        let s = if n == m as u64 {
            1.0
        } else {
            falling *= n as f64 / (n - m as u64) as f64;
            let k = n - m as u64 - 1;
            if k > 0 {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0) * c.b * cur - kf * c.d * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        };
        let term = clamp_probability(
            falling * scale * s,
            "photon-added photon-number distribution",
        )?;
        sum += term;
        n += 1;
        tiny_run = if term < PND_TAIL_THRESHOLD { tiny_run + 1 } else { 0 };
        if (n > (m + 10) as u64 && tiny_run >= 2) || n >= PND_CUTOFF_CAP as u64 {
            return Ok((sum, n as u32));
        }
    }
}

/// Wigner function of the squeezed thermal state (the `m = 0` Gaussian):
///
/// ```text
/// W₀(α) = exp[A₂(α² + α*²) − 2A₃|α|²] / [π(2n_c+1)]
/// ```
///
/// normalized to `∬W₀ d²α = 1/2` (see the crate-level convention note).
pub fn wigner_sts(p: PhasePoint, lambda: f64, n_c: f64) -> Result<f64> {
    let w = WignerCoefficients::new(lambda, n_c)?;
    Ok(wigner_sts_trusted(&w, n_c, p))
}

fn wigner_sts_trusted(w: &WignerCoefficients, n_c: f64, p: PhasePoint) -> f64 {
    let (x, y) = (p.re, p.im);
    let exponent = 2.0 * w.a2 * (x * x - y * y) - 2.0 * w.a3 * (x * x + y * y);
    exponent.exp() / (std::f64::consts::PI * (2.0 * n_c + 1.0))
}

/// Hoisted Wigner evaluator for the photon-added squeezed thermal state:
/// the coefficient set and normalization are computed once, then
/// [`Self::eval`] costs one Gaussian and one order-`m` kernel per point.
#[derive(Debug, Clone)]
pub struct PastsWigner {
    m: u32,
    inv_c_am: f64,
    n_c: f64,
    coeffs: WignerCoefficients,
}

impl PastsWigner {
    pub fn new(spec: &StateSpec) -> Self {
        Self {
            m: spec.m(),
            inv_c_am: 1.0 / normalization(spec),
            n_c: spec.n_c(),
            coeffs: WignerCoefficients::from_trusted(spec.lambda(), spec.n_c()),
        }
    }

    /// `W(α) = F_m(α) W₀(α)` with
    /// `F_m = bilinear_hermite_sum(m, A₂/4, −A₄/2, A₂α* − A₄α)/C_{a,m}`.
    pub fn eval(&self, p: PhasePoint) -> f64 {
        let w0 = wigner_sts_trusted(&self.coeffs, self.n_c, p);
        let u = self.coeffs.kernel_argument(p.alpha());
        let f_m = self.inv_c_am
            * bilinear_hermite_sum(self.m, self.coeffs.a2 / 4.0, -self.coeffs.a4 / 2.0, u);
        f_m * w0
    }
}

/// Wigner function of the photon-added squeezed thermal state.
///
/// For repeated evaluation over a grid, construct a [`PastsWigner`] once
/// instead.
pub fn wigner_pasts(p: PhasePoint, spec: &StateSpec) -> f64 {
    PastsWigner::new(spec).eval(p)
}

/// Wigner function of the `m`-photon-added *thermal* state (the `λ = 0`
/// specialization, where the kernel collapses to a Laguerre polynomial):
///
/// ```text
/// W(α) = (−1)^m e^{−2|α|²/(2n_c+1)} / [π(2n_c+1)^{m+1}]
///        · L_m[4(n_c+1)|α|²/(2n_c+1)]
/// ```
pub fn wigner_thermal_added(p: PhasePoint, n_c: f64, m: u32) -> Result<f64> {
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "n_c",
            message: format!("must be finite and nonnegative, got {n_c}"),
        });
    }
    let two_nc1 = 2.0 * n_c + 1.0;
    let r2 = p.re * p.re + p.im * p.im;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * (-2.0 * r2 / two_nc1).exp() / (std::f64::consts::PI * two_nc1.powi(m as i32 + 1))
        * laguerre(m, 4.0 * (n_c + 1.0) * r2 / two_nc1))
}
