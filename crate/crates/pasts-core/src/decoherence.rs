//! Thermal-channel evolution and negativity-loss thresholds.
//!
//! Under the thermal master equation
//!
//! ```text
//! dρ/dt = κ(N+1)(2aρa† − a†aρ − ρa†a) + κN(2a†ρa − aa†ρ − ρaa†)
//! ```
//!
//! the Wigner function of the photon-added squeezed thermal state stays in
//! closed form: a time-dependent Gaussian times the bilinear Hermite
//! prefactor with the evolved kernel parameters `(Δ₂, χ, ω)` of
//! [`crate::states::EvolvedCoefficients`]. The negativity at the phase-space
//! origin survives only up to a finite dimensionless time; for a single
//! added photon that threshold is
//!
//! ```text
//! κt_c = ½ ln[(2N+2)/(2N+1)],
//! ```
//!
//! independent of both `λ` and `n_c`, while the photon-*subtracted*
//! comparison state loses (or never has) its negativity strictly earlier —
//! see [`threshold_gap`].

use crate::analytics::{PastsWigner, PhasePoint};
use crate::states::{ChannelSpec, EvolvedCoefficients, StateSpec};
use crate::{Error, Result};
use crate::kernels::bilinear_hermite_sum;

/// Below this `κt` the evolved-kernel parameterization degenerates
/// (`T → 0`, `g₃ → ∞`) and evaluation switches to the initial-state Wigner
/// function, which is the proven `t → 0` limit.
pub const KT_INITIAL_BRANCH: f64 = 1e-9;

enum Evaluator {
    Initial(PastsWigner),
    Evolved {
        m: u32,
        inv_c_am: f64,
        coeffs: EvolvedCoefficients,
    },
}

/// Hoisted evaluator for the evolved Wigner function: coefficients are
/// computed once per `(state, channel)` pair, and each point costs one
/// Gaussian and one order-`m` kernel.
pub struct EvolvedWigner {
    inner: Evaluator,
}

impl EvolvedWigner {
    pub fn new(spec: &StateSpec, channel: &ChannelSpec) -> Self {
        if channel.kt() <= KT_INITIAL_BRANCH {
            return Self {
                inner: Evaluator::Initial(PastsWigner::new(spec)),
            };
        }
        let coeffs = EvolvedCoefficients::new(spec.lambda(), spec.n_c(), channel)
            .expect("kt > 0 guaranteed by the branch above; spec already validated");
        Self {
            inner: Evaluator::Evolved {
                m: spec.m(),
                inv_c_am: 1.0 / crate::analytics::normalization(spec),
                coeffs,
            },
        }
    }

    /// `W(η, t) = F_m(η, t) W₀(η, t)`.
    pub fn eval(&self, p: PhasePoint) -> f64 {
        match &self.inner {
            Evaluator::Initial(w) => w.eval(p),
            Evaluator::Evolved { m, inv_c_am, coeffs } => {
                let eta = p.alpha();
                let (x, y) = (p.re, p.im);
                let exponent = -coeffs.delta1 * (x * x + y * y)
                    + coeffs.quad_coeff * 2.0 * (x * x - y * y);
                let w0 = coeffs.w0_prefactor * exponent.exp();
                let f_m = inv_c_am
                    * bilinear_hermite_sum(*m, coeffs.delta2, coeffs.chi, coeffs.omega(eta));
                f_m * w0
            }
        }
    }
}

/// Wigner function of the photon-added squeezed thermal state after
/// dimensionless time `κt` in the thermal channel.
///
/// For repeated evaluation over a grid, construct an [`EvolvedWigner`] once
/// instead.
pub fn evolved_wigner(p: PhasePoint, spec: &StateSpec, channel: &ChannelSpec) -> f64 {
    EvolvedWigner::new(spec, channel).eval(p)
}

/// Negativity-loss time of the single-photon-*added* state:
/// `κt_c = ½ ln[(2N+2)/(2N+1)]`, independent of `λ` and `n_c`, strictly
/// decreasing in the bath mean `N`.
pub fn threshold_added(bath_mean: f64) -> Result<f64> {
    if !(bath_mean.is_finite() && bath_mean >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "N",
            message: format!("must be finite and nonnegative, got {bath_mean}"),
        });
    }
    Ok(0.5 * ((2.0 * bath_mean + 2.0) / (2.0 * bath_mean + 1.0)).ln())
}

/// Negativity-loss time of the single-photon-*subtracted* comparison state:
///
/// ```text
/// κt_cs = ½ ln[ 1 − (2n_c+1)(n_c − sinh²λ) / ((2N+1)(n_c cosh 2λ + sinh²λ)) ]
/// ```
///
/// The subtracted state's origin Wigner value starts negative only when
/// `n_c < sinh²λ`; in that regime the threshold is positive. For
/// `n_c > sinh²λ` the state has no initial negativity and the formula
/// returns the (nonpositive) formal root. When the logarithm's argument is
/// not positive the threshold equation has no real solution at all and a
/// [`Error::NoFiniteThreshold`] is reported.
pub fn threshold_subtracted(bath_mean: f64, n_c: f64, lambda: f64) -> Result<f64> {
    if !(bath_mean.is_finite() && bath_mean >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "N",
            message: format!("must be finite and nonnegative, got {bath_mean}"),
        });
    }
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "n_c",
            message: format!("must be finite and nonnegative, got {n_c}"),
        });
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            message: format!("must be finite and nonnegative, got {lambda}"),
        });
    }
    let h = n_c * (2.0 * lambda).cosh() + lambda.sinh().powi(2);
    if h <= 0.0 {
        // n_c = λ = 0: photon subtraction annihilates the vacuum, so the
        // subtracted state — and with it the threshold — does not exist.
        return Err(Error::NoFiniteThreshold(
            "photon subtraction from the vacuum leaves no state".into(),
        ));
    }
    let bracket = 1.0
        - (2.0 * n_c + 1.0) * (n_c - lambda.sinh().powi(2))
            / ((2.0 * bath_mean + 1.0) * h);
    if bracket <= 0.0 {
        return Err(Error::NoFiniteThreshold(format!(
            "the threshold equation has no real solution at N={bath_mean}, \
             n_c={n_c}, lambda={lambda} (log argument {bracket})"
        )));
    }
    Ok(0.5 * bracket.ln())
}

/// Exponential-scale gap `e^{2κt_c} − e^{2κt_cs}` between the added and
/// subtracted thresholds, which closes to
///
/// ```text
/// 2n_c(n_c+1) / [(2N+1)(n_c cosh 2λ + sinh²λ)] ≥ 0:
/// ```
///
/// the added state holds its negativity strictly longer whenever `n_c > 0`.
/// Both sides are computed independently and cross-checked; a disagreement
/// beyond rounding is reported as an internal error.
pub fn threshold_gap(bath_mean: f64, n_c: f64, lambda: f64) -> Result<f64> {
    let ktc = threshold_added(bath_mean)?;
    let ktcs = threshold_subtracted(bath_mean, n_c, lambda)?;
    let gap = (2.0 * ktc).exp() - (2.0 * ktcs).exp();
    let h = n_c * (2.0 * lambda).cosh() + lambda.sinh().powi(2);
    let closed = 2.0 * n_c * (n_c + 1.0) / ((2.0 * bath_mean + 1.0) * h);
    let scale = gap.abs().max(closed.abs()).max(1.0);
    if (gap - closed).abs() > 1e-12 * scale {
        return Err(Error::InternalConsistency(format!(
            "threshold gap {gap} disagrees with its closed form {closed}"
        )));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::wigner_pasts;
    use approx::assert_relative_eq;

    fn spec(lambda: f64, n_c: f64, m: u32) -> StateSpec {
        StateSpec::new(lambda, n_c, m).unwrap()
    }

    #[test]
    fn evolved_at_zero_time_is_initial_state() {
        let s = spec(0.3, 0.3, 1);
        let ch = ChannelSpec::new(0.2, 0.0).unwrap();
        let p = PhasePoint::new(0.6, -0.4);
        assert_eq!(evolved_wigner(p, &s, &ch), wigner_pasts(p, &s));
    }

    #[test]
    fn evolved_is_continuous_at_the_branch_point() {
        // Values just above the t → 0 branch must match the initial-state
        // formula closely; this pins both the limit algebra and the branch.
        let s = spec(0.3, 0.3, 2);
        let ch = ChannelSpec::new(0.2, 1e-6).unwrap();
        let ev = EvolvedWigner::new(&s, &ch);
        let points = [
            (0.0, 0.0),
            (0.5, 0.0),
            (0.0, -0.7),
            (1.1, 0.4),
            (-0.8, -0.9),
            (0.3, 1.6),
        ];
        for &(x, y) in &points {
            let p = PhasePoint::new(x, y);
            let late = ev.eval(p);
            let early = wigner_pasts(p, &s);
            assert!(
                (late - early).abs() < 1e-4,
                "at ({x},{y}): evolved {late} vs initial {early}"
            );
        }
    }

    #[test]
    fn evolved_smooth_across_threshold_time() {
        // Δ₂ vanishes exactly at κt_c; the kernel must pass through without
        // NaN or a jump.
        let s = spec(0.3, 0.3, 1);
        let big_n = 0.2;
        let ktc = threshold_added(big_n).unwrap();
        let points = [(0.0, 0.0), (0.4, 0.1), (-0.6, 0.8), (1.0, -0.2), (0.05, 0.03)];
        for &(x, y) in &points {
            let p = PhasePoint::new(x, y);
            let mut prev: Option<f64> = None;
            for i in 0..=20 {
                let kt = ktc - 0.01 + 0.001 * i as f64;
                let w = evolved_wigner(p, &s, &ChannelSpec::new(big_n, kt).unwrap());
                assert!(w.is_finite(), "W NaN at kt={kt}, point ({x},{y})");
                if let Some(prev) = prev {
                    assert!(
                        (w - prev).abs() < 1e-2,
                        "jump at kt={kt}, point ({x},{y}): {prev} -> {w}"
                    );
                }
                prev = Some(w);
            }
        }
    }

    #[test]
    fn origin_sign_flips_at_the_added_threshold() {
        let s = spec(0.3, 0.3, 1);
        let big_n = 0.2;
        let ktc = threshold_added(big_n).unwrap();
        let origin = PhasePoint::origin();
        let before = evolved_wigner(origin, &s, &ChannelSpec::new(big_n, 0.99 * ktc).unwrap());
        let after = evolved_wigner(origin, &s, &ChannelSpec::new(big_n, 1.01 * ktc).unwrap());
        assert!(before < 0.0, "still negative before κt_c, got {before}");
        assert!(after > 0.0, "positive after κt_c, got {after}");
    }

    #[test]
    fn threshold_added_reference_values() {
        assert_relative_eq!(threshold_added(0.0).unwrap(), 0.346574, max_relative = 1e-5);
        assert_relative_eq!(threshold_added(0.2).unwrap(), 0.269498, max_relative = 1e-5);
        // Large bath occupation destroys negativity immediately.
        assert!(threshold_added(1e9).unwrap() < 1e-9);
    }

    #[test]
    fn threshold_added_monotone_decreasing() {
        let mut last = f64::INFINITY;
        for &n in &[0.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
            let t = threshold_added(n).unwrap();
            assert!(t < last, "κt_c not decreasing at N={n}");
            last = t;
        }
    }

    #[test]
    fn threshold_subtracted_zero_exactly_when_nc_matches_sinh_sq() {
        // n_c = sinh²λ makes the correction term vanish: κt_cs = 0.
        let lambda = 0.4f64;
        let n_c = lambda.sinh().powi(2);
        let t = threshold_subtracted(0.3, n_c, lambda).unwrap();
        assert!(t.abs() < 1e-14, "κt_cs = {t}");
    }

    #[test]
    fn threshold_subtracted_positive_only_under_initial_negativity() {
        // n_c < sinh²λ: the subtracted state starts negative, threshold > 0.
        assert!(threshold_subtracted(0.2, 0.05, 0.5).unwrap() > 0.0);
        // n_c > sinh²λ: no initial negativity, formal root ≤ 0.
        assert!(threshold_subtracted(0.2, 0.5, 0.3).unwrap() < 0.0);
    }

    #[test]
    fn threshold_subtracted_no_real_solution_reported() {
        // λ = 0, N = 0, n_c > 0: the log argument is 1 − (2n_c+1) < 0.
        assert!(matches!(
            threshold_subtracted(0.0, 0.5, 0.0),
            Err(Error::NoFiniteThreshold(_))
        ));
        // Vacuum subtraction is degenerate.
        assert!(matches!(
            threshold_subtracted(0.2, 0.0, 0.0),
            Err(Error::NoFiniteThreshold(_))
        ));
    }

    #[test]
    fn threshold_gap_reference_value() {
        let gap = threshold_gap(0.2, 0.3, 0.3).unwrap();
        assert_relative_eq!(gap, 1.242590, max_relative = 1e-5);
    }

    #[test]
    fn threshold_gap_vanishes_without_thermal_photons() {
        let gap = threshold_gap(0.4, 0.0, 0.5).unwrap();
        assert!(gap.abs() < 1e-13, "gap = {gap}");
    }

    #[test]
    fn subtracted_threshold_always_earlier() {
        for &big_n in &[0.0, 0.2, 1.0] {
            for &n_c in &[0.05, 0.3, 1.0] {
                for &lambda in &[0.2, 0.5, 0.9] {
                    match threshold_subtracted(big_n, n_c, lambda) {
                        Ok(ktcs) => {
                            let ktc = threshold_added(big_n).unwrap();
                            assert!(
                                ktcs < ktc,
                                "N={big_n} n_c={n_c} λ={lambda}: {ktcs} !< {ktc}"
                            );
                        }
                        Err(Error::NoFiniteThreshold(_)) => {} // trivially earlier
                        Err(e) => panic!("unexpected error: {e}"),
                    }
                }
            }
        }
    }
}
