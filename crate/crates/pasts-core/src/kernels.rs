//! Square-root-free polynomial kernels.
//!
//! Every closed form in this crate reduces to one of four polynomial
//! families evaluated here:
//!
//! * [`scaled_legendre`] — `S_m(x, y)`, a two-variable polynomial equal to
//!   `y^{m/2} P_m(x/√y)` wherever `y > 0` but defined for **all** real `y`;
//! * [`scaled_hermite`] — `h_k(u, d)`, equal to `d^{k/2} H_k(u/(2√d))` for
//!   `d > 0` but again polynomial in `(u, d)`;
//! * [`bilinear_hermite_sum`] — the weighted sum of `|h_j|²` terms that
//!   appears as the non-Gaussian prefactor of every photon-added Wigner
//!   and fidelity formula;
//! * plain [`hermite`], [`legendre`], [`laguerre`], [`laguerre_assoc`]
//!   recurrences.
//!
//! The scaled forms exist because the printed closed forms contain
//! `√(sinh 2λ)`-style factors that cancel identically: writing them as
//! polynomials in the *squared* quantities removes every removable
//! singularity (`λ = 0`, vanishing kernel discriminants, negative
//! discriminants at large squeezing) before any caller sees it. All
//! evaluation uses three-term recurrences, which stay finite and
//! cancellation-free where the explicit alternating sums lose all
//! precision at large order.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

/// Largest argument for which the factorial is computed by exact integer
/// multiplication; `20!` is the largest factorial representable in `u128`
/// whose square also fits, and every factorial up to `20!` is exact in f64.
const EXACT_FACTORIAL_MAX: u64 = 20;

/// `n!` as f64: exact integer product for `n ≤ 20`, `exp(ln Γ(n+1))` beyond.
///
/// Arguments above 170 overflow f64 and return `+∞`; callers needing large-`n`
/// factorial *ratios* should combine [`ln_factorial`] terms instead.
pub fn factorial(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc *= i;
        }
        acc as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// `ln(n!)` via `ln Γ(n+1)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Legendre polynomial `P_m(z)` by the standard three-term recurrence
/// `(n+1) P_{n+1} = (2n+1) z P_n − n P_{n−1}`.
pub fn legendre(m: u32, z: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, z);
    for n in 1..m as u64 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * z * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Scaled Legendre polynomial `S_m(x, y)`.
///
/// ```text
/// S_m(x, y) = Σ_{k=0}^{⌊m/2⌋} 2^{−m} (−1)^k  C(m,k) C(2m−2k, m)  x^{m−2k} y^k
///           = y^{m/2} P_m(x/√y)          (whenever y > 0)
/// ```
///
/// `S_m` is a polynomial in `x` and `y`, so it is defined — and evaluated
/// here — for all real `y`, including the `y ≤ 0` region where the
/// `P_m(x/√y)` form has no real meaning. Evaluation uses the recurrence
///
/// ```text
/// s_0 = 1,   s_1 = x,   (k+1) s_{k+1} = (2k+1) x s_k − k y s_{k−1},
/// ```
///
/// the Legendre recurrence transported to the scaled variables; it involves
/// no square roots and none of the cancellation the alternating explicit
/// sum suffers at large `m`.
pub fn scaled_legendre(m: u32, x: f64, y: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..m as u64 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * y * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(z)` by the recurrence
/// `H_{n+1} = 2z H_n − 2n H_{n−1}`.
pub fn hermite(n: u32, z: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), 2.0 * z);
    for k in 1..n as u64 {
        let next = 2.0 * z * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Scaled Hermite polynomial `h_k(u, d)`.
///
/// ```text
/// h_k(u, d) = Σ_{j=0}^{⌊k/2⌋} (−1)^j k!/(j! (k−2j)!)  u^{k−2j} d^j
///           = d^{k/2} H_k(u/(2√d))        (whenever d > 0)
/// h_k(u, 0) = u^k
/// ```
///
/// Like [`scaled_legendre`], this is a polynomial in `(u, d)` valid for all
/// real `d`; it is evaluated by the transported Hermite recurrence
///
/// ```text
/// h_0 = 1,   h_1 = u,   h_{k+1} = u h_k − 2k d h_{k−1}.
/// ```
pub fn scaled_hermite(k: u32, u: Complex64, d: f64) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), u);
    for j in 1..k as u64 {
        let next = u * cur - 2.0 * (j as f64) * d * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre polynomial `L_n(x)` by the recurrence
/// `(n+1) L_{n+1} = (2n+1−x) L_n − n L_{n−1}`.
pub fn laguerre(n: u32, x: f64) -> f64 {
    laguerre_assoc(n, 0, x)
}

/// Associated Laguerre polynomial `L_n^{(a)}(x)` by the recurrence
/// `(n+1) L_{n+1}^{(a)} = (2n+1+a−x) L_n^{(a)} − (n+a) L_{n−1}^{(a)}`.
///
/// Used with integer superscript `a ≥ 0` (the displacement-operator matrix
/// elements of the Fock-space reference implementation are its only
/// non-zero-`a` caller).
pub fn laguerre_assoc(n: u32, a: u32, x: f64) -> f64 {
    let af = a as f64;
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + af - x);
    for k in 1..n as u64 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + af - x) * cur - (kf + af) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficient `(m!)² / (l! ((m−l)!)²)` of the bilinear Hermite sum.
///
/// Equal to `C(m,l) · m!/(m−l)!`, a product of two integers; both factors
/// are computed exactly for `m ≤ 20` and by `ln Γ` accumulation beyond.
fn bilinear_coefficient(m: u32, l: u32) -> f64 {
    debug_assert!(l <= m);
    if u64::from(m) <= EXACT_FACTORIAL_MAX {
        let (m, l) = (u128::from(m), u128::from(l));
        // C(m, l) by the multiplicative formula, exact in u128 for m ≤ 20.
        let mut binom: u128 = 1;
        for i in 0..l {
            binom = binom * (m - i) / (i + 1);
        }
        let mut falling: u128 = 1;
        for i in 0..l {
            falling *= m - i;
        }
        (binom * falling) as f64
    } else {
        let (mf, lf) = (f64::from(m), f64::from(l));
        (2.0 * ln_gamma(mf + 1.0) - ln_gamma(lf + 1.0) - 2.0 * ln_gamma(mf - lf + 1.0)).exp()
    }
}

/// Bilinear Hermite sum
///
/// ```text
/// Σ_{l=0}^{m}  (m!)² χ^l / (l! ((m−l)!)²) · |h_{m−l}(−iu, d)|²
/// ```
///
/// with `h` the [`scaled_hermite`] kernel. This is the closed form of the
/// mixed derivative `∂^{2m}/∂s^m ∂τ^m exp[d(s² + τ²) + ū τ + u s + χ s τ]`
/// at `s = τ = 0` — the generating-function kernel behind every
/// photon-added Wigner prefactor and the overlap fidelity. Each summand
/// pairs a value with its own conjugate, so the result is real.
///
/// On the phase-space diagonal the sum collapses to a scaled Legendre
/// polynomial:
///
/// ```text
/// bilinear_hermite_sum(m, d, χ, 0) = m! · S_m(χ, χ² − 4d²),
/// ```
///
/// which is how the normalization constants arise from the Wigner kernel.
pub fn bilinear_hermite_sum(m: u32, d: f64, chi: f64, u: Complex64) -> f64 {
    let minus_iu = Complex64::new(u.im, -u.re);
    let mut sum = 0.0;
    let mut chi_pow = 1.0;
    for l in 0..=m {
        let h = scaled_hermite(m - l, minus_iu, d);
        sum += bilinear_coefficient(m, l) * chi_pow * h.norm_sqr();
        chi_pow *= chi;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_relative_eq, relative_eq};
    use proptest::prelude::*;

    /// Reference explicit sum for `S_m(x, y)` — the defining alternating
    /// series, trustworthy at small `m` only.
    fn scaled_legendre_sum(m: u32, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        for k in 0..=(m / 2) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let binom1 = binomial(m.into(), k.into());
            let binom2 = binomial((2 * m - 2 * k).into(), m.into());
            total += 0.5f64.powi(m as i32)
                * sign
                * binom1
                * binom2
                * x.powi((m - 2 * k) as i32)
                * y.powi(k as i32);
        }
        total
    }

    /// Reference explicit sum for `h_k(u, d)`.
    fn scaled_hermite_sum(k: u32, u: Complex64, d: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..=(k / 2) {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let coeff =
                factorial(k.into()) / (factorial(j.into()) * factorial((k - 2 * j).into()));
            total += sign * coeff * u.powi((k - 2 * j) as i32) * d.powi(j as i32);
        }
        total
    }

    fn binomial(n: u64, k: u64) -> f64 {
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (n as u128 - i) / (i + 1);
        }
        acc as f64
    }

    #[test]
    fn factorial_exact_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(1), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
    }

    #[test]
    fn factorial_large_values_via_ln_gamma() {
        assert_relative_eq!(factorial(25), 1.551_121_004_333_098_6e25, max_relative = 1e-12);
        assert_relative_eq!(factorial(170), 7.257_415_615_307_994e306, max_relative = 1e-10);
    }

    #[test]
    fn scaled_legendre_order_zero_is_one_for_any_y() {
        assert_eq!(scaled_legendre(0, 3.7, -2.0), 1.0);
    }

    #[test]
    fn scaled_legendre_order_one_is_x() {
        for &(x, y) in &[(0.25, -5.0), (-3.0, 0.0), (7.5, 2.0)] {
            assert_eq!(scaled_legendre(1, x, y), x);
        }
    }

    #[test]
    fn scaled_legendre_order_two_matches_p2() {
        // S_2(x, 1) = P_2(x) = (3x² − 1)/2, so S_2(2, 1) = 5.5.
        assert_relative_eq!(scaled_legendre(2, 2.0, 1.0), 5.5, max_relative = 1e-15);
    }

    #[test]
    fn scaled_legendre_matches_explicit_sum_all_sign_regions() {
        for m in 0..=12 {
            for &x in &[-2.5, -0.3, 0.0, 0.7, 1.9] {
                for &y in &[-3.0, -0.4, 0.0, 0.8, 2.5] {
                    let rec = scaled_legendre(m, x, y);
                    let sum = scaled_legendre_sum(m, x, y);
                    assert!(
                        relative_eq!(rec, sum, max_relative = 1e-10, epsilon = 1e-12),
                        "m={m} x={x} y={y}: recurrence {rec} vs sum {sum}"
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_hermite_order_zero_and_one() {
        let u = Complex64::new(1.0, 2.0);
        assert_eq!(scaled_hermite(0, u, 5.0), Complex64::new(1.0, 0.0));
        assert_eq!(scaled_hermite(1, u, -3.5), u);
    }

    #[test]
    fn scaled_hermite_order_three_real_point() {
        // h_3(u, d) = u³ − 6ud: at (u, d) = (2, 1/4) this is 8 − 3 = 5,
        // in agreement with d^{3/2} H_3(u/(2√d)) = (1/8)·H_3(2) = 40/8.
        let h = scaled_hermite(3, Complex64::new(2.0, 0.0), 0.25);
        assert_relative_eq!(h.re, 5.0, max_relative = 1e-14);
        assert_eq!(h.im, 0.0);
    }

    #[test]
    fn scaled_hermite_at_d_zero_is_u_to_the_k() {
        let u = Complex64::new(0.3, -1.1);
        for k in 0..=8 {
            let h = scaled_hermite(k, u, 0.0);
            let expect = u.powi(k as i32);
            assert!(
                (h - expect).norm() <= 1e-12 * expect.norm().max(1.0),
                "k={k}: {h} vs {expect}"
            );
        }
    }

    #[test]
    fn scaled_hermite_matches_explicit_sum() {
        let us = [
            Complex64::new(0.4, 0.0),
            Complex64::new(-1.3, 2.2),
            Complex64::new(0.0, -0.7),
        ];
        for k in 0..=12 {
            for &u in &us {
                for &d in &[-2.0, -0.25, 0.0, 0.6, 3.0] {
                    let rec = scaled_hermite(k, u, d);
                    let sum = scaled_hermite_sum(k, u, d);
                    assert!(
                        (rec - sum).norm() <= 1e-10 * sum.norm().max(1.0),
                        "k={k} u={u} d={d}: recurrence {rec} vs sum {sum}"
                    );
                }
            }
        }
    }

    #[test]
    fn hermite_small_orders() {
        let z0 = Complex64::new(0.0, 0.0);
        assert_eq!(hermite(0, Complex64::new(3.0, -1.0)), Complex64::new(1.0, 0.0));
        // H_2(x) = 4x² − 2.
        assert_eq!(hermite(2, z0), Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn hermite_consistent_with_scaled_form_at_unit_scale() {
        // h_n(2z, 1) = H_n(z) by definition.
        let z = Complex64::new(0.8, -0.45);
        for n in 0..=10 {
            let plain = hermite(n, z);
            let scaled = scaled_hermite(n, 2.0 * z, 1.0);
            assert!(
                (plain - scaled).norm() <= 1e-12 * plain.norm().max(1.0),
                "n={n}: {plain} vs {scaled}"
            );
        }
    }

    #[test]
    fn laguerre_small_orders() {
        assert_eq!(laguerre(0, 17.0), 1.0);
        // L_1(x) = 1 − x.
        assert_eq!(laguerre(1, 0.0), 1.0);
        // L_2(x) = (x² − 4x + 2)/2, so L_2(2) = −1.
        assert_relative_eq!(laguerre(2, 2.0), -1.0, max_relative = 1e-15);
    }

    #[test]
    fn laguerre_assoc_closed_forms() {
        // L_1^{(a)}(x) = 1 + a − x and L_2^{(1)}(x) = 3 − 3x + x²/2.
        assert_relative_eq!(laguerre_assoc(1, 3, 0.5), 3.5, max_relative = 1e-15);
        assert_relative_eq!(
            laguerre_assoc(2, 1, 2.0),
            3.0 - 6.0 + 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn bilinear_sum_order_zero_is_one() {
        assert_eq!(
            bilinear_hermite_sum(0, -0.3, 2.0, Complex64::new(1.0, 1.0)),
            1.0
        );
    }

    #[test]
    fn bilinear_sum_order_one_closed_form() {
        // m=1: h_1(−iu, d) = −iu, so the sum is |u|² + χ.
        let u = Complex64::new(0.7, -1.2);
        for &(d, chi) in &[(0.4, 0.9), (-1.1, -0.2), (0.0, 3.0)] {
            assert_relative_eq!(
                bilinear_hermite_sum(1, d, chi, u),
                u.norm_sqr() + chi,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn bilinear_coefficient_exact_and_ln_gamma_paths_agree() {
        // Straddle the m = 20 switchover with a value both paths can do.
        for l in 0..=20 {
            let exact = bilinear_coefficient(20, l);
            let mf = 20.0f64;
            let lf = l as f64;
            let via_ln =
                (2.0 * ln_gamma(mf + 1.0) - ln_gamma(lf + 1.0) - 2.0 * ln_gamma(mf - lf + 1.0))
                    .exp();
            assert_relative_eq!(exact, via_ln, max_relative = 1e-12);
        }
    }

    proptest! {
        /// `S_m(x, y) = y^{m/2} P_m(x/√y)` for positive `y`, against the
        /// standalone Legendre recurrence.
        #[test]
        fn scaled_legendre_reduces_to_legendre_for_positive_y(
            m in 0u32..=10,
            x in -5.0f64..5.0,
            y in 1e-3f64..10.0,
        ) {
            let direct = scaled_legendre(m, x, y);
            let via_p = y.powf(m as f64 / 2.0) * legendre(m, x / y.sqrt());
            prop_assert!(
                relative_eq!(direct, via_p, max_relative = 1e-10, epsilon = 1e-12),
                "m={} x={} y={}: {} vs {}", m, x, y, direct, via_p
            );
        }

        /// `h_k(u, d) = d^{k/2} H_k(u/(2√d))` for positive `d`.
        #[test]
        fn scaled_hermite_reduces_to_hermite_for_positive_d(
            k in 0u32..=10,
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
            d in 1e-3f64..5.0,
        ) {
            let u = Complex64::new(re, im);
            let direct = scaled_hermite(k, u, d);
            let via_h = d.powf(k as f64 / 2.0) * hermite(k, u / (2.0 * d.sqrt()));
            prop_assert!(
                (direct - via_h).norm() <= 1e-10 * via_h.norm().max(1e-12),
                "k={} u={} d={}: {} vs {}", k, u, d, direct, via_h
            );
        }

        /// On the diagonal the bilinear sum is a scaled Legendre polynomial:
        /// `bilinear_hermite_sum(m, d, χ, 0) = m! S_m(χ, χ² − 4d²)`.
        #[test]
        fn bilinear_sum_diagonal_identity(
            m in 0u32..=8,
            d in -2.0f64..2.0,
            chi in -3.0f64..3.0,
        ) {
            let lhs = bilinear_hermite_sum(m, d, chi, Complex64::new(0.0, 0.0));
            let rhs = factorial(m.into()) * scaled_legendre(m, chi, chi * chi - 4.0 * d * d);
            prop_assert!(
                relative_eq!(lhs, rhs, max_relative = 1e-10, epsilon = 1e-10),
                "m={} d={} chi={}: {} vs {}", m, d, chi, lhs, rhs
            );
        }

        /// Derivative recurrence `H_n'(z) = 2n H_{n−1}(z)`, checked by
        /// central differences on the real axis.
        #[test]
        fn hermite_derivative_recurrence(
            n in 1u32..=8,
            x in -2.0f64..2.0,
        ) {
            let h = 1e-6;
            let plus = hermite(n, Complex64::new(x + h, 0.0)).re;
            let minus = hermite(n, Complex64::new(x - h, 0.0)).re;
            let numeric = (plus - minus) / (2.0 * h);
            let exact = 2.0 * n as f64 * hermite(n - 1, Complex64::new(x, 0.0)).re;
            prop_assert!(
                relative_eq!(numeric, exact, max_relative = 1e-5, epsilon = 1e-4),
                "n={} x={}: {} vs {}", n, x, numeric, exact
            );
        }
    }
}
