//! Truncated-Fock-space brute-force oracle.
//!
//! Everything here is deliberately naive: states are dense matrices, the
//! squeeze operator is a literal matrix exponential of its generator, the
//! master equation is integrated by fixed-step RK4, and the Wigner function
//! is a displaced-parity trace. None of it shares a formula with the
//! closed-form modules — that independence is the point: where oracle and
//! analytics agree to many digits over parameter sweeps, both are almost
//! certainly right.
//!
//! Truncation is self-policing. Building a thermal state requires the
//! discarded geometric tail to be below `1e−14`; squeezing and photon
//! addition require the top five Fock levels to carry less than `1e−10` of
//! the population. Dimensions that cannot honor this are rejected with a
//! truncation error rather than silently producing bad numbers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::analytics::PhasePoint;
use crate::kernels::ln_factorial;
use crate::states::ChannelSpec;
use crate::{Error, Result};

/// Default truncation dimension: comfortable for `λ ≤ 0.8`, `n_c ≤ 1`,
/// `m ≤ 3` under the tail tolerances below.
pub const DEFAULT_DIM: usize = 80;

/// Dense linear algebra stops being reasonable past this size.
pub const MAX_DIM: usize = 512;

/// Permitted probability mass beyond the truncation when building a
/// thermal state.
const THERMAL_TAIL_TOL: f64 = 1e-14;

/// Permitted population of the top five Fock levels after squeezing or
/// photon addition.
const LEAKAGE_TOL: f64 = 1e-10;

/// Upper bound on the RK4 step in `κt`.
pub const MAX_RK4_STEP: f64 = 1e-3;

/// Trace drift beyond this aborts a master-equation integration.
const TRACE_DRIFT_TOL: f64 = 1e-6;

/// A density matrix on the truncated Fock space `span{|0⟩ … |dim−1⟩}`.
#[derive(Debug, Clone)]
pub struct FockState {
    dim: usize,
    rho: DMatrix<Complex64>,
    trace_raw: f64,
}

fn check_dim(dim: usize) -> Result<()> {
    if !(8..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidParameter {
            name: "dim",
            message: format!("truncation dimension must lie in [8, {MAX_DIM}], got {dim}"),
        });
    }
    Ok(())
}

/// Annihilation operator: `a|n⟩ = √n |n−1⟩`.
fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |j, k| {
        if k == j + 1 {
            (k as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// `exp[x(a² − a†²)/2]`: the squeeze unitary with signed strength `x`.
///
/// The generator is real antisymmetric, so the exponential is exactly
/// orthogonal — conjugating by it preserves the trace; truncation damage
/// shows up as population leaked toward the top levels, where the leakage
/// check can see it, rather than as silent trace loss.
fn squeeze_matrix(x: f64, dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    let a_sq = &a * &a;
    let generator = (&a_sq - a_sq.transpose()) * (0.5 * x);
    generator.exp()
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Thermal state: diagonal `n_c^n/(n_c+1)^{n+1}`, renormalized over the
/// truncation after checking that the discarded tail is negligible.
pub fn build_thermal(n_c: f64, dim: usize) -> Result<FockState> {
    check_dim(dim)?;
    if !(n_c.is_finite() && n_c >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "n_c",
            message: format!("must be finite and nonnegative, got {n_c}"),
        });
    }
    let q = n_c / (n_c + 1.0);
    let tail = q.powi(dim as i32);
    if tail >= THERMAL_TAIL_TOL {
        return Err(Error::Truncation {
            dim,
            message: format!(
                "thermal tail {tail:.3e} at n_c = {n_c} exceeds {THERMAL_TAIL_TOL:.0e}"
            ),
        });
    }
    let mut rho = DMatrix::zeros(dim, dim);
    let mut p = 1.0 / (n_c + 1.0);
    let mut total = 0.0;
    for n in 0..dim {
        rho[(n, n)] = Complex64::new(p, 0.0);
        total += p;
        p *= q;
    }
    rho /= Complex64::new(total, 0.0);
    Ok(FockState {
        dim,
        rho,
        trace_raw: 1.0,
    })
}

/// Squeezed thermal state `S(−λ) ρ_th S(−λ)†` with `S(λ) = exp[λ(a²−a†²)/2]`.
pub fn build_sts(lambda: f64, n_c: f64, dim: usize) -> Result<FockState> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            message: format!("must be finite and nonnegative, got {lambda}"),
        });
    }
    build_sts_signed(lambda, n_c, dim)
}

/// Inner constructor taking the squeeze strength with its sign exposed:
/// `build_sts_signed(λ, …)` applies `S(−λ)`. Tests call it with a negated
/// argument to demonstrate that the opposite convention is detectable.
pub(crate) fn build_sts_signed(lambda: f64, n_c: f64, dim: usize) -> Result<FockState> {
    let thermal = build_thermal(n_c, dim)?;
    let s = squeeze_matrix(-lambda, dim);
    // S · diag(p) · Sᵀ, with the diagonal applied as a column scaling.
    let mut scaled = s.clone();
    for n in 0..dim {
        let p = thermal.rho[(n, n)].re;
        scaled.column_mut(n).scale_mut(p);
    }
    let rho_real = &scaled * s.transpose();
    let state = FockState {
        dim,
        rho: to_complex(&rho_real),
        trace_raw: 1.0,
    };
    state.check_leakage("squeezing")?;
    Ok(state.renormalized())
}

impl FockState {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Trace of the matrix before the last renormalization. After
    /// [`FockState::add_photons`] this is the normalization factor
    /// `tr(a†^m ρ a^m)` — the quantity the closed form calls `C_{a,m}`.
    pub fn trace_raw(&self) -> f64 {
        self.trace_raw
    }

    fn renormalized(mut self) -> Self {
        let tr = self.trace().re;
        self.rho /= Complex64::new(tr, 0.0);
        self
    }

    fn trace(&self) -> Complex64 {
        (0..self.dim).map(|n| self.rho[(n, n)]).sum()
    }

    fn check_leakage(&self, operation: &str) -> Result<()> {
        let trace = self.trace().re;
        let top: f64 = (self.dim - 5..self.dim)
            .map(|n| self.rho[(n, n)].re)
            .sum();
        if top > LEAKAGE_TOL * trace {
            return Err(Error::Truncation {
                dim: self.dim,
                message: format!(
                    "{operation} leaks {:.3e} of the population into the top \
                     five Fock levels (tolerance {LEAKAGE_TOL:.0e})",
                    top / trace
                ),
            });
        }
        Ok(())
    }

    /// Occupation probability `⟨n|ρ|n⟩`.
    pub fn probability(&self, n: usize) -> f64 {
        if n < self.dim {
            self.rho[(n, n)].re
        } else {
            0.0
        }
    }

    pub fn mean_photon(&self) -> f64 {
        (0..self.dim)
            .map(|n| n as f64 * self.rho[(n, n)].re)
            .sum()
    }

    pub fn second_factorial_moment(&self) -> f64 {
        (0..self.dim)
            .map(|n| (n * n.saturating_sub(1)) as f64 * self.rho[(n, n)].re)
            .sum()
    }

    pub fn mandel_q(&self) -> Result<f64> {
        let mean = self.mean_photon();
        if mean <= 0.0 {
            return Err(Error::Undefined(
                "Mandel Q undefined for a state with zero mean photon number".into(),
            ));
        }
        Ok(self.second_factorial_moment() / mean - mean)
    }

    /// `tr(ρ²)`, real for a Hermitian matrix.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `a†^m · ρ · a^m`, renormalized; `trace_raw` records the
    /// normalization factor.
    pub fn add_photons(&self, m: u32) -> Result<FockState> {
        if (m as usize) + 10 > self.dim {
            return Err(Error::Truncation {
                dim: self.dim,
                message: format!("no headroom to add {m} photons"),
            });
        }
        let mut rho = self.rho.clone();
        for _ in 0..m {
            let mut next = DMatrix::zeros(self.dim, self.dim);
            for j in 1..self.dim {
                for k in 1..self.dim {
                    next[(j, k)] = ((j * k) as f64).sqrt() * rho[(j - 1, k - 1)];
                }
            }
            rho = next;
        }
        let state = FockState {
            dim: self.dim,
            rho,
            trace_raw: 1.0,
        };
        let raw = state.trace().re;
        let state = FockState {
            trace_raw: raw,
            ..state
        };
        state.check_leakage("photon addition")?;
        Ok(state.renormalized())
    }

    /// Integrates the thermal-channel master equation
    ///
    /// ```text
    /// dρ/d(κt) = (N+1)(2aρa† − a†aρ − ρa†a) + N(2a†ρa − aa†ρ − ρaa†)
    /// ```
    ///
    /// by fixed-step RK4 with step ≤ `1e−3`, re-symmetrizing after each
    /// step. Aborts if more than `1e−6` of the trace drifts away.
    pub fn lindblad_evolve(&self, channel: &ChannelSpec) -> Result<FockState> {
        let kt = channel.kt();
        if kt == 0.0 {
            return Ok(self.clone());
        }
        let steps = (kt / MAX_RK4_STEP).ceil().max(1.0) as usize;
        let h = kt / steps as f64;
        let big_n = channel.bath_mean();
        let mut rho = self.rho.clone();
        for _ in 0..steps {
            let k1 = lindblad_rhs(&rho, big_n);
            let k2 = lindblad_rhs(&(&rho + &k1 * Complex64::new(h / 2.0, 0.0)), big_n);
            let k3 = lindblad_rhs(&(&rho + &k2 * Complex64::new(h / 2.0, 0.0)), big_n);
            let k4 = lindblad_rhs(&(&rho + &k3 * Complex64::new(h, 0.0)), big_n);
            rho += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
                * Complex64::new(h / 6.0, 0.0);
            // Re-symmetrize: RK4 rounding does not respect Hermiticity exactly.
            rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        }
        let state = FockState {
            dim: self.dim,
            rho,
            trace_raw: self.trace_raw,
        };
        let drift = (state.trace().re - 1.0).abs();
        if drift > TRACE_DRIFT_TOL {
            return Err(Error::IntegrationFailure(format!(
                "trace drifted by {drift:.3e} over κt = {kt} \
                 (tolerance {TRACE_DRIFT_TOL:.0e}); truncation too tight"
            )));
        }
        Ok(state.renormalized())
    }

    /// Wigner function by displaced parity, in the convention where the
    /// integral over `d²α` is 1/2:
    ///
    /// ```text
    /// W(α) = (1/π) tr[ρ D(α) Π D†(α)] = (1/π) tr[ρ D(2α) Π].
    /// ```
    ///
    /// Displacement matrix elements come from their closed Laguerre form
    /// with log-balanced prefactors, so each element is exact; the only
    /// truncation effect is the state's own.
    pub fn wigner_parity(&self, p: PhasePoint) -> Result<f64> {
        let radius = p.alpha().norm();
        let trusted = 0.5 * (self.dim as f64).sqrt();
        if radius > trusted {
            return Err(Error::OutOfTrustedRange(format!(
                "|α| = {radius:.3} exceeds the trusted radius {trusted:.3} at dim {}",
                self.dim
            )));
        }
        let d = displacement_matrix(2.0 * p.alpha(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.dim {
            let parity = if j % 2 == 0 { 1.0 } else { -1.0 };
            for k in 0..self.dim {
                acc += self.rho[(j, k)] * d[(k, j)] * parity;
            }
        }
        Ok(acc.re / std::f64::consts::PI)
    }

    /// Checks the representation invariants: Hermiticity, unit trace, and
    /// positivity up to truncation noise.
    pub fn validate_invariants(&self) -> Result<()> {
        let mut max_asym = 0.0f64;
        for j in 0..self.dim {
            for k in j..self.dim {
                let asym = (self.rho[(j, k)] - self.rho[(k, j)].conj()).norm();
                max_asym = max_asym.max(asym);
            }
        }
        if max_asym > 1e-12 {
            return Err(Error::InternalConsistency(format!(
                "Hermiticity violated by {max_asym:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-12 {
            return Err(Error::InternalConsistency(format!(
                "trace {tr} differs from 1"
            )));
        }
        let eigen = self.rho.clone().symmetric_eigen();
        let min = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(Error::InternalConsistency(format!(
                "eigenvalue {min:.3e} below the positivity floor"
            )));
        }
        Ok(())
    }
}

/// Master-equation right-hand side in the dimensionless time `κt`,
/// written entrywise so one evaluation costs `O(dim²)`:
///
/// ```text
/// (aρa†)_{jk} = √((j+1)(k+1)) ρ_{j+1,k+1}      (a†ρa)_{jk} = √(jk) ρ_{j−1,k−1}
/// (a†aρ + ρa†a)_{jk} = (j+k) ρ_{jk}            (aa†ρ + ρaa†)_{jk} = (j+k+2) ρ_{jk}
/// ```
fn lindblad_rhs(rho: &DMatrix<Complex64>, big_n: f64) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..dim {
            let mut v = -rho[(j, k)]
                * ((big_n + 1.0) * (j + k) as f64 + big_n * (j + k + 2) as f64);
            if j + 1 < dim && k + 1 < dim {
                v += rho[(j + 1, k + 1)]
                    * (2.0 * (big_n + 1.0) * (((j + 1) * (k + 1)) as f64).sqrt());
            }
            if j >= 1 && k >= 1 {
                v += rho[(j - 1, k - 1)] * (2.0 * big_n * ((j * k) as f64).sqrt());
            }
            out[(j, k)] = v;
        }
    }
    out
}

/// Displacement operator matrix `⟨j|D(β)|k⟩` from the closed form
///
/// ```text
/// ⟨j|D(β)|k⟩ = √(k!/j!) β^{j−k} e^{−|β|²/2} L_k^{(j−k)}(|β|²),   j ≥ k,
/// ```
///
/// (conjugate-transpose relation for `j < k`), filled one diagonal offset at
/// a time with the associated-Laguerre three-term recurrence, all magnitude
/// prefactors combined in log space.
fn displacement_matrix(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let x = beta.norm_sqr();
    let r = beta.norm();
    let theta = beta.arg();
    let mut d = DMatrix::zeros(dim, dim);
    for offset in 0..dim {
        let a = offset as f64;
        if offset > 0 && r == 0.0 {
            break; // off-diagonals vanish at zero displacement
        }
        // L_k^{(offset)}(x) by upward recurrence in k.
        let mut l_prev = 1.0f64;
        let mut l_cur = 1.0 + a - x;
        for k in 0..dim - offset {
            let l_k = if k == 0 { l_prev } else { l_cur };
            if k >= 1 {
                let next = ((2.0 * k as f64 + 1.0 + a - x) * l_cur
                    - (k as f64 + a) * l_prev)
                    / (k as f64 + 1.0);
                l_prev = l_cur;
                l_cur = next;
            }
            let ln_mag = 0.5 * (ln_factorial(k as u64) - ln_factorial((k + offset) as u64))
                + if offset == 0 { 0.0 } else { a * r.ln() }
                - x / 2.0;
            let mag = ln_mag.exp() * l_k;
            let j = k + offset;
            // β^a carries phase e^{iaθ}; the j < k entry gets (−β̄)^a.
            d[(j, k)] = Complex64::from_polar(mag, a * theta);
            let sign = if offset % 2 == 0 { 1.0 } else { -1.0 };
            d[(k, j)] = Complex64::from_polar(sign * mag, -a * theta);
        }
    }
    d
}

/// Residual of the Hermite-polynomial excitation identity for squeezed
/// number states,
///
/// ```text
/// S(λ)|n⟩ = (2ⁿ n!)^{−1/2} h_n(√2 sech λ · a†, −tanh λ) S(λ)|0⟩,
/// ```
///
/// where `h_n` is the scaled Hermite kernel — the same closed form usually
/// written with complex-argument Hermite polynomials. Both sides are built
/// as explicit vectors; the return value is their Euclidean distance.
pub fn squeezed_number_identity_check(n: u32, lambda: f64, dim: usize) -> Result<f64> {
    check_dim(dim)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            message: format!("must be finite and nonnegative, got {lambda}"),
        });
    }
    if n as usize + 10 > dim {
        return Err(Error::Truncation {
            dim,
            message: format!("no headroom for excitation order {n}"),
        });
    }
    let s = squeeze_matrix(lambda, dim);
    let squeezed_vacuum = s.column(0).clone_owned();
    let target = s.column(n as usize).clone_owned();

    // h_k recurrence with the operator argument u = √2 sech λ · a†.
    let u = annihilation(dim).transpose() * (std::f64::consts::SQRT_2 / lambda.cosh());
    let d = -lambda.tanh();
    let mut w_prev: DVector<f64> = squeezed_vacuum.clone();
    let mut w_cur: DVector<f64> = &u * &squeezed_vacuum;
    let built = match n {
        0 => w_prev,
        1 => w_cur,
        _ => {
            for k in 1..n as usize {
                let w_next = &u * &w_cur - &w_prev * (2.0 * k as f64 * d);
                w_prev = w_cur;
                w_cur = w_next;
            }
            w_cur
        }
    };
    let scale = (-0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n as u64))).exp();
    Ok((built * scale - target).norm())
}
