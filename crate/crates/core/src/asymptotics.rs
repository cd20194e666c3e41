//! Leading-order soliton, optimal truncation, Stokes multipliers and the
//! closed-form exponentially small remainders.
//!
//! A remainder generated at the singularity `x₊ = ct + iπ/√c` behaves like
//! `S e^{−χ/ε}` with `χ = χ_x (x − x₊)`. The conjugate contribution from
//! `x₋` is folded in, so every prediction here describes the real, observable
//! oscillation.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inner::{self, InnerSeries, PrefactorEstimate};
use crate::model::{positive, ModelKind, ModelSpec};

/// Singularity-strength offset in `u_j ~ Λ Γ(2j+γ)/χ^{2j+γ}`.
pub const GAMMA: u32 = 2;

/// Recursion depth used when a remainder needs `Λ` and none is supplied.
pub const SEVENTH_ORDER_J_MAX: usize = 600;
pub const LATTICE_J_MAX: usize = 200;

/// `½c sech²(½√c (x − ct))`.
pub fn soliton(x: f64, t: f64, c: f64) -> f64 {
    let s = 1.0 / libm::cosh(0.5 * libm::sqrt(c) * (x - c * t));
    0.5 * c * s * s
}

/// `x± = ct ± iπ/√c`.
pub fn singularity_locations(c: f64, t: f64) -> (Complex64, Complex64) {
    let im = PI / libm::sqrt(c);
    (Complex64::new(c * t, im), Complex64::new(c * t, -im))
}

/// Index of the smallest series term, `⌈|χ|/(2ε)⌉` and at least 1.
pub fn optimal_truncation(chi_magnitude: f64, eps: f64) -> Result<u64> {
    positive("chi_magnitude", chi_magnitude)?;
    positive("eps", eps)?;
    let n = libm::ceil(chi_magnitude / (2.0 * eps));
    Ok((n as u64).max(1))
}

/// `μ = 7λχ⁶ + 5χ⁴ + 3χ²`.
pub fn mu_factor(lambda: f64, chi_x: Complex64) -> Complex64 {
    let c2 = chi_x * chi_x;
    c2 * (3.0 + c2 * (5.0 + c2 * 7.0 * lambda))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateOrderAnsatz {
    pub gamma: u32,
    pub chi_x: Complex64,
    pub prefactor: Complex64,
    pub singularity: Complex64,
}

impl LateOrderAnsatz {
    /// Ansatz about `x₊` (`upper`) or `x₋` at time `t`.
    pub fn new(chi_x: Complex64, prefactor: Complex64, c: f64, t: f64, upper: bool) -> Result<Self> {
        positive("c", c)?;
        let (xp, xm) = singularity_locations(c, t);
        Ok(Self {
            gamma: GAMMA,
            chi_x,
            prefactor,
            singularity: if upper { xp } else { xm },
        })
    }

    /// `χ(x) = χ_x (x − x_s)`.
    pub fn singulant_at(&self, x: f64) -> Complex64 {
        self.chi_x * (x - self.singularity)
    }

    /// `ln |ε^{2j} Λ_j Γ(2j+γ)/χ^{2j+γ}|` where `Λ_j` is `scaled` when given
    /// and the ansatz prefactor otherwise.
    pub fn term_log_magnitude(&self, j: usize, eps: f64, x: f64, scaled: Option<Complex64>) -> f64 {
        let n = 2.0 * j as f64 + self.gamma as f64;
        let lambda = scaled.unwrap_or(self.prefactor);
        lambda.norm().ln() + libm::lgamma(n) + 2.0 * j as f64 * eps.ln() - n * self.singulant_at(x).norm().ln()
    }
}

/// Log magnitudes of the late-order terms at real `x`, with the running
/// scaled inner terms `t_j` standing in for `Λ`.
pub fn late_order_log_magnitudes(series: &InnerSeries, eps: f64, c: f64, x: f64) -> Result<Vec<f64>> {
    let ansatz = LateOrderAnsatz::new(series.chi_x, series.scaled_terms[series.j_max], c, 0.0, true)?;
    Ok((1..=series.j_max)
        .map(|j| ansatz.term_log_magnitude(j, eps, x, Some(series.scaled_terms[j])))
        .collect())
}

/// Position of the smallest late-order term (1-based like the series).
pub fn smallest_term_index(series: &InnerSeries, eps: f64, c: f64, x: f64) -> Result<usize> {
    let logs = late_order_log_magnitudes(series, eps, c, x)?;
    let (i, _) = logs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::InvalidParameter {
            parameter: "j_max",
            value: 0.0,
            reason: "series has no late-order terms",
        })?;
    Ok(i + 1)
}

/// Half-width of the inner region around `x = ct` left out of side-specific
/// predictions: three transition widths, `3√(ε ρ_core)/√|χ_x|` with
/// `ρ_core = |χ_x| π/√c`.
pub fn inner_half_width(eps: f64, chi_x: Complex64, c: f64) -> f64 {
    let b = chi_x.norm();
    let rho_core = b * PI / libm::sqrt(c);
    3.0 * libm::sqrt(eps * rho_core) / libm::sqrt(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderPrediction {
    /// Oscillation amplitude at the core, `x = ct`.
    pub amplitude: f64,
    pub frequency: f64,
    pub envelope_rate: f64,
    pub side: Side,
    pub mu: Complex64,
    /// Far-field amplitude when the multiplier switches from zero to the
    /// full jump instead of symmetrically.
    pub one_sided_amplitude: f64,
    pub prefactor: Complex64,
    /// `x₊` at `t = 0`; the `x₋` contribution is its conjugate.
    pub singularity: Complex64,
}

impl RemainderPrediction {
    /// `ln |R|` envelope at distance `|x − ct|` from the core.
    pub fn log_envelope(&self, distance: f64) -> f64 {
        self.amplitude.ln() - self.envelope_rate * distance.abs()
    }

    fn mirrored(&self, side: Side) -> Self {
        Self { side, ..*self }
    }
}

fn require_seventh_order(model: &ModelSpec) -> Result<()> {
    model.validate()?;
    if model.kind != ModelKind::SeventhOrder {
        return Err(Error::InvalidParameter {
            parameter: "model",
            value: 0.0,
            reason: "expected the seventh-order KdV model",
        });
    }
    Ok(())
}

/// Decaying remainders either side of the core for `λ > 1/4`, with `Λ₁`
/// computed at the default depth.
pub fn remainder_case_a(model: &ModelSpec, eps: f64) -> Result<(RemainderPrediction, RemainderPrediction)> {
    require_seventh_order(model)?;
    let (l1, _) = inner::prefactor_case_a(model.lambda, SEVENTH_ORDER_J_MAX)?;
    remainder_case_a_with(model, eps, l1.value)
}

pub fn remainder_case_a_with(
    model: &ModelSpec,
    eps: f64,
    prefactor: Complex64,
) -> Result<(RemainderPrediction, RemainderPrediction)> {
    require_seventh_order(model)?;
    positive("eps", eps)?;
    let alpha = inner::case_a_root(model.lambda)?;
    let mu = mu_factor(model.lambda, alpha);
    let sc = libm::sqrt(model.c);
    let amplitude = 4.0 * PI * (alpha * alpha * prefactor).norm() / (mu.norm() * eps * eps)
        * libm::exp(-alpha.im * PI / (eps * sc));
    let right = RemainderPrediction {
        amplitude,
        frequency: alpha.im / eps,
        envelope_rate: alpha.re / eps,
        side: Side::Right,
        mu,
        one_sided_amplitude: 2.0 * amplitude,
        prefactor,
        singularity: singularity_locations(model.c, 0.0).0,
    };
    Ok((right.mirrored(Side::Left), right))
}

/// Non-decaying symmetric remainder for `0 < λ ≤ 1/4`, with `Λ` computed at
/// the default depth.
pub fn remainder_case_b(model: &ModelSpec, eps: f64) -> Result<RemainderPrediction> {
    require_seventh_order(model)?;
    let p = inner::prefactor_case_b(model.lambda, SEVENTH_ORDER_J_MAX)?;
    remainder_case_b_with(model, eps, p.value)
}

pub fn remainder_case_b_with(model: &ModelSpec, eps: f64, prefactor: Complex64) -> Result<RemainderPrediction> {
    require_seventh_order(model)?;
    positive("eps", eps)?;
    let beta = inner::case_b_beta(model.lambda)?;
    let mu = mu_factor(model.lambda, Complex64::new(0.0, beta));
    let amplitude = (2.0 * PI * beta * beta * prefactor / (mu * eps * eps)).norm()
        * libm::exp(-beta * PI / (eps * libm::sqrt(model.c)));
    Ok(RemainderPrediction {
        amplitude,
        frequency: beta / eps,
        envelope_rate: 0.0,
        side: Side::Both,
        mu,
        one_sided_amplitude: 2.0 * amplitude,
        prefactor,
        singularity: singularity_locations(model.c, 0.0).0,
    })
}

/// Lattice KdV remainder at grid spacing `h`, with `Λ` computed at the
/// default depth.
pub fn lattice_remainder(h: f64, c: f64) -> Result<RemainderPrediction> {
    let p = inner::prefactor_lattice(LATTICE_J_MAX)?;
    lattice_remainder_with(h, c, p.value)
}

/// `|2π³Λ/h²| e^{−π²/(h√c)}`. The jump normalization matches the
/// continuous Case B formula with `β = π` and `μ = 1`.
pub fn lattice_remainder_with(h: f64, c: f64, prefactor: Complex64) -> Result<RemainderPrediction> {
    positive("h", h)?;
    positive("c", c)?;
    let amplitude = (2.0 * PI * PI * PI * prefactor / (h * h)).norm() * libm::exp(-PI * PI / (h * libm::sqrt(c)));
    Ok(RemainderPrediction {
        amplitude,
        frequency: PI / h,
        envelope_rate: 0.0,
        side: Side::Both,
        mu: Complex64::new(1.0, 0.0),
        one_sided_amplitude: 2.0 * amplitude,
        prefactor,
        singularity: singularity_locations(c, 0.0).0,
    })
}

/// Multiplier jump across the Stokes line, `−2πiχ_x²Λ/(με²)`.
pub fn stokes_jump(eps: f64, chi_x: Complex64, prefactor: Complex64, mu: Complex64) -> Complex64 {
    Complex64::new(0.0, -2.0 * PI) * chi_x * chi_x * prefactor / (mu * eps * eps)
}

/// Choice of the integration constant `S₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StokesNormalization {
    /// `S = 0` on the Stokes line, giving oscillations on both sides.
    Symmetric,
    /// `S = 0` to the left, giving a one-sided wave.
    OneSided,
    Custom(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesProfile {
    pub theta_samples: Vec<f64>,
    pub multiplier_values: Vec<Complex64>,
    pub jump: Complex64,
    pub left_limit: Complex64,
    pub right_limit: Complex64,
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Samples `S(θ) = S₀ + J Φ(√(ρ/ε) θ)` on `n` evenly spaced angles.
///
/// The smoothing has width `√(ε/ρ)` in `θ`, so the switch sharpens like
/// `√ε`.
#[allow(clippy::too_many_arguments)]
pub fn stokes_profile(
    rho: f64,
    eps: f64,
    chi_x: Complex64,
    prefactor: Complex64,
    mu: Complex64,
    s0: StokesNormalization,
    theta_range: (f64, f64),
    n: usize,
) -> Result<StokesProfile> {
    positive("rho", rho)?;
    positive("eps", eps)?;
    if !(theta_range.0 < theta_range.1) || n < 2 {
        return Err(Error::InvalidParameter {
            parameter: "theta_range",
            value: theta_range.1 - theta_range.0,
            reason: "need an increasing interval and at least two samples",
        });
    }
    let jump = stokes_jump(eps, chi_x, prefactor, mu);
    let left_limit = match s0 {
        StokesNormalization::Symmetric => -jump * 0.5,
        StokesNormalization::OneSided => Complex64::new(0.0, 0.0),
        StokesNormalization::Custom(v) => v,
    };
    let scale = libm::sqrt(rho / eps);
    let step = (theta_range.1 - theta_range.0) / (n - 1) as f64;
    let theta_samples: Vec<f64> = (0..n).map(|i| theta_range.0 + step * i as f64).collect();
    let multiplier_values = theta_samples
        .iter()
        .map(|&th| left_limit + jump * normal_cdf(scale * th))
        .collect();
    Ok(StokesProfile {
        theta_samples,
        multiplier_values,
        jump,
        left_limit,
        right_limit: left_limit + jump,
    })
}

/// Convenience for the symmetric Case B multiplier limits `(S⁻, S⁺)`.
pub fn case_b_multiplier_limits(model: &ModelSpec, eps: f64, estimate: &PrefactorEstimate) -> Result<(Complex64, Complex64)> {
    let beta = inner::case_b_beta(model.lambda)?;
    let chi = Complex64::new(0.0, beta);
    let j = stokes_jump(eps, chi, estimate.value, mu_factor(model.lambda, chi));
    Ok((-j * 0.5, j * 0.5))
}
