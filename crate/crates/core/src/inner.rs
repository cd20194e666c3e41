//! Inner-region recurrences and the Stokes prefactor `Λ`.
//!
//! Near a leading-order singularity the solution is expanded as
//! `U = Σ v_j η^{−(2j+2)}`. The raw `v_j` grow like `Γ(2j+2)/|χ|^{2j}` and
//! overflow a double near `j ≈ 85`, so every recurrence here is iterated in
//! the scaled variables
//!
//! ```text
//! t_j = v_j χ^{2j+2} / Γ(2j+2)
//! ```
//!
//! which tend to `Λ` when `χ` is the dominant singulant root. In scaled form
//! each factorial ratio is a product of a few polynomial factors in `j`, and
//! the convolution weights are accumulated as log ratios and exponentiated
//! once per term.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::singulant::{solve_7kdv_singulant, CLASS_TOL};

/// Leading inner coefficient shared by every model here.
pub const V0: f64 = -2.0;

/// Relative-change threshold, averaged over the last [`CONV_WINDOW`]
/// estimates, below which a prefactor estimate counts as converged.
pub const CONV_TOL: f64 = 1e-6;
pub const CONV_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerSeries {
    pub model: ModelSpec,
    pub chi_x: Complex64,
    pub scaled_terms: Vec<Complex64>,
    /// `ln |v_j|`, finite long after `v_j` itself would overflow.
    pub raw_log_magnitudes: Vec<f64>,
    pub j_max: usize,
}

impl InnerSeries {
    fn new(model: ModelSpec, chi_x: Complex64, scaled_terms: Vec<Complex64>) -> Self {
        let lnchi = chi_x.norm().ln();
        let raw_log_magnitudes = scaled_terms
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let n = 2.0 * j as f64 + 2.0;
                t.norm().ln() + libm::lgamma(n) - n * lnchi
            })
            .collect();
        let j_max = scaled_terms.len() - 1;
        Self {
            model,
            chi_x,
            scaled_terms,
            raw_log_magnitudes,
            j_max,
        }
    }

    /// Unscaled `v_j = t_j Γ(2j+2) / χ^{2j+2}`. Overflows to infinity past
    /// moderate `j`; use `raw_log_magnitudes` there.
    pub fn raw_term(&self, j: usize) -> Option<Complex64> {
        let t = *self.scaled_terms.get(j)?;
        let n = 2 * j as u32 + 2;
        let mut fact = 1.0;
        for i in 2..n {
            fact *= i as f64;
        }
        Some(t * fact / self.chi_x.powu(n))
    }
}

fn check(j: usize, t: Complex64) -> Result<Complex64> {
    if t.re.is_finite() && t.im.is_finite() {
        Ok(t)
    } else {
        Err(Error::Overflow { j })
    }
}

fn check_j_max(j_max: usize, min: usize) -> Result<()> {
    if j_max < min {
        Err(Error::InvalidParameter {
            parameter: "j_max",
            value: j_max as f64,
            reason: "recursion depth too small",
        })
    } else {
        Ok(())
    }
}

/// Inner terms of the order-`2k+3` hierarchy scaled against `chi_x`.
///
/// With `c_s = 1` for `s < k`, `c_k = λ` and
/// `W(m, r) = (2r+1)!(2m−2r+1)!/(2m+3)!` the recurrence reads
///
/// ```text
/// t_m [1 + 6v₀/((2m+2)(2m+3))] = −Σ_{s=1}^{k} c_s χ^{2s} t_{m−s}
///                                 − (3/χ²) Σ_{r=1}^{m−1} W(m,r) t_r t_{m−r}
/// ```
///
/// `k = 2` is the seventh-order equation, `k = 1` with `λ = 1` the
/// fifth-order one.
pub fn hierarchy_inner_terms(k: u32, lambda: f64, chi_x: Complex64, j_max: usize) -> Result<InnerSeries> {
    hierarchy_inner_terms_seeded(k, lambda, chi_x, j_max, V0)
}

/// As [`hierarchy_inner_terms`] with a caller-chosen `v₀`.
pub fn hierarchy_inner_terms_seeded(
    k: u32,
    lambda: f64,
    chi_x: Complex64,
    j_max: usize,
    v0: f64,
) -> Result<InnerSeries> {
    let model = ModelSpec::hierarchy(k, lambda, 1.0)?;
    check_j_max(j_max, 1)?;
    if chi_x.norm() == 0.0 {
        return Err(Error::InvalidParameter {
            parameter: "chi_x",
            value: 0.0,
            reason: "singulant root must be nonzero",
        });
    }
    let k = k as usize;
    let chi2 = chi_x * chi_x;
    // c_s χ^{2s}, s = 1..=k
    let mut forcing = Vec::with_capacity(k);
    let mut p = Complex64::new(1.0, 0.0);
    for s in 1..=k {
        p *= chi2;
        forcing.push(if s == k { p * lambda } else { p });
    }
    let three_over_chi2 = 3.0 / chi2;

    let mut t: Vec<Complex64> = Vec::with_capacity(j_max + 1);
    t.push(v0 * chi2);
    for m in 1..=j_max {
        let mf = m as f64;
        let lhs = 1.0 + 6.0 * v0 / ((2.0 * mf + 2.0) * (2.0 * mf + 3.0));
        let mut rhs = Complex64::new(0.0, 0.0);
        for (s, f) in forcing.iter().enumerate().take(m) {
            rhs -= f * t[m - 1 - s];
        }
        if m >= 2 {
            // ln W(m, 1), then ratio steps in r
            let mut lw = (6.0 / ((2.0 * mf) * (2.0 * mf + 1.0) * (2.0 * mf + 2.0) * (2.0 * mf + 3.0))).ln();
            let mut conv = Complex64::new(0.0, 0.0);
            for r in 1..m {
                conv += t[r] * t[m - r] * lw.exp();
                let rf = r as f64;
                lw += ((2.0 * rf + 2.0) * (2.0 * rf + 3.0) / ((2.0 * mf - 2.0 * rf) * (2.0 * mf - 2.0 * rf + 1.0))).ln();
            }
            rhs -= three_over_chi2 * conv;
        }
        t.push(check(m, rhs / lhs)?);
    }
    Ok(InnerSeries::new(model, chi_x, t))
}

/// Seventh-order inner terms, the `k = 2` member of the hierarchy.
pub fn kdv7_inner_terms(lambda: f64, chi_x: Complex64, j_max: usize) -> Result<InnerSeries> {
    hierarchy_inner_terms(2, lambda, chi_x, j_max)
}

/// Lattice KdV inner terms, scaled against `χ = iπ`.
///
/// With `a_r = χ^{2r}/(2r+1)!`, `s_l = Σ_{r≤l} a_r t_{l−r}` and
/// `B(m,l) = (2m−2l+1)!(2l+2)!/(2m+4)!`:
///
/// ```text
/// Σ_{r=1}^{m+1} (4^r − 1) a_r t_{m+1−r} + 3 Σ_{l=0}^{m} B(m,l) t_{m−l} s_l = 0
/// ```
///
/// Everything is real because `χ² = −π²`. Precomputing `s_l` makes the whole
/// iteration `O(j_max²)`.
pub fn lattice_inner_terms(j_max: usize) -> Result<InnerSeries> {
    lattice_inner_terms_seeded(j_max, V0)
}

pub fn lattice_inner_terms_seeded(j_max: usize, v0: f64) -> Result<InnerSeries> {
    check_j_max(j_max, 1)?;
    let chi2 = -PI * PI;
    // a_r and (4^r − 1) a_r; both decay factorially and may underflow to 0.
    let mut a = Vec::with_capacity(j_max + 2);
    let mut d = Vec::with_capacity(j_max + 2);
    let (mut ar, mut br) = (1.0f64, 1.0f64);
    a.push(ar);
    d.push(0.0);
    for r in 1..=j_max + 1 {
        let rf = r as f64;
        let f = (2.0 * rf) * (2.0 * rf + 1.0);
        ar *= chi2 / f;
        br *= 4.0 * chi2 / f;
        a.push(ar);
        d.push(br - ar);
    }

    let mut t: Vec<f64> = Vec::with_capacity(j_max + 1);
    let mut s: Vec<f64> = Vec::with_capacity(j_max + 1);
    t.push(v0 * chi2);
    s.push(t[0]);
    for m in 1..=j_max {
        let mf = m as f64;
        let b0 = 2.0 / ((2.0 * mf + 2.0) * (2.0 * mf + 3.0) * (2.0 * mf + 4.0));
        let bm = 1.0 / ((2.0 * mf + 3.0) * (2.0 * mf + 4.0));
        let coef = 3.0 * a[1] + 3.0 * t[0] * (b0 + bm);

        let mut rest = 0.0;
        for r in 2..=m + 1 {
            rest += d[r] * t[m + 1 - r];
        }
        let mut lb = b0.ln();
        let mut conv = 0.0;
        for l in 1..m {
            let lf = (l - 1) as f64;
            lb += ((2.0 * lf + 3.0) * (2.0 * lf + 4.0) / ((2.0 * mf - 2.0 * lf) * (2.0 * mf - 2.0 * lf + 1.0))).ln();
            conv += lb.exp() * t[m - l] * s[l];
        }
        let known: f64 = (1..=m).map(|r| a[r] * t[m - r]).sum();
        rest += 3.0 * conv + 3.0 * bm * t[0] * known;

        let tm = -rest / coef;
        if !tm.is_finite() {
            return Err(Error::Overflow { j: m });
        }
        t.push(tm);
        s.push(tm + known);
    }
    let model = ModelSpec::lattice_kdv(1.0, 1.0)?;
    let terms = t.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    Ok(InnerSeries::new(model, Complex64::new(0.0, PI), terms))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorEstimate {
    pub value: Complex64,
    pub history: Vec<(usize, Complex64)>,
    pub converged: bool,
    /// Mean relative change between consecutive estimates over the final
    /// window.
    pub rel_change_last: f64,
}

impl PrefactorEstimate {
    pub fn from_history(history: Vec<(usize, Complex64)>) -> Self {
        let value = history.last().map(|h| h.1).unwrap_or_default();
        let n = history.len();
        let rel_change_last = if n > CONV_WINDOW {
            let tail = &history[n - CONV_WINDOW - 1..];
            tail.windows(2)
                .map(|w| (w[1].1 - w[0].1).norm() / w[1].1.norm())
                .sum::<f64>()
                / CONV_WINDOW as f64
        } else {
            f64::INFINITY
        };
        Self {
            value,
            history,
            converged: rel_change_last < CONV_TOL,
            rel_change_last,
        }
    }

    /// Estimate at depth `j`, if recorded.
    pub fn at(&self, j: usize) -> Option<Complex64> {
        self.history.iter().find(|h| h.0 == j).map(|h| h.1)
    }

    /// Richardson extrapolation assuming an `O(1/j)` error, from the last
    /// estimate and the one at half its depth. Never used implicitly.
    pub fn richardson(&self) -> Option<Complex64> {
        let &(j2, e2) = self.history.last()?;
        let j1 = j2 / 2;
        let e1 = self.at(j1)?;
        if j1 == 0 || j1 == j2 {
            return None;
        }
        let (a, b) = (j2 as f64, j1 as f64);
        Some((e2 * a - e1 * b) / (a - b))
    }
}

/// `Λ ≈ t_j`, valid when a single singularity dominates.
pub fn single_term_estimate(series: &InnerSeries) -> PrefactorEstimate {
    PrefactorEstimate::from_history(series.scaled_terms.iter().copied().enumerate().skip(1).collect())
}

/// Removes the conjugate contribution `Λ₂ ρ^{j+1}` with
/// `ρ = (χ/χ̄)²`.
///
/// When `1 + ρ + ρ² = 0` this is the three-term mean
/// `(t_j + t_{j+1} + t_{j+2})/3`; otherwise the two-term combination
/// `(t_{j+1} − ρ t_j)/(1 − ρ)` is used.
pub fn annihilated_estimate(series: &InnerSeries) -> PrefactorEstimate {
    let chi = series.chi_x;
    let rho = (chi / chi.conj()).powu(2);
    let t = &series.scaled_terms;
    let history = if (1.0 + rho + rho * rho).norm() < 1e-12 {
        (1..t.len() - 2)
            .map(|j| (j, (t[j] + t[j + 1] + t[j + 2]) / 3.0))
            .collect()
    } else {
        (1..t.len() - 1)
            .map(|j| (j, (t[j + 1] - rho * t[j]) / (1.0 - rho)))
            .collect()
    };
    PrefactorEstimate::from_history(history)
}

/// The 7KdV root `α` with positive real and imaginary parts.
pub fn case_a_root(lambda: f64) -> Result<Complex64> {
    if !(lambda > 0.25) {
        return Err(Error::RegimeMismatch {
            expected: "Case A (lambda > 1/4)",
            lambda,
        });
    }
    solve_7kdv_singulant(lambda)?
        .into_iter()
        .map(|r| r.value)
        .find(|z| z.re > 0.0 && z.im > 0.0)
        .ok_or(Error::RegimeMismatch {
            expected: "Case A (lambda > 1/4)",
            lambda,
        })
}

/// Smallest `β > 0` with `iβ` a 7KdV singulant root.
pub fn case_b_beta(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 0.25) {
        return Err(Error::RegimeMismatch {
            expected: "Case B (0 < lambda <= 1/4)",
            lambda,
        });
    }
    Ok(solve_7kdv_singulant(lambda)?[0].value.im.abs())
}

/// Case A prefactors `(Λ₁, Λ₂)` from the `α`- and `ᾱ`-scaled series.
pub fn prefactor_case_a(lambda: f64, j_max: usize) -> Result<(PrefactorEstimate, PrefactorEstimate)> {
    check_j_max(j_max, 12)?;
    let alpha = case_a_root(lambda)?;
    let l1 = annihilated_estimate(&kdv7_inner_terms(lambda, alpha, j_max)?);
    let l2 = annihilated_estimate(&kdv7_inner_terms(lambda, alpha.conj(), j_max)?);
    let rel = (l2.value - l1.value.conj()).norm() / l1.value.norm();
    if !(rel <= 1e-6) {
        return Err(Error::ConjugateMismatch {
            relative_difference: rel,
        });
    }
    Ok((l1, l2))
}

/// Case B prefactor `Λ = lim t_j` against `iβ`.
pub fn prefactor_case_b(lambda: f64, j_max: usize) -> Result<PrefactorEstimate> {
    check_j_max(j_max, 12)?;
    let beta = case_b_beta(lambda)?;
    Ok(single_term_estimate(&kdv7_inner_terms(lambda, Complex64::new(0.0, beta), j_max)?))
}

/// Lattice KdV prefactor `Λ = lim t_j` against `iπ`.
pub fn prefactor_lattice(j_max: usize) -> Result<PrefactorEstimate> {
    check_j_max(j_max, 12)?;
    Ok(single_term_estimate(&lattice_inner_terms(j_max)?))
}

/// True when an estimate that must be real is real to [`CLASS_TOL`].
pub fn is_real(estimate: &PrefactorEstimate) -> bool {
    estimate.value.im.abs() < CLASS_TOL
}
