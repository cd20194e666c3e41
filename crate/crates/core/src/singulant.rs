//! Singulant equations and regime classification.
//!
//! Continuous models reduce to a polynomial in `Y = χ_x²`, which keeps the
//! `±χ_x` pairing exact. The lattice models have transcendental singulant
//! equations whose roots are known in closed form.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{nonzero, ModelKind, ModelSpec};
use crate::poly;

/// Absolute threshold on `|Re χ_x|` below which a root counts as imaginary.
pub const CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    PureImaginary,
    ComplexDecaying,
}

impl Regime {
    pub fn of(value: Complex64) -> Self {
        if value.re.abs() <= CLASS_TOL {
            Regime::PureImaginary
        } else {
            Regime::ComplexDecaying
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Primary,
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingulantRoot {
    pub value: Complex64,
    pub regime: Regime,
    pub family: Family,
    /// `N` for the lattice families, 0 otherwise.
    pub branch_index: i64,
}

impl SingulantRoot {
    fn new(value: Complex64, family: Family, branch_index: i64) -> Self {
        Self {
            value,
            regime: Regime::of(value),
            family,
            branch_index,
        }
    }

    pub fn is_imaginary(&self) -> bool {
        self.regime == Regime::PureImaginary
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationResult {
    pub parameter_name: String,
    pub critical_value: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    GeneralizedSolitaryWave,
    LocalizedSoliton,
    KappaIndependentOscillations,
    KappaDependentOscillations,
}

/// Orders roots by `|Im|`, then `|Re|`, then upper half plane first.
fn by_dominance(a: &SingulantRoot, b: &SingulantRoot) -> Ordering {
    let key = |r: &SingulantRoot| (r.value.im.abs(), r.value.re.abs());
    let (ai, ar) = key(a);
    let (bi, br) = key(b);
    ai.total_cmp(&bi)
        .then(ar.total_cmp(&br))
        .then(b.value.im.total_cmp(&a.value.im))
        .then(b.value.re.total_cmp(&a.value.re))
}

fn plus_minus_sqrt(y: Complex64, out: &mut Vec<SingulantRoot>) {
    let r = y.sqrt();
    out.push(SingulantRoot::new(r, Family::Primary, 0));
    out.push(SingulantRoot::new(-r, Family::Primary, 0));
}

/// The four roots of `λχ⁴ + χ² + 1 = 0`.
///
/// Solved as a quadratic in `χ²` in the cancellation-free form
/// `χ² = −2/(1 + √(1−4λ))` and its partner `1/(λχ²)`, so the boundary
/// `λ = 1/4` yields `χ² = −2` exactly.
pub fn solve_7kdv_singulant(lambda: f64) -> Result<Vec<SingulantRoot>> {
    nonzero("lambda", lambda)?;
    let s = Complex64::new(1.0 - 4.0 * lambda, 0.0).sqrt();
    let y1 = -2.0 / (1.0 + s);
    let y2 = -(1.0 + s) / (2.0 * lambda);
    let mut out = Vec::with_capacity(4);
    plus_minus_sqrt(y1, &mut out);
    plus_minus_sqrt(y2, &mut out);
    out.sort_by(by_dominance);
    Ok(out)
}

/// Coefficients in `Y = χ²` of `λY^k + Σ_{r<k} Y^r`, ascending.
pub fn hierarchy_polynomial(k: u32, lambda: f64) -> Vec<f64> {
    let mut c = alloc::vec![1.0; k as usize + 1];
    c[k as usize] = lambda;
    c
}

/// The `2k` roots of `λχ^{2k} + Σ_{r<k} χ^{2r} = 0`.
pub fn hierarchy_singulant_roots(k: u32, lambda: f64) -> Result<Vec<SingulantRoot>> {
    ModelSpec::hierarchy(k, lambda, 1.0)?;
    if k == 2 {
        return solve_7kdv_singulant(lambda);
    }
    let ys = poly::roots(&hierarchy_polynomial(k, lambda))?;
    let mut out = Vec::with_capacity(2 * k as usize);
    for y in ys {
        plus_minus_sqrt(y, &mut out);
    }
    out.sort_by(by_dominance);
    Ok(out)
}

/// Does `χ = iy` give a real `y > 0` for this even `k` and `λ`?
///
/// With `Z = y²` the question is whether `P(Z) = λZ^k + Σ_{r<k} (−Z)^r` has a
/// positive root. `P(0) = 1`, so for `λ > 0` this holds exactly when `P` is
/// non-positive at one of its positive critical points, which are simple
/// roots of `P′` and therefore well conditioned even at a double root of `P`.
pub fn has_imaginary_root_even(k: u32, lambda: f64) -> Result<bool> {
    if lambda <= 0.0 {
        return Ok(true);
    }
    let mut p: Vec<f64> = (0..k)
        .map(|r| if r % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    p.push(lambda);
    let dp = poly::derivative(&p);
    let ddp = poly::derivative(&dp);
    for z in poly::roots(&dp)? {
        if z.re <= 0.0 || z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
            continue;
        }
        let mut x = z.re;
        for _ in 0..3 {
            let d = poly::eval_real(&ddp, x);
            if d == 0.0 {
                break;
            }
            x -= poly::eval_real(&dp, x) / d;
        }
        if poly::eval_real(&p, x) <= 0.0 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn bisect<F>(name: &'static str, mut lo: f64, mut hi: f64, tol: f64, mut below: F) -> Result<BifurcationResult>
where
    F: FnMut(f64) -> Result<bool>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            parameter: "tol",
            value: tol,
            reason: "must be positive",
        });
    }
    // `below(x)` is true on the low side of the threshold.
    let mut expansions = 0;
    while !below(lo)? {
        lo *= 0.5;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::BracketNotFound { parameter: name });
        }
    }
    while below(hi)? {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::BracketNotFound { parameter: name });
        }
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(BifurcationResult {
        parameter_name: String::from(name),
        critical_value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    })
}

/// Largest `λ` for which the order-`2k+3` hierarchy still has imaginary
/// singulant roots, by bisection starting from `[1e-6, 1]`.
pub fn lambda_crit(k: u32, tol: f64) -> Result<BifurcationResult> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            parameter: "k",
            value: 0.0,
            reason: "hierarchy index must be at least 1",
        });
    }
    if k % 2 == 1 {
        return Err(Error::OddHierarchyIndex { k });
    }
    bisect("lambda", 1e-6, 1.0, tol, |l| has_imaginary_root_even(k, l))
}

/// `χ_x = iπN` for `N = ±1, …, ±n_max`, ordered by `|N|` with `N > 0`
/// first. The dominant pair is the first two entries.
pub fn lattice_kdv_singulants(n_max: u32) -> Result<Vec<SingulantRoot>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter {
            parameter: "n_max",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    Ok(pi_multiples(n_max, Family::Primary))
}

fn pi_multiples(n_max: u32, family: Family) -> Vec<SingulantRoot> {
    let mut out = Vec::with_capacity(2 * n_max as usize);
    for n in 1..=n_max as i64 {
        for sn in [n, -n] {
            out.push(SingulantRoot {
                value: Complex64::new(0.0, PI * sn as f64),
                regime: Regime::PureImaginary,
                family,
                branch_index: sn,
            });
        }
    }
    out
}

/// `[1 − cosh χ] sinh χ`, the lattice KdV singulant function.
pub fn lattice_kdv_residual(chi: Complex64) -> Complex64 {
    (1.0 - chi.cosh()) * chi.sinh()
}

/// `1 + 4κ sinh²χ`, which vanishes on the second lattice 5KdV family.
pub fn lattice_5kdv_family2_residual(kappa: f64, chi: Complex64) -> Complex64 {
    let s = chi.sinh();
    1.0 + 4.0 * kappa * s * s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice5KdvRoots {
    pub family1: Vec<SingulantRoot>,
    pub family2: Vec<SingulantRoot>,
}

impl Lattice5KdvRoots {
    /// Imaginary root of smallest `|Im|` over both families.
    pub fn dominant_root(&self) -> Option<SingulantRoot> {
        self.family1
            .iter()
            .chain(&self.family2)
            .filter(|r| r.is_imaginary())
            .min_by(|a, b| a.value.im.abs().total_cmp(&b.value.im.abs()))
            .copied()
    }

    /// Spatial frequency (in units of `1/h`) of the dominant oscillation.
    pub fn dominant_frequency(&self) -> Option<f64> {
        self.dominant_root().map(|r| r.value.im.abs())
    }
}

fn reduce_strip(z: Complex64) -> Complex64 {
    // Fundamental strip Im ∈ (−2π, 2π] of the 4πi periodicity.
    let period = 4.0 * PI;
    let mut im = z.im - period * libm::floor(z.im / period);
    if im > 2.0 * PI {
        im -= period;
    }
    Complex64::new(z.re, im)
}

/// Both root families of the discretized fifth-order KdV singulant.
///
/// `family1` is `iπN` for `N = ±1, …, ±n_max`. `family2` takes every sign
/// combination in `±log(±√(1 − q))`, `q = (1 ± √(1−4κ))/(2κ)`, reduced to
/// the strip `Im ∈ (−2π, 2π]` with duplicates removed, and then shifted by
/// `4πiN` for each requested offset.
pub fn lattice_5kdv_singulants(kappa: f64, n_max: u32, offsets: &[i64]) -> Result<Lattice5KdvRoots> {
    nonzero("kappa", kappa)?;
    let family1 = pi_multiples(n_max.max(1), Family::Primary);

    let s = Complex64::new(1.0 - 4.0 * kappa, 0.0).sqrt();
    let mut base: Vec<Complex64> = Vec::with_capacity(8);
    for sa in [1.0, -1.0] {
        let q = (1.0 + sa * s) / (2.0 * kappa);
        let w = (1.0 - q).sqrt();
        for sb in [1.0, -1.0] {
            let l = (sb * w).ln();
            for sc in [1.0, -1.0] {
                let z = reduce_strip(sc * l);
                if !base.iter().any(|b| (b - z).norm() < 1e-12 * (1.0 + z.norm())) {
                    base.push(z);
                }
            }
        }
    }
    let mut family2 = Vec::new();
    let mut shifts: Vec<i64> = alloc::vec![0];
    shifts.extend(offsets.iter().copied().filter(|&n| n != 0));
    for n in shifts {
        for &z in &base {
            let v = z + Complex64::new(0.0, 4.0 * PI * n as f64);
            family2.push(SingulantRoot::new(v, Family::Secondary, n));
        }
    }
    family2.sort_by(by_dominance);
    Ok(Lattice5KdvRoots { family1, family2 })
}

/// Smallest `κ` at which the second lattice 5KdV family becomes purely
/// imaginary.
pub fn kappa_crit(tol: f64) -> Result<BifurcationResult> {
    bisect("kappa", 1e-3, 1.0, tol, |k| {
        let roots = lattice_5kdv_singulants(k, 1, &[])?;
        Ok(!roots.family2.iter().any(|r| r.is_imaginary()))
    })
}

pub fn classify_regime(model: &ModelSpec) -> Result<Classification> {
    model.validate()?;
    let gsw = |roots: Vec<SingulantRoot>| {
        if roots.iter().any(|r| r.is_imaginary()) {
            Classification::GeneralizedSolitaryWave
        } else {
            Classification::LocalizedSoliton
        }
    };
    Ok(match model.kind {
        ModelKind::SeventhOrder => gsw(solve_7kdv_singulant(model.lambda)?),
        ModelKind::Hierarchy => gsw(hierarchy_singulant_roots(model.k, model.lambda)?),
        ModelKind::LatticeKdV => Classification::GeneralizedSolitaryWave,
        ModelKind::Lattice5KdV => {
            if model.kappa < 0.25 {
                Classification::KappaIndependentOscillations
            } else {
                Classification::KappaDependentOscillations
            }
        }
    })
}
