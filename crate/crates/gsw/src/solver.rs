//! Pseudo-spectral split-step integration of KdV-type equations on a
//! periodic domain `[−L, L)`.
//!
//! The dispersive part is integrated exactly in Fourier space. The
//! conservative nonlinearity `u_t + ∂x(3u²) = 0` is advanced with classical
//! RK4, evaluating the flux derivative spectrally with optional 2/3-rule
//! dealiasing.

use std::f64::consts::PI;
use std::sync::Arc;

use gsw_core::asymptotics::soliton;
use gsw_core::model::{ModelKind, ModelSpec};
use gsw_core::singulant::hierarchy_singulant_roots;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{GswError, Result};

pub const MIN_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub samples: Vec<f64>,
    pub half_length: f64,
    pub time: f64,
}

impl SpectralField {
    pub fn new(samples: Vec<f64>, half_length: f64, time: f64) -> Result<Self> {
        let n = samples.len();
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(GswError::Setup(format!(
                "n_points = {n} must be a power of two >= {MIN_POINTS}"
            )));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(GswError::Setup(format!("L = {half_length} must be positive")));
        }
        if samples.iter().any(|u| !u.is_finite()) {
            return Err(GswError::Setup("samples must be finite".into()));
        }
        Ok(Self {
            samples,
            half_length,
            time,
        })
    }

    pub fn from_fn(n: usize, half_length: f64, time: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let dx = 2.0 * half_length / n as f64;
        let samples = (0..n).map(|i| f(-half_length + dx * i as f64)).collect();
        Self::new(samples, half_length, time)
    }

    /// The KdV soliton of speed `c` centred at the origin.
    pub fn soliton(n: usize, half_length: f64, c: f64) -> Result<Self> {
        Self::from_fn(n, half_length, 0.0, |x| soliton(x, 0.0, c))
    }

    pub fn n_points(&self) -> usize {
        self.samples.len()
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n_points() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_length + self.dx() * i as f64
    }

    pub fn mass(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|u| u * u).sum::<f64>() * self.dx()).sqrt()
    }

    /// Grid position of the largest sample.
    pub fn peak_position(&self) -> f64 {
        let (i, _) = self
            .samples
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &u)| if u > best.1 { (i, u) } else { best });
        self.x(i)
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Angular wavenumbers in FFT order. The Nyquist mode is given wavenumber
/// zero so that every multiplier keeps the field real.
pub fn wavenumbers(n: usize, half_length: f64) -> Vec<f64> {
    let scale = PI / half_length;
    (0..n)
        .map(|i| {
            let m = if i < n / 2 {
                i as f64
            } else if i == n / 2 {
                0.0
            } else {
                i as f64 - n as f64
            };
            m * scale
        })
        .collect()
}

/// Linear dispersion `û_t = iω(κ)û` with `ω = Σ_s d_s κ^{2s+3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion {
    coeffs: Vec<f64>,
}

impl Dispersion {
    /// `u_t + u_xxx = 0`.
    pub fn kdv() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// `ω = κ³ − ε²κ⁵ + ε⁴κ⁷ − … + (−1)^k λ ε^{2k} κ^{2k+3}` for the
    /// hierarchy member of index `k` (seventh order: `k = 2`).
    pub fn for_model(model: &ModelSpec, eps: f64) -> Result<Self> {
        model.validate()?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(GswError::Setup(format!("eps = {eps} must be positive")));
        }
        match model.kind {
            ModelKind::SeventhOrder | ModelKind::Hierarchy => {}
            _ => {
                return Err(GswError::Setup(
                    "lattice models are not time-stepped by this solver".into(),
                ))
            }
        }
        let k = model.order_index() as usize;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut e = 1.0;
        for s in 0..=k {
            let c = if s == k && s > 0 { model.lambda } else { 1.0 };
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(sign * c * e);
            e *= eps * eps;
        }
        Ok(Self { coeffs })
    }

    pub fn omega(&self, kappa: f64) -> f64 {
        let k2 = kappa * kappa;
        kappa * k2 * self.coeffs.iter().rev().fold(0.0, |acc, &d| acc * k2 + d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Lie,
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// Plain KdV; the model only supplies the soliton speed.
    Kdv,
    /// The singularly perturbed equation described by the model.
    Perturbed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub model: ModelSpec,
    pub equation: Equation,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    pub half_length: f64,
    pub n_points: usize,
    pub dealias: bool,
    pub splitting: Splitting,
    /// Extra output times in `(0, t_end]`, snapped to the step grid.
    pub snapshot_times: Vec<f64>,
}

impl SimulationConfig {
    pub fn new(model: ModelSpec, equation: Equation, eps: f64) -> Self {
        Self {
            model,
            equation,
            eps,
            dt: 1e-3,
            t_end: 1.0,
            half_length: 50.0,
            n_points: 4096,
            dealias: true,
            splitting: Splitting::Strang,
            snapshot_times: Vec::new(),
        }
    }

    pub fn dispersion(&self) -> Result<Dispersion> {
        match self.equation {
            Equation::Kdv => Ok(Dispersion::kdv()),
            Equation::Perturbed => Dispersion::for_model(&self.model, self.eps),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(GswError::Setup(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(GswError::Setup(format!("t_end = {} must be non-negative", self.t_end)));
        }
        if self.n_points < MIN_POINTS || !self.n_points.is_power_of_two() {
            return Err(GswError::Setup(format!(
                "n_points = {} must be a power of two >= {MIN_POINTS}",
                self.n_points
            )));
        }
        if !(self.half_length > 0.0) {
            return Err(GswError::Setup(format!("L = {} must be positive", self.half_length)));
        }
        self.dispersion()?;
        Ok(())
    }

    /// Number of steps and the uniform step actually taken.
    pub fn step_plan(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }

    /// Largest wavenumber the dealiased grid represents faithfully.
    pub fn resolved_wavenumber(&self) -> f64 {
        2.0 / 3.0 * PI * self.n_points as f64 / (2.0 * self.half_length)
    }
}

/// Spatial frequency of the dominant far-field oscillation, `Im χ_x / ε`
/// for the smallest singulant root in the upper half plane.
pub fn predicted_tail_frequency(model: &ModelSpec, eps: f64) -> Result<f64> {
    let roots = hierarchy_singulant_roots(model.order_index(), model.lambda)?;
    roots
        .iter()
        .filter(|r| r.value.im > 0.0)
        .min_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))
        .map(|r| r.value.im / eps)
        .ok_or_else(|| GswError::Setup("model has no oscillatory singulant root".into()))
}

/// Reusable FFT plans and buffers for one grid.
pub struct SplitStep {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    omega: Vec<f64>,
    deriv: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    cached: Option<(f64, Vec<Complex64>)>,
    stages: [Vec<f64>; 5],
}

impl SplitStep {
    pub fn new(n: usize, half_length: f64, dispersion: &Dispersion, dealias: bool) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let kappa = wavenumbers(n, half_length);
        let omega = kappa.iter().map(|&k| dispersion.omega(k)).collect();
        let cutoff = n as f64 / 3.0;
        let deriv = kappa
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let m = if i <= n / 2 { i as f64 } else { (n - i) as f64 };
                if dealias && m >= cutoff {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, k)
                }
            })
            .collect();
        let scratch_len = fft.get_inplace_scratch_len().max(ifft.get_inplace_scratch_len());
        Self {
            n,
            fft,
            ifft,
            omega,
            deriv,
            buf: vec![Complex64::new(0.0, 0.0); n],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            cached: None,
            stages: std::array::from_fn(|_| vec![0.0; n]),
        }
    }

    fn load(&mut self, u: &[f64]) {
        for (b, &x) in self.buf.iter_mut().zip(u) {
            *b = Complex64::new(x, 0.0);
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
    }

    fn store(&mut self, u: &mut [f64]) {
        self.ifft.process_with_scratch(&mut self.buf, &mut self.scratch);
        let inv = 1.0 / self.n as f64;
        for (x, b) in u.iter_mut().zip(&self.buf) {
            *x = b.re * inv;
        }
    }

    /// Exact dispersive substep of length `dt`.
    pub fn linear(&mut self, u: &mut [f64], dt: f64) {
        let fresh = !matches!(&self.cached, Some((d, _)) if *d == dt);
        if fresh {
            let m = self.omega.iter().map(|&w| Complex64::cis(w * dt)).collect();
            self.cached = Some((dt, m));
        }
        self.load(u);
        if let Some((_, m)) = &self.cached {
            for (b, f) in self.buf.iter_mut().zip(m) {
                *b *= f;
            }
        }
        self.store(u);
    }

    /// `out = −∂x(3u²)`.
    fn flux(&mut self, u: &[f64], out: &mut [f64]) {
        for (b, &x) in self.buf.iter_mut().zip(u) {
            *b = Complex64::new(-3.0 * x * x, 0.0);
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (b, d) in self.buf.iter_mut().zip(&self.deriv) {
            *b *= d;
        }
        self.store(out);
    }

    /// RK4 substep for `u_t + ∂x(3u²) = 0`.
    pub fn nonlinear(&mut self, u: &mut [f64], dt: f64) {
        let [mut k1, mut k2, mut k3, mut k4, mut tmp] = std::mem::take(&mut self.stages);
        self.flux(u, &mut k1);
        for i in 0..self.n {
            tmp[i] = u[i] + 0.5 * dt * k1[i];
        }
        self.flux(&tmp, &mut k2);
        for i in 0..self.n {
            tmp[i] = u[i] + 0.5 * dt * k2[i];
        }
        self.flux(&tmp, &mut k3);
        for i in 0..self.n {
            tmp[i] = u[i] + dt * k3[i];
        }
        self.flux(&tmp, &mut k4);
        for i in 0..self.n {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        self.stages = [k1, k2, k3, k4, tmp];
    }

    pub fn step(&mut self, u: &mut [f64], dt: f64, splitting: Splitting) {
        match splitting {
            Splitting::Lie => {
                self.linear(u, dt);
                self.nonlinear(u, dt);
            }
            Splitting::Strang => {
                self.linear(u, 0.5 * dt);
                self.nonlinear(u, dt);
                self.linear(u, 0.5 * dt);
            }
        }
    }
}

pub fn linear_step(field: &SpectralField, dispersion: &Dispersion, dt: f64) -> SpectralField {
    let mut s = SplitStep::new(field.n_points(), field.half_length, dispersion, false);
    let mut out = field.clone();
    s.linear(&mut out.samples, dt);
    out.time += dt;
    out
}

pub fn nonlinear_step(field: &SpectralField, dt: f64, dealias: bool) -> SpectralField {
    let mut s = SplitStep::new(field.n_points(), field.half_length, &Dispersion::kdv(), dealias);
    let mut out = field.clone();
    s.nonlinear(&mut out.samples, dt);
    out.time += dt;
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub final_field: SpectralField,
    /// Initial field followed by one field per requested snapshot time.
    pub snapshots: Vec<SpectralField>,
    pub steps: usize,
    pub dt_used: f64,
}

/// Integrates the soliton initial condition from `t = 0` to `t_end`.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    config.validate()?;
    if config.equation == Equation::Perturbed {
        let frequency = predicted_tail_frequency(&config.model, config.eps)?;
        let limit = config.resolved_wavenumber();
        if frequency >= limit {
            return Err(GswError::Unresolved { frequency, limit });
        }
    }
    let dispersion = config.dispersion()?;
    let mut field = SpectralField::soliton(config.n_points, config.half_length, config.model.c)?;
    let (steps, dt) = config.step_plan();
    let mut marks: Vec<usize> = config
        .snapshot_times
        .iter()
        .filter(|&&t| t > 0.0 && t <= config.t_end)
        .map(|&t| ((t / dt).round() as usize).clamp(1, steps.max(1)))
        .collect();
    marks.sort_unstable();
    marks.dedup();

    let mut snapshots = vec![field.clone()];
    let mut stepper = SplitStep::new(config.n_points, config.half_length, &dispersion, config.dealias);
    let mut next = marks.iter().peekable();
    for i in 1..=steps {
        stepper.step(&mut field.samples, dt, config.splitting);
        field.time = i as f64 * dt;
        if field.samples.iter().any(|u| !u.is_finite()) {
            return Err(GswError::BlowUp { time: field.time });
        }
        if next.peek() == Some(&&i) {
            next.next();
            snapshots.push(field.clone());
        }
    }
    Ok(RunOutput {
        final_field: field,
        snapshots,
        steps,
        dt_used: dt,
    })
}
