//! Far-field tail measurement and the numeric-versus-asymptotic sweep.

use std::f64::consts::PI;

use gsw_core::asymptotics::{mu_factor, remainder_case_b_with, soliton, SEVENTH_ORDER_J_MAX};
use gsw_core::inner::{case_b_beta, prefactor_case_b};
use gsw_core::model::ModelSpec;
use gsw_core::Complex64;
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{GswError, Result};
use crate::solver::{run, Equation, SimulationConfig, SpectralField, Splitting};

/// Window centre distance from the core, in predicted wavelengths.
pub const WINDOW_CENTER_WAVELENGTHS: f64 = 15.0;
pub const WINDOW_WIDTH_WAVELENGTHS: f64 = 10.0;
/// Minimum gap between the window and the core or the domain ends.
pub const MIN_CLEARANCE_WAVELENGTHS: f64 = 5.0;
/// Largest relative amplitude drift over the final quarter of a run that
/// still counts as steady.
pub const STEADY_DRIFT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProbe {
    pub core_position: f64,
    pub side: TailSide,
    pub window_width: f64,
    pub predicted_frequency: f64,
    /// Speed of the soliton subtracted as background.
    pub c: f64,
}

impl TailProbe {
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.predicted_frequency
    }

    pub fn window(&self) -> (f64, f64) {
        let centre = WINDOW_CENTER_WAVELENGTHS * self.wavelength();
        let half = 0.5 * self.window_width;
        match self.side {
            TailSide::Right => (self.core_position + centre - half, self.core_position + centre + half),
            TailSide::Left => (self.core_position - centre - half, self.core_position - centre + half),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMeasurement {
    pub amplitude: f64,
    pub frequency_estimate: f64,
    pub window: (f64, f64),
    pub side: TailSide,
    pub steady: bool,
}

/// Half the peak-to-trough span of `u − soliton` inside the probe window,
/// and the dominant spatial frequency there.
///
/// A single field cannot say whether the tail is steady, so `steady` is
/// false here; see [`track_tail`].
pub fn extract_tail(field: &SpectralField, probe: &TailProbe) -> Result<TailMeasurement> {
    if !(probe.predicted_frequency > 0.0 && probe.window_width > 0.0) {
        return Err(GswError::Setup("tail probe needs a positive frequency and width".into()));
    }
    let window = probe.window();
    let lw = probe.wavelength();
    let gap = MIN_CLEARANCE_WAVELENGTHS * lw;
    let near = match probe.side {
        TailSide::Right => window.0 - probe.core_position,
        TailSide::Left => probe.core_position - window.1,
    };
    if near < gap {
        return Err(GswError::Window {
            window,
            reason: "too close to the soliton core",
        });
    }
    let l = field.half_length;
    if window.0 < -l + gap || window.1 > l - gap {
        return Err(GswError::Window {
            window,
            reason: "too close to the periodic wrap-around",
        });
    }
    let dx = field.dx();
    let first = ((window.0 + l) / dx).ceil() as usize;
    let last = ((window.1 + l) / dx).floor() as usize;
    let residual: Vec<f64> = (first..=last)
        .map(|i| field.samples[i] - soliton(field.x(i) - probe.core_position, 0.0, probe.c))
        .collect();
    let (lo, hi) = residual
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let amplitude = 0.5 * (hi - lo);

    let m = residual.len();
    let mean = residual.iter().sum::<f64>() / m as f64;
    let mut buf: Vec<C64> = residual.iter().map(|r| C64::new(r - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let peak = (1..=m / 2)
        .max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm()))
        .unwrap_or(0);
    let frequency_estimate = 2.0 * PI * peak as f64 / (m as f64 * dx);

    Ok(TailMeasurement {
        amplitude,
        frequency_estimate,
        window,
        side: probe.side,
        steady: false,
    })
}

/// Measures each field with the window following the soliton peak and
/// reports the last one, marked steady when the amplitude drifted by less
/// than [`STEADY_DRIFT`] across them.
pub fn track_tail(
    fields: &[SpectralField],
    side: TailSide,
    window_width: f64,
    predicted_frequency: f64,
    c: f64,
) -> Result<TailMeasurement> {
    let mut amps = Vec::with_capacity(fields.len());
    let mut last = None;
    for f in fields {
        let probe = TailProbe {
            core_position: f.peak_position(),
            side,
            window_width,
            predicted_frequency,
            c,
        };
        let m = extract_tail(f, &probe)?;
        amps.push(m.amplitude);
        last = Some(m);
    }
    let mut m = last.ok_or_else(|| GswError::Setup("no fields to measure".into()))?;
    let (lo, hi) = amps
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    m.steady = m.amplitude > 0.0 && (hi - lo) / m.amplitude < STEADY_DRIFT;
    Ok(m)
}

/// Grid and time-stepping settings shared by every sweep entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTemplate {
    pub half_length: f64,
    pub n_points: usize,
    pub dt: f64,
    pub dealias: bool,
    pub splitting: Splitting,
    /// `t_end` as a multiple of the time the tail front needs to pass the
    /// far edge of the window.
    pub settle_factor: f64,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        Self {
            half_length: 256.0,
            n_points: 8192,
            dt: 2e-3,
            dealias: true,
            splitting: Splitting::Strang,
            settle_factor: 2.0,
        }
    }
}

/// Desk-scale ε values for the comparison; smaller ε makes the tail
/// amplitude fall towards rounding noise.
pub const DEFAULT_SWEEP_EPS: [f64; 4] = [0.8, 0.7, 0.6, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub eps: f64,
    /// Halved one-sided amplitude, comparable to the symmetric prediction.
    pub numeric_amplitude: f64,
    pub asymptotic_amplitude: f64,
    pub ratio: f64,
    pub rel_error: f64,
    pub steady: bool,
    pub frequency_estimate: f64,
    pub predicted_frequency: f64,
    pub t_end: f64,
}

/// The run used for one sweep entry, with the wrap-around check applied.
pub fn sweep_config(lambda: f64, c: f64, eps: f64, template: &SweepTemplate) -> Result<SimulationConfig> {
    let model = ModelSpec::seventh_order(lambda, c)?;
    let beta = case_b_beta(lambda)?;
    let wavelength = 2.0 * PI * eps / beta;
    let group = mu_factor(lambda, Complex64::new(0.0, beta)).re / (eps * eps);
    if !(group > c) {
        return Err(GswError::Setup(format!(
            "tail group velocity {group} does not exceed the wave speed {c}"
        )));
    }
    let far = (WINDOW_CENTER_WAVELENGTHS + 0.5 * WINDOW_WIDTH_WAVELENGTHS) * wavelength;
    let t_end = template.settle_factor * far / (group - c);
    let front = (group - c) * t_end;
    let allowed = 2.0 * template.half_length - far;
    if front >= allowed {
        return Err(GswError::Wrap { front, allowed });
    }
    let mut cfg = SimulationConfig::new(model, Equation::Perturbed, eps);
    cfg.dt = template.dt;
    cfg.t_end = t_end;
    cfg.half_length = template.half_length;
    cfg.n_points = template.n_points;
    cfg.dealias = template.dealias;
    cfg.splitting = template.splitting;
    cfg.snapshot_times = (0..5).map(|i| t_end * (0.75 + 0.0625 * i as f64)).collect();
    Ok(cfg)
}

/// Runs one simulation per `ε`, concurrently, and pairs the halved
/// one-sided tail amplitude with the symmetric Case B prediction.
pub fn compare_sweep(lambda: f64, c: f64, eps_values: &[f64], template: &SweepTemplate) -> Result<Vec<ComparisonRow>> {
    if eps_values.is_empty() {
        return Ok(Vec::new());
    }
    let prefactor = prefactor_case_b(lambda, SEVENTH_ORDER_J_MAX)?.value;
    let configs = eps_values
        .iter()
        .map(|&e| sweep_config(lambda, c, e, template))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<ComparisonRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| scope.spawn(move || compare_one(cfg, prefactor)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(GswError::Setup("sweep worker panicked".into()))))
            .collect()
    });
    results.into_iter().collect()
}

fn compare_one(cfg: &SimulationConfig, prefactor: Complex64) -> Result<ComparisonRow> {
    let eps = cfg.eps;
    let beta = case_b_beta(cfg.model.lambda)?;
    let frequency = beta / eps;
    let out = run(cfg)?;
    let width = WINDOW_WIDTH_WAVELENGTHS * 2.0 * PI / frequency;
    let m = track_tail(&out.snapshots[1..], TailSide::Right, width, frequency, cfg.model.c)?;
    let asym = remainder_case_b_with(&cfg.model, eps, prefactor)?.amplitude;
    let numeric = 0.5 * m.amplitude;
    let ratio = numeric / asym;
    Ok(ComparisonRow {
        eps,
        numeric_amplitude: numeric,
        asymptotic_amplitude: asym,
        ratio,
        rel_error: (ratio - 1.0).abs(),
        steady: m.steady,
        frequency_estimate: m.frequency_estimate,
        predicted_frequency: frequency,
        t_end: cfg.t_end,
    })
}
