//! Acceptance criteria 1–11. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gsw::solver::{linear_step, run, Dispersion, Equation, SimulationConfig, SpectralField};
use gsw::tail::{compare_sweep, SweepTemplate, DEFAULT_SWEEP_EPS};
use gsw_core::asymptotics::{
    optimal_truncation, remainder_case_a, smallest_term_index, soliton, stokes_jump, stokes_profile,
    LateOrderAnsatz, StokesNormalization,
};
use gsw_core::inner::{
    hierarchy_inner_terms, kdv7_inner_terms, lattice_inner_terms, prefactor_case_a, prefactor_case_b,
    prefactor_lattice,
};
use gsw_core::poly;
use gsw_core::singulant::{
    classify_regime, hierarchy_singulant_roots, kappa_crit, lambda_crit, lattice_5kdv_singulants,
    solve_7kdv_singulant, Family,
};
use gsw_core::{Complex64, ModelSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

// Pinned tolerances.
const LAMBDA_CRIT_TOL: f64 = 1e-8;
const CASE_A_TARGET: (f64, f64) = (0.711, 0.694);
const CASE_A_REL: f64 = 5e-3;
const CONJ_TOL: f64 = 1e-6;
const CASE_B_TARGET: f64 = -11.70;
const CASE_B_REL: f64 = 5e-3;
const CASE_B_IMAG: f64 = 1e-9;
const LATTICE_TARGET: f64 = -2.68e3;
const LATTICE_REL: f64 = 1e-2;
const EXACT_REL: f64 = 1e-12;
const EXACT_J: usize = 15;
const HAND_V1: i64 = -15;
const ROOT_RESIDUAL: f64 = 1e-12;
const MIN_RE: f64 = 1e-3;
const KAPPA_BRACKET: f64 = 1e-6;
const FREQ_TOL: f64 = 1e-12;
const SOLITON_LINF: f64 = 1e-6;
const ORDER_RATIO: (f64, f64) = (4.0, 0.5);
const SWEEP_REL_ERROR: f64 = 0.30;
const L2_TOL: f64 = 1e-12;
const MASS_TOL: f64 = 1e-8;
const TRUNCATION_SLACK: i64 = 2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let t = start.elapsed();
    if t > limit {
        o.pass = false;
    }
    o.detail = format!("{} [{:.2} s, limit {} s]", o.detail, t.as_secs_f64(), limit.as_secs());
    o
}

fn c1() -> Outcome {
    timed(Duration::from_secs(1), || {
        let r = lambda_crit(2, 1e-10).unwrap();
        let err = (r.critical_value - 0.25).abs();
        outcome(err < LAMBDA_CRIT_TOL, format!("lambda_crit(2) = {:.12} (error {err:.1e})", r.critical_value))
    })
}

fn c2() -> Outcome {
    timed(Duration::from_secs(30), || match prefactor_case_a(1.0, 600) {
        Ok((l1, l2)) => {
            let v = l1.value;
            let re = (v.re - CASE_A_TARGET.0).abs() / CASE_A_TARGET.0;
            let im = (v.im - CASE_A_TARGET.1).abs() / CASE_A_TARGET.1;
            let conj = (l2.value - v.conj()).norm() / v.norm();
            outcome(
                re <= CASE_A_REL && im <= CASE_A_REL && conj <= CONJ_TOL,
                format!(
                    "Lambda_1 = {:.6} {:+.6}i vs {} + {}i (rel {re:.2e}, {im:.2e}); |Lambda_2 - conj| rel {conj:.1e}",
                    v.re, v.im, CASE_A_TARGET.0, CASE_A_TARGET.1
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    })
}

fn c3() -> Outcome {
    let p = prefactor_case_b(0.125, 600).unwrap();
    let rel = (p.value.re - CASE_B_TARGET).abs() / CASE_B_TARGET.abs();
    outcome(
        rel <= CASE_B_REL && p.value.im.abs() < CASE_B_IMAG,
        format!(
            "Lambda = {:.6} (|Im| {:.1e}) vs {CASE_B_TARGET} (rel {rel:.2e})",
            p.value.re,
            p.value.im.abs()
        ),
    )
}

fn c4() -> Outcome {
    let p = prefactor_lattice(200).unwrap();
    let rel = (p.value.re - LATTICE_TARGET).abs() / LATTICE_TARGET.abs();
    outcome(
        rel <= LATTICE_REL,
        format!("Lambda = {:.4} vs {LATTICE_TARGET} (rel {rel:.2e})", p.value.re),
    )
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rising(n: i64, d: i64) -> BigRational {
    (0..d).fold(int(1), |acc, i| acc * int(n + i))
}

fn binom(n: i64, k: i64) -> BigRational {
    (0..k).fold(int(1), |acc, i| acc * int(n - i) / int(i + 1))
}

/// Raw 7KdV inner terms from the `η^{−(2m+5)}` balance, exactly.
fn kdv7_exact(lambda: &BigRational, j_max: usize) -> Vec<BigRational> {
    let mut v = vec![int(-2)];
    for m in 1..=j_max as i64 {
        let mut num = BigRational::zero();
        for s in 1..=2i64.min(m) {
            let c = if s == 2 { lambda.clone() } else { int(1) };
            num -= c * rising(2 * m - 2 * s + 2, 2 * s + 3) * &v[(m - s) as usize];
        }
        let conv = (1..m).fold(BigRational::zero(), |acc, r| acc + &v[r as usize] * &v[(m - r) as usize]);
        num -= int(3 * (2 * m + 4)) * conv;
        let den = rising(2 * m + 2, 3) + int(6 * (2 * m + 4)) * &v[0];
        v.push(num / den);
    }
    v
}

fn lattice_exact(j_max: usize) -> Vec<BigRational> {
    let mut v = vec![int(-2)];
    for m in 1..=j_max as i64 {
        let mut rest = BigRational::zero();
        for r in 2..=m + 1 {
            rest += binom(2 * m + 4, 2 * r + 1) * int(4i64.pow(r as u32) - 1) * &v[(m + 1 - r) as usize];
        }
        for l in 0..=m {
            for r in 0..=l {
                let (a, b) = (m - l, l - r);
                if a == m || b == m {
                    continue;
                }
                rest += int(3) * binom(2 * l + 2, 2 * r + 1) * &v[a as usize] * &v[b as usize];
            }
        }
        let coef = int(3) * binom(2 * m + 4, 3) + int(6) * &v[0] + int(6 * m + 6) * &v[0];
        v.push(-rest / coef);
    }
    v
}

fn worst_rel(raw: impl Fn(usize) -> Complex64, exact: &[BigRational]) -> f64 {
    (0..=EXACT_J)
        .map(|j| {
            let e = exact[j].to_f64().unwrap();
            (raw(j) - e).norm() / e.abs()
        })
        .fold(0.0, f64::max)
}

fn c5() -> Outcome {
    let alpha = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let s1 = kdv7_inner_terms(1.0, alpha, EXACT_J).unwrap();
    let e1 = kdv7_exact(&int(1), EXACT_J);
    let w1 = worst_rel(|j| s1.raw_term(j).unwrap(), &e1);

    let beta = solve_7kdv_singulant(0.125).unwrap()[0].value.im.abs();
    let s8 = kdv7_inner_terms(0.125, Complex64::new(0.0, beta), EXACT_J).unwrap();
    let w8 = worst_rel(|j| s8.raw_term(j).unwrap(), &kdv7_exact(&(int(1) / int(8)), EXACT_J));

    let sl = lattice_inner_terms(EXACT_J).unwrap();
    let wl = worst_rel(|j| sl.raw_term(j).unwrap(), &lattice_exact(EXACT_J));

    let hand = e1[1] == int(HAND_V1);
    outcome(
        w1 < EXACT_REL && w8 < EXACT_REL && wl < EXACT_REL && hand,
        format!(
            "worst rel: lambda=1 {w1:.1e}, lambda=1/8 {w8:.1e}, lattice {wl:.1e}; exact v_1(lambda=1) = {} (expected {HAND_V1})",
            e1[1]
        ),
    )
}

fn hierarchy_residual(k: u32, lambda: f64, z: Complex64) -> f64 {
    poly::eval(&gsw_core::singulant::hierarchy_polynomial(k, lambda), z * z).norm()
}

fn c6() -> Outcome {
    let mut ok = true;
    let mut worst_res: f64 = 0.0;
    for k in [1u32, 3, 5, 7] {
        let roots = hierarchy_singulant_roots(k, 1.0).unwrap();
        for target in [Complex64::i(), -Complex64::i()] {
            let r = roots
                .iter()
                .min_by(|a, b| (a.value - target).norm().total_cmp(&(b.value - target).norm()))
                .unwrap();
            let res = hierarchy_residual(k, 1.0, r.value);
            worst_res = worst_res.max(res);
            ok &= (r.value - target).norm() < 1e-10 && res < ROOT_RESIDUAL && r.is_imaginary();
        }
    }
    let mut min_re = f64::INFINITY;
    for k in [2u32, 4, 6, 8] {
        for r in hierarchy_singulant_roots(k, 1.0).unwrap() {
            min_re = min_re.min(r.value.re.abs());
        }
    }
    ok &= min_re > MIN_RE;
    outcome(
        ok,
        format!("odd k: worst residual at +-i {worst_res:.1e}; even k: min |Re chi| {min_re:.3e}"),
    )
}

fn c7() -> Outcome {
    let vals: Vec<f64> = [2u32, 4, 6, 8, 10]
        .iter()
        .map(|&k| lambda_crit(k, 1e-12).unwrap().critical_value)
        .collect();
    let increasing = vals.windows(2).all(|w| w[0] < w[1]);
    let bounded = vals.iter().all(|&v| v > 0.25 - LAMBDA_CRIT_TOL && v < 0.5);
    outcome(
        increasing && bounded,
        format!("lambda_crit(k = 2..10) = {}", vals.iter().map(|v| format!("{v:.8}")).collect::<Vec<_>>().join(", ")),
    )
}

fn c8() -> Outcome {
    let low = lattice_5kdv_singulants(0.125, 3, &[]).unwrap();
    let high = lattice_5kdv_singulants(1.0, 3, &[]).unwrap();
    let (dl, dh) = (low.dominant_root().unwrap(), high.dominant_root().unwrap());
    let f_low = (dl.value.im.abs() - PI).abs() < FREQ_TOL * PI && dl.family == Family::Primary;
    let f_high = (dh.value.im.abs() - PI / 6.0).abs() < FREQ_TOL * PI && dh.family == Family::Secondary;
    let crit = kappa_crit(1e-9).unwrap();
    let in_bracket = (crit.critical_value - 0.25).abs() <= KAPPA_BRACKET;
    let imag2 = |k: f64| {
        lattice_5kdv_singulants(k, 1, &[])
            .unwrap()
            .family2
            .iter()
            .any(|r| r.is_imaginary())
    };
    let flip = !imag2(0.25 - KAPPA_BRACKET) && imag2(0.25 + KAPPA_BRACKET);
    let class = |k: f64| classify_regime(&ModelSpec::lattice_5kdv(k, 1.0, 1.0).unwrap()).unwrap();
    let class_flip = class(0.25 - KAPPA_BRACKET) != class(0.25 + KAPPA_BRACKET);
    outcome(
        f_low && f_high && in_bracket && flip && class_flip,
        format!(
            "kappa=1/8: {:.15} ({:?}); kappa=1: {:.15} ({:?}); kappa_crit = {:.10}",
            dl.value.im.abs(),
            dl.family,
            dh.value.im.abs(),
            dh.family,
            crit.critical_value
        ),
    )
}

fn kdv_error(dt: f64) -> f64 {
    let mut cfg = SimulationConfig::new(ModelSpec::seventh_order(0.125, 1.0).unwrap(), Equation::Kdv, 0.5);
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.half_length = 50.0;
    cfg.n_points = 4096;
    let out = run(&cfg).unwrap();
    let exact = SpectralField::from_fn(4096, 50.0, 1.0, |x| soliton(x, 1.0, 1.0)).unwrap();
    out.final_field.max_abs_diff(&exact)
}

fn c9() -> Outcome {
    timed(Duration::from_secs(120), || {
        let e: Vec<f64> = [2e-4, 1e-4, 5e-5].iter().map(|&dt| kdv_error(dt)).collect();
        let ratios = [e[0] / e[1], e[1] / e[2]];
        let order = ratios.iter().all(|r| (r - ORDER_RATIO.0).abs() <= ORDER_RATIO.1);
        outcome(
            e[1] <= SOLITON_LINF && order,
            format!(
                "L-inf error at dt=1e-4: {:.2e}; halving ratios {:.3}, {:.3}",
                e[1], ratios[0], ratios[1]
            ),
        )
    })
}

fn c10() -> Outcome {
    timed(Duration::from_secs(15 * 60), || match compare_sweep(0.125, 1.0, &DEFAULT_SWEEP_EPS, &SweepTemplate::default()) {
        Ok(rows) => {
            let errs: Vec<f64> = rows.iter().map(|r| r.rel_error).collect();
            let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
            let last = *errs.last().unwrap();
            let table = rows
                .iter()
                .map(|r| {
                    format!(
                        "eps={}: numeric {:.3e}, predicted {:.3e}, rel {:.3}{}",
                        r.eps,
                        r.numeric_amplitude,
                        r.asymptotic_amplitude,
                        r.rel_error,
                        if r.steady { "" } else { " (drifting)" }
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            outcome(
                decreasing && last <= SWEEP_REL_ERROR,
                format!("{table}; decreasing = {decreasing}, smallest-eps error {last:.3} vs {SWEEP_REL_ERROR}"),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    })
}

fn c11() -> Outcome {
    let mut failures = Vec::new();

    // Root sets closed under conjugation and negation.
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * (1.0 + a.norm());
    'outer: for k in 1..=8u32 {
        for lambda in [-2.0, -0.3, 0.1, 0.25, 0.7, 3.0] {
            let roots = hierarchy_singulant_roots(k, lambda).unwrap();
            for r in &roots {
                for image in [r.value.conj(), -r.value] {
                    if !roots.iter().any(|s| close(s.value, image)) {
                        failures.push(format!("closure k={k} lambda={lambda}"));
                        break 'outer;
                    }
                }
            }
        }
    }

    // Reflection symmetry about x = ct.
    let m = ModelSpec::seventh_order(1.0, 1.0).unwrap();
    let (l, r) = remainder_case_a(&m, 0.1).unwrap();
    if [0.3, 1.0, 4.0].iter().any(|&d| l.log_envelope(-d) != r.log_envelope(d)) || l.amplitude != r.amplitude {
        failures.push("remainder reflection".into());
    }

    // Stokes jump matches the closed form for every S₀.
    let beta = solve_7kdv_singulant(0.125).unwrap()[0].value.im.abs();
    let chi = Complex64::new(0.0, beta);
    let lam = prefactor_case_b(0.125, 200).unwrap().value;
    let mu = gsw_core::asymptotics::mu_factor(0.125, chi);
    let expected = stokes_jump(0.3, chi, lam, mu);
    let closed_form = Complex64::new(0.0, -2.0 * PI) * chi * chi * lam / (mu * 0.09);
    for s0 in [
        StokesNormalization::Symmetric,
        StokesNormalization::OneSided,
        StokesNormalization::Custom(Complex64::new(-5.0, 2.0)),
    ] {
        let p = stokes_profile(1.0, 0.3, chi, lam, mu, s0, (-5.0, 5.0), 1001).unwrap();
        let realized = p.multiplier_values[1000] - p.multiplier_values[0];
        if (p.jump - closed_form).norm() > 1e-12 * closed_form.norm()
            || (realized - expected).norm() > 1e-6 * expected.norm()
        {
            failures.push(format!("stokes jump {s0:?}"));
        }
    }

    // Linear step is unitary.
    let f = SpectralField::from_fn(1024, 30.0, 0.0, |x| soliton(x, 0.0, 1.0) + 0.1 * (3.0 * x).sin()).unwrap();
    let d = Dispersion::for_model(&ModelSpec::seventh_order(0.125, 1.0).unwrap(), 0.4).unwrap();
    let worst_l2 = [1e-3, 0.1, 2.0]
        .iter()
        .map(|&dt| (linear_step(&f, &d, dt).l2_norm() - f.l2_norm()).abs() / f.l2_norm())
        .fold(0.0, f64::max);
    if worst_l2 >= L2_TOL {
        failures.push(format!("L2 drift {worst_l2:.1e}"));
    }

    // Mass over a full perturbed run.
    let mut cfg = SimulationConfig::new(ModelSpec::seventh_order(0.125, 1.0).unwrap(), Equation::Perturbed, 0.5);
    cfg.t_end = 3.0;
    let out = run(&cfg).unwrap();
    let m0 = out.snapshots[0].mass();
    let mass_drift = (out.final_field.mass() - m0).abs() / m0;
    if mass_drift >= MASS_TOL {
        failures.push(format!("mass drift {mass_drift:.1e}"));
    }

    // Smallest lattice term sits at N = |χ|/2h.
    let series = lattice_inner_terms(200).unwrap();
    for h in [0.3, 0.5] {
        for x in [-1.0, 1.0] {
            let a = LateOrderAnsatz::new(series.chi_x, series.scaled_terms[200], 1.0, 0.0, true).unwrap();
            let n = optimal_truncation(a.singulant_at(x).norm(), h).unwrap() as i64;
            let j = smallest_term_index(&series, h, 1.0, x).unwrap() as i64;
            if (j - n).abs() > TRUNCATION_SLACK {
                failures.push(format!("truncation h={h} x={x}: {j} vs {n}"));
            }
        }
    }

    // Hierarchy series stay finite at depth, a precondition of the above.
    if hierarchy_inner_terms(3, 1.0, Complex64::i(), 300).is_err() {
        failures.push("hierarchy depth".into());
    }

    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("all suites hold (L2 drift {worst_l2:.1e}, mass drift {mass_drift:.1e})")
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("all acceptance criteria pass");
    } else {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
