use gsw_core::inner::*;
use gsw_core::singulant::solve_7kdv_singulant;
use gsw_core::{Complex64, Error};

#[test]
fn case_a_pair_is_conjugate() {
    let (l1, l2) = prefactor_case_a(1.0, 600).unwrap();
    assert!((l2.value - l1.value.conj()).norm() / l1.value.norm() < 1e-6);
    assert_eq!(l1.history.len(), l2.history.len());
    // a value of λ without the sixth-root-of-unity identity
    let (m1, m2) = prefactor_case_a(0.5, 600).unwrap();
    assert!((m2.value - m1.value.conj()).norm() / m1.value.norm() < 1e-6);
}

#[test]
fn case_a_settles() {
    let (l1, _) = prefactor_case_a(1.0, 2000).unwrap();
    let a = l1.at(600).unwrap();
    let b = l1.value;
    assert!((a - b).norm() / b.norm() < 5e-3);
}

#[test]
fn case_b_real_and_settling() {
    let e = prefactor_case_b(0.125, 600).unwrap();
    assert!(e.value.im.abs() < 1e-9);
    let end = e.value.re;
    let mut last = f64::INFINITY;
    for j in 100..600 {
        let d = (e.at(j).unwrap().re - end).abs();
        assert!(d < last, "j={j}");
        last = d;
    }
}

#[test]
fn lattice_plateau() {
    let e = prefactor_lattice(200).unwrap();
    assert_eq!(e.value.im, 0.0);
    let a = e.at(150).unwrap().re;
    assert!((a - e.value.re).abs() / e.value.re.abs() < 0.01);
}

#[test]
fn fifth_order_constant() {
    // Independently known Stokes constant of the singularly perturbed
    // fifth-order KdV, about 19.97.
    let s = hierarchy_inner_terms(1, 1.0, Complex64::i(), 2000).unwrap();
    let e = single_term_estimate(&s);
    assert!((e.value.re - 19.97).abs() / 19.97 < 2e-3);
    let r = e.richardson().unwrap();
    assert!((r.re - 19.97).abs() / 19.97 < 5e-4);
}

#[test]
fn seed_perturbation_is_well_conditioned() {
    let delta = 1e-9;
    let beta = solve_7kdv_singulant(0.125).unwrap()[0].value.im.abs();
    let chi = Complex64::new(0.0, beta);
    let base = hierarchy_inner_terms_seeded(2, 0.125, chi, 600, V0).unwrap();
    let pert = hierarchy_inner_terms_seeded(2, 0.125, chi, 600, V0 * (1.0 + delta)).unwrap();
    let (a, b) = (base.scaled_terms[600], pert.scaled_terms[600]);
    let rel = (a - b).norm() / a.norm();
    assert!(rel < 1e3 * delta, "relative change {rel:e}");

    let lb = lattice_inner_terms_seeded(200, V0).unwrap().scaled_terms[200];
    let lp = lattice_inner_terms_seeded(200, V0 * (1.0 + delta)).unwrap().scaled_terms[200];
    assert!((lb - lp).norm() / lb.norm() < 1e3 * delta);
}

#[test]
fn terms_stay_real_after_unscaling() {
    let alpha = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let s = kdv7_inner_terms(1.0, alpha, 600).unwrap();
    for (j, t) in s.scaled_terms.iter().enumerate() {
        let phase = alpha.conj().powu(2 * j as u32 + 2);
        let w = t * phase;
        assert!(w.im.abs() <= 1e-10 * w.norm(), "j={j}");
    }
    let l = lattice_inner_terms(200).unwrap();
    assert!(l.scaled_terms.iter().all(|t| t.im == 0.0));
}

#[test]
fn depth_without_overflow() {
    let alpha = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let s = kdv7_inner_terms(1.0, alpha, 600).unwrap();
    assert_eq!(s.scaled_terms.len(), 601);
    assert!(s.scaled_terms.iter().all(|t| t.re.is_finite() && t.im.is_finite()));
    assert!(s.raw_log_magnitudes[600] > 700.0_f64.ln() * 100.0);
    let ratio = (s.scaled_terms[600] / s.scaled_terms[599]).norm();
    assert!(ratio.is_finite() && ratio > 0.0);

    let l = lattice_inner_terms(200).unwrap();
    let ratio = (l.scaled_terms[200] / l.scaled_terms[199]).norm();
    assert!((ratio - 1.0).abs() < 1e-3);
}

#[test]
fn wrong_root_overflows_with_index() {
    // Scaling against the larger imaginary root makes t_j grow geometrically.
    let big = solve_7kdv_singulant(0.125).unwrap()[2].value;
    match kdv7_inner_terms(0.125, big, 5000) {
        Err(Error::Overflow { j }) => assert!(j > 10 && j < 5000),
        other => panic!("expected overflow, got {other:?}"),
    }
}
