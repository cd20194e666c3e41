//! The scaled recurrences against the raw recurrences in exact rational
//! arithmetic.
//!
//! Raw inner equations, coefficient of `η^{−(2m+5)}`:
//!
//! hierarchy: `Σ_{s=0}^{k} c_s P(2m−2s+2, 2s+3) v_{m−s} + 3(2m+4) Σ_r v_r v_{m−r} = 0`
//! with `P(n, d) = n(n+1)…(n+d−1)`, `c_0 = 1`, `c_s = 1` for `s < k`, `c_k = λ`;
//!
//! lattice: `Σ_{r=1}^{m+1} C(2m+4, 2r+1)(4^r−1) v_{m+1−r}
//!           + 3 Σ_{l=0}^{m} Σ_{r=0}^{l} C(2l+2, 2r+1) v_{m−l} v_{l−r} = 0`.

use gsw_core::inner::{hierarchy_inner_terms, kdv7_inner_terms, lattice_inner_terms};
use gsw_core::singulant::solve_7kdv_singulant;
use gsw_core::Complex64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rising(n: i64, d: i64) -> BigRational {
    (0..d).fold(int(1), |acc, i| acc * int(n + i))
}

fn binom(n: i64, k: i64) -> BigRational {
    let mut r = int(1);
    for i in 0..k {
        r = r * int(n - i) / int(i + 1);
    }
    r
}

fn hierarchy_exact(k: usize, lambda: &BigRational, j_max: usize) -> Vec<BigRational> {
    let mut v = vec![int(-2)];
    for m in 1..=j_max as i64 {
        let mut num = BigRational::zero();
        for s in 1..=k as i64 {
            if s > m {
                break;
            }
            let c = if s == k as i64 { lambda.clone() } else { BigRational::one() };
            num -= c * rising(2 * m - 2 * s + 2, 2 * s + 3) * &v[(m - s) as usize];
        }
        let mut conv = BigRational::zero();
        for r in 1..m {
            conv += &v[r as usize] * &v[(m - r) as usize];
        }
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
        let coef = int(3) * binom(2 * m + 4, 3) + int(3) * int(2) * &v[0] + int(3) * int(2 * m + 2) * &v[0];
        v.push(-rest / coef);
    }
    v
}

fn rel(a: Complex64, b: &BigRational) -> f64 {
    let b = b.to_f64().unwrap();
    (a - b).norm() / b.abs()
}

#[test]
fn seventh_order_lambda_one() {
    let alpha = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let s = kdv7_inner_terms(1.0, alpha, 15).unwrap();
    let exact = hierarchy_exact(2, &int(1), 15);
    assert_eq!(exact[1], int(30));
    for (j, e) in exact.iter().enumerate() {
        let r = rel(s.raw_term(j).unwrap(), e);
        assert!(r < 1e-12, "j={j} rel={r:e}");
    }
}

#[test]
fn seventh_order_lambda_one_eighth() {
    let beta = solve_7kdv_singulant(0.125).unwrap()[0].value.im.abs();
    let s = kdv7_inner_terms(0.125, Complex64::new(0.0, beta), 15).unwrap();
    let exact = hierarchy_exact(2, &(int(1) / int(8)), 15);
    for (j, e) in exact.iter().enumerate() {
        let r = rel(s.raw_term(j).unwrap(), e);
        assert!(r < 1e-12, "j={j} rel={r:e}");
    }
}

#[test]
fn lattice_exact_terms() {
    let s = lattice_inner_terms(15).unwrap();
    let exact = lattice_exact(15);
    assert_eq!(exact[1], int(11) / int(2));
    assert_eq!(exact[2], int(-217) / int(8));
    for (j, e) in exact.iter().enumerate() {
        let r = rel(s.raw_term(j).unwrap(), e);
        assert!(r < 1e-12, "j={j} rel={r:e}");
    }
}

#[test]
fn other_hierarchy_orders() {
    for k in [1usize, 3, 4] {
        let s = hierarchy_inner_terms(k as u32, 1.0, Complex64::i(), 12).unwrap();
        let exact = hierarchy_exact(k, &int(1), 12);
        for (j, e) in exact.iter().enumerate() {
            let r = rel(s.raw_term(j).unwrap(), e);
            assert!(r < 1e-12, "k={k} j={j} rel={r:e}");
        }
    }
}
