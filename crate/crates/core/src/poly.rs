//! Real-coefficient polynomial roots via companion-matrix eigenvalues.
//!
//! The companion matrix is already upper Hessenberg, so it is balanced and
//! handed straight to a shifted double-step QR iteration. Each eigenvalue is
//! then refined with a few Newton steps against the original polynomial.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluates `coeffs[0] + coeffs[1] z + ...` by Horner's rule.
pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn eval_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of the derivative, ascending order.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// All complex roots of a polynomial given by ascending coefficients.
///
/// Trailing zero coefficients (vanishing leading terms) are dropped. The
/// result has one entry per root counted with multiplicity.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.is_empty() {
        return Ok(Vec::new());
    }
    let mut degree = coeffs.len() - 1;
    while degree > 0 && coeffs[degree] == 0.0 {
        degree -= 1;
    }
    let p = &coeffs[..=degree];
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = p[degree];
    if degree == 1 {
        return Ok(vec![Complex64::new(-p[0] / lead, 0.0)]);
    }

    let n = degree;
    let mut a = vec![vec![0.0; n]; n];
    for j in 0..n {
        a[0][j] = -p[n - 1 - j] / lead;
    }
    for i in 1..n {
        a[i][i - 1] = 1.0;
    }
    balance(&mut a);
    let mut found = hqr(&mut a).ok_or(Error::EigenvalueFailure { degree: n })?;
    for z in found.iter_mut() {
        *z = polish(p, *z);
    }
    Ok(found)
}

/// Newton refinement that only accepts steps which shrink the residual.
pub fn polish(p: &[f64], mut z: Complex64) -> Complex64 {
    let dp = derivative(p);
    let mut res = eval(p, z).norm();
    for _ in 0..4 {
        let d = eval(&dp, z);
        if d.norm() == 0.0 || res == 0.0 {
            break;
        }
        let next = z - eval(p, z) / d;
        let next_res = eval(p, next).norm();
        if !(next_res < res) {
            break;
        }
        z = next;
        res = next_res;
    }
    z
}

const RADIX: f64 = 2.0;

// Diagonal similarity scaling by powers of two so that row and column norms
// are comparable. Improves eigenvalue accuracy when coefficients span many
// orders of magnitude.
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for (j, row) in a.iter().enumerate() {
                if j != i {
                    c += row[i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for v in a[i].iter_mut() {
                        *v *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

// Eigenvalues of a real upper Hessenberg matrix by the Francis double-shift
// QR algorithm. Returns None if some eigenvalue needs more than 30n sweeps.
#[allow(clippy::many_single_char_names, clippy::needless_range_loop)]
fn hqr(a: &mut [Vec<f64>]) -> Option<Vec<Complex64>> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let max_its = 30 * n.max(1);
    while nn >= 0 {
        let mut its = 0;
        loop {
            let u = nn as usize;
            let mut l = u;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[u][u];
            if l == u {
                wr[u] = x + t;
                wi[u] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[u - 1][u - 1];
            let mut w = a[u][u - 1] * a[u - 1][u];
            if l == u - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[u - 1] = x + z;
                    wr[u] = wr[u - 1];
                    if z != 0.0 {
                        wr[u] = x - w / z;
                    }
                    wi[u - 1] = 0.0;
                    wi[u] = 0.0;
                } else {
                    wr[u - 1] = x + p;
                    wr[u] = x + p;
                    wi[u - 1] = -z;
                    wi[u] = z;
                }
                nn -= 2;
                break;
            }
            if its >= max_its {
                return None;
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=u {
                    a[i][i] -= x;
                }
                let s = a[u][u - 1].abs() + a[u - 1][u - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r): (f64, f64, f64);
            let mut m = u - 2;
            loop {
                let z = a[m][m];
                r = x - z;
                let s = y - z;
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - r - s;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let uu = a[m][m - 1].abs() * (q.abs() + r.abs());
                let vv = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if uu + vv == vv {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=u {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < u {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k + 1 != u {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=u {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k + 1 != u {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if u < k + 3 { u } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k + 1 != u {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Some(
        wr.into_iter()
            .zip(wi)
            .map(|(re, im)| Complex64::new(re, im))
            .collect(),
    )
}
