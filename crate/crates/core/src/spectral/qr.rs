use super::{sigma_min, Spectrum};
use crate::densemat::{Complex, MatrixC, MatrixR};
use crate::error::{Error, Result};

/// Iteration cap per deflation, as a multiple of the dimension.
const ITERATIONS_PER_DIM: usize = 100;

/// All `d` eigenvalues of `a`, repeated per algebraic multiplicity.
///
/// `residual_bound` is the largest backward error over the computed values,
/// `max_λ σ_min(A − λI)`: the norm of the smallest perturbation of `A` that
/// makes `λ` an exact eigenvalue.
pub fn eigenvalues(a: &MatrixR) -> Result<Spectrum> {
    let values = eigenvalue_list(a)?;
    let ac = MatrixC::from_real(a);
    let mut residual: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        // Conjugates share the same backward error for real input.
        if lambda.im < 0.0 && values[..k].iter().any(|z| *z == lambda.conj()) {
            continue;
        }
        residual = residual.max(sigma_min(&ac.shifted(lambda)));
    }
    Ok(Spectrum::new(values, residual))
}

/// Eigenvalues without the backward-error pass; for inner loops that only
/// need the values.
pub fn eigenvalue_list(a: &MatrixR) -> Result<Vec<Complex>> {
    let d = a.dim();
    let mut h = a.as_slice().to_vec();
    balance(d, &mut h);
    hessenberg(d, &mut h);
    hqr(d, &mut h)
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable. Exact in floating point.
fn balance(n: usize, a: &mut [f64]) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= g;
                }
                for j in 0..n {
                    a[j * n + i] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (orthogonal similarity).
fn hessenberg(n: usize, a: &mut [f64]) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..(n - 2) {
        let scale: f64 = ((k + 1)..n).map(|i| a[i * n + k].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            v[i] = a[i * n + k] / scale;
            norm2 += v[i] * v[i];
        }
        let alpha = -v[k + 1].signum() * norm2.sqrt();
        v[k + 1] -= alpha;
        let vnorm2: f64 = ((k + 1)..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vvᵀ/vᵀv) A
        for j in 0..n {
            let dot: f64 = ((k + 1)..n).map(|i| v[i] * a[i * n + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in (k + 1)..n {
                a[i * n + j] -= f * v[i];
            }
        }
        // A ← A (I − 2vvᵀ/vᵀv)
        for i in 0..n {
            let dot: f64 = ((k + 1)..n).map(|j| a[i * n + j] * v[j]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in (k + 1)..n {
                a[i * n + j] -= f * v[j];
            }
        }
        a[(k + 1) * n + k] = alpha * scale;
        for i in (k + 2)..n {
            a[i * n + k] = 0.0;
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

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
fn hqr(n: usize, a: &mut [f64]) -> Result<Vec<Complex>> {
    let at = |i: usize, j: usize| i * n + j;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let cap = ITERATIONS_PER_DIM * n;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[at(i, j)].abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let nu = nn as usize;
        let mut its = 0;
        loop {
            // Find the lowest negligible subdiagonal element.
            let mut l = nu;
            while l >= 1 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }

            let mut x = a[at(nu, nu)];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[at(nu - 1, nu - 1)];
            let mut w = a[at(nu, nu - 1)] * a[at(nu - 1, nu)];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                nn -= 2;
                break;
            }

            if its == cap {
                return Err(Error::NonConvergence { routine: "hessenberg QR", iterations: cap });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift to break cycles.
                t += x;
                for i in 0..=nu {
                    a[at(i, i)] -= x;
                }
                let s = a[at(nu, nu - 1)].abs() + a[at(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[at(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[at(m + 1, m)] + a[at(m, m + 1)];
                q = a[at(m + 1, m + 1)] - z - rr - ss;
                r = a[at(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nu {
                a[at(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[at(i, i - 3)] = 0.0;
                }
            }

            // Double-shift QR step on rows l..=nu and columns m..=nu.
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[at(k, k - 1)];
                    q = a[at(k + 1, k - 1)];
                    r = if k != nu - 1 { a[at(k + 2, k - 1)] } else { 0.0 };
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
                            a[at(k, k - 1)] = -a[at(k, k - 1)];
                        }
                    } else {
                        a[at(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[at(k, j)] + q * a[at(k + 1, j)];
                        if k != nu - 1 {
                            pp += r * a[at(k + 2, j)];
                            a[at(k + 2, j)] -= pp * z;
                        }
                        a[at(k + 1, j)] -= pp * y;
                        a[at(k, j)] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[at(i, k)] + y * a[at(i, k + 1)];
                        if k != nu - 1 {
                            pp += z * a[at(i, k + 2)];
                            a[at(i, k + 2)] -= pp * r;
                        }
                        a[at(i, k + 1)] -= pp * q;
                        a[at(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex::new(re, im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sorted(a: &MatrixR) -> Vec<Complex> {
        eigenvalues(a).unwrap().sorted()
    }

    #[test]
    fn diagonal() {
        let e = sorted(&MatrixR::from_diag(&[-1.0, 2.0]).unwrap());
        assert_eq!(e, vec![Complex::new(-1.0, 0.0), Complex::new(2.0, 0.0)]);
    }

    #[test]
    fn rotation_generator() {
        let e = sorted(&MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap());
        assert_relative_eq!(e[0].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(e[0].im, -1.0, epsilon = 1e-15);
        assert_relative_eq!(e[1].im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn quadratic_closed_form() {
        let e = sorted(&MatrixR::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
        let r = 33f64.sqrt();
        assert_relative_eq!(e[0].re, (5.0 - r) / 2.0, epsilon = 1e-13);
        assert_relative_eq!(e[1].re, (5.0 + r) / 2.0, epsilon = 1e-13);
        assert_eq!(e[0].im, 0.0);
    }

    #[test]
    fn companion_matrix_roots() {
        // Companion matrix of (z−1)(z−2)(z−3)(z+4)(z²+1).
        let roots = [1.0, 2.0, 3.0, -4.0];
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        let all: Vec<Complex> = roots
            .iter()
            .map(|&r| Complex::new(r, 0.0))
            .chain([Complex::new(0.0, 1.0), Complex::new(0.0, -1.0)])
            .collect();
        for r in &all {
            let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let n = all.len();
        let mut m = MatrixR::zeros(n);
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            m[(i, n - 1)] = -coeffs[i].re;
        }
        let spec = eigenvalues(&m).unwrap();
        assert!(spec.distance(&Spectrum::new(all, 0.0)) < 1e-10);
        assert!(spec.residual_bound < 1e-12);
    }

    #[test]
    fn triangular_and_nilpotent() {
        let n = MatrixR::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(eigenvalues(&n).unwrap().values, vec![Complex::new(0.0, 0.0); 2]);
        let t = MatrixR::from_rows(&[[-1.0, 1.0], [0.0, -2.0]]).unwrap();
        let e = sorted(&t);
        assert_eq!(e, vec![Complex::new(-2.0, 0.0), Complex::new(-1.0, 0.0)]);
    }

    #[test]
    fn one_by_one_and_zero() {
        let a = MatrixR::from_rows(&[[3.5]]).unwrap();
        assert_eq!(eigenvalues(&a).unwrap().values, vec![Complex::new(3.5, 0.0)]);
        let z = MatrixR::zeros(4);
        let s = eigenvalues(&z).unwrap();
        assert!(s.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn badly_scaled_matrix_benefits_from_balancing() {
        let a = MatrixR::from_rows(&[[1.0, 1e6, 0.0], [1e-6, 2.0, 1e6], [0.0, 1e-6, 3.0]]).unwrap();
        let spec = eigenvalues(&a).unwrap();
        let tr: f64 = spec.values.iter().map(|z| z.re).sum();
        assert_relative_eq!(tr, 6.0, epsilon = 1e-9);
        assert_relative_eq!(spec.product().re, a.det(), max_relative = 1e-8);
    }
}
