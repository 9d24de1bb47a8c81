use crate::densemat::{Complex, MatrixC};
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi.
pub fn hermitian_eigs(m: &MatrixC) -> Result<Vec<f64>> {
    let d = m.dim();
    let scale = m.max_abs().max(1.0);
    let mut asymmetry: f64 = 0.0;
    for i in 0..d {
        for j in i..d {
            asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if asymmetry > SYMMETRY_TOL * scale {
        return Err(Error::NotHermitian { asymmetry });
    }

    let mut a: Vec<Complex> = m.as_slice().to_vec();
    // Enforce exact symmetry; the check above bounds what this discards.
    for i in 0..d {
        a[i * d + i] = Complex::new(a[i * d + i].re, 0.0);
        for j in (i + 1)..d {
            let avg = (a[i * d + j] + a[j * d + i].conj()) * 0.5;
            a[i * d + j] = avg;
            a[j * d + i] = avg.conj();
        }
    }
    jacobi_in_place(d, &mut a);

    let mut eigs: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

fn off_diagonal_mass(d: usize, a: &[Complex]) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix stored row-major. Each rotation first
/// removes the phase of `a[p][q]`, then applies a real Jacobi rotation.
fn jacobi_in_place(d: usize, a: &mut [Complex]) {
    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return;
    }
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(d, a) <= OFF_DIAGONAL_TOL * total {
            return;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let e = apq / b;
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                let theta = (aqq - app) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ec = e.conj();

                // Columns: A ← A U with U = [[c, s], [−s ē, c ē]].
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = akp * c - akq * ec * s;
                    a[k * d + q] = akp * s + akq * ec * c;
                }
                // Rows: A ← Uᴴ A.
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = apk * c - aqk * e * s;
                    a[q * d + k] = apk * s + aqk * e * c;
                }
                a[p * d + q] = Complex::new(0.0, 0.0);
                a[q * d + p] = Complex::new(0.0, 0.0);
                a[p * d + p] = Complex::new(app - t * b, 0.0);
                a[q * d + q] = Complex::new(aqq + t * b, 0.0);
            }
        }
    }
}

/// Smallest singular value of `m`.
///
/// Computed from the Hermitian dilation `[[0, M], [Mᴴ, 0]]`, whose eigenvalues
/// are `±σᵢ`. This keeps absolute accuracy near `ε‖M‖` even when `σ_min` is
/// tiny, which the normal-equations form `MᴴM` cannot.
pub fn sigma_min(m: &MatrixC) -> f64 {
    let d = m.dim();
    let n = 2 * d;
    let mut big = MatrixC::zeros(n);
    for i in 0..d {
        for j in 0..d {
            big[(i, d + j)] = m[(i, j)];
            big[(d + j, i)] = m[(i, j)].conj();
        }
    }
    let eigs = hermitian_eigs(&big).expect("dilation is Hermitian by construction");
    eigs.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs())).max(0.0)
}
