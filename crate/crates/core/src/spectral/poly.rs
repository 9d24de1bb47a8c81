use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Spectrum;
use crate::densemat::{Complex, MatrixR};
use crate::error::{Error, Result};
use crate::matching::match_multisets;

const MAX_SWEEPS: usize = 1000;
const STEP_TOL: f64 = 1e-12;

/// Characteristic polynomial `p(z) = det(A − zI) = Σ coeffs[k] z^k`.
///
/// The leading coefficient is `(−1)^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        horner(&self.complex_coeffs(), z)
    }

    fn complex_coeffs(&self) -> Vec<Complex> {
        self.coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect()
    }
}

fn horner(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Faddeev–LeVerrier recurrence.
///
/// With `M₀ = 0`, `M_k = A M_{k−1} + a_{d−k+1} I` and
/// `a_{d−k} = −tr(A M_k)/k`, the `a_k` are the coefficients of the monic
/// `det(zI − A)`; multiplying by `(−1)^d` gives `det(A − zI)`.
pub fn char_poly(a: &MatrixR) -> CharPoly {
    let d = a.dim();
    let mut monic = vec![0.0; d + 1];
    monic[d] = 1.0;
    let mut m = MatrixR::zeros(d);
    for k in 1..=d {
        m = (a * &m).shift(monic[d - k + 1]);
        monic[d - k] = -(a * &m).trace() / k as f64;
    }
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    CharPoly { coeffs: monic.into_iter().map(|c| sign * c).collect() }
}

/// Roots by Aberth–Ehrlich simultaneous iteration.
///
/// A root is frozen once its correction falls below `1e−12·(1+|z|)`, or once
/// `|p(z)|` is at the rounding level of the Horner evaluation (the only way
/// clustered roots ever settle).
pub fn poly_roots(p: &CharPoly) -> Result<Spectrum> {
    let d = p.degree();
    let lead = *p.coeffs.last().ok_or(Error::ZeroLeadingCoefficient)?;
    if lead == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if d == 0 {
        return Ok(Spectrum::new(Vec::new(), 0.0));
    }
    let coeffs: Vec<Complex> = p.coeffs.iter().map(|&c| Complex::new(c / lead, 0.0)).collect();
    let deriv: Vec<Complex> =
        coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();

    let mut z = initial_guesses(&coeffs);
    let mut done = vec![false; d];
    let mut error_est = vec![0.0_f64; d];

    for _ in 0..MAX_SWEEPS {
        if done.iter().all(|&f| f) {
            let bound = error_est.iter().fold(0.0, |m: f64, e| m.max(*e));
            return Ok(Spectrum::new(z, bound));
        }
        for k in 0..d {
            if done[k] {
                continue;
            }
            let pz = horner(&coeffs, z[k]);
            let noise = rounding_level(&abs_coeffs, z[k].norm());
            if pz.norm() <= noise {
                done[k] = true;
                continue;
            }
            let dpz = horner(&deriv, z[k]);
            let ratio = pz / dpz;
            let repulsion: Complex = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Collided with a neighbour; nudge off it and retry next sweep.
                let nudge = Complex::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += nudge;
                continue;
            }
            z[k] -= step;
            error_est[k] = step.norm() * d as f64;
            if step.norm() < STEP_TOL * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
    }
    Err(Error::NonConvergence { routine: "aberth", iterations: MAX_SWEEPS })
}

/// Bound on the rounding error of a Horner evaluation at `|z| = r`.
fn rounding_level(abs_coeffs: &[f64], r: f64) -> f64 {
    let d = abs_coeffs.len() - 1;
    let mag = abs_coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
    4.0 * (2 * d + 1) as f64 * f64::EPSILON * mag
}

/// Starting points on a circle about the root centroid, rotated off the real
/// axis so conjugate-symmetric polynomials do not trap guesses on it.
fn initial_guesses(monic: &[Complex]) -> Vec<Complex> {
    let d = monic.len() - 1;
    let center = -monic[d - 1] / d as f64;
    let at_center = horner(monic, center).norm();
    let mut radius = at_center.powf(1.0 / d as f64);
    if !(radius.is_finite() && radius > 0.0) {
        radius = 1e-3 * (1.0 + center.norm());
    }
    (0..d)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / d as f64 + 0.4;
            center + Complex::from_polar(radius, angle)
        })
        .collect()
}

/// Monic expansion `(z − λ₁)⋯(z − λ_d)`, lowest degree first.
pub fn poly_from_roots_complex(roots: &[Complex]) -> Vec<Complex> {
    let mut coeffs = vec![Complex::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Real characteristic polynomial with the given roots, in the
/// `det(A − zI)` sign convention.
///
/// Fails with `ConjugacyViolation` when the roots cannot be paired with their
/// own conjugates to within `residual_bound + 1e−8·(1 + max|λ|)`.
pub fn poly_from_roots(roots: &Spectrum) -> Result<CharPoly> {
    let d = roots.len();
    let conj: Vec<Complex> = roots.values.iter().map(|z| z.conj()).collect();
    let (_, mismatch) = match_multisets(&roots.values, &conj);
    let tol = roots.residual_bound + 1e-8 * (1.0 + roots.max_modulus());
    if mismatch > tol {
        return Err(Error::ConjugacyViolation { mismatch });
    }
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    let coeffs = poly_from_roots_complex(&roots.values).into_iter().map(|c| sign * c.re).collect();
    Ok(CharPoly { coeffs })
}
