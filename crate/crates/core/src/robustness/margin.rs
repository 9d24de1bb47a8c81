//! Distance from a hyperbolic matrix to the non-hyperbolic ones.
//!
//! A matrix `A + E` has the eigenvalue `iω` exactly when `A − iωI` is within
//! `‖E‖₂` of singular, so the distance is `min_ω g(ω)` with
//! `g(ω) = σ_min(A − iωI)`. For real `A`, `g` is even, and it is 1-Lipschitz
//! because singular values move by at most the size of the perturbation.

use serde::{Deserialize, Serialize};

use crate::densemat::{Complex, MatrixC, MatrixR};
use crate::error::{Error, Result};
use crate::inertia::verdict_of;
use crate::spectral::{eigenvalues, sigma_min};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginResult {
    /// Heuristic lower bound, `upper − tol`: exact only if the scan found the
    /// basin of the global minimum.
    pub lower: f64,
    /// Rigorous upper bound: `σ_min(A − i·omega_star·I)`.
    pub upper: f64,
    pub omega_star: f64,
    /// Number of `σ_min` evaluations.
    pub iterations: usize,
    /// `false` when the input was not classified hyperbolic; all bounds are 0.
    pub hyperbolic: bool,
}

impl MarginResult {
    fn non_hyperbolic() -> Self {
        Self { lower: 0.0, upper: 0.0, omega_star: 0.0, iterations: 0, hyperbolic: false }
    }
}

/// Number of equispaced scan samples on `[0, ‖A‖₂]`.
pub fn scan_points(d: usize) -> usize {
    4 * d + 17
}

struct Objective<'a> {
    a: &'a MatrixC,
    evaluations: usize,
}

impl Objective<'_> {
    fn eval(&mut self, omega: f64) -> f64 {
        self.evaluations += 1;
        sigma_min(&self.a.shifted(Complex::new(0.0, omega)))
    }

    /// Golden-section search on `[lo, hi]` down to width `tol`. Returns the
    /// best point seen, seeded with an already evaluated `(x0, g0)`.
    fn golden(&mut self, mut lo: f64, mut hi: f64, tol: f64, seed: (f64, f64)) -> (f64, f64) {
        let mut best = seed;
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.eval(x1);
        let mut f2 = self.eval(x2);
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.1 {
                best = (x, f);
            }
        }
        while hi - lo > tol {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.eval(x1);
                if f1 < best.1 {
                    best = (x1, f1);
                }
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.eval(x2);
                if f2 < best.1 {
                    best = (x2, f2);
                }
            }
        }
        best
    }
}

/// Bracketed distance to non-hyperbolicity in the spectral norm.
///
/// Scans `g` on `4d + 17` equispaced frequencies over `[0, ‖A‖₂]`, adds the
/// frequencies `|Im λ|` of the eigenvalues (where `g ≤ |Re λ|`), and refines
/// by golden-section search every local minimum of those samples that could
/// still beat the incumbent given the Lipschitz bound. Non-hyperbolic input
/// yields all-zero bounds with `hyperbolic = false`.
pub fn margin(a: &MatrixR, tau: f64, tol: f64) -> Result<MarginResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("margin tolerance must be > 0, got {tol}")));
    }
    let spec = eigenvalues(a)?;
    if !verdict_of(&spec, tau).is_hyperbolic() {
        return Ok(MarginResult::non_hyperbolic());
    }

    let ac = MatrixC::from_real(a);
    let mut g = Objective { a: &ac, evaluations: 0 };
    let norm = a.op_norm2();
    let n = scan_points(a.dim());
    let h = norm / (n - 1) as f64;

    let mut samples: Vec<(f64, f64)> = (0..n).map(|k| k as f64 * h).map(|w| (w, g.eval(w))).collect();
    for z in &spec.values {
        if z.im > 0.0 || (z.im == 0.0 && z.re != 0.0) {
            let w = z.im.abs();
            samples.push((w, g.eval(w)));
        }
    }
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    samples.dedup_by(|x, y| x.0 == y.0);

    let mut best = samples.iter().copied().fold((0.0, f64::INFINITY), |b, s| if s.1 < b.1 { s } else { b });

    // g is even, so the left neighbour of ω = 0 mirrors the right one; past
    // the end of the scan, extend by one step.
    let m = samples.len();
    let mut brackets = Vec::new();
    for k in 0..m {
        let (w, gw) = samples[k];
        let (lw, lg) = match k {
            0 if m > 1 => (-samples[1].0, samples[1].1),
            0 => (-h, gw),
            _ => samples[k - 1],
        };
        let (rw, rg) = if k + 1 < m { samples[k + 1] } else { (w + h.max(tol), f64::INFINITY) };
        if gw <= lg && gw <= rg {
            let lo = lw.max(0.0);
            // Lipschitz: nothing in [lo, rw] lies below gw − max distance to w.
            let floor = gw - (w - lo).max(rw - w);
            brackets.push((floor, lo, rw, (w, gw)));
        }
    }
    brackets.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (floor, lo, hi, seed) in brackets {
        if floor >= best.1 - tol {
            continue;
        }
        let cand = g.golden(lo, hi, tol, seed);
        if cand.1 < best.1 {
            best = cand;
        }
    }

    let (omega_star, upper) = best;
    Ok(MarginResult {
        lower: (upper - tol).max(0.0),
        upper,
        omega_star,
        iterations: g.evaluations,
        hyperbolic: true,
    })
}

/// `σ_min(A − iωI)`.
pub fn distance_at(a: &MatrixR, omega: f64) -> f64 {
    sigma_min(&MatrixC::from_real(a).shifted(Complex::new(0.0, omega)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TAU: f64 = 1e-9;

    #[test]
    fn normal_matrix_margin_is_min_real_part() {
        let a = MatrixR::from_diag(&[-1.0, 2.0]).unwrap();
        let m = margin(&a, TAU, 1e-6).unwrap();
        assert!(m.hyperbolic);
        assert_relative_eq!(m.upper, 1.0, epsilon = 1e-6);
        // g(ω) = √(1 + ω²) is flat at 0, so ω* is only pinned to ~√tol.
        assert!(m.omega_star.abs() < 2e-3);
        assert!(m.lower <= m.upper && m.upper - m.lower <= 1e-6 + 1e-15);
    }

    #[test]
    fn rotation_block_margin() {
        // Eigenvalues −0.3 ± 2i in a normal block: distance 0.3 at ω = 2.
        let a = MatrixR::from_rows(&[[-0.3, 2.0], [-2.0, -0.3]]).unwrap();
        let m = margin(&a, TAU, 1e-7).unwrap();
        assert_relative_eq!(m.upper, 0.3, epsilon = 1e-7);
        assert_relative_eq!(m.omega_star, 2.0, epsilon = 1e-3);
    }

    #[test]
    fn non_hyperbolic_is_zero() {
        let rot = MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let m = margin(&rot, TAU, 1e-6).unwrap();
        assert!(!m.hyperbolic);
        assert_eq!((m.lower, m.upper), (0.0, 0.0));
    }

    #[test]
    fn jordan_like_block_is_fragile() {
        let a = MatrixR::from_rows(&[[-1.0, 100.0], [0.0, -1.0]]).unwrap();
        let m = margin(&a, TAU, 1e-8).unwrap();
        assert!(m.upper < 0.02);
        assert!(m.upper < 1.0);
        assert_relative_eq!(distance_at(&a, m.omega_star), m.upper, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let a = MatrixR::from_diag(&[-1.0, 2.0]).unwrap();
        assert!(margin(&a, TAU, 0.0).is_err());
    }
}
