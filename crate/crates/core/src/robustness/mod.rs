//! Robustness of hyperbolicity under perturbation.
//!
//! * [`margin`]: how far `A` is from the nearest non-hyperbolic matrix.
//! * [`hyperbolize`]: a hyperbolic matrix `A + εI` arbitrarily close to `A`.
//! * [`perturb_campaign`]: seeded random perturbations and inertia flips.
//! * [`continuity_check`] / [`vieta_check`]: the eigenvalue facts that make
//!   the stable dimension locally constant.

mod campaign;
pub mod ensemble;
mod margin;

pub use campaign::{perturb_campaign, run_campaign, sample_perturbation, CampaignReport, FlipWitness};
pub use ensemble::generate;
pub use margin::{distance_at, margin, scan_points, MarginResult};

use serde::{Deserialize, Serialize};

use crate::densemat::MatrixR;
use crate::error::{Error, Result};
use crate::inertia::verdict_of;
use crate::matching::match_multisets;
use crate::spectral::eigenvalues;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolizeResult {
    pub epsilon: f64,
    pub shifted: MatrixR,
    /// Smallest `|Re λ|` among eigenvalues outside the band, `∞` if none.
    pub delta: f64,
}

/// Shift `A` by `ε I` with `ε = min(ε_cap, δ/2)`.
///
/// Every eigenvalue moves right by `ε`: those in the band `|Re λ| ≤ τ` land
/// at `Re > τ`, and since `ε < δ` none of the others changes sign.
pub fn hyperbolize(a: &MatrixR, tau: f64, eps_cap: f64) -> Result<HyperbolizeResult> {
    if !(eps_cap.is_finite() && eps_cap > 0.0) {
        return Err(Error::InvalidArgument(format!("shift cap must be > 0, got {eps_cap}")));
    }
    let spec = eigenvalues(a)?;
    let delta = spec
        .values
        .iter()
        .map(|z| z.re.abs())
        .filter(|&r| r > tau)
        .fold(f64::INFINITY, f64::min);
    let epsilon = eps_cap.min(delta / 2.0);
    if epsilon <= tau {
        return Err(Error::ShiftTooSmall { epsilon, tau });
    }
    let shifted = a.shift(epsilon);
    // The analytic argument holds for exact eigenvalues; confirm numerically.
    if !verdict_of(&eigenvalues(&shifted)?, tau).is_hyperbolic() {
        return Err(Error::ShiftTooSmall { epsilon, tau });
    }
    Ok(HyperbolizeResult { epsilon, shifted, delta })
}

/// `|Π λ − det A| / (1 + |det A|)`.
pub fn vieta_check(a: &MatrixR) -> Result<f64> {
    let det = a.det();
    let prod = eigenvalues(a)?.product();
    Ok((prod - det).norm() / (1.0 + det.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    /// `pairings[n][i] = j`: eigenvalue `i` of `A_n` is matched to eigenvalue
    /// `j` of `H`.
    pub pairings: Vec<Vec<usize>>,
    pub max_mismatch: Vec<f64>,
    /// `‖A_n − H‖₂`
    pub distances: Vec<f64>,
    /// Largest `|λ|` over the spectrum of each `A_n`.
    pub max_modulus: Vec<f64>,
    /// Whether the mismatch is eventually non-increasing: over the second half
    /// of the sequence, cut further to the suffix on which the distances are
    /// non-increasing.
    pub monotone_tail: bool,
}

/// Matches the spectrum of every `A_n` to that of `H` under the optimal
/// permutation and reports how far apart the matched eigenvalues are.
pub fn continuity_check(h: &MatrixR, sequence: &[MatrixR]) -> Result<ContinuityReport> {
    if sequence.is_empty() {
        return Err(Error::InvalidArgument("sequence must be nonempty".into()));
    }
    if let Some(bad) = sequence.iter().find(|m| m.dim() != h.dim()) {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: bad.dim() });
    }
    let base = eigenvalues(h)?;
    let slack = 1e-12 * (1.0 + base.max_modulus());

    let mut report = ContinuityReport {
        pairings: Vec::with_capacity(sequence.len()),
        max_mismatch: Vec::with_capacity(sequence.len()),
        distances: Vec::with_capacity(sequence.len()),
        max_modulus: Vec::with_capacity(sequence.len()),
        monotone_tail: true,
    };
    for a in sequence {
        let spec = eigenvalues(a)?;
        let (perm, worst) = match_multisets(&spec.values, &base.values);
        report.pairings.push(perm);
        report.max_mismatch.push(worst);
        report.distances.push((a - h).op_norm2());
        report.max_modulus.push(spec.max_modulus());
    }

    let n = sequence.len();
    let mut start = n - 1;
    while start > n / 2 && report.distances[start - 1] >= report.distances[start] {
        start -= 1;
    }
    report.monotone_tail =
        report.max_mismatch[start..].windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::{classify, inertia_of};
    use approx::assert_relative_eq;

    const TAU: f64 = 1e-9;

    fn counts(a: &MatrixR) -> (usize, usize, usize) {
        let i = inertia_of(&eigenvalues(a).unwrap(), TAU);
        (i.s, i.u, i.c)
    }

    #[test]
    fn hyperbolize_rotation() {
        let rot = MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let r = hyperbolize(&rot, TAU, 0.5).unwrap();
        assert_eq!(r.epsilon, 0.5);
        assert!(r.delta.is_infinite());
        let spec = eigenvalues(&r.shifted).unwrap();
        for z in &spec.values {
            assert_relative_eq!(z.re, 0.5, epsilon = 1e-14);
            assert_relative_eq!(z.im.abs(), 1.0, epsilon = 1e-14);
        }
        assert_eq!(counts(&r.shifted), (0, 2, 0));
    }

    #[test]
    fn hyperbolize_diagonal_cases() {
        let r = hyperbolize(&MatrixR::from_diag(&[0.0, -3.0]).unwrap(), TAU, 10.0).unwrap();
        assert_eq!((r.delta, r.epsilon), (3.0, 1.5));
        assert_eq!(r.shifted, MatrixR::from_diag(&[1.5, -1.5]).unwrap());
        assert_eq!(counts(&r.shifted), (1, 1, 0));

        let r = hyperbolize(&MatrixR::from_diag(&[-1.0, 2.0]).unwrap(), TAU, 10.0).unwrap();
        assert_eq!((r.delta, r.epsilon), (1.0, 0.5));
        assert_eq!(r.shifted, MatrixR::from_diag(&[-0.5, 2.5]).unwrap());
        assert_eq!(counts(&r.shifted), (1, 1, 0));
    }

    #[test]
    fn hyperbolize_rejects_tiny_shift() {
        let a = MatrixR::from_diag(&[0.0, 1.0]).unwrap();
        assert!(matches!(hyperbolize(&a, 1e-3, 1e-4), Err(Error::ShiftTooSmall { .. })));
        assert!(hyperbolize(&a, TAU, 0.0).is_err());
    }

    #[test]
    fn hyperbolize_nilpotent_and_zero() {
        for a in [MatrixR::zeros(3), MatrixR::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap()] {
            let r = hyperbolize(&a, TAU, 1e-6).unwrap();
            assert_eq!(r.epsilon, 1e-6);
            assert!(classify(&r.shifted, TAU).unwrap().is_hyperbolic());
        }
    }

    #[test]
    fn vieta_examples() {
        assert!(vieta_check(&MatrixR::from_diag(&[-1.0, 2.0, 5.0]).unwrap()).unwrap() <= 1e-10);
        assert!(vieta_check(&MatrixR::identity(5)).unwrap() <= 1e-12);
    }

    #[test]
    fn continuity_of_shifted_sequence() {
        let h = MatrixR::from_diag(&[-1.0, 2.0]).unwrap();
        let seq: Vec<MatrixR> = (1..=20).map(|n| h.shift(1.0 / n as f64)).collect();
        let r = continuity_check(&h, &seq).unwrap();
        for (n, m) in r.max_mismatch.iter().enumerate() {
            assert_relative_eq!(*m, 1.0 / (n + 1) as f64, epsilon = 1e-15);
        }
        assert!(r.monotone_tail);
        assert!(r.pairings.iter().all(|p| p == &vec![0, 1] || p == &vec![1, 0]));
    }

    #[test]
    fn continuity_of_constant_sequence() {
        let h = MatrixR::from_rows(&[[0.5, 1.0], [-2.0, -1.0]]).unwrap();
        let r = continuity_check(&h, &vec![h.clone(); 5]).unwrap();
        assert!(r.max_mismatch.iter().all(|&m| m == 0.0));
        assert!(r.distances.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn continuity_rejects_bad_input() {
        let h = MatrixR::identity(2);
        assert!(matches!(
            continuity_check(&h, &[MatrixR::identity(3)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(continuity_check(&h, &[]).is_err());
    }

    #[test]
    fn pairing_is_a_permutation_of_matched_values() {
        let h = MatrixR::from_diag(&[3.0, -1.0, 0.5]).unwrap();
        let a = MatrixR::from_diag(&[-1.01, 0.52, 2.99]).unwrap();
        let r = continuity_check(&h, std::slice::from_ref(&a)).unwrap();
        let ea = eigenvalues(&a).unwrap().values;
        let eh = eigenvalues(&h).unwrap().values;
        for (i, &j) in r.pairings[0].iter().enumerate() {
            assert!((ea[i] - eh[j]).norm() <= 0.03);
        }
    }
}
