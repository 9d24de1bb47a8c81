use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ensemble::{gaussian_matrix, rng, sub_seed};
use crate::densemat::MatrixR;
use crate::error::{Error, Result};
use crate::inertia::{inertia_of, verdict_of, Inertia};
use crate::spectral::{eigenvalue_list, eigenvalues, Spectrum};

/// Most flip witnesses a report keeps.
pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipWitness {
    pub index: usize,
    pub norm: f64,
    pub inertia: Inertia,
    pub perturbation: MatrixR,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub base_inertia: Inertia,
    pub samples: usize,
    pub radius: f64,
    pub flips: usize,
    pub seed: u64,
    pub flip_witnesses: Vec<FlipWitness>,
}

/// Perturbation number `index` of a campaign: a Gaussian direction scaled to
/// spectral norm `radius·f` with `f` uniform in `(0, 1]`, drawn from its own
/// generator seeded with [`sub_seed`]`(seed, index)`.
pub fn sample_perturbation(d: usize, radius: f64, seed: u64, index: usize) -> MatrixR {
    let mut r = rng(sub_seed(seed, index as u64));
    let e = gaussian_matrix(&mut r, d);
    let frac = 1.0 - r.random::<f64>();
    let norm = e.op_norm2();
    if norm == 0.0 {
        return e;
    }
    e.scale(radius * frac / norm)
}

/// Random perturbation campaign around a hyperbolic `H`.
pub fn perturb_campaign(
    h: &MatrixR,
    samples: usize,
    radius: f64,
    seed: u64,
    tau: f64,
) -> Result<CampaignReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be > 0, got {radius}")));
    }
    let d = h.dim();
    let perturbations = (0..samples).map(|k| sample_perturbation(d, radius, seed, k));
    run_campaign(h, perturbations, radius, seed, tau)
}

/// Campaign over caller-supplied perturbations.
pub fn run_campaign<I>(h: &MatrixR, perturbations: I, radius: f64, seed: u64, tau: f64) -> Result<CampaignReport>
where
    I: IntoIterator<Item = MatrixR>,
{
    let base = eigenvalues(h)?;
    let verdict = verdict_of(&base, tau);
    if !verdict.is_hyperbolic() {
        return Err(Error::NotHyperbolic { tau });
    }
    let base_inertia = *verdict.inertia();
    let mut report = CampaignReport {
        base_inertia,
        samples: 0,
        radius,
        flips: 0,
        seed,
        flip_witnesses: Vec::new(),
    };
    for (index, e) in perturbations.into_iter().enumerate() {
        if e.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), found: e.dim() });
        }
        let values = eigenvalue_list(&(h + &e))?;
        let inertia = inertia_of(&Spectrum::new(values, 0.0), tau);
        report.samples += 1;
        if !inertia.same_counts(&base_inertia) {
            report.flips += 1;
            if report.flip_witnesses.len() < MAX_WITNESSES {
                report.flip_witnesses.push(FlipWitness {
                    index,
                    norm: e.op_norm2(),
                    inertia,
                    perturbation: e,
                });
            }
        }
    }
    Ok(report)
}
