//! Property suites that exercise the robustness statements on seeded
//! ensembles and tally passes and failures per property.
//!
//! | suite | instances | properties |
//! |---|---|---|
//! | `openness` | 1000 | base hyperbolic, no flip below margin, `g(ω*) = upper` |
//! | `density` | 500 | hyperbolize succeeds, `ε ≤ bound`, result hyperbolic, shift identity |
//! | `vieta` | 1000 + 100 sequences | `Πλ = det`, `det A_n → det H` at rate `1/n`, continuity, bounded spectra |
//! | `oracle` | 1000 | QR spectrum equals char-poly + Aberth spectrum |
//!
//! Instance `k` of a suite run with seed `seed` draws from its own generator
//! seeded with `sub_seed(seed, k)` (sequences use index `k + 2^32`), so a run
//! with fewer instances is a prefix of the full run.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::densemat::{MatrixC, MatrixR};
use crate::error::{Error, Result};
use crate::inertia::{classify, default_tau, inertia_of, ConjugacyClass};
use crate::robustness::ensemble::{gaussian_matrix, rng, sub_seed, uniform, SeededRng};
use crate::robustness::{continuity_check, distance_at, generate, hyperbolize, margin, sample_perturbation, vieta_check};
use crate::spectral::{char_poly, eigenvalue_list, eigenvalues, poly_roots, sigma_min, Spectrum};

pub const OPENNESS_INSTANCES: usize = 1000;
pub const DENSITY_INSTANCES: usize = 500;
pub const VIETA_INSTANCES: usize = 1000;
pub const VIETA_SEQUENCES: usize = 100;
pub const ORACLE_INSTANCES: usize = 1000;

pub const MARGIN_TOL: f64 = 1e-6;
pub const SHIFT_TOL: f64 = 1e-8;
pub const VIETA_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;
pub const SEQUENCE_STEPS: usize = 20;
/// Hyperbolize bounds tried on every density instance.
pub const DENSITY_BOUNDS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

const SEQUENCE_OFFSET: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Openness,
    Density,
    Vieta,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Openness, Suite::Density, Suite::Vieta, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Openness => "openness",
            Suite::Density => "density",
            Suite::Vieta => "vieta",
            Suite::Oracle => "oracle",
        }
    }

    pub fn default_instances(self) -> usize {
        match self {
            Suite::Openness => OPENNESS_INSTANCES,
            Suite::Density => DENSITY_INSTANCES,
            Suite::Vieta => VIETA_INSTANCES,
            Suite::Oracle => ORACLE_INSTANCES,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}; expected openness, density, vieta or oracle")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: String,
    pub passed: usize,
    pub failed: usize,
    /// Largest discrepancy seen, for properties measured against a tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl PropertyTally {
    fn new(property: &str) -> Self {
        Self { property: property.into(), passed: 0, failed: 0, worst: None, tolerance: None }
    }

    fn measured(property: &str, tolerance: f64) -> Self {
        Self { tolerance: Some(tolerance), worst: Some(0.0), ..Self::new(property) }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    /// Records `value ≤ tolerance`; NaN fails.
    fn record_value(&mut self, value: f64) {
        let tol = self.tolerance.expect("measured property");
        let worst = self.worst.get_or_insert(0.0);
        if value.is_nan() || value > *worst {
            *worst = value;
        }
        self.record(value <= tol);
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    pub properties: Vec<PropertyTally>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0 && p.passed > 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyTally> {
        self.properties.iter().find(|p| p.property == name)
    }
}

/// Runs `suite` over `instances` seeded instances (the suite default if
/// `None`).
pub fn run_suite(suite: Suite, seed: u64, instances: Option<usize>) -> Result<SuiteReport> {
    let n = instances.unwrap_or_else(|| suite.default_instances());
    if n == 0 {
        return Err(Error::InvalidArgument("instances must be >= 1".into()));
    }
    let properties = match suite {
        Suite::Openness => openness(seed, n)?,
        Suite::Density => density(seed, n)?,
        Suite::Vieta => vieta(seed, n)?,
        Suite::Oracle => oracle(seed, n)?,
    };
    Ok(SuiteReport { suite, seed, instances: n, properties })
}

fn instance_rng(seed: u64, k: usize) -> SeededRng {
    rng(sub_seed(seed, k as u64))
}

/// Gaussian matrix with entries of variance `1/d`, so `‖A‖₂ ≈ 2`.
pub fn well_scaled(r: &mut SeededRng, d: usize) -> MatrixR {
    gaussian_matrix(r, d).scale(1.0 / (d as f64).sqrt())
}

/// Random class with `d ∈ dims`, uniform `s`, and log-uniform conditioning
/// in `[1, max_conditioning]`, generated from a seed drawn from `r`.
pub fn random_hyperbolic(
    r: &mut SeededRng,
    dims: std::ops::RangeInclusive<usize>,
    max_conditioning: f64,
) -> Result<(ConjugacyClass, MatrixR)> {
    let d = r.random_range(dims);
    let s = r.random_range(0..=d);
    let class = ConjugacyClass::new(s, d - s, d)?;
    let conditioning = (uniform(r, 0.0, 1.0) * max_conditioning.ln()).exp();
    let m = generate(class, conditioning, r.random())?;
    Ok((class, m))
}

/// Member of the mixed density ensemble: kind `k mod 6` is zero, rotation
/// blocks, strictly upper triangular (nilpotent), well-scaled Gaussian,
/// diagonal with zeros, or block upper triangular with rotation and real
/// diagonal blocks. Structured kinds carry exact zeros where the spectrum
/// needs them so their eigenvalues are computed exactly.
pub fn density_member(r: &mut SeededRng, k: usize) -> MatrixR {
    let d = r.random_range(2..=6usize);
    let mut a = MatrixR::zeros(d);
    let fill_upper = |a: &mut MatrixR, r: &mut SeededRng, from: usize| {
        for i in 0..d {
            for j in (i + from)..d {
                a[(i, j)] = uniform(r, -1.0, 1.0);
            }
        }
    };
    match k % 6 {
        0 => {}
        1 | 5 => {
            let mut i = 0;
            while i < d {
                if i + 1 < d && (k % 6 == 1 || r.random::<bool>()) {
                    let w = uniform(r, 0.2, 2.0);
                    let re = if k % 6 == 1 { 0.0 } else { [0.0, uniform(r, -1.0, 1.0)][r.random_range(0..2)] };
                    a[(i, i)] = re;
                    a[(i + 1, i + 1)] = re;
                    a[(i, i + 1)] = w;
                    a[(i + 1, i)] = -w;
                    i += 2;
                } else {
                    a[(i, i)] = if r.random::<bool>() { 0.0 } else { uniform(r, -1.0, 1.0) };
                    i += 1;
                }
            }
            if k % 6 == 5 {
                for i in 0..d {
                    for j in (i + 2)..d {
                        a[(i, j)] = uniform(r, -1.0, 1.0);
                    }
                }
                for i in 0..d.saturating_sub(1) {
                    if a[(i + 1, i)] == 0.0 && a[(i, i + 1)] == 0.0 {
                        a[(i, i + 1)] = uniform(r, -1.0, 1.0);
                    }
                }
            }
        }
        2 => fill_upper(&mut a, r, 1),
        3 => a = well_scaled(r, d),
        _ => {
            for i in 0..d {
                if r.random::<bool>() {
                    a[(i, i)] = uniform(r, -2.0, 2.0);
                }
            }
        }
    }
    a
}

fn openness(seed: u64, n: usize) -> Result<Vec<PropertyTally>> {
    let mut base = PropertyTally::new("base hyperbolic");
    let mut flips = PropertyTally::new("no flip below margin");
    let mut witness = PropertyTally::measured("g(omega_star) = upper", 1e-10);
    for k in 0..n {
        let mut r = instance_rng(seed, k);
        let (class, h) = random_hyperbolic(&mut r, 2..=6, 100.0)?;
        let tau = default_tau(&h);
        let m = margin(&h, tau, MARGIN_TOL)?;
        let verdict = classify(&h, tau)?;
        let base_ok = m.hyperbolic
            && m.lower > 0.0
            && verdict.is_hyperbolic()
            && (verdict.inertia().s, verdict.inertia().u) == (class.s, class.u);
        base.record(base_ok);
        if !base_ok {
            continue;
        }
        witness.record_value((distance_at(&h, m.omega_star) - m.upper).abs());
        // Push right up against the bound: norm = lower·(1 − 1e−6).
        let dir = sample_perturbation(class.d, 1.0, r.random(), 0);
        let e = dir.scale(m.lower * (1.0 - 1e-6) / dir.op_norm2());
        let perturbed = inertia_of(&Spectrum::new(eigenvalue_list(&(&h + &e))?, 0.0), tau);
        flips.record(perturbed.same_counts(verdict.inertia()));
    }
    Ok(vec![base, flips, witness])
}

fn density(seed: u64, n: usize) -> Result<Vec<PropertyTally>> {
    let mut success = PropertyTally::new("hyperbolize succeeds");
    let mut within = PropertyTally::new("epsilon <= bound");
    let mut hyperbolic = PropertyTally::new("shifted is hyperbolic");
    let mut identity = PropertyTally::measured("shift identity", SHIFT_TOL);
    for k in 0..n {
        let mut r = instance_rng(seed, k);
        let a = density_member(&mut r, k);
        let tau = default_tau(&a);
        for bound in DENSITY_BOUNDS {
            match hyperbolize(&a, tau, bound) {
                Ok(res) => {
                    success.record(true);
                    within.record(res.epsilon > 0.0 && res.epsilon <= bound);
                    hyperbolic.record(classify(&res.shifted, tau)?.is_hyperbolic());
                }
                Err(Error::ShiftTooSmall { .. }) => success.record(false),
                Err(e) => return Err(e),
            }
        }

        let d = r.random_range(2..=8usize);
        let b = well_scaled(&mut r, d);
        let eps = 10f64.powf(uniform(&mut r, -6.0, 0.0));
        let moved = eigenvalues(&b.shift(eps))?;
        identity.record_value(eigenvalues(&b)?.shifted(eps).distance(&moved));
    }
    Ok(vec![success, within, hyperbolic, identity])
}

fn vieta(seed: u64, n: usize) -> Result<Vec<PropertyTally>> {
    let mut det = PropertyTally::measured("product of eigenvalues = det", VIETA_TOL);
    for k in 0..n {
        det.record_value(vieta_check(&oracle_member(seed, k))?);
    }

    let mut rate = PropertyTally::new("det(A_n) -> det(H) at rate 1/n");
    let mut tail = PropertyTally::new("continuity monotone tail");
    let mut bounded = PropertyTally::new("spectra bounded by norm");
    let sequences = n.div_ceil(VIETA_INSTANCES / VIETA_SEQUENCES).min(VIETA_SEQUENCES);
    for k in 0..sequences {
        let mut r = rng(sub_seed(seed, k as u64 + SEQUENCE_OFFSET));
        let (_, h) = random_hyperbolic(&mut r, 2..=6, 10.0)?;
        let g = sequence_direction(&mut r, &h);
        let seq: Vec<MatrixR> = (1..=SEQUENCE_STEPS).map(|n| &h + &g.scale(1.0 / n as f64)).collect();
        rate.record(det_rate_ok(&h, &seq));
        let report = continuity_check(&h, &seq)?;
        tail.record(report.monotone_tail);
        let norm_bound = seq.iter().map(MatrixR::op_norm2).fold(0.0, f64::max);
        bounded.record(report.max_modulus.iter().all(|&m| m <= norm_bound + 1e-8));
    }
    Ok(vec![det, rate, tail, bounded])
}

/// Direction `G` for the sequence `H + G/n`, with `‖G‖₂ = σ_min(H)/100` so the
/// perturbation stays far from singular. Directions with
/// `|tr(H⁻¹G)| < ‖H⁻¹‖₂‖G‖₂/10`, where the first-order term of
/// `det(H + tG) = det H·(1 + t·tr(H⁻¹G) + O(t²))` nearly vanishes, are
/// redrawn.
pub fn sequence_direction(r: &mut SeededRng, h: &MatrixR) -> MatrixR {
    let smallest = sigma_min(&MatrixC::from_real(h));
    let h_inv = h.inverse().expect("hyperbolic matrices are invertible");
    loop {
        let g = gaussian_matrix(r, h.dim());
        let g = g.scale(0.01 * smallest / g.op_norm2());
        if (&h_inv * &g).trace().abs() >= 0.1 * 0.01 {
            return g;
        }
    }
}

/// `e_n = |det A_n − det H|` is non-increasing and bounded by the envelope
/// `2·e_1/n`.
pub fn det_rate_ok(h: &MatrixR, seq: &[MatrixR]) -> bool {
    let base = h.det();
    let errs: Vec<f64> = seq.iter().map(|a| (a.det() - base).abs()).collect();
    let slack = 1e-14 * (1.0 + base.abs());
    let monotone = errs.windows(2).all(|w| w[1] <= w[0] + slack);
    let envelope = errs.iter().enumerate().all(|(i, e)| (i + 1) as f64 * e <= 2.0 * errs[0] + slack);
    monotone && envelope
}

/// Instance `k` of the ensemble shared by the oracle and Vieta suites:
/// a well-scaled Gaussian matrix with `d` uniform in `1..=8`.
pub fn oracle_member(seed: u64, k: usize) -> MatrixR {
    let mut r = instance_rng(seed, k);
    let d = r.random_range(1..=8usize);
    well_scaled(&mut r, d)
}

fn oracle(seed: u64, n: usize) -> Result<Vec<PropertyTally>> {
    let mut agree = PropertyTally::measured("QR = char-poly roots", ORACLE_TOL);
    for k in 0..n {
        let a = oracle_member(seed, k);
        let qr = eigenvalues(&a)?;
        let roots = poly_roots(&char_poly(&a))?;
        agree.record_value(qr.distance(&roots));
    }
    Ok(vec![agree])
}
