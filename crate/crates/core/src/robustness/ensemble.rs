//! Seeded random matrices.
//!
//! Every generator draws from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a seed reproduces the same matrices on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densemat::MatrixR;
use crate::error::{Error, Result};
use crate::inertia::ConjugacyClass;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of item `index` in a run seeded with `seed`: `splitmix64(seed) XOR
/// index`. Mixing first keeps small neighbouring run seeds from sharing the
/// same set of item seeds.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) ^ index
}

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix(rng: &mut SeededRng, d: usize) -> MatrixR {
    let data = (0..d * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    MatrixR::from_raw(d, data)
}

pub fn gaussian_vector(rng: &mut SeededRng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Haar-ish random orthogonal matrix: Gram–Schmidt (applied twice) on the
/// columns of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut SeededRng, d: usize) -> MatrixR {
    loop {
        let g = gaussian_matrix(rng, d);
        let mut cols: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| g[(i, j)]).collect()).collect();
        let mut ok = true;
        for j in 0..d {
            for _ in 0..2 {
                for k in 0..j {
                    let dot: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
                    let ck = cols[k].clone();
                    for (x, y) in cols[j].iter_mut().zip(&ck) {
                        *x -= dot * y;
                    }
                }
            }
            let norm = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= norm);
        }
        if ok {
            let mut q = MatrixR::zeros(d);
            for (j, col) in cols.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    q[(i, j)] = v;
                }
            }
            return q;
        }
    }
}

/// Random `T` and its exact inverse with `cond₂(T) = conditioning`:
/// `T = Q₁ Σ Q₂ᵀ`, `T⁻¹ = Q₂ Σ⁻¹ Q₁ᵀ`, singular values log-uniform in
/// `[1, conditioning]` with both ends attained.
pub fn random_similarity(rng: &mut SeededRng, d: usize, conditioning: f64) -> (MatrixR, MatrixR) {
    let q1 = random_orthogonal(rng, d);
    let q2 = random_orthogonal(rng, d);
    let log_k = conditioning.ln();
    let sv: Vec<f64> = (0..d)
        .map(|i| match i {
            0 => 1.0,
            _ if i == d - 1 => conditioning,
            _ => (rng.random::<f64>() * log_k).exp(),
        })
        .collect();
    let sigma = MatrixR::from_diag(&sv).expect("finite singular values");
    let sigma_inv = MatrixR::from_diag(&sv.iter().map(|s| 1.0 / s).collect::<Vec<_>>())
        .expect("finite singular values");
    let t = &(&q1 * &sigma) * &q2.transpose();
    let t_inv = &(&q2 * &sigma_inv) * &q1.transpose();
    (t, t_inv)
}

pub(crate) fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Hyperbolic matrix in the requested class.
///
/// Builds a block-diagonal `D` whose stable eigenvalues have real part in
/// `[−2, −0.1]` and unstable ones in `[0.1, 2]` (complex pairs appear as
/// `[[a, b], [−b, a]]` blocks with `b ∈ [0.2, 2]`), then returns `T D T⁻¹` for
/// a random `T` with `cond₂(T) = conditioning`.
pub fn generate(class: ConjugacyClass, conditioning: f64, seed: u64) -> Result<MatrixR> {
    let ConjugacyClass { s, u, d } = class;
    if d == 0 || s + u != d {
        return Err(Error::InvalidClass { s, u, d });
    }
    if !(conditioning.is_finite() && conditioning >= 1.0) {
        return Err(Error::InvalidArgument(format!("conditioning must be >= 1, got {conditioning}")));
    }
    let mut rng = rng(seed);
    let mut dmat = MatrixR::zeros(d);
    let mut pos = 0;
    for (count, lo, hi) in [(s, -2.0, -0.1), (u, 0.1, 2.0)] {
        let mut left = count;
        while left > 0 {
            let re = uniform(&mut rng, lo, hi);
            if left >= 2 && rng.random::<bool>() {
                let im = uniform(&mut rng, 0.2, 2.0);
                dmat[(pos, pos)] = re;
                dmat[(pos + 1, pos + 1)] = re;
                dmat[(pos, pos + 1)] = im;
                dmat[(pos + 1, pos)] = -im;
                pos += 2;
                left -= 2;
            } else {
                dmat[(pos, pos)] = re;
                pos += 1;
                left -= 1;
            }
        }
    }
    let (t, t_inv) = random_similarity(&mut rng, d, conditioning);
    Ok(&(&t * &dmat) * &t_inv)
}
