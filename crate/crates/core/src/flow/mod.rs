//! The linear flow `x(t) = e^{tH} x₀`.

mod expm;
pub mod portrait;

pub use expm::expm;
pub use portrait::{portrait, PortraitOptions};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::densemat::MatrixR;
use crate::error::{Error, Result};
use crate::inertia::{classify, HyperbolicityVerdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub origin: Vec<f64>,
}

pub fn flow_map(h: &MatrixR, t: f64, x0: &[f64]) -> Result<Vec<f64>> {
    check_dim(h, x0)?;
    expm(&h.scale(t)).matvec(x0)
}

fn check_dim(h: &MatrixR, x0: &[f64]) -> Result<()> {
    if x0.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: x0.len() });
    }
    Ok(())
}

/// Samples the flow on a strictly ascending grid.
///
/// A uniform grid (steps equal to within `1e−12` relative) reuses one step
/// matrix `e^{hH}`; otherwise one step matrix is built per distinct step.
pub fn trajectory(h: &MatrixR, x0: &[f64], grid: &[f64]) -> Result<Trajectory> {
    check_dim(h, x0)?;
    if grid.is_empty() {
        return Err(Error::InvalidArgument("time grid must be nonempty".into()));
    }
    if let Some(bad) = grid.iter().position(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time grid entry {bad} is not finite")));
    }
    if let Some(k) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::NonAscendingGrid { index: k + 1 });
    }

    let start = if grid[0] == 0.0 { x0.to_vec() } else { flow_map(h, grid[0], x0)? };
    let mut states = Vec::with_capacity(grid.len());
    states.push(start);

    if grid.len() > 1 {
        let n = grid.len() - 1;
        let mean = (grid[n] - grid[0]) / n as f64;
        let uniform = grid.windows(2).all(|w| ((w[1] - w[0]) - mean).abs() <= 1e-12 * mean.abs());
        let mut cache: HashMap<u64, MatrixR> = HashMap::new();
        for w in grid.windows(2) {
            let step = if uniform { mean } else { w[1] - w[0] };
            // The state at t = 0 is x0 itself; restart the recurrence from it.
            if w[1] == 0.0 {
                states.push(x0.to_vec());
                continue;
            }
            let m = cache.entry(step.to_bits()).or_insert_with(|| expm(&h.scale(step)));
            let next = m.matvec(states.last().expect("nonempty"))?;
            states.push(next);
        }
    }
    Ok(Trajectory { times: grid.to_vec(), states, origin: x0.to_vec() })
}

/// Orthonormal bases of the stable and unstable subspaces, stored as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingBases {
    pub stable: Vec<Vec<f64>>,
    pub unstable: Vec<Vec<f64>>,
}

const SIGN_MAX_ITERATIONS: usize = 100;

/// Matrix sign function by scaled Newton iteration `X ← (μX + (μX)⁻¹)/2`
/// with determinant scaling `μ = |det X|^{−1/d}`.
fn matrix_sign(h: &MatrixR) -> Result<MatrixR> {
    let d = h.dim();
    let mut x = h.clone();
    let mut scaling = true;
    let mut settled = false;
    for _ in 0..SIGN_MAX_ITERATIONS {
        let inv = x.inverse().ok_or(Error::NotHyperbolic { tau: 0.0 })?;
        let mut mu = 1.0;
        if scaling {
            let det = x.det().abs();
            if det.is_finite() && det > 0.0 {
                mu = det.powf(-1.0 / d as f64);
            }
        }
        let next = (&x.scale(mu) + &inv.scale(1.0 / mu)).scale(0.5);
        let change = (&next - &x).frobenius();
        let size = next.frobenius();
        x = next;
        if settled {
            return Ok(x);
        }
        if change <= 1e-2 * size {
            scaling = false;
        }
        if change <= 1e-12 * size {
            // One more step squares the remaining error away.
            settled = true;
        }
    }
    Err(Error::NonConvergence { routine: "matrix sign", iterations: SIGN_MAX_ITERATIONS })
}

/// First `k` orthonormal directions of the column space of `p`, chosen by
/// column-pivoted Gram–Schmidt (two passes per column).
fn orthonormal_range(p: &MatrixR, k: usize) -> Vec<Vec<f64>> {
    let d = p.dim();
    let mut cols: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| p[(i, j)]).collect()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..k {
        let (pivot, _) = cols
            .iter()
            .enumerate()
            .map(|(j, c)| (j, norm(c)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let mut q = cols.swap_remove(pivot);
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = q.iter().zip(b).map(|(x, y)| x * y).sum();
                q.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let n = norm(&q);
        q.iter_mut().for_each(|x| *x /= n);
        for c in cols.iter_mut() {
            let dot: f64 = c.iter().zip(&q).map(|(x, y)| x * y).sum();
            c.iter_mut().zip(&q).for_each(|(x, y)| *x -= dot * y);
        }
        basis.push(q);
    }
    basis
}

/// Stable and unstable subspaces of a hyperbolic `H`.
///
/// `S = sign(H)` gives the spectral projectors `(I ∓ S)/2` onto the sums of
/// generalized eigenspaces with `Re λ < 0` and `Re λ > 0`; their ranges have
/// the dimensions `s` and `u` reported by the classifier.
pub fn splitting(h: &MatrixR, tau: f64) -> Result<SplittingBases> {
    let inertia = match classify(h, tau)? {
        HyperbolicityVerdict::Hyperbolic { inertia } => inertia,
        _ => return Err(Error::NotHyperbolic { tau }),
    };
    let d = h.dim();
    let sign = matrix_sign(h)?;
    let id = MatrixR::identity(d);
    let p_stable = (&id - &sign).scale(0.5);
    let p_unstable = (&id + &sign).scale(0.5);
    Ok(SplittingBases {
        stable: orthonormal_range(&p_stable, inertia.s),
        unstable: orthonormal_range(&p_unstable, inertia.u),
    })
}

/// `‖H V − V (Vᵀ H V)‖_F` for a basis `V` stored as columns.
pub fn invariance_residual(h: &MatrixR, basis: &[Vec<f64>]) -> f64 {
    let hv: Vec<Vec<f64>> = basis.iter().map(|v| h.matvec(v).expect("basis dimension")).collect();
    let mut total = 0.0;
    for hvj in &hv {
        let mut r = hvj.clone();
        for vi in basis {
            let coeff: f64 = vi.iter().zip(hvj).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(vi).for_each(|(x, y)| *x -= coeff * y);
        }
        total += r.iter().map(|x| x * x).sum::<f64>();
    }
    total.sqrt()
}
