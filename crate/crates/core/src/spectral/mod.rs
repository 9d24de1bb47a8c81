//! Eigenvalues by two independent routes.
//!
//! The production path is [`eigenvalues`] (balancing, Householder reduction to
//! Hessenberg form, Francis double-shift QR). The verification path is
//! [`char_poly`] followed by [`poly_roots`] (Faddeev–LeVerrier coefficients,
//! Aberth–Ehrlich roots). The two share no code beyond complex arithmetic, so
//! each can check the other.

mod hermitian;
mod poly;
mod qr;

pub use hermitian::{hermitian_eigs, sigma_min};
pub use poly::{char_poly, poly_from_roots, poly_from_roots_complex, poly_roots, CharPoly};
pub use qr::{eigenvalue_list, eigenvalues};

use serde::{Deserialize, Serialize};

use crate::densemat::Complex;
use crate::matching::match_multisets;

/// Multiset of eigenvalues (repeated per algebraic multiplicity) together
/// with an accuracy estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<Complex>,
    pub residual_bound: f64,
}

impl Spectrum {
    pub fn new(values: Vec<Complex>, residual_bound: f64) -> Self {
        Self { values, residual_bound }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Product of all values (the determinant, by Vieta).
    pub fn product(&self) -> Complex {
        self.values.iter().fold(Complex::new(1.0, 0.0), |acc, z| acc * z)
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest matched distance to `other` under the optimal pairing.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        match_multisets(&self.values, &other.values).1
    }

    /// Every value shifted by `eps` along the real axis.
    pub fn shifted(&self, eps: f64) -> Spectrum {
        Spectrum {
            values: self.values.iter().map(|z| z + eps).collect(),
            residual_bound: self.residual_bound,
        }
    }

    /// Values in a canonical order: ascending real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}
