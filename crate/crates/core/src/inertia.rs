//! Stable/unstable counts and the hyperbolicity verdict.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::densemat::{Complex, MatrixR};
use crate::error::{Error, Result};
use crate::spectral::{eigenvalues, Spectrum};

/// Eigenvalue counts relative to the band `|Re λ| ≤ τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inertia {
    /// `Re λ < −τ`
    pub s: usize,
    /// `Re λ > τ`
    pub u: usize,
    /// `|Re λ| ≤ τ`
    pub c: usize,
    pub tau: f64,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.s + self.u + self.c
    }

    /// Same counts, ignoring the tolerance that produced them.
    pub fn same_counts(&self, other: &Inertia) -> bool {
        (self.s, self.u, self.c) == (other.s, other.u, other.c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HyperbolicityVerdict {
    Hyperbolic { inertia: Inertia },
    NonHyperbolic { inertia: Inertia, witness: Complex },
    Indeterminate { inertia: Inertia },
}

impl HyperbolicityVerdict {
    pub fn inertia(&self) -> &Inertia {
        match self {
            Self::Hyperbolic { inertia }
            | Self::NonHyperbolic { inertia, .. }
            | Self::Indeterminate { inertia } => inertia,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Self::Hyperbolic { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hyperbolic { .. } => "hyperbolic",
            Self::NonHyperbolic { .. } => "non_hyperbolic",
            Self::Indeterminate { .. } => "indeterminate",
        }
    }
}

/// Class `H_s` of a hyperbolic matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub s: usize,
    pub u: usize,
    pub d: usize,
}

impl ConjugacyClass {
    pub fn new(s: usize, u: usize, d: usize) -> Result<Self> {
        if s + u != d || d == 0 {
            return Err(Error::InvalidClass { s, u, d });
        }
        Ok(Self { s, u, d })
    }
}

/// Default tolerance `1e−9·(1 + ‖A‖₂)`.
pub fn default_tau(a: &MatrixR) -> f64 {
    1e-9 * (1.0 + a.op_norm2())
}

pub fn inertia_of(spec: &Spectrum, tau: f64) -> Inertia {
    let mut inertia = Inertia { s: 0, u: 0, c: 0, tau };
    for z in &spec.values {
        if z.re < -tau {
            inertia.s += 1;
        } else if z.re > tau {
            inertia.u += 1;
        } else {
            inertia.c += 1;
        }
    }
    inertia
}

/// Witness order: smallest `|Re|`, then smallest `|Im|`, then `(re, im)`.
fn witness_order(a: &Complex, b: &Complex) -> Ordering {
    a.re.abs()
        .total_cmp(&b.re.abs())
        .then(a.im.abs().total_cmp(&b.im.abs()))
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

/// Verdict for an already computed spectrum.
pub fn verdict_of(spec: &Spectrum, tau: f64) -> HyperbolicityVerdict {
    let inertia = inertia_of(spec, tau);
    if inertia.c > 0 {
        let witness = spec
            .values
            .iter()
            .filter(|z| z.re.abs() <= tau)
            .copied()
            .min_by(witness_order)
            .expect("c > 0 implies an in-band eigenvalue");
        return HyperbolicityVerdict::NonHyperbolic { inertia, witness };
    }
    let gap = spec.values.iter().fold(f64::INFINITY, |m, z| m.min(z.re.abs()));
    if gap > tau + spec.residual_bound {
        HyperbolicityVerdict::Hyperbolic { inertia }
    } else {
        HyperbolicityVerdict::Indeterminate { inertia }
    }
}

pub fn classify(a: &MatrixR, tau: f64) -> Result<HyperbolicityVerdict> {
    check_tau(tau)?;
    Ok(verdict_of(&eigenvalues(a)?, tau))
}

pub fn conjugacy_class(a: &MatrixR, tau: f64) -> Result<ConjugacyClass> {
    match classify(a, tau)? {
        HyperbolicityVerdict::Hyperbolic { inertia } => {
            Ok(ConjugacyClass { s: inertia.s, u: inertia.u, d: a.dim() })
        }
        _ => Err(Error::NotHyperbolic { tau }),
    }
}

/// Whether `e^{tA}` and `e^{tB}` are topologically conjugate, i.e. whether the
/// two hyperbolic matrices share their conjugacy class.
pub fn same_class(a: &MatrixR, b: &MatrixR, tau: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(conjugacy_class(a, tau)? == conjugacy_class(b, tau)?)
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be finite and >= 0, got {tau}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 1e-9;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn spec(v: &[Complex]) -> Spectrum {
        Spectrum::new(v.to_vec(), 0.0)
    }

    fn counts(i: Inertia) -> (usize, usize, usize) {
        (i.s, i.u, i.c)
    }

    #[test]
    fn inertia_examples() {
        let i = inertia_of(&spec(&[c(-1.0, 0.0), c(-2.0, 0.0), c(3.0, 0.0)]), TAU);
        assert_eq!(counts(i), (2, 1, 0));
        let i = inertia_of(&spec(&[c(0.0, 1.0), c(0.0, -1.0)]), TAU);
        assert_eq!(counts(i), (0, 0, 2));
        let i = inertia_of(&spec(&[c(-5e-10, 0.0), c(1.0, 0.0)]), TAU);
        assert_eq!(counts(i), (0, 1, 1));
    }

    #[test]
    fn classify_examples() {
        let v = classify(&MatrixR::from_diag(&[-1.0, 2.0]).unwrap(), TAU).unwrap();
        assert!(v.is_hyperbolic());
        assert_eq!(counts(*v.inertia()), (1, 1, 0));

        let rot = MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        match classify(&rot, TAU).unwrap() {
            HyperbolicityVerdict::NonHyperbolic { witness, .. } => {
                assert!(witness.re.abs() < 1e-15);
                assert!((witness.im.abs() - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }

        let nil = MatrixR::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        match classify(&nil, TAU).unwrap() {
            HyperbolicityVerdict::NonHyperbolic { witness, inertia } => {
                assert_eq!(witness, c(0.0, 0.0));
                assert_eq!(inertia.c, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn witness_is_deterministic() {
        let s = spec(&[c(0.0, 2.0), c(0.0, -2.0), c(1e-12, 0.5), c(1e-12, -0.5)]);
        match verdict_of(&s, TAU) {
            HyperbolicityVerdict::NonHyperbolic { witness, .. } => assert_eq!(witness, c(0.0, -2.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn indeterminate_band() {
        let s = Spectrum::new(vec![c(-2e-9, 0.0), c(1.0, 0.0)], 5e-9);
        assert!(matches!(verdict_of(&s, TAU), HyperbolicityVerdict::Indeterminate { .. }));
        let s = Spectrum::new(vec![c(-2e-9, 0.0), c(1.0, 0.0)], 5e-10);
        assert!(verdict_of(&s, TAU).is_hyperbolic());
    }

    #[test]
    fn conjugacy_class_examples() {
        let a = MatrixR::from_diag(&[-1.0, -2.0, 3.0]).unwrap();
        assert_eq!(conjugacy_class(&a, TAU).unwrap(), ConjugacyClass { s: 2, u: 1, d: 3 });
        let neg = MatrixR::identity(4).scale(-1.0);
        assert_eq!(conjugacy_class(&neg, TAU).unwrap(), ConjugacyClass { s: 4, u: 0, d: 4 });
        let t = MatrixR::from_rows(&[[-1.0, 1.0], [0.0, -2.0]]).unwrap();
        assert_eq!(conjugacy_class(&t, TAU).unwrap(), ConjugacyClass { s: 2, u: 0, d: 2 });
        let rot = MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(matches!(conjugacy_class(&rot, TAU), Err(Error::NotHyperbolic { .. })));
    }

    #[test]
    fn same_class_examples() {
        let d = |v: &[f64]| MatrixR::from_diag(v).unwrap();
        let t = MatrixR::from_rows(&[[-1.0, 1.0], [0.0, -2.0]]).unwrap();
        assert!(same_class(&d(&[-1.0, -2.0]), &t, TAU).unwrap());
        assert!(same_class(&d(&[-1.0, 2.0]), &d(&[1.0, -2.0]), TAU).unwrap());
        assert!(!same_class(&d(&[-1.0, -2.0]), &d(&[-1.0, 2.0]), TAU).unwrap());
        assert!(matches!(
            same_class(&d(&[-1.0, -2.0]), &d(&[-1.0, -2.0, 3.0]), TAU),
            Err(Error::DimensionMismatch { .. })
        ));
        let rot = MatrixR::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(same_class(&rot, &d(&[1.0, 1.0]), TAU).is_err());
    }

    #[test]
    fn invalid_class_and_tau() {
        assert!(ConjugacyClass::new(1, 1, 3).is_err());
        assert!(classify(&MatrixR::identity(2), -1.0).is_err());
    }
}
