//! Hyperbolicity of linear flows `ẋ = Hx`.
//!
//! A real square matrix is hyperbolic when none of its eigenvalues lies on
//! the imaginary axis. Hyperbolic matrices split into classes by their stable
//! dimension `s` (eigenvalues with negative real part) and unstable dimension
//! `u`, and two hyperbolic flows `e^{tH}` are topologically conjugate exactly
//! when their matrices share `(s, u)`. Each class is open: small enough
//! perturbations never change it. This crate makes that statement
//! computational:
//!
//! * [`densemat`]: dense real/complex matrices, determinants, spectral norm.
//! * [`spectral`]: eigenvalues by Hessenberg QR, and independently by
//!   characteristic polynomial plus Aberth–Ehrlich root finding.
//! * [`inertia`]: `(s, u, c)` counts, a three-valued hyperbolicity verdict,
//!   and conjugacy classes.
//! * [`robustness`]: the distance to the nearest non-hyperbolic matrix,
//!   hyperbolic approximants `A + εI`, seeded perturbation campaigns and the
//!   eigenvalue continuity checks.
//! * [`flow`]: matrix exponential, trajectories, stable/unstable subspaces and
//!   SVG phase portraits.
//! * [`cli`]: the `linhyp` command-line front end and its file formats.

pub mod cli;
pub mod densemat;
pub mod error;
pub mod flow;
pub mod inertia;
pub mod matching;
pub mod robustness;
pub mod spectral;
pub mod verify;

pub use densemat::{Complex, MatrixC, MatrixR};
pub use error::{Error, Result};
pub use inertia::{classify, conjugacy_class, default_tau, inertia_of, same_class};
pub use inertia::{ConjugacyClass, HyperbolicityVerdict, Inertia};
pub use spectral::{eigenvalues, CharPoly, Spectrum};
