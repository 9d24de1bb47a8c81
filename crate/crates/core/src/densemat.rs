//! Dense square matrices over the reals and the complex numbers.
//!
//! Storage is row-major. Constructors validate shape and finiteness, so the
//! arithmetic below never re-checks entries.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Field operations needed by the generic LU kernel.
pub(crate) trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn one() -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex {
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// In-place LU factorization with partial pivoting of a `d`×`d` row-major
/// array. Returns the permutation parity (+1/-1) and the pivot rows.
/// A zero pivot column is skipped, leaving a zero on the diagonal.
fn lu_in_place<T: Scalar>(d: usize, a: &mut [T]) -> (i32, Vec<usize>) {
    let mut sign = 1;
    let mut piv = Vec::with_capacity(d);
    for k in 0..d {
        let mut p = k;
        let mut best = a[k * d + k].modulus();
        for i in (k + 1)..d {
            let v = a[i * d + k].modulus();
            if v > best {
                best = v;
                p = i;
            }
        }
        piv.push(p);
        if p != k {
            for j in 0..d {
                a.swap(k * d + j, p * d + j);
            }
            sign = -sign;
        }
        if best == 0.0 {
            continue;
        }
        let pivot = a[k * d + k];
        for i in (k + 1)..d {
            let f = a[i * d + k] / pivot;
            a[i * d + k] = f;
            if f.modulus() == 0.0 {
                continue;
            }
            for j in (k + 1)..d {
                let u = a[k * d + j];
                a[i * d + j] = a[i * d + j] - f * u;
            }
        }
    }
    (sign, piv)
}

fn det_generic<T: Scalar>(d: usize, data: &[T]) -> T {
    let mut a = data.to_vec();
    let (sign, _) = lu_in_place(d, &mut a);
    let mut det = if sign > 0 { T::one() } else { -T::one() };
    for k in 0..d {
        det = det * a[k * d + k];
    }
    det
}

/// Solves `A X = B` for a square `B` (both `d`×`d`). Returns `None` when `A`
/// is exactly singular.
fn solve_generic<T: Scalar>(d: usize, a: &[T], b: &[T], ncols: usize) -> Option<Vec<T>> {
    let mut lu = a.to_vec();
    let (_, piv) = lu_in_place(d, &mut lu);
    if (0..d).any(|k| lu[k * d + k].modulus() == 0.0) {
        return None;
    }
    let mut x = b.to_vec();
    for (k, &p) in piv.iter().enumerate() {
        if p != k {
            for j in 0..ncols {
                x.swap(k * ncols + j, p * ncols + j);
            }
        }
    }
    for j in 0..ncols {
        for i in 0..d {
            let mut s = x[i * ncols + j];
            for k in 0..i {
                s = s - lu[i * d + k] * x[k * ncols + j];
            }
            x[i * ncols + j] = s;
        }
        for i in (0..d).rev() {
            let mut s = x[i * ncols + j];
            for k in (i + 1)..d {
                s = s - lu[i * d + k] * x[k * ncols + j];
            }
            x[i * ncols + j] = s / lu[i * d + i];
        }
    }
    Some(x)
}

/// Dense real `d`×`d` matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MatrixR {
    d: usize,
    data: Vec<f64>,
}

impl MatrixR {
    /// Builds a matrix from row-major storage of length `d*d`.
    pub fn from_row_major(d: usize, data: Vec<f64>) -> Result<Self> {
        if d == 0 || data.len() != d * d {
            return Err(Error::NotSquare {
                rows: data.len().checked_div(d).unwrap_or(0),
                expected: d,
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: k / d, col: k % d });
        }
        Ok(Self { d, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.len();
        let mut data = Vec::with_capacity(d * d);
        for r in rows {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::NotSquare { rows: d, expected: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(d, data)
    }

    pub fn zeros(d: usize) -> Self {
        assert!(d > 0, "dimension must be positive");
        Self { d, data: vec![0.0; d * d] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        let d = diag.len();
        let mut data = vec![0.0; d * d];
        for (i, &v) in diag.iter().enumerate() {
            data[i * d + i] = v;
        }
        Self::from_row_major(d, data)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut t = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { d: self.d, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `A + εI`.
    pub fn shift(&self, eps: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.d {
            m[(i, i)] += eps;
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn det(&self) -> f64 {
        det_generic(self.d, &self.data)
    }

    /// Spectral norm, the largest singular value.
    pub fn op_norm2(&self) -> f64 {
        let ata = &self.transpose() * self;
        let eigs = spectral::hermitian_eigs(&MatrixC::from_real(&ata))
            .expect("AᵀA is symmetric by construction");
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.len() });
        }
        Ok(self
            .data
            .chunks(self.d)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Solves `self · X = rhs`. `None` if `self` is exactly singular.
    pub fn solve(&self, rhs: &MatrixR) -> Option<MatrixR> {
        assert_eq!(self.d, rhs.d);
        solve_generic(self.d, &self.data, &rhs.data, self.d)
            .map(|data| MatrixR { d: self.d, data })
    }

    pub fn inverse(&self) -> Option<MatrixR> {
        self.solve(&MatrixR::identity(self.d))
    }

    /// Rebuilds a matrix from possibly unchecked storage, validating it.
    pub(crate) fn from_raw(d: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), d * d);
        Self { d, data }
    }
}

impl Index<(usize, usize)> for MatrixR {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.d + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixR {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.d + j]
    }
}

impl<'a> Mul<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn mul(self, rhs: &MatrixR) -> MatrixR {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix product");
        let d = self.d;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        MatrixR { d, data: out }
    }
}

impl<'a> Add<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn add(self, rhs: &MatrixR) -> MatrixR {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix sum");
        MatrixR { d: self.d, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn sub(self, rhs: &MatrixR) -> MatrixR {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix difference");
        MatrixR { d: self.d, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl TryFrom<Vec<Vec<f64>>> for MatrixR {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<MatrixR> for Vec<Vec<f64>> {
    fn from(m: MatrixR) -> Self {
        m.rows()
    }
}

impl fmt::Debug for MatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.d)).finish()
    }
}

/// Dense complex `d`×`d` matrix.
#[derive(Clone, PartialEq)]
pub struct MatrixC {
    d: usize,
    data: Vec<Complex>,
}

impl MatrixC {
    pub fn from_row_major(d: usize, data: Vec<Complex>) -> Result<Self> {
        if d == 0 || data.len() != d * d {
            return Err(Error::NotSquare {
                rows: data.len().checked_div(d).unwrap_or(0),
                expected: d,
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / d, col: k % d });
        }
        Ok(Self { d, data })
    }

    pub fn zeros(d: usize) -> Self {
        assert!(d > 0, "dimension must be positive");
        Self { d, data: vec![Complex::new(0.0, 0.0); d * d] }
    }

    pub fn from_real(a: &MatrixR) -> Self {
        Self { d: a.d, data: a.data.iter().map(|&x| Complex::new(x, 0.0)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    /// `A − zI`.
    pub fn shifted(&self, z: Complex) -> Self {
        let mut m = self.clone();
        for i in 0..self.d {
            m[(i, i)] -= z;
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        let d = self.d;
        let mut t = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn det(&self) -> Complex {
        det_generic(self.d, &self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for MatrixC {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.d + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixC {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.d + j]
    }
}

impl<'a> Mul<&'a MatrixC> for &'a MatrixC {
    type Output = MatrixC;
    fn mul(self, rhs: &MatrixC) -> MatrixC {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix product");
        let d = self.d;
        let mut out = vec![Complex::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        MatrixC { d, data: out }
    }
}

impl fmt::Debug for MatrixC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.d)).finish()
    }
}
