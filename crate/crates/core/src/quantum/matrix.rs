use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuantumError;
use crate::par::{self, Execution};

/// Dense complex square matrix over a [`MonopoleBasis`](super::MonopoleBasis),
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
    pub two_nu: i32,
    pub two_j_max: i32,
    /// Set by constructors of physical (self-adjoint) operators.
    pub hermitian: bool,
}

impl OperatorMatrix {
    pub fn zeros(n: usize, two_nu: i32, two_j_max: i32) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
            two_nu,
            two_j_max,
            hermitian: false,
        }
    }

    pub fn identity_like(other: &Self) -> Self {
        let mut m = Self::zeros(other.n, other.two_nu, other.two_j_max);
        for i in 0..m.n {
            m.data[i * m.n + i] = Complex64::new(1.0, 0.0);
        }
        m.hermitian = true;
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    fn same_shape(&self, other: &Self) -> Result<(), QuantumError> {
        if self.n == other.n && self.two_nu == other.two_nu && self.two_j_max == other.two_j_max {
            Ok(())
        } else {
            Err(QuantumError::ShapeMismatch(self.n, other.n))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self, QuantumError> {
        self.same_shape(other)?;
        Ok(self.with_data(self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect()))
    }

    fn with_data(&self, data: Vec<Complex64>) -> Self {
        Self {
            n: self.n,
            data,
            two_nu: self.two_nu,
            two_j_max: self.two_j_max,
            hermitian: false,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, QuantumError> {
        let mut out = self.zip_with(other, |a, b| a + b)?;
        out.hermitian = self.hermitian && other.hermitian;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QuantumError> {
        let mut out = self.zip_with(other, |a, b| a - b)?;
        out.hermitian = self.hermitian && other.hermitian;
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            hermitian: self.hermitian,
            ..self.with_data(self.data.iter().map(|a| a * s).collect())
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.with_data(self.data.iter().map(|a| a * s).collect())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.two_nu, self.two_j_max);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out.hermitian = self.hermitian;
        out
    }

    /// Matrix product, rows distributed over `exec`.
    pub fn matmul_with(&self, other: &Self, exec: Execution) -> Result<Self, QuantumError> {
        self.same_shape(other)?;
        let n = self.n;
        let rows = par::map_range(n, exec, |i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b = &other.data[k * n..(k + 1) * n];
                for (r, bv) in row.iter_mut().zip(b) {
                    *r += a * bv;
                }
            }
            row
        });
        let mut out = Self::zeros(n, self.two_nu, self.two_j_max);
        out.data = rows.into_iter().flatten().collect();
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, QuantumError> {
        self.matmul_with(other, Execution::best_available())
    }

    /// [X, Y] = XY − YX.
    pub fn commutator(&self, other: &Self) -> Result<Self, QuantumError> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// ½(XY + YX), Hermitian when X and Y are.
    pub fn symmetrized_product(&self, other: &Self) -> Result<Self, QuantumError> {
        let mut out = self.matmul(other)?.add(&other.matmul(self)?)?.scale(0.5);
        out.hermitian = self.hermitian && other.hermitian;
        Ok(out)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |X − X†|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.n;
        let mut r = 0.0f64;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        r
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Sub-matrix on the given indices.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut out = Self::zeros(k, self.two_nu, self.two_j_max);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * k + b] = self.data[i * self.n + j];
            }
        }
        out.hermitian = self.hermitian;
        out
    }
}
