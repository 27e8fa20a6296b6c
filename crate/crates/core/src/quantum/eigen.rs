use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::OperatorMatrix;
use super::QuantumError;

/// Hermitian input is required to within this multiple of max |X_ij|.
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi diagonalisation of a real symmetric matrix (row-major,
/// overwritten). Returns eigenvalues and the rotation matrix whose columns
/// are the eigenvectors.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>, usize) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    for sweep in 1..=100 {
        sweeps = sweep;
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v, sweeps)
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
///
/// Works on the real symmetric embedding [[Re, −Im], [Im, Re]], in which
/// every eigenvalue appears twice; the complex eigenvectors of each
/// degenerate cluster are recovered by Gram–Schmidt on (x + iy).
pub fn eigen_spectrum(x: &OperatorMatrix) -> Result<Spectrum, QuantumError> {
    let res = x.hermiticity_residual();
    if !x.hermitian || res > HERMITIAN_TOL * x.max_abs().max(1.0) {
        return Err(QuantumError::NotHermitian(res));
    }
    let n = x.n;
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            // Hermitian part, so the embedding is exactly symmetric.
            let z = 0.5 * (x.get(i, j) + x.get(j, i).conj());
            a[i * m + j] = z.re;
            a[i * m + n + j] = -z.im;
            a[(n + i) * m + j] = z.im;
            a[(n + i) * m + n + j] = z.re;
        }
    }
    let (vals, vecs, sweeps) = jacobi_symmetric(&mut a, m);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));

    let tol = 1e-9 * vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && vals[order[end]] - vals[order[end - 1]] <= tol {
            end += 1;
        }
        let cluster = &order[start..end];
        let want = cluster.len() / 2;
        let mut found: Vec<Vec<Complex64>> = Vec::new();
        for &c in cluster {
            if found.len() == want {
                break;
            }
            let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(vecs[i * m + c], vecs[(n + i) * m + c])).collect();
            // Two passes of Gram–Schmidt against the vectors already kept.
            for _ in 0..2 {
                for u in &found {
                    let proj = cdot(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = cdot(&v, &v).re.sqrt();
            if norm > 1e-6 {
                found.push(v.into_iter().map(|z| z / norm).collect());
            }
        }
        if found.len() != want || cluster.len() % 2 != 0 {
            return Err(QuantumError::Eigen(format!(
                "could not resolve a cluster of {} embedded eigenvalues near {}",
                cluster.len(),
                vals[cluster[0]]
            )));
        }
        for (k, v) in found.into_iter().enumerate() {
            let mean = cluster.iter().map(|&c| vals[c]).sum::<f64>() / cluster.len() as f64;
            let _ = k;
            values.push(mean);
            vectors.push(v);
        }
        start = end;
    }
    Ok(Spectrum { values, vectors, sweeps })
}

impl Spectrum {
    /// max_k ‖X v_k − λ_k v_k‖.
    pub fn residual(&self, x: &OperatorMatrix) -> f64 {
        let n = x.n;
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(lam, v)| {
                (0..n)
                    .map(|i| {
                        let xv: Complex64 = (0..n).map(|j| x.get(i, j) * v[j]).sum();
                        (xv - v[i] * lam).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}
