use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::QuantumError;

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pm) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// How the polar direction is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarRule {
    /// Gauss–Legendre in cos θ: exact for polynomial integrands.
    CosTheta,
    /// Gauss–Legendre in θ ∈ [0, π] with the sin θ Jacobian in the weight:
    /// spectral for integrands with a 1/ρ singularity at the pole.
    Theta,
}

/// Product rule on the unit sphere: polar nodes × n_φ uniform azimuths
/// φ_l = φ0 + 2πl/n_φ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub n_theta: usize,
    pub n_phi: usize,
    pub phi_offset: f64,
    pub rule: PolarRule,
    /// Polar angles of the nodes.
    pub theta: Vec<f64>,
    /// Polar weights (area element included); Σ = 2.
    pub weight: Vec<f64>,
}

impl SphereQuadrature {
    /// Azimuthal offset π/n_φ keeps nodes off the half-plane φ = 0, where
    /// both centres lie.
    pub fn new(n_theta: usize, n_phi: usize, rule: PolarRule) -> Result<Self, QuantumError> {
        if n_theta < 2 || n_phi < 2 {
            return Err(QuantumError::InvalidQuadrature(format!(
                "need at least 2 nodes per direction, got n_θ = {n_theta}, n_φ = {n_phi}"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        let (theta, weight) = match rule {
            PolarRule::CosTheta => (x.iter().map(|c| c.acos()).collect(), w),
            PolarRule::Theta => {
                let th: Vec<f64> = x.iter().map(|c| 0.5 * PI * (c + 1.0)).collect();
                let wt = th.iter().zip(&w).map(|(t, wi)| 0.5 * PI * wi * t.sin()).collect();
                (th, wt)
            }
        };
        Ok(Self {
            n_theta,
            n_phi,
            phi_offset: PI / n_phi as f64,
            rule,
            theta,
            weight,
        })
    }

    pub fn phi(&self, l: usize) -> f64 {
        self.phi_offset + 2.0 * PI * l as f64 / self.n_phi as f64
    }

    pub fn phi_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn total_weight(&self) -> f64 {
        self.weight.iter().sum::<f64>() * self.phi_weight() * self.n_phi as f64
    }
}
