use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::MonopoleBasis;
use super::matrix::OperatorMatrix;
use super::operators::{angular_momentum_matrices, multiplication_matrix, singular_multiplication_matrix};
use super::quadrature::{PolarRule, SphereQuadrature};
use super::QuantumError;
use crate::systems::{centres, r_generic, Geometry, SystemParams};

/// Node counts for the two kinds of multiplication operators.
///
/// Smooth polynomial operators (q̂_k, the Gram check) use a cosθ
/// Gauss–Legendre grid; the 1/√R operators are integrated on two grids
/// whose poles sit on the singular points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { n_theta: 128, n_phi: 128 }
    }
}

impl QuadratureConfig {
    pub fn doubled(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta,
            n_phi: 2 * self.n_phi,
        }
    }

    fn smooth(&self, basis: &MonopoleBasis) -> Result<SphereQuadrature, QuantumError> {
        // Exact for products of two basis sections and a linear function.
        let need = basis.two_j_max() as usize + 3;
        SphereQuadrature::new(self.n_theta.max(need), self.n_phi.max(2 * need), PolarRule::CosTheta)
    }
}

/// Result of comparing Ŝ = ½Σ(M̂_k q̂_k + q̂_k M̂_k) with a multiple of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMeasurement {
    /// Mean diagonal value on the interior.
    pub scalar: f64,
    /// max |Ŝ − scalar·Id| on the interior.
    pub residual: f64,
    /// max |Σ M̂_k q̂_k − Σ q̂_k M̂_k| over the whole basis.
    pub ordering_gap: f64,
}

impl SMeasurement {
    /// Whether the measured scalar is +ν or −ν; undecidable at ν = 0.
    pub fn sign_label(&self, nu: f64) -> &'static str {
        if nu == 0.0 {
            "nu=0"
        } else if self.scalar * nu > 0.0 {
            "+nu"
        } else {
            "-nu"
        }
    }
}

fn spherical(params: &SystemParams) -> Result<(), QuantumError> {
    if params.geometry == Geometry::Spherical {
        Ok(())
    } else {
        Err(QuantumError::Unsupported(format!(
            "quantum model is built for the sphere only, got {}",
            params.geometry.name()
        )))
    }
}

/// Matrices of the truncated model for fixed parameters and basis.
#[derive(Debug, Clone)]
pub struct QuantumModel {
    pub params: SystemParams,
    pub basis: MonopoleBasis,
    pub quadrature: QuadratureConfig,
    pub m: [OperatorMatrix; 3],
    pub q: [OperatorMatrix; 3],
    /// Multiplication by 1/√R.
    pub inv_sqrt_r: OperatorMatrix,
    /// Multiplication by q3/√R.
    pub q3_inv_sqrt_r: OperatorMatrix,
}

impl QuantumModel {
    pub fn new(params: SystemParams, basis: MonopoleBasis, quadrature: QuadratureConfig) -> Result<Self, QuantumError> {
        spherical(&params)?;
        let m = angular_momentum_matrices(&basis);
        let smooth = quadrature.smooth(&basis)?;
        let q = [0, 1, 2].map(|k| multiplication_matrix(move |x: &[f64; 3]| x[k], &basis, &smooth));
        let [q1, q2, q3] = q;
        let q = [q1?, q2?, q3?];

        let c = centres(&params).map_err(|e| QuantumError::Unsupported(e.to_string()))?;
        let pts = [c.plus, c.minus];
        let (nt, np) = (quadrature.n_theta, quadrature.n_phi);
        let inv = |x: &[f64; 3]| 1.0 / r_generic(x, &params).sqrt();
        let inv_sqrt_r = singular_multiplication_matrix(inv, pts, &basis, nt, np)?;
        let q3_inv_sqrt_r = singular_multiplication_matrix(move |x: &[f64; 3]| x[2] * inv(x), pts, &basis, nt, np)?;
        Ok(Self {
            params,
            basis,
            quadrature,
            m,
            q,
            inv_sqrt_r,
            q3_inv_sqrt_r,
        })
    }

    /// Σ M̂_k², built by products.
    pub fn casimir(&self) -> Result<OperatorMatrix, QuantumError> {
        let mut out = self.m[0].symmetrized_product(&self.m[0])?;
        for k in 1..3 {
            out = out.add(&self.m[k].symmetrized_product(&self.m[k])?)?;
        }
        Ok(out)
    }

    /// Ĥ = ½ Σ M̂_k² − μ/√R.
    pub fn hamiltonian(&self) -> Result<OperatorMatrix, QuantumError> {
        self.casimir()?.scale(0.5).sub(&self.inv_sqrt_r.scale(self.params.mu))
    }

    /// Ŝ = ½ Σ (M̂_k q̂_k + q̂_k M̂_k).
    pub fn s_operator(&self) -> Result<OperatorMatrix, QuantumError> {
        let mut out = self.m[0].symmetrized_product(&self.q[0])?;
        for k in 1..3 {
            out = out.add(&self.m[k].symmetrized_product(&self.q[k])?)?;
        }
        Ok(out)
    }

    /// F̂ = A M̂1² + B M̂2² + 2√(AB) ½(Ŝ M̂3 + M̂3 Ŝ) − 2μ√(AB) q3/√R.
    pub fn integral(&self) -> Result<OperatorMatrix, QuantumError> {
        let p = &self.params;
        let g = p.root_ab();
        let kinetic = self.m[0]
            .symmetrized_product(&self.m[0])?
            .scale(p.a)
            .add(&self.m[1].symmetrized_product(&self.m[1])?.scale(p.b))?;
        let mixed = self.s_operator()?.symmetrized_product(&self.m[2])?.scale(2.0 * g);
        kinetic.add(&mixed)?.sub(&self.q3_inv_sqrt_r.scale(2.0 * p.mu * g))
    }

    /// Interior (j ≤ j_max − 1) indices.
    pub fn interior(&self) -> Vec<usize> {
        self.basis.interior(self.basis.two_j_max() - 2)
    }

    pub fn measure_s(&self) -> Result<SMeasurement, QuantumError> {
        let s = self.s_operator()?.restrict(&self.interior());
        let scalar = s.trace().re / s.n as f64;
        let residual = s.sub(&OperatorMatrix::identity_like(&s).scale(scalar))?.max_abs();
        let (mut mq, mut qm) = (self.m[0].matmul(&self.q[0])?, self.q[0].matmul(&self.m[0])?);
        for k in 1..3 {
            mq = mq.add(&self.m[k].matmul(&self.q[k])?)?;
            qm = qm.add(&self.q[k].matmul(&self.m[k])?)?;
        }
        Ok(SMeasurement {
            scalar,
            residual,
            ordering_gap: mq.sub(&qm)?.max_abs(),
        })
    }

    /// max |⟨Y_a|Y_b⟩ − δ_ab| under the smooth quadrature.
    pub fn gram_residual(&self) -> Result<f64, QuantumError> {
        let quad = self.quadrature.smooth(&self.basis)?;
        let g = multiplication_matrix(|_: &[f64; 3]| 1.0, &self.basis, &quad)?;
        Ok(g.sub(&OperatorMatrix::identity_like(&g))?.max_abs())
    }

    /// max over k, l of |[M̂_k, M̂_l] − iε_{kln} M̂_n|.
    pub fn angular_momentum_residual(&self) -> Result<f64, QuantumError> {
        let mut worst = 0.0f64;
        for (k, l, n) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let c = self.m[k].commutator(&self.m[l])?;
            let r = c.sub(&self.m[n].scale_complex(Complex64::new(0.0, 1.0)))?;
            worst = worst.max(r.max_abs());
        }
        Ok(worst)
    }

    /// max over k, l of |[M̂_k, q̂_l] − iε_{kln} q̂_n| on the interior.
    pub fn mixed_commutator_residual(&self) -> Result<f64, QuantumError> {
        let idx = self.interior();
        let mut worst = 0.0f64;
        for k in 0..3 {
            for l in 0..3 {
                let mut c = self.m[k].commutator(&self.q[l])?;
                if k != l {
                    let n = 3 - k - l;
                    let sign = if (k + 1) % 3 == l { 1.0 } else { -1.0 };
                    c = c.sub(&self.q[n].scale_complex(Complex64::new(0.0, sign)))?;
                }
                worst = worst.max(c.restrict(&idx).max_abs());
            }
        }
        Ok(worst)
    }

    /// max |Σ q̂_k² − Id| on the interior.
    pub fn unit_sphere_residual(&self) -> Result<f64, QuantumError> {
        let mut s = self.q[0].matmul(&self.q[0])?;
        for k in 1..3 {
            s = s.add(&self.q[k].matmul(&self.q[k])?)?;
        }
        let s = s.restrict(&self.interior());
        Ok(s.sub(&OperatorMatrix::identity_like(&s))?.max_abs())
    }

    /// Largest Hermiticity residual among Ĥ, F̂ and the multiplication operators.
    pub fn hermiticity_residuals(&self) -> Result<Vec<(String, f64)>, QuantumError> {
        let mut out = vec![
            ("H".to_string(), self.hamiltonian()?.hermiticity_residual()),
            ("F".to_string(), self.integral()?.hermiticity_residual()),
            ("S".to_string(), self.s_operator()?.hermiticity_residual()),
            ("1/sqrt(R)".to_string(), self.inv_sqrt_r.hermiticity_residual()),
            ("q3/sqrt(R)".to_string(), self.q3_inv_sqrt_r.hermiticity_residual()),
        ];
        for k in 0..3 {
            out.push((format!("M{}", k + 1), self.m[k].hermiticity_residual()));
            out.push((format!("q{}", k + 1), self.q[k].hermiticity_residual()));
        }
        Ok(out)
    }
}

pub fn build_h(params: SystemParams, basis: &MonopoleBasis, quad: QuadratureConfig) -> Result<OperatorMatrix, QuantumError> {
    QuantumModel::new(params, basis.clone(), quad)?.hamiltonian()
}

pub fn build_f(params: SystemParams, basis: &MonopoleBasis, quad: QuadratureConfig) -> Result<OperatorMatrix, QuantumError> {
    QuantumModel::new(params, basis.clone(), quad)?.integral()
}

/// ‖P[H,F]P‖_F / (‖PHP‖_F ‖PFP‖_F) with P the projector onto j ≤ j_cut.
pub fn commutator_diagnostic(h: &OperatorMatrix, f: &OperatorMatrix, j_cut: f64) -> Result<f64, QuantumError> {
    let basis = MonopoleBasis::new(h.two_nu, h.two_j_max)?;
    let two_cut = (2.0 * j_cut).round() as i32;
    if (2.0 * j_cut - f64::from(two_cut)).abs() > 1e-9 || two_cut > h.two_j_max - 4 || two_cut < h.two_nu.abs() {
        return Err(QuantumError::InvalidBasis(format!(
            "j_cut = {j_cut} must be a level of the basis with j_cut ≤ j_max − 2 = {}",
            basis.j_max() - 2.0
        )));
    }
    let idx = basis.interior(two_cut);
    let c = h.commutator(f)?.restrict(&idx);
    let denom = h.restrict(&idx).frobenius() * f.restrict(&idx).frobenius();
    Ok(if denom > 0.0 { c.frobenius() / denom } else { c.frobenius() })
}

/// The (j, m) carrying the largest weight in `v`.
pub fn dominant_label(basis: &MonopoleBasis, v: &[Complex64]) -> (f64, f64) {
    let k = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map_or(0, |(k, _)| k);
    let s = basis.states()[k];
    (s.j(), s.m())
}

#[cfg(test)]
mod tests {
    use super::super::eigen::eigen_spectrum;
    use super::*;

    fn model(a: f64, b: f64, mu: f64, two_nu: i32, two_j_max: i32, n: usize) -> QuantumModel {
        let p = SystemParams::spherical(a, b, mu).unwrap();
        let basis = MonopoleBasis::new(two_nu, two_j_max).unwrap();
        QuantumModel::new(p, basis, QuadratureConfig { n_theta: n, n_phi: n }).unwrap()
    }

    #[test]
    fn kinetic_spectrum_is_casimir() {
        for two_nu in [0, 1, 2] {
            let m = model(2.0, 1.0, 0.0, two_nu, 12 + two_nu, 32);
            let spec = eigen_spectrum(&m.hamiltonian().unwrap()).unwrap();
            let mut expected = Vec::new();
            for tj in (two_nu..=12 + two_nu).step_by(2) {
                let j = f64::from(tj) / 2.0;
                expected.extend(std::iter::repeat(j * (j + 1.0) / 2.0).take(tj as usize + 1));
            }
            assert_eq!(spec.values.len(), expected.len());
            for (v, e) in spec.values.iter().zip(&expected) {
                assert!((v - e).abs() < 1e-10, "{v} vs {e}");
            }
        }
    }

    #[test]
    fn half_integer_ground_level() {
        let m = model(2.0, 1.0, 0.0, 1, 7, 32);
        let spec = eigen_spectrum(&m.hamiltonian().unwrap()).unwrap();
        assert!((spec.values[0] - 0.375).abs() < 1e-12 && (spec.values[1] - 0.375).abs() < 1e-12);
        assert!(spec.values[2] > 1.0);
    }

    #[test]
    fn structure_residuals() {
        for two_nu in [0, 1, 2, -1] {
            let m = model(2.0, 1.0, 1.0, two_nu, 8 + two_nu.abs(), 48);
            assert!(m.gram_residual().unwrap() < 1e-12);
            assert!(m.angular_momentum_residual().unwrap() < 1e-12);
            assert!(m.mixed_commutator_residual().unwrap() < 1e-10);
            assert!(m.unit_sphere_residual().unwrap() < 1e-10);
            let s = m.measure_s().unwrap();
            assert!(s.residual < 1e-10, "{s:?}");
            assert!((s.scalar.abs() - f64::from(two_nu).abs() / 2.0).abs() < 1e-10, "{s:?}");
            assert!(s.ordering_gap < 1e-10);
        }
    }

    #[test]
    fn kinetic_only_commutator_is_zero() {
        let m = model(2.0, 1.0, 0.0, 0, 12, 32);
        let (h, f) = (m.hamiltonian().unwrap(), m.integral().unwrap());
        assert!(h.commutator(&f).unwrap().max_abs() < 1e-12);
        assert!(commutator_diagnostic(&h, &f, 4.0).unwrap() < 1e-12);
    }

    #[test]
    fn diagnostic_is_symmetric_and_checks_cut() {
        let m = model(2.0, 1.0, 1.0, 0, 10, 64);
        let (h, f) = (m.hamiltonian().unwrap(), m.integral().unwrap());
        let a = commutator_diagnostic(&h, &f, 3.0).unwrap();
        let b = commutator_diagnostic(&f, &h, 3.0).unwrap();
        assert_eq!(a, b);
        assert!(commutator_diagnostic(&h, &f, 4.0).is_err());
    }

    #[test]
    fn hermitian_operators() {
        let m = model(2.0, 1.0, 1.0, 1, 7, 64);
        for (name, r) in m.hermiticity_residuals().unwrap() {
            assert!(r < 1e-12, "{name}: {r}");
        }
    }

    #[test]
    fn hamiltonian_matches_laplacian_route() {
        let m = model(2.0, 1.0, 1.0, 0, 12, 64);
        let quad = SphereQuadrature::new(24, 24, PolarRule::CosTheta).unwrap();
        let lap = super::super::operators::laplacian_kinetic_matrix(&m.basis, &quad).unwrap();
        let route = lap.sub(&m.inv_sqrt_r.scale(m.params.mu)).unwrap();
        assert!(route.sub(&m.hamiltonian().unwrap()).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn singular_operator_converges_under_doubling() {
        let coarse = model(2.0, 1.0, 1.0, 1, 17, 128);
        let fine = model(2.0, 1.0, 1.0, 1, 17, 256);
        let d = coarse.inv_sqrt_r.sub(&fine.inv_sqrt_r).unwrap().max_abs();
        assert!(d < 1e-4 * fine.inv_sqrt_r.max_abs(), "{d}");
        let d = coarse.q3_inv_sqrt_r.sub(&fine.q3_inv_sqrt_r).unwrap().max_abs();
        assert!(d < 1e-4 * fine.q3_inv_sqrt_r.max_abs(), "{d}");
    }

    #[test]
    fn commutator_shrinks_with_cutoff() {
        for two_nu in [0, 1] {
            let values: Vec<f64> = [16, 24, 32]
                .iter()
                .map(|tj| {
                    let m = model(2.0, 1.0, 1.0, two_nu, tj + two_nu, 128);
                    let (h, f) = (m.hamiltonian().unwrap(), m.integral().unwrap());
                    commutator_diagnostic(&h, &f, 6.0 + f64::from(two_nu) / 2.0).unwrap()
                })
                .collect();
            assert!(values[0] > values[1] && values[1] > values[2], "{values:?}");
        }
    }
}
