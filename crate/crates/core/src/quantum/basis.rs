use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuantumError;
use crate::algebra::Real;

/// One basis state |j, m⟩, stored as doubled integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub two_j: i32,
    pub two_m: i32,
}

impl State {
    pub fn j(&self) -> f64 {
        0.5 * f64::from(self.two_j)
    }
    pub fn m(&self) -> f64 {
        0.5 * f64::from(self.two_m)
    }
}

/// Monopole harmonics |j, m⟩ for j = |ν|, |ν|+1, …, j_max, m = −j … j,
/// ordered by j then m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonopoleBasis {
    two_nu: i32,
    two_j_max: i32,
    states: Vec<State>,
}

/// Checks that `value` is an integer multiple of ½ and returns twice it.
pub fn doubled(value: f64, what: &str) -> Result<i32, QuantumError> {
    let two = 2.0 * value;
    if two.is_finite() && (two - two.round()).abs() < 1e-12 && two.abs() < 1e6 {
        Ok(two.round() as i32)
    } else if what == "ν" {
        Err(QuantumError::DiracCondition(two))
    } else {
        Err(QuantumError::InvalidBasis(format!("2{what} must be an integer, got {two}")))
    }
}

impl MonopoleBasis {
    pub fn new(two_nu: i32, two_j_max: i32) -> Result<Self, QuantumError> {
        let two_j_min = two_nu.abs();
        if two_j_max < two_j_min || (two_j_max - two_j_min) % 2 != 0 {
            return Err(QuantumError::InvalidBasis(format!(
                "j_max = {} must be |ν| + k for an integer k ≥ 0 (ν = {})",
                0.5 * f64::from(two_j_max),
                0.5 * f64::from(two_nu)
            )));
        }
        let mut states = Vec::new();
        for two_j in (two_j_min..=two_j_max).step_by(2) {
            for two_m in (-two_j..=two_j).step_by(2) {
                states.push(State { two_j, two_m });
            }
        }
        Ok(Self {
            two_nu,
            two_j_max,
            states,
        })
    }

    /// From real ν and j_max; 2ν must be an integer.
    pub fn from_values(nu: f64, j_max: f64) -> Result<Self, QuantumError> {
        let two_nu = doubled(nu, "ν")?;
        let two_j_max = doubled(j_max, "j_max")?;
        Self::new(two_nu, two_j_max)
    }

    pub fn two_nu(&self) -> i32 {
        self.two_nu
    }

    pub fn nu(&self) -> f64 {
        0.5 * f64::from(self.two_nu)
    }

    pub fn two_j_max(&self) -> i32 {
        self.two_j_max
    }

    pub fn j_max(&self) -> f64 {
        0.5 * f64::from(self.two_j_max)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn index_of(&self, two_j: i32, two_m: i32) -> Option<usize> {
        self.states.iter().position(|s| s.two_j == two_j && s.two_m == two_m)
    }

    /// Indices of the states with j ≤ j_cut.
    pub fn interior(&self, two_j_cut: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.states[i].two_j <= two_j_cut).collect()
    }

    /// Index range of the block with the given j.
    pub fn block(&self, two_j: i32) -> std::ops::Range<usize> {
        let start = self.states.iter().position(|s| s.two_j == two_j).unwrap_or(self.dim());
        let len = if start < self.dim() { two_j as usize + 1 } else { 0 };
        start..start + len
    }

    /// Doubled spin weight s of the sections: Y ∝ e^{imφ} d^j_{m s}(θ).
    pub fn two_s(&self) -> i32 {
        self.two_nu
    }
}

fn binomial(n: i32, k: i32) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence.
pub fn jacobi<T: Real>(n: i32, a: i32, b: i32, x: T) -> T {
    let (a, b) = (f64::from(a), f64::from(b));
    let mut p0 = T::cst(1.0);
    if n == 0 {
        return p0;
    }
    let mut p1 = (x - 1.0) * (0.5 * (a + b + 2.0)) + (a + 1.0);
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = ((x * c1 + c2) * p1 - p0 * c3) / c0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Wigner small-d function d^j_{m' m}(θ), arguments doubled.
pub fn wigner_d<T: Real>(two_j: i32, two_mp: i32, two_m: i32, theta: T) -> T {
    let jpm = (two_j + two_m) / 2;
    let jmm = (two_j - two_m) / 2;
    let jpmp = (two_j + two_mp) / 2;
    let jmmp = (two_j - two_mp) / 2;
    let k = jpm.min(jmm).min(jpmp).min(jmmp);
    let dm = (two_mp - two_m) / 2;
    let (a, lambda) = if k == jpm {
        (dm, dm)
    } else if k == jmm {
        (-dm, 0)
    } else if k == jpmp {
        (-dm, 0)
    } else {
        (dm, dm)
    };
    let b = two_j - 2 * k - a;
    let sign = if lambda.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let coef = sign * (binomial(two_j - k, k + a) / binomial(k + b, b)).sqrt();
    let half = theta * 0.5;
    half.sin().powi(a as u32) * half.cos().powi(b as u32) * jacobi(k, a, b, theta.cos()) * coef
}

/// Normalization √((2j+1)/4π).
pub fn harmonic_norm(two_j: i32) -> f64 {
    ((f64::from(two_j) + 1.0) / (4.0 * std::f64::consts::PI)).sqrt()
}

/// Monopole harmonic Y^ν_{jm}(θ, φ) = √((2j+1)/4π) e^{imφ} d^j_{m ν}(θ).
///
/// The phase e^{imφ} belongs to the gauge A = −ν cosθ dφ, singular at both
/// poles; for half-integer ν the sections change sign once around the axis.
/// ν = 0 gives the Condon–Shortley spherical harmonics.
pub fn monopole_harmonic(nu: f64, j: f64, m: f64, theta: f64, phi: f64) -> Result<Complex64, QuantumError> {
    let two_nu = doubled(nu, "ν")?;
    let two_j = doubled(j, "j")?;
    let two_m = doubled(m, "m")?;
    if two_j < two_nu.abs() || two_m.abs() > two_j || (two_j - two_nu) % 2 != 0 || (two_j - two_m) % 2 != 0 {
        return Err(QuantumError::InvalidQuantumNumbers { nu, j, m });
    }
    let d = wigner_d(two_j, two_m, two_nu, theta);
    let phase = 0.5 * f64::from(two_m) * phi;
    Ok(Complex64::from_polar(harmonic_norm(two_j) * d, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn dirac_condition() {
        let e = MonopoleBasis::from_values(0.4, 3.0).unwrap_err();
        assert!(e.to_string().contains("2ν must be an integer"), "{e}");
        assert!(MonopoleBasis::from_values(0.5, 3.0).is_err());
        let b = MonopoleBasis::from_values(0.5, 3.5).unwrap();
        assert_eq!(b.dim(), 2 + 4 + 6 + 8);
        assert_eq!(b.states()[0], State { two_j: 1, two_m: -1 });
    }

    #[test]
    fn small_d_values() {
        let t = 0.7f64;
        assert_abs_diff_eq!(wigner_d(1, 1, 1, t), (t / 2.0).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(1, 1, -1, t), -(t / 2.0).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(1, -1, 1, t), (t / 2.0).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(2, 2, 0, t), -t.sin() / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(2, 0, 0, t), t.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(2, 2, 2, t), (1.0 + t.cos()) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_d(4, 0, 0, t), 0.5 * (3.0 * t.cos().powi(2) - 1.0), epsilon = 1e-15);
    }

    #[test]
    fn small_d_is_orthogonal() {
        // Σ_k d^j_{m k}(θ) d^j_{m' k}(θ) = δ_{m m'}
        let t = 1.1;
        for two_j in [7, 10] {
            for mp in (-two_j..=two_j).step_by(2) {
                for m in (-two_j..=two_j).step_by(2) {
                    let s: f64 = (-two_j..=two_j)
                        .step_by(2)
                        .map(|k| wigner_d(two_j, mp, k, t) * wigner_d(two_j, m, k, t))
                        .sum();
                    assert_abs_diff_eq!(s, if m == mp { 1.0 } else { 0.0 }, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        let y = monopole_harmonic(0.0, 0.0, 0.0, 0.3, 1.0).unwrap();
        assert_abs_diff_eq!(y.re, 1.0 / (4.0 * PI).sqrt(), epsilon = 1e-15);
        // Y_10 = √(3/4π) cos θ, Y_11 = −√(3/8π) sin θ e^{iφ}
        let (t, p) = (0.8, 0.4);
        let y10 = monopole_harmonic(0.0, 1.0, 0.0, t, p).unwrap();
        assert_abs_diff_eq!(y10.re, (3.0 / (4.0 * PI)).sqrt() * t.cos(), epsilon = 1e-15);
        let y11 = monopole_harmonic(0.0, 1.0, 1.0, t, p).unwrap();
        let expect = Complex64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * t.sin(), p);
        assert_abs_diff_eq!((y11 - expect).norm(), 0.0, epsilon = 1e-15);
        assert!(monopole_harmonic(0.5, 1.0, 0.0, t, p).is_err());
        assert!(monopole_harmonic(1.0, 0.0, 0.0, t, p).is_err());
    }

    #[test]
    fn addition_theorem_and_gram() {
        let basis = MonopoleBasis::new(1, 7).unwrap();
        let (nodes, weights) = crate::quantum::gauss_legendre(64);
        let n_phi = 64;
        // Σ_m |Y_{jm}|² = (2j+1)/4π at every point.
        for tj in (1..=7).step_by(2) {
            for x in nodes.iter().step_by(7) {
                let values: Vec<f64> = (0..n_phi)
                    .map(|l| {
                        let phi = 2.0 * PI * (l as f64 + 0.5) / n_phi as f64;
                        (-tj..=tj)
                            .step_by(2)
                            .map(|tm| monopole_harmonic(0.5, f64::from(tj) / 2.0, f64::from(tm) / 2.0, x.acos(), phi).unwrap().norm_sqr())
                            .sum()
                    })
                    .collect();
                let mean = values.iter().sum::<f64>() / n_phi as f64;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n_phi as f64;
                assert!(var < 1e-10, "{var}");
                assert_abs_diff_eq!(mean, f64::from(tj + 1) / (4.0 * PI), epsilon = 1e-12);
            }
        }
        // Gram matrix straight from the harmonics.
        let states = basis.states();
        let mut worst = 0.0f64;
        for (a, sa) in states.iter().enumerate() {
            for (b, sb) in states.iter().enumerate().skip(a) {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, w) in nodes.iter().zip(&weights) {
                    for l in 0..n_phi {
                        let phi = 2.0 * PI * (l as f64 + 0.5) / n_phi as f64;
                        let ya = monopole_harmonic(0.5, sa.j(), sa.m(), x.acos(), phi).unwrap();
                        let yb = monopole_harmonic(0.5, sb.j(), sb.m(), x.acos(), phi).unwrap();
                        acc += ya.conj() * yb * (w * 2.0 * PI / n_phi as f64);
                    }
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        assert!(worst < 1e-8, "{worst}");
    }
}
