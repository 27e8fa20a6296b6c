use num_complex::Complex64;

use super::basis::{harmonic_norm, wigner_d, MonopoleBasis};
use super::matrix::OperatorMatrix;
use super::quadrature::{PolarRule, SphereQuadrature};
use super::QuantumError;
use crate::algebra::{Dual, Vec3};
use crate::par::{self, Execution};

/// χ_i = d_j^{2k}/(d_1^{2k}+d_2^{2k}); the piece carried to the other centre
/// then vanishes like d^{2k−1} at its far centre. k = 3 measured best at
/// 128 nodes (k = 1: 1e-5, k = 3: 1e-9 change under doubling).
const PARTITION_POWER: i32 = 3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// (M̂1, M̂2, M̂3) with the standard ladder coefficients; block-diagonal in j.
pub fn angular_momentum_matrices(basis: &MonopoleBasis) -> [OperatorMatrix; 3] {
    let n = basis.dim();
    let blank = OperatorMatrix::zeros(n, basis.two_nu(), basis.two_j_max());
    let (mut m1, mut m2, mut m3) = (blank.clone(), blank.clone(), blank);
    for (col, s) in basis.states().iter().enumerate() {
        m3.set(col, col, Complex64::new(s.m(), 0.0));
        if s.two_m < s.two_j {
            let row = col + 1;
            let (j, m) = (s.j(), s.m());
            let c = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            // M+ = M1 + iM2 raises m; M1 = (M+ + M−)/2, M2 = (M+ − M−)/2i.
            m1.set(row, col, Complex64::new(0.5 * c, 0.0));
            m1.set(col, row, Complex64::new(0.5 * c, 0.0));
            m2.set(row, col, Complex64::new(0.0, -0.5 * c));
            m2.set(col, row, Complex64::new(0.0, 0.5 * c));
        }
    }
    for m in [&mut m1, &mut m2, &mut m3] {
        m.hermitian = true;
    }
    [m1, m2, m3]
}

/// Rotation about the q2 axis taking the pole e3 to (sin β, 0, cos β).
fn rotate_y(beta: f64, x: [f64; 3]) -> [f64; 3] {
    let (s, c) = beta.sin_cos();
    [c * x[0] + s * x[2], x[1], -s * x[0] + c * x[2]]
}

/// ⟨Y_a | f | Y_b⟩ where the quadrature grid is laid out in a frame whose
/// pole sits at R_y(β) e3. Computed in that frame with the azimuthal sums
/// done once per polar node, then rotated back with Wigner-d blocks.
fn matrix_in_frame<F>(
    f: &F,
    basis: &MonopoleBasis,
    quad: &SphereQuadrature,
    beta: f64,
    exec: Execution,
) -> Result<OperatorMatrix, QuantumError>
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    let states = basis.states();
    let n = basis.dim();
    let two_s = basis.two_s();
    let max_dm = basis.two_j_max() as usize; // |m_b − m_a| ≤ 2 j_max
    let width = 2 * max_dm + 1;

    // G[k][Δm + max_dm] = Σ_l Δφ e^{iΔm φ_l} f(x_kl)
    let rows: Vec<Result<Vec<Complex64>, QuantumError>> = par::map_range(quad.n_theta, exec, |k| {
        let th = quad.theta[k];
        let (st, ct) = th.sin_cos();
        let mut g = vec![ZERO; width];
        for l in 0..quad.n_phi {
            let ph = quad.phi(l);
            let x = rotate_y(beta, [st * ph.cos(), st * ph.sin(), ct]);
            let v = f(&x);
            if !v.is_finite() {
                return Err(QuantumError::NodeCollision { theta: th, phi: ph });
            }
            let v = v * quad.phi_weight();
            for (d, gd) in g.iter_mut().enumerate() {
                let dm = d as f64 - max_dm as f64;
                *gd += Complex64::from_polar(v, dm * ph);
            }
        }
        Ok(g)
    });
    let g: Vec<Vec<Complex64>> = rows.into_iter().collect::<Result<_, _>>()?;

    // Weighted, normalised d-functions at each polar node.
    let dvals: Vec<Vec<f64>> = (0..quad.n_theta)
        .map(|k| {
            states
                .iter()
                .map(|s| harmonic_norm(s.two_j) * wigner_d(s.two_j, s.two_m, two_s, quad.theta[k]))
                .collect()
        })
        .collect();

    let upper: Vec<Vec<Complex64>> = par::map_range(n, exec, |a| {
        (a..n)
            .map(|b| {
                let dm = (states[b].two_m - states[a].two_m) / 2;
                let idx = (dm + max_dm as i32) as usize;
                (0..quad.n_theta)
                    .map(|k| g[k][idx] * (quad.weight[k] * dvals[k][a] * dvals[k][b]))
                    .sum()
            })
            .collect()
    });
    let mut rot = OperatorMatrix::zeros(n, basis.two_nu(), basis.two_j_max());
    for (a, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let b = a + off;
            rot.set(a, b, v);
            rot.set(b, a, v.conj());
        }
    }
    if beta == 0.0 {
        rot.hermitian = true;
        return Ok(rot);
    }

    // Y_{jm}(R x') = Σ_{m'} d^j_{m' m}(−β) Y_{jm'}(x'), so M = Dᵀ M' D.
    let dmat = |a: usize, b: usize| -> f64 {
        let (sa, sb) = (states[a], states[b]);
        if sa.two_j != sb.two_j {
            0.0
        } else {
            wigner_d(sa.two_j, sa.two_m, sb.two_m, -beta)
        }
    };
    let blocks: Vec<std::ops::Range<usize>> = (basis.two_nu().abs()..=basis.two_j_max())
        .step_by(2)
        .map(|tj| basis.block(tj))
        .collect();
    let d_blocks: Vec<Vec<f64>> = blocks
        .iter()
        .map(|r| {
            let mut v = Vec::with_capacity(r.len() * r.len());
            for a in r.clone() {
                for b in r.clone() {
                    v.push(dmat(a, b));
                }
            }
            v
        })
        .collect();
    let mut out = OperatorMatrix::zeros(n, basis.two_nu(), basis.two_j_max());
    for (bi, ri) in blocks.iter().enumerate() {
        for (bj, rj) in blocks.iter().enumerate().skip(bi) {
            let (ni, nj) = (ri.len(), rj.len());
            // tmp = M'_{ij} D_j
            let mut tmp = vec![ZERO; ni * nj];
            for p in 0..ni {
                for r in 0..nj {
                    let mut acc = ZERO;
                    for q in 0..nj {
                        acc += rot.get(ri.start + p, rj.start + q) * d_blocks[bj][q * nj + r];
                    }
                    tmp[p * nj + r] = acc;
                }
            }
            for c in 0..ni {
                for r in 0..nj {
                    let mut acc = ZERO;
                    for p in 0..ni {
                        acc += tmp[p * nj + r] * d_blocks[bi][p * ni + c];
                    }
                    out.set(ri.start + c, rj.start + r, acc);
                    out.set(rj.start + r, ri.start + c, acc.conj());
                }
            }
        }
    }
    out.hermitian = true;
    Ok(out)
}

/// Matrix of multiplication by a real function on the unit sphere, with
/// `quad` laid out in the original frame.
pub fn multiplication_matrix<F>(f: F, basis: &MonopoleBasis, quad: &SphereQuadrature) -> Result<OperatorMatrix, QuantumError>
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    matrix_in_frame(&f, basis, quad, 0.0, Execution::best_available())
}

/// Same as [`multiplication_matrix`] with the grid rotated by β about the
/// q2 axis, so the grid pole sits at (sin β, 0, cos β).
pub fn multiplication_matrix_rotated<F>(
    f: F,
    basis: &MonopoleBasis,
    quad: &SphereQuadrature,
    beta: f64,
) -> Result<OperatorMatrix, QuantumError>
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    matrix_in_frame(&f, basis, quad, beta, Execution::best_available())
}

/// Multiplication by f with integrable 1/ρ singularities at two points of
/// the q1q3 great circle.
///
/// f is split by a C∞ partition of unity χ1 + χ2 = 1 with χ_i ≡ 1 near
/// centre i and ≡ 0 near the other one, and each piece is integrated on a
/// grid whose pole is its own singular point, in θ-Gauss–Legendre so the
/// area element cancels the singularity.
pub fn singular_multiplication_matrix<F>(
    f: F,
    centres: [Vec3; 2],
    basis: &MonopoleBasis,
    n_theta: usize,
    n_phi: usize,
) -> Result<OperatorMatrix, QuantumError>
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    for c in &centres {
        if c[1].abs() > 1e-14 {
            return Err(QuantumError::Unsupported(
                "singular points must lie on the q1q3 great circle".into(),
            ));
        }
    }
    let quad = SphereQuadrature::new(n_theta, n_phi, PolarRule::Theta)?;
    let dist2 = |x: &[f64; 3], c: &Vec3| (0..3).map(|i| (x[i] - c[i]).powi(2)).sum::<f64>();
    let weight = |x: &[f64; 3], c: &Vec3| dist2(x, c).powi(PARTITION_POWER);
    let mut total: Option<OperatorMatrix> = None;
    for (i, c) in centres.iter().enumerate() {
        let other = centres[1 - i];
        let piece = |x: &[f64; 3]| {
            let (w_own, w_other) = (weight(x, c), weight(x, &other));
            f(x) * w_other / (w_own + w_other)
        };
        let beta = c[0].atan2(c[2]);
        let m = matrix_in_frame(&piece, basis, &quad, beta, Execution::best_available())?;
        total = Some(match total {
            None => m,
            Some(t) => t.add(&m)?,
        });
    }
    let mut out = total.expect("two centres");
    out.hermitian = true;
    Ok(out)
}

/// Kinetic matrix of −½Δ (ν = 0) from ½∫ ∇Ȳ_a·∇Y_b dS, with θ-derivatives
/// of the Wigner functions taken by dual numbers.
pub fn laplacian_kinetic_matrix(basis: &MonopoleBasis, quad: &SphereQuadrature) -> Result<OperatorMatrix, QuantumError> {
    if basis.two_nu() != 0 {
        return Err(QuantumError::Unsupported("the Laplacian route needs ν = 0".into()));
    }
    let states = basis.states();
    let n = basis.dim();
    let mut out = OperatorMatrix::zeros(n, 0, basis.two_j_max());
    for k in 0..quad.n_theta {
        let th = Dual::<f64, 1>::variable(quad.theta[k], 0);
        let vals: Vec<(f64, f64)> = states
            .iter()
            .map(|s| {
                let d = wigner_d(s.two_j, s.two_m, 0, th);
                let c = harmonic_norm(s.two_j);
                (c * d.re, c * d.eps[0])
            })
            .collect();
        let sin2 = quad.theta[k].sin().powi(2);
        let w = 0.5 * 2.0 * std::f64::consts::PI * quad.weight[k];
        for a in 0..n {
            for b in 0..n {
                if states[a].two_m != states[b].two_m {
                    continue;
                }
                let m = states[a].m();
                let v = vals[a].1 * vals[b].1 + m * m * vals[a].0 * vals[b].0 / sin2;
                let cur = out.get(a, b);
                out.set(a, b, cur + w * v);
            }
        }
    }
    out.hermitian = true;
    Ok(out)
}
