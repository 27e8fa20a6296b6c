//! Checks on the truncated quantum model.

use serde::{Deserialize, Serialize};

use super::Check;
use crate::quantum::{
    commutator_diagnostic, eigen_spectrum, MonopoleBasis, QuadratureConfig, QuantumError, QuantumModel, SMeasurement,
};
use crate::systems::SystemParams;

pub const SPECTRUM_TOL: f64 = 1e-10;
pub const GRAM_TOL: f64 = 1e-8;
pub const ALGEBRA_TOL: f64 = 1e-12;
pub const INTERIOR_TOL: f64 = 1e-6;

/// μ = 0 spectrum against j(j+1)/2 with multiplicity 2j+1.
pub fn kinetic_spectrum_check(a: f64, b: f64, basis: &MonopoleBasis, quad: QuadratureConfig) -> Result<Check, QuantumError> {
    let p = SystemParams::spherical(a, b, 0.0).map_err(|e| QuantumError::Unsupported(e.to_string()))?;
    let model = QuantumModel::new(p, basis.clone(), quad)?;
    let spectrum = eigen_spectrum(&model.hamiltonian()?)?;
    let expected: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| 0.5 * s.j() * (s.j() + 1.0))
        .collect();
    let err = spectrum
        .values
        .iter()
        .zip(&expected)
        .map(|(v, e)| (v - e).abs())
        .fold(0.0, f64::max);
    let err = if spectrum.values.len() == expected.len() { err } else { f64::INFINITY };
    Ok(Check::assert(
        format!("kinetic spectrum j(j+1)/2, nu={} j_max={}", basis.nu(), basis.j_max()),
        err,
        SPECTRUM_TOL,
    ))
}

/// Gram, angular-momentum algebra, interior identities and the Ŝ scalar.
pub fn structure_checks(model: &QuantumModel) -> Result<(Vec<Check>, SMeasurement), QuantumError> {
    let nu = model.basis.nu();
    let tag = format!("nu={} j_max={}", nu, model.basis.j_max());
    let s = model.measure_s()?;
    let sign = s.sign_label(nu);
    let mut out = vec![
        Check::assert(format!("Gram residual {tag}"), model.gram_residual()?, GRAM_TOL),
        Check::assert(format!("[M_k,M_l] = i eps M_n {tag}"), model.angular_momentum_residual()?, ALGEBRA_TOL),
        Check::assert(format!("interior sum q_k^2 = Id {tag}"), model.unit_sphere_residual()?, INTERIOR_TOL),
        Check::assert(format!("interior [M_k,q_l] = i eps q_n {tag}"), model.mixed_commutator_residual()?, INTERIOR_TOL),
        Check::assert(format!("S = scalar Id on interior {tag}"), s.residual, INTERIOR_TOL),
        Check::assert(format!("| |S| - |nu| | {tag}"), (s.scalar.abs() - nu.abs()).abs(), INTERIOR_TOL)
            .with_detail(format!("S = {:.6e} ({sign})", s.scalar)),
        Check::assert(format!("sum M_k q_k - sum q_k M_k {tag}"), s.ordering_gap, ALGEBRA_TOL),
    ];
    for (name, r) in model.hermiticity_residuals()? {
        out.push(Check::assert(format!("Hermiticity {name} {tag}"), r, 1e-10));
    }
    Ok((out, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorRow {
    pub j_max: f64,
    pub dim: usize,
    pub j_cut: f64,
    pub value: f64,
}

/// Interior commutator diagnostic over increasing cutoffs; the check asks
/// for a strictly decreasing series.
/// Commutator values below this are treated as exact zeros.
pub const ROUNDOFF_COMMUTATOR: f64 = 1e-12;

pub fn commutator_series(
    p: &SystemParams,
    two_nu: i32,
    two_j_maxes: &[i32],
    j_cut: f64,
    quad: QuadratureConfig,
) -> Result<(Check, Vec<CommutatorRow>), QuantumError> {
    let mut rows = Vec::new();
    for &tj in two_j_maxes {
        let basis = MonopoleBasis::new(two_nu, tj)?;
        let model = QuantumModel::new(*p, basis, quad)?;
        let value = commutator_diagnostic(&model.hamiltonian()?, &model.integral()?, j_cut)?;
        rows.push(CommutatorRow {
            j_max: f64::from(tj) / 2.0,
            dim: model.basis.dim(),
            j_cut,
            value,
        });
    }
    // Number of steps where the diagnostic failed to drop.
    let rises = rows.windows(2).filter(|w| w[1].value >= w[0].value).count();
    let table = rows
        .iter()
        .map(|r| format!("j_max={}: {:.6e}", r.j_max, r.value))
        .collect::<Vec<_>>()
        .join(", ");
    let name = format!(
        "non-decreasing steps of interior [H,F], A={} B={} mu={} nu={} j_cut={j_cut}",
        p.a,
        p.b,
        p.mu,
        f64::from(two_nu) / 2.0
    );
    // With μ = 0 the commutator vanishes identically; a trend in roundoff means nothing.
    let check = if rows.iter().all(|r| r.value < ROUNDOFF_COMMUTATOR) {
        Check::report(name, rises as f64).with_detail(format!("vanishes to roundoff at every cutoff: {table}"))
    } else {
        Check::assert(name, rises as f64, 0.0).with_detail(table)
    };
    Ok((check, rows))
}
