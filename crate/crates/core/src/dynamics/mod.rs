//! Time integration of the Lie–Poisson flow ẋ = {x, H} with conservation
//! monitoring.

mod integrate;
mod projection;

pub use integrate::{integrate, vector_field};
pub use projection::leaf_project;

use serde::{Deserialize, Serialize};

use crate::algebra::PhasePoint;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("initial point inside the singularity radius (R = {r:e})")]
    StartsSingular { r: f64 },
    #[error("initial point: {0}")]
    InvalidStart(String),
    #[error("cannot project: q = 0")]
    DegenerateProjection,
    #[error("empty trajectory")]
    EmptyTrajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    /// Classical fixed-step RK4.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with embedded error control.
    Rk45 { abs_tol: f64, rel_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    #[default]
    None,
    /// Re-impose the initial Casimir values after every accepted step.
    Leaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub method: Method,
    pub t_end: f64,
    pub max_steps: usize,
    pub projection: Projection,
    /// Integration stops once R(q) drops below this.
    pub singularity_radius: f64,
    /// Spacing of the recorded samples.
    pub sample_interval: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45 {
                abs_tol: 1e-10,
                rel_tol: 1e-10,
            },
            t_end: 100.0,
            max_steps: 5_000_000,
            projection: Projection::None,
            singularity_radius: 1e-8,
            sample_interval: 0.1,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64, t_end: f64) -> Self {
        Self {
            method: Method::Rk4 { step },
            t_end,
            ..Self::default()
        }
    }

    pub fn rk45(tol: f64, t_end: f64) -> Self {
        Self {
            method: Method::Rk45 {
                abs_tol: tol,
                rel_tol: tol,
            },
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::InvalidConfig(m.to_string()));
        match self.method {
            Method::Rk4 { step } if !(step > 0.0 && step.is_finite()) => return bad("step must be positive"),
            Method::Rk45 { abs_tol, rel_tol } if !(abs_tol > 0.0 && rel_tol > 0.0) => {
                return bad("tolerances must be positive")
            }
            _ => {}
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive");
        }
        if !(self.sample_interval > 0.0) {
            return bad("sample_interval must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        if !(self.singularity_radius >= 0.0) {
            return bad("singularity_radius must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    MaxSteps,
    SingularityEncounter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    pub h: Vec<f64>,
    pub f: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&PhasePoint> {
        self.points.last()
    }
}

/// Max relative drift max_t |Q(t) − Q(0)| / max(1, |Q(0)|) per first integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub h: f64,
    pub f: f64,
    pub c1: f64,
    pub c2: f64,
}

impl DriftReport {
    pub fn max(&self) -> f64 {
        self.h.max(self.f).max(self.c1).max(self.c2)
    }
}

fn column_drift(values: &[f64]) -> f64 {
    let first = values[0];
    let denom = first.abs().max(1.0);
    values.iter().map(|v| (v - first).abs() / denom).fold(0.0, f64::max)
}

pub fn drift_report(tr: &TrajectoryRecord) -> Result<DriftReport, DynamicsError> {
    if tr.is_empty() {
        return Err(DynamicsError::EmptyTrajectory);
    }
    Ok(DriftReport {
        h: column_drift(&tr.h),
        f: column_drift(&tr.f),
        c1: column_drift(&tr.c1),
        c2: column_drift(&tr.c2),
    })
}
