//! Run configuration: a single JSON document, with command-line flags
//! applied on top.
//!
//! Precedence, lowest to highest: built-in defaults, the `--config` file,
//! command-line flags (`--seed`, `--format`, `--out`, `--parallel`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use twocentre::dynamics::IntegratorConfig;
use twocentre::quantum::QuadratureConfig;
use twocentre::systems::Geometry;
use twocentre::{PhasePoint, SystemParams};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// A, B, μ and the real form. `experimental` unlocks the de Sitter form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    #[serde(default = "spherical")]
    pub geometry: Geometry,
    #[serde(default)]
    pub experimental: bool,
}

fn spherical() -> Geometry {
    Geometry::Spherical
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            a: 2.0,
            b: 1.0,
            mu: 1.0,
            geometry: Geometry::Spherical,
            experimental: false,
        }
    }
}

impl SystemConfig {
    pub fn params(&self) -> Result<SystemParams, CliError> {
        let p = match (self.geometry, self.experimental) {
            (Geometry::DeSitter, true) => SystemParams::experimental_de_sitter(self.a, self.b, self.mu),
            (Geometry::DeSitter, false) => {
                return Err(CliError::Usage("the de Sitter form needs \"experimental\": true".into()))
            }
            (g, _) => SystemParams::new(self.a, self.b, self.mu, g),
        };
        p.map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Symplectic leaf |q|² = r², (M, q) = ν r (with the metric of the real form).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LeafConfig {
    pub radius: f64,
    pub nu: f64,
}

impl Default for LeafConfig {
    fn default() -> Self {
        Self { radius: 1.0, nu: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Random points per bracket check.
    pub points: usize,
    /// Parameter sets to certify besides `system`; `null` means the built-in families.
    pub families: Option<Vec<SystemConfig>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            points: 1000,
            families: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    /// Explicit start; otherwise a seeded point on the configured leaf.
    pub initial: Option<PhasePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EllipticConfig {
    pub charges: Vec<f64>,
    /// Sphere points for the coordinate identities.
    pub points: usize,
    /// Leaf points per charge for H agreement and the gauge checks.
    pub leaf_points: usize,
    /// Length of the separation-constant trajectory.
    pub t_end: f64,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        Self {
            charges: vec![0.0, 0.5, -0.5, 1.0],
            points: 10_000,
            leaf_points: 100,
            t_end: 50.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantumOperator {
    #[default]
    Hamiltonian,
    Integral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumConfig {
    pub nu: f64,
    pub j_max: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Operator whose spectrum is written.
    pub operator: QuantumOperator,
    /// Cutoffs of the commutator table; `null` means 8, 12, 16 shifted by |ν|.
    pub series: Option<Vec<f64>>,
    /// Interior cutoff of the commutator table; `null` means 6 + |ν|.
    pub j_cut: Option<f64>,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        Self {
            nu: 0.0,
            j_max: 8.0,
            n_theta: 128,
            n_phi: 128,
            operator: QuantumOperator::Hamiltonian,
            series: None,
            j_cut: None,
        }
    }
}

impl QuantumConfig {
    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub geometry: Geometry,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    /// Random points per bracket check at every grid point.
    pub points: usize,
    /// Run grid points on the thread pool.
    pub parallel: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            geometry: Geometry::Spherical,
            a: vec![2.0, 3.0, 5.0],
            b: vec![1.0],
            mu: vec![-1.0, 0.0, 1.0],
            nu: vec![0.0],
            points: 200,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    /// Output directory. Not part of the config hash.
    pub out: Option<PathBuf>,
    pub system: SystemConfig,
    pub leaf: LeafConfig,
    pub integrator: IntegratorConfig,
    pub verify: VerifyConfig,
    pub simulate: SimulateConfig,
    pub elliptic: EllipticConfig,
    pub quantum: QuantumConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            format: Format::Csv,
            out: None,
            system: SystemConfig::default(),
            leaf: LeafConfig::default(),
            integrator: IntegratorConfig::default(),
            verify: VerifyConfig::default(),
            simulate: SimulateConfig::default(),
            elliptic: EllipticConfig::default(),
            quantum: QuantumConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

/// Values given on the command line; `None` leaves the config untouched.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub parallel: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(format) = o.format {
            self.format = format;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        if o.parallel {
            self.sweep.parallel = true;
        }
    }

    /// SHA-256 of the effective config serialized as JSON. The output path
    /// and the sweep concurrency switch do not change results and are left out.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.sweep.parallel = false;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("twocentre-out"))
    }
}
