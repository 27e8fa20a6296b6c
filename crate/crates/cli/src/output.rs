//! Result bundles and file writers.
//!
//! Outputs never contain timestamps or host information, so a run is
//! reproducible byte for byte from its config and seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use twocentre::checks::Check;

use crate::config::{Format, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub program: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_sha256: String,
}

impl Provenance {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Self {
            program: "twocentre",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: cfg.seed,
            config_sha256: cfg.hash(),
        }
    }

    /// One-line header for CSV files.
    pub fn csv_comment(&self) -> String {
        format!(
            "# {} {} {} seed={} config_sha256={}\n",
            self.program, self.version, self.command, self.seed, self.config_sha256
        )
    }
}

/// Machine-readable report of one run.
#[derive(Debug, Clone, Serialize)]
pub struct ResultBundle {
    pub provenance: Provenance,
    pub all_ok: bool,
    pub checks: Vec<Check>,
}

impl ResultBundle {
    pub fn new(provenance: Provenance, checks: Vec<Check>) -> Self {
        let all_ok = twocentre::checks::all_ok(&checks);
        Self {
            provenance,
            all_ok,
            checks,
        }
    }
}

/// Round-trippable double: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Quotes a CSV field when it needs it.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CHECK_COLUMNS: &str = "name,kind,value,tolerance,outcome,detail";

pub fn check_row(c: &Check) -> String {
    let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        field(&c.name),
        kind,
        opt_num(c.value),
        opt_num(c.tolerance),
        c.outcome.label(),
        field(c.detail.as_deref().unwrap_or(""))
    )
}

pub fn checks_csv(provenance: &Provenance, checks: &[Check]) -> String {
    let mut s = provenance.csv_comment();
    s.push_str(CHECK_COLUMNS);
    s.push('\n');
    for c in checks {
        let _ = writeln!(s, "{}", check_row(c));
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Creates the output directory and writes `name` into it.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes a check report as `<stem>.csv` or `<stem>.json`.
pub fn write_bundle(cfg: &RunConfig, stem: &str, bundle: &ResultBundle) -> Result<PathBuf, CliError> {
    let body = match cfg.format {
        Format::Csv => checks_csv(&bundle.provenance, &bundle.checks),
        Format::Json => to_json(bundle),
    };
    write_file(&cfg.out_dir(), &format!("{stem}.{}", cfg.format.extension()), &body)
}

/// Human-readable lines for the terminal.
pub fn print_checks(checks: &[Check]) {
    for c in checks {
        let value = c.value.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        let tol = c.tolerance.map(|v| format!(" (tol {v:.0e})")).unwrap_or_default();
        let detail = c.detail.as_deref().map(|d| format!("  [{d}]")).unwrap_or_default();
        println!("{:<16} {}: {value}{tol}{detail}", c.outcome.label(), c.name);
    }
}
