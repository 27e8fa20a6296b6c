//! The five subcommands. Each returns whether every judged check passed;
//! configuration problems come back as [`CliError::Usage`].

use std::fmt::Write as _;

use serde::Serialize;
use twocentre::algebra::sampling::{leaf_point, stream_rng};
use twocentre::checks::{
    coordinate_checks, default_families, gauge_checks, hamiltonian_agreement, integral_report,
    kinetic_spectrum_check, separation_checks, structure_checks, system_suite, commutator_series, verify_suite, Check,
    CommutatorRow,
};
use twocentre::dynamics::{drift_report, integrate, DriftReport, DynamicsError, Termination, TrajectoryRecord};
use twocentre::quantum::{dominant_label, eigen_spectrum, MonopoleBasis, QuantumError, QuantumModel, SMeasurement};
use twocentre::systems::{centres, Geometry};
use twocentre::{par, Execution, PhasePoint, SystemParams};

use crate::config::{Format, QuantumOperator, RunConfig, SystemConfig};
use crate::output::{self, field, num, print_checks, to_json, write_bundle, write_file, Provenance, ResultBundle};
use crate::CliError;

fn require_spherical(p: &SystemParams, what: &str) -> Result<(), CliError> {
    if p.geometry == Geometry::Spherical {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} needs the spherical form, got {}", p.geometry.name())))
    }
}

fn positive(n: usize, what: &str) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::Usage(format!("{what} must be positive")))
    } else {
        Ok(n)
    }
}

fn finish(cfg: &RunConfig, command: &str, checks: Vec<Check>) -> Result<bool, CliError> {
    print_checks(&checks);
    let bundle = ResultBundle::new(Provenance::new(command, cfg), checks);
    let path = write_bundle(cfg, "checks", &bundle)?;
    println!("wrote {}", path.display());
    Ok(bundle.all_ok)
}

pub fn verify(cfg: &RunConfig) -> Result<bool, CliError> {
    let points = positive(cfg.verify.points, "verify.points")?;
    let mut families = vec![cfg.system.params()?];
    match &cfg.verify.families {
        Some(list) => {
            for s in list {
                families.push(s.params()?);
            }
        }
        None => families.extend(default_families()),
    }
    let mut unique: Vec<SystemParams> = Vec::new();
    for p in families {
        if !unique.contains(&p) {
            unique.push(p);
        }
    }
    let checks = verify_suite(&unique, points, cfg.seed, Execution::Sequential);
    finish(cfg, "verify", checks)
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    provenance: Provenance,
    system: SystemParams,
    x0: PhasePoint,
    termination: Termination,
    warning: Option<String>,
    samples: usize,
    t_final: f64,
    accepted_steps: usize,
    rejected_steps: usize,
    drift: Option<DriftReport>,
    integrator: &'a twocentre::dynamics::IntegratorConfig,
}

const TRAJECTORY_COLUMNS: [&str; 11] = ["t", "M1", "M2", "M3", "q1", "q2", "q3", "H", "F", "C1", "C2"];

fn trajectory_rows(tr: &TrajectoryRecord) -> Vec<[f64; 11]> {
    (0..tr.len())
        .map(|i| {
            let x = tr.points[i].to_array();
            [tr.times[i], x[0], x[1], x[2], x[3], x[4], x[5], tr.h[i], tr.f[i], tr.c1[i], tr.c2[i]]
        })
        .collect()
}

/// The configured start, or a seeded point on the configured leaf.
pub fn initial_point(cfg: &RunConfig, p: &SystemParams) -> Result<PhasePoint, CliError> {
    if let Some(x) = cfg.simulate.initial {
        return Ok(x);
    }
    let r = cfg.leaf.radius;
    if !(r > 0.0 && r.is_finite()) {
        return Err(CliError::Usage(format!("leaf.radius must be positive, got {r}")));
    }
    let c1 = p.geometry.unit_c1() * r * r;
    Ok(leaf_point(&mut stream_rng(cfg.seed, 0), p.structure(), c1, cfg.leaf.nu * r))
}

pub fn simulate(cfg: &RunConfig) -> Result<bool, CliError> {
    let p = cfg.system.params()?;
    cfg.integrator.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let x0 = initial_point(cfg, &p)?;
    let tr = integrate(&x0, &p, &cfg.integrator).map_err(|e| match e {
        DynamicsError::InvalidConfig(_) | DynamicsError::StartsSingular { .. } | DynamicsError::InvalidStart(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Runtime(other.to_string()),
    })?;
    let provenance = Provenance::new("simulate", cfg);
    let rows = trajectory_rows(&tr);
    let body = match cfg.format {
        Format::Csv => {
            let mut s = provenance.csv_comment();
            s.push_str(&TRAJECTORY_COLUMNS.join(","));
            s.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                provenance: &'a Provenance,
                columns: [&'static str; 11],
                rows: &'a [[f64; 11]],
            }
            to_json(&Table {
                provenance: &provenance,
                columns: TRAJECTORY_COLUMNS,
                rows: &rows,
            })
        }
    };
    let dir = cfg.out_dir();
    let path = write_file(&dir, &format!("trajectory.{}", cfg.format.extension()), &body)?;
    let warning = match tr.termination {
        Termination::Completed => None,
        Termination::SingularityEncounter => Some(format!(
            "stopped at t = {} on approaching a centre; the trajectory is partial",
            tr.times.last().copied().unwrap_or(0.0)
        )),
        Termination::MaxSteps => Some(format!("step budget of {} exhausted", cfg.integrator.max_steps)),
    };
    let drift = drift_report(&tr).ok();
    let summary = SimulationSummary {
        provenance,
        system: p,
        x0,
        termination: tr.termination,
        warning: warning.clone(),
        samples: tr.len(),
        t_final: tr.times.last().copied().unwrap_or(0.0),
        accepted_steps: tr.accepted_steps,
        rejected_steps: tr.rejected_steps,
        drift,
        integrator: &cfg.integrator,
    };
    let drift_path = write_file(&dir, "drift.json", &to_json(&summary))?;
    if let Some(d) = drift {
        println!("drift  H {:.3e}  F {:.3e}  C1 {:.3e}  C2 {:.3e}", d.h, d.f, d.c1, d.c2);
    }
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    println!("wrote {} and {}", path.display(), drift_path.display());
    Ok(true)
}

fn unique_values(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if !out.iter().any(|&u| u == v) {
            out.push(v);
        }
    }
    out
}

pub fn elliptic_check(cfg: &RunConfig) -> Result<bool, CliError> {
    let p = cfg.system.params()?;
    require_spherical(&p, "elliptic-check")?;
    let e = &cfg.elliptic;
    let points = positive(e.points, "elliptic.points")?;
    let leaf_points = positive(e.leaf_points, "elliptic.leaf_points")?;
    if !(e.t_end > 0.0) {
        return Err(CliError::Usage("elliptic.t_end must be positive".into()));
    }
    if e.charges.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage("elliptic.charges must be finite".into()));
    }
    let exec = Execution::Sequential;
    let mut checks = coordinate_checks(&p, points, cfg.seed, exec).map_err(|e| CliError::Usage(e.to_string()))?;
    for nu in unique_values(&e.charges) {
        checks.push(hamiltonian_agreement(&p, nu, leaf_points, cfg.seed, exec));
        checks.extend(gauge_checks(&p, nu, leaf_points, cfg.seed, exec));
        checks.extend(separation_checks(&p, nu, e.t_end, cfg.seed));
        checks.extend(integral_report(&p, nu, leaf_points, cfg.seed, exec));
    }
    finish(cfg, "elliptic-check", checks)
}

#[derive(Serialize)]
struct SMeasurementReport {
    scalar: f64,
    residual: f64,
    ordering_gap: f64,
    sign: &'static str,
}

impl SMeasurementReport {
    fn new(s: SMeasurement, nu: f64) -> Self {
        Self {
            scalar: s.scalar,
            residual: s.residual,
            ordering_gap: s.ordering_gap,
            sign: s.sign_label(nu),
        }
    }
}

#[derive(Serialize)]
struct QuantumDiagnostics {
    provenance: Provenance,
    system: SystemParams,
    nu: f64,
    j_max: f64,
    dim: usize,
    operator: QuantumOperator,
    n_theta: usize,
    n_phi: usize,
    /// Tilt of the polar grids used for the singular potentials, one per centre.
    centre_grid_tilts: [f64; 2],
    gram_residual: f64,
    hermiticity_residuals: Vec<(String, f64)>,
    s_measurement: SMeasurementReport,
    jacobi_sweeps: usize,
    commutator_table: Vec<CommutatorRow>,
    all_ok: bool,
    checks: Vec<Check>,
}

fn quantum_usage(e: QuantumError) -> CliError {
    match e {
        QuantumError::Eigen(_) | QuantumError::NotHermitian(_) => CliError::Runtime(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn quantum(cfg: &RunConfig) -> Result<bool, CliError> {
    let p = cfg.system.params()?;
    require_spherical(&p, "quantum")?;
    let q = &cfg.quantum;
    let basis = MonopoleBasis::from_values(q.nu, q.j_max).map_err(quantum_usage)?;
    let nu = basis.nu();
    if basis.j_max() < nu.abs() + 2.0 {
        return Err(CliError::Usage(format!("j_max must be at least |nu| + 2, got {}", basis.j_max())));
    }
    let quad = q.quadrature();
    let j_cut = q.j_cut.unwrap_or(6.0 + nu.abs());
    let series = q
        .series
        .clone()
        .unwrap_or_else(|| [8.0, 12.0, 16.0].iter().map(|j| j + nu.abs()).collect());
    let two_series = series
        .iter()
        .map(|&j| MonopoleBasis::from_values(nu, j).map(|b| b.two_j_max()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(quantum_usage)?;

    let model = QuantumModel::new(p, basis.clone(), quad).map_err(quantum_usage)?;
    let op = match q.operator {
        QuantumOperator::Hamiltonian => model.hamiltonian(),
        QuantumOperator::Integral => model.integral(),
    }
    .map_err(quantum_usage)?;
    let spectrum = eigen_spectrum(&op).map_err(quantum_usage)?;

    let (mut checks, s) = structure_checks(&model).map_err(quantum_usage)?;
    if p.mu == 0.0 && q.operator == QuantumOperator::Hamiltonian {
        checks.push(kinetic_spectrum_check(p.a, p.b, &basis, quad).map_err(quantum_usage)?);
    }
    let (series_check, table) = commutator_series(&p, basis.two_nu(), &two_series, j_cut, quad).map_err(quantum_usage)?;
    checks.push(series_check);
    print_checks(&checks);

    let provenance = Provenance::new("quantum", cfg);
    let labels: Vec<(f64, f64)> = spectrum.vectors.iter().map(|v| dominant_label(&basis, v)).collect();
    let body = match cfg.format {
        Format::Csv => {
            let mut out = provenance.csv_comment();
            out.push_str("index,eigenvalue,j,m\n");
            for (k, (value, (j, m))) in spectrum.values.iter().zip(&labels).enumerate() {
                let _ = writeln!(out, "{k},{},{j},{m}", num(*value));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Level {
                index: usize,
                eigenvalue: f64,
                j: f64,
                m: f64,
            }
            #[derive(Serialize)]
            struct Spectrum<'a> {
                provenance: &'a Provenance,
                levels: Vec<Level>,
            }
            let levels = spectrum
                .values
                .iter()
                .zip(&labels)
                .enumerate()
                .map(|(index, (&eigenvalue, &(j, m)))| Level { index, eigenvalue, j, m })
                .collect();
            to_json(&Spectrum {
                provenance: &provenance,
                levels,
            })
        }
    };
    let dir = cfg.out_dir();
    let path = write_file(&dir, &format!("spectrum.{}", cfg.format.extension()), &body)?;

    let c = centres(&p).map_err(|e| CliError::Runtime(e.to_string()))?;
    let tilt = c.plus[0].atan2(c.plus[2]);
    let all_ok = twocentre::checks::all_ok(&checks);
    let diagnostics = QuantumDiagnostics {
        provenance,
        system: p,
        nu,
        j_max: basis.j_max(),
        dim: basis.dim(),
        operator: q.operator,
        n_theta: quad.n_theta,
        n_phi: quad.n_phi,
        centre_grid_tilts: [tilt, -tilt],
        gram_residual: model.gram_residual().map_err(quantum_usage)?,
        hermiticity_residuals: model.hermiticity_residuals().map_err(quantum_usage)?,
        s_measurement: SMeasurementReport::new(s, nu),
        jacobi_sweeps: spectrum.sweeps,
        commutator_table: table,
        all_ok,
        checks,
    };
    let diag_path = write_file(&dir, "diagnostics.json", &to_json(&diagnostics))?;
    println!("wrote {} and {}", path.display(), diag_path.display());
    Ok(all_ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct GridPoint {
    a: f64,
    b: f64,
    mu: f64,
    nu: f64,
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(flatten)]
    point: GridPoint,
    geometry: Geometry,
    skipped: Option<String>,
    checks: Vec<Check>,
}

fn sweep_point(cfg: &RunConfig, g: GridPoint) -> SweepRow {
    let sys = SystemConfig {
        a: g.a,
        b: g.b,
        mu: g.mu,
        geometry: cfg.sweep.geometry,
        experimental: false,
    };
    let p = match sys.params() {
        Ok(p) => p,
        Err(e) => {
            return SweepRow {
                point: g,
                geometry: cfg.sweep.geometry,
                skipped: Some(e.to_string()),
                checks: Vec::new(),
            }
        }
    };
    // Every grid point runs sequentially; concurrency is across points only.
    let mut checks = system_suite(&p, cfg.sweep.points, cfg.seed, Execution::Sequential);
    if p.geometry == Geometry::Spherical {
        checks.push(hamiltonian_agreement(&p, g.nu, cfg.sweep.points.min(100), cfg.seed, Execution::Sequential));
    }
    SweepRow {
        point: g,
        geometry: p.geometry,
        skipped: None,
        checks,
    }
}

pub fn sweep(cfg: &RunConfig) -> Result<bool, CliError> {
    let s = &cfg.sweep;
    positive(s.points, "sweep.points")?;
    if s.geometry == Geometry::DeSitter {
        return Err(CliError::Usage("sweeps cover the spherical and hyperbolic forms only".into()));
    }
    let mut grid = Vec::new();
    for &a in &s.a {
        for &b in &s.b {
            for &mu in &s.mu {
                for &nu in &s.nu {
                    grid.push(GridPoint { a, b, mu, nu });
                }
            }
        }
    }
    if grid.is_empty() {
        return Err(CliError::Usage("the sweep grid is empty".into()));
    }
    let exec = if s.parallel { Execution::Parallel } else { Execution::Sequential };
    let rows = par::map_slice(&grid, exec, |&g| sweep_point(cfg, g));

    let provenance = Provenance::new("sweep", cfg);
    let body = match cfg.format {
        Format::Csv => {
            let mut out = provenance.csv_comment();
            out.push_str("a,b,mu,nu,geometry,");
            out.push_str(output::CHECK_COLUMNS);
            out.push('\n');
            for r in &rows {
                let prefix = format!(
                    "{},{},{},{},{}",
                    num(r.point.a),
                    num(r.point.b),
                    num(r.point.mu),
                    num(r.point.nu),
                    r.geometry.name()
                );
                match &r.skipped {
                    Some(reason) => {
                        let _ = writeln!(out, "{prefix},grid point,skip,,,SKIP,{}", field(reason));
                    }
                    None => {
                        for c in &r.checks {
                            let _ = writeln!(out, "{prefix},{}", output::check_row(c));
                        }
                    }
                }
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Sweep<'a> {
                provenance: &'a Provenance,
                rows: &'a [SweepRow],
            }
            to_json(&Sweep {
                provenance: &provenance,
                rows: &rows,
            })
        }
    };
    let path = write_file(&cfg.out_dir(), &format!("sweep.{}", cfg.format.extension()), &body)?;
    let mut all_ok = true;
    for r in &rows {
        match &r.skipped {
            Some(reason) => println!(
                "SKIP             A={} B={} mu={} nu={}: {reason}",
                r.point.a, r.point.b, r.point.mu, r.point.nu
            ),
            None => {
                let ok = twocentre::checks::all_ok(&r.checks);
                all_ok &= ok;
                println!(
                    "{:<16} A={} B={} mu={} nu={}: {} checks",
                    if ok { "PASS" } else { "FAIL" },
                    r.point.a,
                    r.point.b,
                    r.point.mu,
                    r.point.nu,
                    r.checks.len()
                );
            }
        }
    }
    println!("wrote {}", path.display());
    Ok(all_ok)
}
