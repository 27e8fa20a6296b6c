//! Batch certification suites shared by the test-suite and the CLI.
//!
//! Every suite draws sample `i` from its own ChaCha stream `(seed, i)`, so the
//! same points are visited whether a suite runs sequentially or on the pool,
//! and every check in a suite sees the same sample.

mod elliptic;
mod flow;
mod spectra;

pub use elliptic::{
    coordinate_checks, elliptic_suite, gauge_checks, hamiltonian_agreement, integral_report, separation_checks,
};
pub use flow::{conservation_check, convergence_order, flow_start, order_check, FlowCase};
pub use spectra::{kinetic_spectrum_check, structure_checks, commutator_series, CommutatorRow};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::fields::{Casimir1, Casimir2, Coordinate, Product, SmoothTestField};
use crate::algebra::sampling::{leaf_point, stream_rng, uniform_point, uniform_point_with_c1_above};
use crate::algebra::{
    bracket_with_scale, gradient, gradient_generic, hamiltonian_vector_field, Dual, AlgebraError, Bracket, PhasePoint, PoissonStructure,
    ScalarField,
};
use crate::par::{self, Execution};
use crate::systems::{KillingHamiltonian, KillingParams, MamaevIntegral};
use crate::systems::{Geometry, Hamiltonian, Integral, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Passes when the value is at most the tolerance.
    Assert,
    /// Expected to exceed the threshold; demonstrates that the test can fail.
    NegativeControl,
    /// Measured and recorded, never judged.
    Report,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// A negative control that failed, as it should.
    ExpectedFail,
    /// A negative control that did not fail: the control is broken.
    UnexpectedPass,
    Reported,
    Skipped,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::ExpectedFail => "FAIL-expected",
            Self::UnexpectedPass => "PASS-unexpected",
            Self::Reported => "REPORT",
            Self::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub outcome: Outcome,
    pub detail: Option<String>,
}

impl Check {
    pub fn assert(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let ok = value.is_finite() && value <= tolerance;
        Self {
            name: name.into(),
            kind: CheckKind::Assert,
            value: Some(value),
            tolerance: Some(tolerance),
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: None,
        }
    }

    /// Passes (as an expected failure) when `value` exceeds `threshold`.
    pub fn negative_control(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let failed = value.is_finite() && value > threshold;
        Self {
            name: name.into(),
            kind: CheckKind::NegativeControl,
            value: Some(value),
            tolerance: Some(threshold),
            outcome: if failed { Outcome::ExpectedFail } else { Outcome::UnexpectedPass },
            detail: None,
        }
    }

    /// Passes when `lo ≤ value ≤ hi`.
    pub fn in_range(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        let ok = (lo..=hi).contains(&value);
        Self {
            name: name.into(),
            kind: CheckKind::Assert,
            value: Some(value),
            tolerance: None,
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: Some(format!("must lie in [{lo}, {hi}]")),
        }
    }

    pub fn report(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Report,
            value: Some(value),
            tolerance: None,
            outcome: Outcome::Reported,
            detail: None,
        }
    }

    pub fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Skip,
            value: None,
            tolerance: None,
            outcome: Outcome::Skipped,
            detail: Some(reason.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Whether this check should turn a run's exit status into a failure.
    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, Outcome::Fail | Outcome::UnexpectedPass)
    }
}

pub fn all_ok(checks: &[Check]) -> bool {
    !checks.iter().any(Check::is_failure)
}

/// Maximum of `f` over `n` seeded samples. Evaluation errors make the
/// maximum infinite and are counted.
fn max_over<S, F>(n: usize, seed: u64, exec: Execution, sample: S, f: F) -> (f64, usize)
where
    S: Fn(&mut rand_chacha::ChaCha8Rng) -> PhasePoint + Sync + Send,
    F: Fn(&PhasePoint) -> Result<f64, AlgebraError> + Sync + Send,
{
    let values = par::map_range(n, exec, |i| {
        let mut rng = stream_rng(seed, i as u64);
        f(&sample(&mut rng))
    });
    let errors = values.iter().filter(|v| v.is_err()).count();
    let max = values
        .into_iter()
        .map(|v| v.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    (max, errors)
}

fn finish(check: Check, errors: usize) -> Check {
    if errors > 0 {
        check.with_detail(format!("{errors} sample(s) could not be evaluated"))
    } else {
        check
    }
}

/// Points of the full phase space where the system's formulas are real:
/// the box for the sphere, the box cut to (q, Jq) > 0.01 for the hyperboloid.
pub fn phase_space_sample(geometry: Geometry) -> impl Fn(&mut rand_chacha::ChaCha8Rng) -> PhasePoint + Sync + Send {
    move |rng| match geometry {
        Geometry::Spherical => uniform_point(rng),
        Geometry::Hyperbolic => uniform_point_with_c1_above(rng, PoissonStructure::Lorentzian, 0.01),
        // One-sheeted region (q, Jq) < 0.
        Geometry::DeSitter => loop {
            let x = uniform_point(rng);
            if crate::algebra::casimirs(&x, PoissonStructure::Lorentzian).0 < -0.01 {
                break x;
            }
        },
    }
}

/// Like [`phase_space_sample`], restricted to where H and F are real: the
/// de Sitter potential is only defined for R > 0.
pub fn system_sample(p: &SystemParams) -> impl Fn(&mut rand_chacha::ChaCha8Rng) -> PhasePoint + Sync + Send {
    let p = *p;
    let base = phase_space_sample(p.geometry);
    move |rng| loop {
        let x = base(rng);
        if p.geometry != Geometry::DeSitter || crate::systems::r_generic(&x.q.0, &p) > 0.01 {
            break x;
        }
    }
}

pub const BRACKET_TOL: f64 = 1e-9;
pub const CASIMIR_TOL: f64 = 1e-10;

fn tag(p: &SystemParams) -> String {
    format!("{} A={} B={} mu={}", p.geometry.name(), p.a, p.b, p.mu)
}

/// max |{H, F}| / scale over `n` samples.
pub fn commutation_check(p: &SystemParams, n: usize, seed: u64, exec: Execution) -> Check {
    let (h, f) = (Hamiltonian(*p), Integral(*p));
    let s = p.structure();
    let (max, errors) = max_over(n, seed, exec, system_sample(p), |x| {
        bracket_with_scale(&h, &f, x, s).map(|b| b.relative())
    });
    finish(Check::assert(format!("{{H,F}} {}", tag(p)), max, BRACKET_TOL), errors)
}

/// {H, C_i} and {F, C_i}, relative to scale.
pub fn casimir_checks(p: &SystemParams, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let s = p.structure();
    let (h, f) = (Hamiltonian(*p), Integral(*p));
    let sample = system_sample(p);
    let mut out = Vec::new();
    for (name, value) in [
        ("{H,C1}", max_over(n, seed, exec, &sample, |x| bracket_with_scale(&h, &Casimir1(s), x, s).map(|b| b.relative()))),
        ("{H,C2}", max_over(n, seed, exec, &sample, |x| bracket_with_scale(&h, &Casimir2(s), x, s).map(|b| b.relative()))),
        ("{F,C1}", max_over(n, seed, exec, &sample, |x| bracket_with_scale(&f, &Casimir1(s), x, s).map(|b| b.relative()))),
        ("{F,C2}", max_over(n, seed, exec, &sample, |x| bracket_with_scale(&f, &Casimir2(s), x, s).map(|b| b.relative()))),
    ] {
        out.push(finish(Check::assert(format!("{name} {}", tag(p)), value.0, CASIMIR_TOL), value.1));
    }
    out
}

fn random_field<R: Rng>(rng: &mut R) -> SmoothTestField {
    let mut u = || rng.gen_range(-1.0..1.0);
    SmoothTestField {
        linear: std::array::from_fn(|_| u()),
        quadratic: std::array::from_fn(|_| std::array::from_fn(|_| 0.3 * u())),
        wave: std::array::from_fn(|_| u()),
    }
}

/// Field, field and point for the `i`-th identity sample.
fn field_sample(seed: u64, i: usize, geometry: Geometry) -> (SmoothTestField, SmoothTestField, SmoothTestField, PhasePoint) {
    let mut rng = stream_rng(seed, i as u64);
    let f = random_field(&mut rng);
    let g = random_field(&mut rng);
    let h = random_field(&mut rng);
    (f, g, h, phase_space_sample(geometry)(&mut rng))
}

fn max_result(values: Vec<Result<f64, AlgebraError>>) -> (f64, usize) {
    let errors = values.iter().filter(|v| v.is_err()).count();
    (values.into_iter().map(|v| v.unwrap_or(f64::INFINITY)).fold(0.0, f64::max), errors)
}

/// Gradient and Hessian of `f` at `x`.
fn hessian<F: ScalarField>(f: &F, x: &[f64; 6]) -> ([f64; 6], [[f64; 6]; 6]) {
    let g = gradient_generic(f, &Dual::<f64, 6>::seed(x));
    (g.map(|d| d.re), g.map(|d| d.eps))
}

/// Size of {{f, g}, h} measured term by term before any cancellation:
/// Σ_cd |∂_c{f,g}|_terms |J^{cd}| |∂_d h|, where ∂_c{f,g} is bounded by
/// the absolute values of its Hessian, tensor-derivative and gradient
/// products. {f, g} itself may vanish identically, so its own gradient is
/// no measure of scale.
fn nested_scale<A: ScalarField, B: ScalarField, C: ScalarField>(a: &A, b: &B, c: &C, x: &[f64; 6], s: PoissonStructure) -> f64 {
    let (ga, ha) = hessian(a, x);
    let (gb, hb) = hessian(b, x);
    let gc = gradient_generic(c, x);
    let j = s.tensor(&Dual::<f64, 6>::seed(x));
    let mag: [f64; 6] = std::array::from_fn(|k| {
        let mut m = 0.0;
        for p in 0..6 {
            for q in 0..6 {
                let (jpq, djpq) = (j[p][q].re.abs(), j[p][q].eps[k].abs());
                m += ha[k][p].abs() * jpq * gb[q].abs() + ga[p].abs() * djpq * gb[q].abs() + ga[p].abs() * jpq * hb[k][q].abs();
            }
        }
        m
    });
    let mut scale = 0.0;
    for p in 0..6 {
        for q in 0..6 {
            scale += mag[p] * j[p][q].re.abs() * gc[q].abs();
        }
    }
    scale
}

/// |{{a,b},c} + {{b,c},a} + {{c,a},b}| relative to the term-wise scale.
fn jacobi_sum<A, B, C>(a: &A, b: &B, c: &C, x: &PhasePoint, s: PoissonStructure) -> Result<f64, AlgebraError>
where
    A: ScalarField + Clone,
    B: ScalarField + Clone,
    C: ScalarField + Clone,
{
    let ab = bracket_with_scale(&Bracket { f: a.clone(), g: b.clone(), structure: s }, c, x, s)?;
    let bc = bracket_with_scale(&Bracket { f: b.clone(), g: c.clone(), structure: s }, a, x, s)?;
    let ca = bracket_with_scale(&Bracket { f: c.clone(), g: a.clone(), structure: s }, b, x, s)?;
    let arr = x.to_array();
    let scale = nested_scale(a, b, c, &arr, s) + nested_scale(b, c, a, &arr, s) + nested_scale(c, a, b, &arr, s);
    let total = (ab.value + bc.value + ca.value).abs();
    if !scale.is_finite() {
        return Err(AlgebraError::NonFinite { function: "Jacobi scale".into() });
    }
    Ok(if scale > 0.0 { total / scale } else { total })
}

/// Bracket identities: antisymmetry, Leibniz, Jacobi, Casimir property,
/// vector field against coordinate brackets, AD against finite differences.
pub fn algebra_checks(p: &SystemParams, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let s = p.structure();
    let geometry = p.geometry;
    let (h, f) = (Hamiltonian(*p), Integral(*p));
    let t = tag(p);
    let mut out = Vec::new();

    let (v, e) = max_result(par::map_range(n, exec, |i| {
        let (f1, g1, _, x) = field_sample(seed, i, geometry);
        let fg = bracket_with_scale(&f1, &g1, &x, s)?;
        let gf = bracket_with_scale(&g1, &f1, &x, s)?;
        Ok((fg.value + gf.value).abs() / fg.scale.max(f64::MIN_POSITIVE))
    }));
    out.push(finish(Check::assert(format!("antisymmetry {t}"), v, 1e-13), e));

    let (v, e) = max_result(par::map_range(n, exec, |i| {
        let (f1, g1, h1, x) = field_sample(seed, i, geometry);
        let lhs = bracket_with_scale(&Product(f1.clone(), g1.clone()), &h1, &x, s)?;
        let fh = bracket_with_scale(&f1, &h1, &x, s)?;
        let gh = bracket_with_scale(&g1, &h1, &x, s)?;
        let (fv, gv) = (f1.eval(&x.to_array()), g1.eval(&x.to_array()));
        let rhs = fv * gh.value + gv * fh.value;
        let scale = lhs.scale + fv.abs() * gh.scale + gv.abs() * fh.scale;
        Ok((lhs.value - rhs).abs() / scale.max(f64::MIN_POSITIVE))
    }));
    out.push(finish(Check::assert(format!("Leibniz {t}"), v, 1e-12), e));

    let (v, e) = max_result(par::map_range(n, exec, |i| {
        let (f1, g1, h1, x) = field_sample(seed, i, geometry);
        jacobi_sum(&f1, &g1, &h1, &x, s)
    }));
    out.push(finish(Check::assert(format!("Jacobi(random fields) {t}"), v, 1e-10), e));

    let sample = phase_space_sample(geometry);
    let (v, e) = max_over(n, seed, exec, &sample, |x| {
        let mut worst = 0.0f64;
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    worst = worst.max(jacobi_sum(&Coordinate(a), &Coordinate(b), &Coordinate(c), x, s)?);
                }
            }
        }
        Ok(worst)
    });
    out.push(finish(Check::assert(format!("Jacobi(coordinates) {t}"), v, 1e-10), e));

    let (v, e) = max_over(n, seed, exec, &sample, |x| jacobi_sum(&h, &f, &Casimir2(s), x, s));
    out.push(finish(Check::assert(format!("Jacobi(H,F,C2) {t}"), v, 1e-10), e));

    let (v, e) = max_over(n, seed, exec, &sample, |x| {
        let mut worst = 0.0f64;
        for k in 0..6 {
            let b1 = bracket_with_scale(&Casimir1(s), &Coordinate(k), x, s)?;
            let b2 = bracket_with_scale(&Casimir2(s), &Coordinate(k), x, s)?;
            worst = worst.max(b1.relative()).max(b2.relative());
        }
        Ok(worst)
    });
    out.push(finish(Check::assert(format!("Casimir property {t}"), v, CASIMIR_TOL), e));

    let (v, e) = max_over(n, seed, exec, &sample, |x| {
        let field = hamiltonian_vector_field(&h, x, s)?;
        let mut worst = 0.0f64;
        for k in 0..6 {
            let b = bracket_with_scale(&Coordinate(k), &h, x, s)?;
            worst = worst.max((field[k] - b.value).abs() / b.scale.max(1.0));
        }
        Ok(worst)
    });
    out.push(finish(Check::assert(format!("vector field = {{x_i,H}} {t}"), v, 1e-12), e));

    // Central differences are only accurate away from the singular set,
    // so this comparison uses a tenth of the sample.
    let (v, e) = max_over(n.div_ceil(10), seed, exec, &sample, |x| {
        Ok(fd_mismatch(&h, x)?.max(fd_mismatch(&f, x)?))
    });
    out.push(finish(Check::assert(format!("AD vs finite differences {t}"), v, 1e-6), e));
    out
}

/// ‖∇_AD f − ∇_FD f‖_∞ / ‖∇_AD f‖_∞ with central differences of step 1e-6.
fn fd_mismatch<F: ScalarField>(f: &F, x: &PhasePoint) -> Result<f64, AlgebraError> {
    let g = gradient(f, x)?;
    let base = x.to_array();
    let h = 1e-6;
    let mut err = 0.0f64;
    for i in 0..6 {
        let (mut up, mut down) = (base, base);
        up[i] += h;
        down[i] -= h;
        let fd = (f.eval(&up) - f.eval(&down)) / (2.0 * h);
        err = err.max((fd - g[i]).abs());
    }
    let norm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(if norm > 0.0 { err / norm } else { err })
}

/// Killing baseline parameters used by the default suite.
pub fn default_killing() -> KillingParams {
    KillingParams::new(1.0, 0.6, 0.8).expect("0.6² + 0.8² = 1")
}

/// Quadratic integral of the Killing problem: vanishing bracket on the
/// (M, q) = 0 unit leaf, and a nonzero one on the (M, q) = 1 leaf.
pub fn mamaev_checks(kp: &KillingParams, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let s = PoissonStructure::Euclidean;
    let (h, f) = (KillingHamiltonian(*kp), MamaevIntegral(*kp));
    let on = |rng: &mut rand_chacha::ChaCha8Rng| leaf_point(rng, s, 1.0, 0.0);
    let off = |rng: &mut rand_chacha::ChaCha8Rng| leaf_point(rng, s, 1.0, 1.0);
    let (v_on, e_on) = max_over(n, seed, exec, on, |x| bracket_with_scale(&h, &f, x, s).map(|b| b.relative()));
    let (v_off, e_off) = max_over(n, seed, exec, off, |x| bracket_with_scale(&h, &f, x, s).map(|b| b.relative()));
    vec![
        finish(Check::assert("Killing {H,F} on (M,q)=0", v_on, BRACKET_TOL), e_on),
        finish(Check::negative_control("Killing {H,F} on (M,q)=1", v_off, 1e-3), e_off),
    ]
}

pub const SPHERICAL_PAIRS: [(f64, f64); 2] = [(2.0, 1.0), (5.0, 0.5)];
/// (A, B) for the hyperboloid, B > A.
pub const HYPERBOLIC_PAIRS: [(f64, f64); 2] = [(1.0, 2.0), (0.25, 3.0)];
pub const COUPLINGS: [f64; 4] = [-1.0, 0.0, 1.0, 3.7];

/// All parameter sets of the default certification run.
pub fn default_families() -> Vec<SystemParams> {
    let mut out = Vec::new();
    for (a, b) in SPHERICAL_PAIRS {
        for mu in COUPLINGS {
            out.push(SystemParams::spherical(a, b, mu).expect("valid spherical parameters"));
        }
    }
    for (a, b) in HYPERBOLIC_PAIRS {
        for mu in COUPLINGS {
            out.push(SystemParams::hyperbolic(a, b, mu).expect("valid hyperbolic parameters"));
        }
    }
    out
}

/// Bracket suites for one parameter set.
pub fn system_suite(p: &SystemParams, n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let mut out = vec![commutation_check(p, n, seed, exec)];
    out.extend(casimir_checks(p, n, seed, exec));
    out
}

/// The full default certification: commutation and Casimirs for every
/// family, bracket identities for one member of each signature, and the
/// Killing baseline with its negative control.
pub fn verify_suite(families: &[SystemParams], n: usize, seed: u64, exec: Execution) -> Vec<Check> {
    let mut out = Vec::new();
    for p in families {
        out.extend(system_suite(p, n, seed, exec));
    }
    let mut seen = Vec::new();
    for p in families {
        if !seen.contains(&p.geometry) {
            seen.push(p.geometry);
            out.extend(algebra_checks(p, n.div_ceil(10).max(10), seed, exec));
        }
    }
    out.extend(mamaev_checks(&default_killing(), n.div_ceil(2), seed, exec));
    out
}
