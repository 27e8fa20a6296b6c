//! Lie–Poisson structures on e(3)* and so(2,1)* and bracket evaluation.

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Dual, PhasePoint, Real};

/// Smooth function on the six-dimensional phase space, written once against
/// [`Real`] so it can be evaluated on plain floats or dual numbers.
pub trait ScalarField: Sync {
    /// Human-readable name used in evaluation errors.
    fn name(&self) -> String;

    fn eval<T: Real>(&self, x: &[T; 6]) -> T;
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn name(&self) -> String {
        (**self).name()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        (**self).eval(x)
    }
}

/// Signature of the underlying translation part: `Euclidean` is e(3)*,
/// `Lorentzian` is so(2,1)* ⋉ R^{2,1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoissonStructure {
    Euclidean,
    Lorentzian,
}

// {x_i, x_j} = sign * x_k, listed for i < j in the pair sense; the tensor is
// completed by antisymmetry.
const EUCLIDEAN: [(usize, usize, usize, f64); 9] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 4, 5, 1.0),
    (0, 5, 4, -1.0),
    (1, 5, 3, 1.0),
    (1, 3, 5, -1.0),
    (2, 3, 4, 1.0),
    (2, 4, 3, -1.0),
];

const LORENTZIAN: [(usize, usize, usize, f64); 9] = [
    (0, 1, 2, 1.0),
    (1, 2, 0, -1.0),
    (2, 0, 1, -1.0),
    (0, 4, 5, 1.0),
    (1, 3, 5, -1.0),
    (0, 5, 4, 1.0),
    (2, 3, 4, -1.0),
    (1, 5, 3, -1.0),
    (2, 4, 3, 1.0),
];

impl PoissonStructure {
    /// Structure constants as `(i, j, k, c)` meaning `{x_i, x_j} = c x_k`.
    pub fn structure_constants(self) -> &'static [(usize, usize, usize, f64); 9] {
        match self {
            Self::Euclidean => &EUCLIDEAN,
            Self::Lorentzian => &LORENTZIAN,
        }
    }

    /// The antisymmetric tensor J^{ij}(x).
    pub fn tensor<T: Real>(self, x: &[T; 6]) -> [[T; 6]; 6] {
        let mut j = [[T::zero(); 6]; 6];
        for &(a, b, k, c) in self.structure_constants() {
            j[a][b] = x[k] * c;
            j[b][a] = -(x[k] * c);
        }
        j
    }

    /// Metric on the q-triple that the Casimir C1 is built from.
    pub fn metric(self) -> [f64; 3] {
        match self {
            Self::Euclidean => [1.0, 1.0, 1.0],
            Self::Lorentzian => [-1.0, -1.0, 1.0],
        }
    }

    /// Casimirs (C1, C2): (|q|², (M,q)) or ((q,Jq), (M,Jq)).
    pub fn casimirs_generic<T: Real>(self, x: &[T; 6]) -> (T, T) {
        let g = self.metric();
        let c1 = x[3] * x[3] * g[0] + x[4] * x[4] * g[1] + x[5] * x[5] * g[2];
        let c2 = x[0] * x[3] * g[0] + x[1] * x[4] * g[1] + x[2] * x[5] * g[2];
        (c1, c2)
    }
}

/// Casimir functions (C1, C2) at `x`.
pub fn casimirs(x: &PhasePoint, structure: PoissonStructure) -> (f64, f64) {
    structure.casimirs_generic(&x.to_array())
}

/// Gradient of `f` at `x`, generic so it can be nested inside another dual
/// evaluation.
pub fn gradient_generic<F: ScalarField, T: Real>(f: &F, x: &[T; 6]) -> [T; 6] {
    let seeded = Dual::<T, 6>::seed(x);
    f.eval(&seeded).eps
}

/// Forward-mode gradient (∂/∂M1..3, ∂/∂q1..3).
pub fn gradient<F: ScalarField>(f: &F, x: &PhasePoint) -> Result<[f64; 6], AlgebraError> {
    let grad = gradient_generic(f, &x.to_array());
    if grad.iter().all(|g| g.is_finite()) {
        Ok(grad)
    } else {
        Err(AlgebraError::NonFinite { function: f.name() })
    }
}

/// A bracket value together with the magnitude scale Σ|∂_i f||J^{ij}||∂_j g|
/// that tolerances are measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketValue {
    pub value: f64,
    pub scale: f64,
}

impl BracketValue {
    /// |value| / scale, or |value| when the scale vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

/// {f, g}(x) = Σ ∂_i f J^{ij}(x) ∂_j g together with its scale.
pub fn bracket_with_scale<F: ScalarField, G: ScalarField>(
    f: &F,
    g: &G,
    x: &PhasePoint,
    structure: PoissonStructure,
) -> Result<BracketValue, AlgebraError> {
    let df = gradient(f, x)?;
    let dg = gradient(g, x)?;
    let j = structure.tensor(&x.to_array());
    let mut value = 0.0;
    let mut scale = 0.0;
    for a in 0..6 {
        for b in 0..6 {
            value += df[a] * j[a][b] * dg[b];
            scale += (df[a] * j[a][b] * dg[b]).abs();
        }
    }
    Ok(BracketValue { value, scale })
}

pub fn poisson_bracket<F: ScalarField, G: ScalarField>(
    f: &F,
    g: &G,
    x: &PhasePoint,
    structure: PoissonStructure,
) -> Result<f64, AlgebraError> {
    bracket_with_scale(f, g, x, structure).map(|b| b.value)
}

/// ẋ_i = {x_i, H}.
pub fn hamiltonian_vector_field<H: ScalarField>(
    h: &H,
    x: &PhasePoint,
    structure: PoissonStructure,
) -> Result<[f64; 6], AlgebraError> {
    let dh = gradient(h, x)?;
    let j = structure.tensor(&x.to_array());
    Ok(std::array::from_fn(|i| {
        (0..6).map(|k| j[i][k] * dh[k]).sum()
    }))
}

/// The bracket {f, g} as a field in its own right, so it can be bracketed
/// again (Jacobi identity) or differentiated.
#[derive(Debug, Clone, Copy)]
pub struct Bracket<F, G> {
    pub f: F,
    pub g: G,
    pub structure: PoissonStructure,
}

impl<F: ScalarField, G: ScalarField> ScalarField for Bracket<F, G> {
    fn name(&self) -> String {
        format!("{{{}, {}}}", self.f.name(), self.g.name())
    }

    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        let df = gradient_generic(&self.f, x);
        let dg = gradient_generic(&self.g, x);
        let j = self.structure.tensor(x);
        let mut acc = T::zero();
        for a in 0..6 {
            for b in 0..6 {
                acc = acc + df[a] * j[a][b] * dg[b];
            }
        }
        acc
    }
}
