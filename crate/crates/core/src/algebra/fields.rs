//! Elementary scalar fields: coordinates, Casimirs, products and sums.

use super::{PoissonStructure, Real, ScalarField};

const NAMES: [&str; 6] = ["M1", "M2", "M3", "q1", "q2", "q3"];

/// The coordinate function x ↦ x_i.
#[derive(Debug, Clone, Copy)]
pub struct Coordinate(pub usize);

impl ScalarField for Coordinate {
    fn name(&self) -> String {
        NAMES[self.0].to_string()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        x[self.0]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Casimir1(pub PoissonStructure);

impl ScalarField for Casimir1 {
    fn name(&self) -> String {
        "C1".into()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        self.0.casimirs_generic(x).0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Casimir2(pub PoissonStructure);

impl ScalarField for Casimir2 {
    fn name(&self) -> String {
        "C2".into()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        self.0.casimirs_generic(x).1
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Product<F, G>(pub F, pub G);

impl<F: ScalarField, G: ScalarField> ScalarField for Product<F, G> {
    fn name(&self) -> String {
        format!("({})*({})", self.0.name(), self.1.name())
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        self.0.eval(x) * self.1.eval(x)
    }
}

/// a·F + b·G.
#[derive(Debug, Clone, Copy)]
pub struct LinearCombination<F, G> {
    pub a: f64,
    pub f: F,
    pub b: f64,
    pub g: G,
}

impl<F: ScalarField, G: ScalarField> ScalarField for LinearCombination<F, G> {
    fn name(&self) -> String {
        format!("{}*({}) + {}*({})", self.a, self.f.name(), self.b, self.g.name())
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        self.f.eval(x) * self.a + self.g.eval(x) * self.b
    }
}

/// Smooth test function: a quadratic polynomial plus a sine of a linear form.
/// Used by the bracket-identity property tests.
#[derive(Debug, Clone)]
pub struct SmoothTestField {
    pub linear: [f64; 6],
    pub quadratic: [[f64; 6]; 6],
    pub wave: [f64; 6],
}

impl ScalarField for SmoothTestField {
    fn name(&self) -> String {
        "smooth-test-field".into()
    }
    fn eval<T: Real>(&self, x: &[T; 6]) -> T {
        let mut acc = T::zero();
        let mut phase = T::zero();
        for i in 0..6 {
            acc = acc + x[i] * self.linear[i];
            phase = phase + x[i] * self.wave[i];
            for j in 0..6 {
                acc = acc + x[i] * x[j] * self.quadratic[i][j];
            }
        }
        acc + phase.sin()
    }
}
