//! Forward-mode dual numbers with an `N`-component tangent.
//!
//! `Dual<T, N>` carries a value and its partial derivatives with respect to
//! `N` seeded inputs. Because the component type is itself any [`Real`],
//! nesting (`Dual<Dual<f64, 6>, 6>`) gives exact second derivatives, which is
//! what the Jacobi-identity checks rely on.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T, const N: usize> {
    pub re: T,
    pub eps: [T; N],
}

/// Value plus gradient over the six phase-space coordinates (M1..3, q1..3).
pub type DualScalar = Dual<f64, 6>;

impl<T: Real, const N: usize> Dual<T, N> {
    pub fn constant(re: T) -> Self {
        Self {
            re,
            eps: [T::zero(); N],
        }
    }

    /// The `index`-th independent variable at `re`.
    pub fn variable(re: T, index: usize) -> Self {
        let mut eps = [T::zero(); N];
        eps[index] = T::cst(1.0);
        Self { re, eps }
    }

    /// Seeds every component of `x` as an independent variable.
    pub fn seed(x: &[T; N]) -> [Self; N] {
        std::array::from_fn(|i| Self::variable(x[i], i))
    }

    /// Applies `f` with derivative `df` through the chain rule.
    #[inline]
    fn chain(self, f: T, df: T) -> Self {
        Self {
            re: f,
            eps: self.eps.map(|e| e * df),
        }
    }
}

impl<T: Real, const N: usize> Add for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            eps: std::array::from_fn(|i| self.eps[i] + rhs.eps[i]),
        }
    }
}

impl<T: Real, const N: usize> Sub for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            eps: std::array::from_fn(|i| self.eps[i] - rhs.eps[i]),
        }
    }
}

impl<T: Real, const N: usize> Mul for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: self.re * rhs.re,
            eps: std::array::from_fn(|i| self.eps[i] * rhs.re + self.re * rhs.eps[i]),
        }
    }
}

impl<T: Real, const N: usize> Div for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let re = self.re * inv;
        Self {
            re,
            eps: std::array::from_fn(|i| (self.eps[i] - re * rhs.eps[i]) * inv),
        }
    }
}

impl<T: Real, const N: usize> Neg for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            eps: self.eps.map(|e| -e),
        }
    }
}

impl<T: Real, const N: usize> Add<f64> for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        Self {
            re: self.re + rhs,
            eps: self.eps,
        }
    }
}

impl<T: Real, const N: usize> Sub<f64> for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        Self {
            re: self.re - rhs,
            eps: self.eps,
        }
    }
}

impl<T: Real, const N: usize> Mul<f64> for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Self {
            re: self.re * rhs,
            eps: self.eps.map(|e| e * rhs),
        }
    }
}

impl<T: Real, const N: usize> Div<f64> for Dual<T, N> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        Self {
            re: self.re / rhs,
            eps: self.eps.map(|e| e / rhs),
        }
    }
}

impl<T: Real, const N: usize> Real for Dual<T, N> {
    fn cst(value: f64) -> Self {
        Self::constant(T::cst(value))
    }

    fn re(&self) -> f64 {
        self.re.re()
    }

    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, (s * 2.0).recip())
    }

    fn sin(self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }

    fn cos(self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }

    fn abs(self) -> Self {
        if self.re.re() < 0.0 {
            -self
        } else {
            self
        }
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.iter().all(|e| e.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let [x, y] = Dual::<f64, 2>::seed(&[3.0, 2.0]);
        let f = x * x * y + x / y;
        assert_eq!(f.re, 19.5);
        assert!((f.eps[0] - (2.0 * 3.0 * 2.0 + 0.5)).abs() < 1e-15);
        assert!((f.eps[1] - (9.0 - 3.0 / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn constants_have_zero_gradient() {
        let c = DualScalar::cst(4.2);
        assert!(c.eps.iter().all(|&e| e == 0.0));
        assert_eq!(c.sqrt().eps, [0.0; 6]);
    }

    #[test]
    fn nested_gives_second_derivative() {
        // f(x) = sin(x) * sqrt(x); f'' checked against the closed form.
        let x0 = 0.7_f64;
        let inner = Dual::<f64, 1>::variable(x0, 0);
        let outer = Dual::<Dual<f64, 1>, 1>::variable(inner, 0);
        let f = outer.sin() * outer.sqrt();
        let second = f.eps[0].eps[0];
        let expected = -x0.sin() * x0.sqrt() + x0.cos() / x0.sqrt() - x0.sin() / (4.0 * x0.powf(1.5));
        assert!((second - expected).abs() < 1e-14);
    }

    #[test]
    fn non_finite_detected() {
        let x = Dual::<f64, 1>::variable(0.0, 0);
        assert!(!x.sqrt().is_finite());
    }
}
