use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::real::{cross3, dot3};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self([x1, x2, x3])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self(cross3(&self.0, &other.0))
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        *self * (1.0 / self.norm())
    }

    /// Lorentzian pairing (a, J b) with J = diag(-1, -1, 1).
    pub fn lorentz_dot(&self, other: &Self) -> f64 {
        -self.0[0] * other.0[0] - self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Vec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

impl Neg for Vec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

/// A point (M, q) of e(3)* or so(2,1)*.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub m: Vec3,
    pub q: Vec3,
}

impl PhasePoint {
    pub const fn new(m: Vec3, q: Vec3) -> Self {
        Self { m, q }
    }

    /// Coordinates in the order (M1, M2, M3, q1, q2, q3).
    pub fn to_array(&self) -> [f64; 6] {
        let (m, q) = (self.m.0, self.q.0);
        [m[0], m[1], m[2], q[0], q[1], q[2]]
    }

    pub fn from_array(x: &[f64; 6]) -> Self {
        Self {
            m: Vec3::new(x[0], x[1], x[2]),
            q: Vec3::new(x[3], x[4], x[5]),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite() && self.q.is_finite()
    }
}
