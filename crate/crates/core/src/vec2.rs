//! Minimal 2D vector type. Positions, controls and displacements are all
//! `Vec2`; coordinate 1 is `x`, coordinate 2 is `y`, matching the per-axis
//! energy budget indexing used throughout.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A point or vector in the plane. Serializes as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", into = "[T; 2]", from = "[T; 2]")]
pub struct Vec2<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Self) -> T {
        (self - other).norm_sq()
    }

    /// Rotate counterclockwise by `angle` radians.
    pub fn rotated(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn scaled(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    /// Coordinate access by axis index (0 or 1).
    pub fn coord(self, axis: usize) -> T {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => panic!("axis out of range: {axis}"),
        }
    }

    /// Lexicographic order by x, then y. Used for deterministic tie-breaks.
    pub fn lex_le(self, other: Self) -> bool {
        self.x < other.x || (self.x == other.x && self.y <= other.y)
    }
}

impl<T: Real> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> AddAssign for Vec2<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> SubAssign for Vec2<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scaled(k)
    }
}

impl<T: Real> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Real> From<[T; 2]> for Vec2<T> {
    fn from(a: [T; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl<T: Real> From<Vec2<T>> for [T; 2] {
    fn from(v: Vec2<T>) -> Self {
        [v.x, v.y]
    }
}
