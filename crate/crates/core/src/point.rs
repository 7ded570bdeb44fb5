//! Points and vectors of the plane, with the complex arithmetic `x + iy`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A point or vector of the plane, read as the complex number `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePoint {
    pub re: f64,
    pub im: f64,
}

/// The imaginary unit, i.e. the quarter-turn rotation.
pub const I: PlanePoint = PlanePoint { re: 0.0, im: 1.0 };

impl PlanePoint {
    pub const ZERO: PlanePoint = PlanePoint { re: 0.0, im: 0.0 };

    /// Panics on NaN or infinite coordinates; use [`PlanePoint::try_new`] for
    /// untrusted input.
    pub fn new(re: f64, im: f64) -> Self {
        assert!(re.is_finite() && im.is_finite(), "non-finite PlanePoint ({re}, {im})");
        Self { re, im }
    }

    pub fn try_new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(Error::NonFinite(re, im))
        }
    }

    /// `e^{iθ}`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { re: c, im: s }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self::from_angle(theta) * r
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    /// Unit vector in the same direction. Zero stays zero.
    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    /// Euclidean inner product `Re(z₁ z̄₂)`.
    pub fn dot(self, other: Self) -> f64 {
        self.re * other.re + self.im * other.im
    }

    /// `Im(z̄₁ z₂)`: positive when `other` is counterclockwise of `self`.
    pub fn cross(self, other: Self) -> f64 {
        self.re * other.im - self.im * other.re
    }

    /// Multiplication by `i` (quarter turn counterclockwise), exact in floating point.
    pub fn rot90(self) -> Self {
        Self { re: -self.im, im: self.re }
    }

    /// Multiplication by `i^k`, exact in floating point.
    pub fn rot_quarter(self, k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => self,
            1 => self.rot90(),
            2 => -self,
            _ => -self.rot90(),
        }
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Mirror image in the line through the origin with direction angle `axis`.
    pub fn reflect_through_axis(self, axis: f64) -> Self {
        Self::from_angle(2.0 * axis) * self.conj()
    }
}

/// `z₁·z₂ := ½ Re(z₁ z̄₂)`.
pub fn half_dot(z1: PlanePoint, z2: PlanePoint) -> f64 {
    0.5 * z1.dot(z2)
}

impl Add for PlanePoint {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign for PlanePoint {
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for PlanePoint {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl SubAssign for PlanePoint {
    fn sub_assign(&mut self, o: Self) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl Neg for PlanePoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Mul for PlanePoint {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Mul<f64> for PlanePoint {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }
}

impl Mul<PlanePoint> for f64 {
    type Output = PlanePoint;
    fn mul(self, z: PlanePoint) -> PlanePoint {
        z * self
    }
}

impl Div<f64> for PlanePoint {
    type Output = Self;
    fn div(self, k: f64) -> Self {
        Self { re: self.re / k, im: self.im / k }
    }
}

impl Div for PlanePoint {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        Self {
            re: (self.re * o.re + self.im * o.im) / d,
            im: (self.im * o.re - self.re * o.im) / d,
        }
    }
}

impl std::iter::Sum for PlanePoint {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(PlanePoint::ZERO, |a, b| a + b)
    }
}

impl From<(f64, f64)> for PlanePoint {
    fn from((re, im): (f64, f64)) -> Self {
        PlanePoint::new(re, im)
    }
}
