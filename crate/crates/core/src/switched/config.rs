use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use crate::error::{Error, Infeasibility, Result};
use crate::numeric::bisect;
use crate::point::PlanePoint;

/// First corner of the caustic, `A = −1 − i`.
pub const CORNER_A: PlanePoint = PlanePoint { re: -1.0, im: -1.0 };
/// `B = iA = 1 − i`.
pub const CORNER_B: PlanePoint = PlanePoint { re: 1.0, im: -1.0 };

/// Reference corner angle used by the CLI and the tests.
pub const REFERENCE_ALPHA: f64 = 0.39;

fn check_alpha(alpha: f64, upper: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < upper {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `(ℓ, ℓ̂, ŝ)` with `ℓ = 1/sin α`, `ℓ̂ = √2 / sin(π/4 − α)` and `ŝ = 2ℓ̂ − 2ℓ`.
pub fn string_lengths(alpha: f64) -> Result<(f64, f64, f64)> {
    check_alpha(alpha, FRAC_PI_4)?;
    let ell = 1.0 / alpha.sin();
    let ell_hat = 2f64.sqrt() / (FRAC_PI_4 - alpha).sin();
    Ok((ell, ell_hat, 2.0 * ell_hat - 2.0 * ell))
}

/// Germ `(φ₁, φ₂)` of the tangent angle at the corner, `φ(s) = φ₁s + φ₂s² + …`.
pub fn germ_coeffs(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha, FRAC_PI_2)?;
    let (s2, c2) = (2.0 * alpha).sin_cos();
    Ok((0.5 * alpha.cos() * (1.0 + s2), -0.125 * c2 * c2 * s2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible(Infeasibility),
}

/// Margin of the upper inequality `ℓ̂ − ℓ < 1/cos α` (positive when it holds).
pub fn upper_margin(alpha: f64) -> Result<f64> {
    let (ell, ell_hat, _) = string_lengths(alpha)?;
    Ok(1.0 / alpha.cos() - (ell_hat - ell))
}

/// Margin of the lower inequality `3 sin α − cos α > cos α sin α − sin² α`.
pub fn lower_margin(alpha: f64) -> Result<f64> {
    check_alpha(alpha, FRAC_PI_4)?;
    let (s, c) = alpha.sin_cos();
    Ok(3.0 * s - c - (c * s - s * s))
}

pub fn feasibility(alpha: f64) -> Result<Feasibility> {
    if upper_margin(alpha)? <= 0.0 {
        return Ok(Feasibility::Infeasible(Infeasibility::UpperBound));
    }
    if lower_margin(alpha)? <= 0.0 {
        return Ok(Feasibility::Infeasible(Infeasibility::LowerBound));
    }
    Ok(Feasibility::Feasible)
}

/// Endpoints of the feasible interval, each the root of one inequality
/// found by bisection.
pub fn feasibility_window() -> Result<(f64, f64)> {
    let lo = bisect(|a| lower_margin(a).unwrap_or(f64::NAN), 0.1, FRAC_PI_8, 1e-15)?;
    let hi = bisect(|a| upper_margin(a).unwrap_or(f64::NAN), 0.2, 0.7, 1e-15)?;
    Ok((lo, hi))
}

/// Parameters of the switched construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchedConfig {
    pub alpha: f64,
    pub ell: f64,
    pub ell_hat: f64,
    pub s_hat: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// Length of the initial stretch where `φ` is exactly the germ polynomial.
    pub eps: f64,
    /// Width of the ramps that carry `φ` up to `α`.
    pub delta: f64,
}

impl SwitchedConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        let (ell, ell_hat, s_hat) = string_lengths(alpha)?;
        if let Feasibility::Infeasible(why) = feasibility(alpha)? {
            return Err(Error::InfeasibleAlpha(why));
        }
        let (phi1, phi2) = germ_coeffs(alpha)?;
        Ok(Self { alpha, ell, ell_hat, s_hat, phi1, phi2, eps: s_hat / 100.0, delta: s_hat / 50.0 })
    }

    pub fn with_mollifier(mut self, eps: f64, delta: f64) -> Result<Self> {
        let half = 0.5 * self.s_hat;
        if !(eps > 0.0 && delta > 0.0 && 2.0 * eps + delta < half - delta) {
            return Err(Error::InvalidArgument(format!("mollifier widths eps = {eps}, delta = {delta} do not fit")));
        }
        self.eps = eps;
        self.delta = delta;
        Ok(self)
    }

    /// Replaces the germ; the resulting table is generally not C².
    pub fn with_germ(mut self, phi1: f64, phi2: f64) -> Self {
        self.phi1 = phi1;
        self.phi2 = phi2;
        self
    }

    /// Whether the germ is the one that makes the table C².
    pub fn has_smooth_germ(&self) -> bool {
        germ_coeffs(self.alpha).is_ok_and(|g| g == (self.phi1, self.phi2))
    }

    /// String parameter of the table, `S = 3ŝ + 2ℓ = 2ŝ + 2ℓ̂`.
    pub fn string_parameter(&self) -> f64 {
        3.0 * self.s_hat + 2.0 * self.ell
    }

    /// Turning angle of the caustic at each corner.
    pub fn corner_angle(&self) -> f64 {
        FRAC_PI_2 - 2.0 * self.alpha
    }
}
