//! One-sided derivative jumps of an arc-length sampled curve at junctions.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::numeric::one_sided_weights;
use crate::point::PlanePoint;

use super::config::SwitchedConfig;

/// Germ stretch `ε/ŝ` for smoothness measurements. The one-sided stencils
/// must stay where `φ` is the germ polynomial while being wide enough for
/// truncation to dominate rounding; the default `ŝ/100` is too short for both.
pub const SMOOTHNESS_EPS_FRACTION: f64 = 0.04;
/// Samples per branch for smoothness measurements.
pub const SMOOTHNESS_SAMPLES: usize = 4096;
/// Fine stencil stride (in samples) for smoothness measurements.
pub const SMOOTHNESS_STRIDE: usize = 24;

/// `config` with the germ stretch used for smoothness measurements.
pub fn smoothness_config(config: SwitchedConfig) -> Result<SwitchedConfig> {
    config.with_mollifier(SMOOTHNESS_EPS_FRACTION * config.s_hat, config.delta)
}

/// Stencil truncation order for the `order`-th derivative.
fn stencil_accuracy(order: usize) -> i32 {
    5 - order as i32
}

/// Jump of the `order`-th arc-length derivative at one junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEstimate {
    pub junction: f64,
    pub order: usize,
    /// Stencil spacing of the fine estimate.
    pub spacing: f64,
    pub coarse: f64,
    pub fine: f64,
    /// Richardson extrapolation of the two estimates.
    pub extrapolated: f64,
    /// `coarse / fine`.
    pub ratio: f64,
}

impl JumpEstimate {
    /// Ratio expected when the true jump is zero; a jump converging to a
    /// nonzero constant gives a ratio near 1.
    pub fn predicted_ratio(&self) -> f64 {
        2f64.powi(stencil_accuracy(self.order))
    }

    /// Relative deviation of the measured ratio from `expected`.
    pub fn ratio_error(&self, expected: f64) -> f64 {
        (self.ratio / expected - 1.0).abs()
    }
}

/// Samples `center + k·step` for `k = 0..5` (`step` may be negative).
fn stencil(curve: &SampledCurve, center: usize, step: isize) -> [PlanePoint; 5] {
    let n = curve.len() as isize;
    std::array::from_fn(|k| curve.sample((center as isize + k as isize * step).rem_euclid(n) as usize).point)
}

fn one_sided(points: &[PlanePoint; 5], order: usize, h: f64) -> PlanePoint {
    let w = one_sided_weights(order);
    points.iter().zip(w).map(|(&p, w)| p * w).sum::<PlanePoint>() / h.powi(order as i32)
}

fn jump(curve: &SampledCurve, center: usize, stride: usize, order: usize, h: f64) -> f64 {
    let right = one_sided(&stencil(curve, center, stride as isize), order, h);
    // the left stencil runs backwards, which flips odd derivatives
    let left = one_sided(&stencil(curve, center, -(stride as isize)), order, -h);
    (right - left).norm()
}

/// Index of the sample at arc length `sigma`, if there is one.
fn sample_index(curve: &SampledCurve, sigma: f64) -> Option<usize> {
    let sigma = curve.wrap(sigma);
    let tol = 1e-9 * curve.total_length();
    let k = curve.samples().partition_point(|c| c.s < sigma - tol);
    let n = curve.len();
    [k % n, (k + n - 1) % n].into_iter().find(|&k| {
        let d = (curve.sample(k).s - sigma).abs();
        d <= tol || (curve.total_length() - d).abs() <= tol
    })
}

/// Spacing of the samples within `reach` indices of `center`, if uniform.
fn uniform_spacing(curve: &SampledCurve, center: usize, reach: usize) -> Option<f64> {
    let n = curve.len();
    let length = curve.total_length();
    let step = |k: usize| {
        let a = curve.sample(k % n).s;
        let b = curve.sample((k + 1) % n).s;
        if b > a { b - a } else { b + length - a }
    };
    let h = step(center);
    let first = center + n - reach;
    (first..center + n + reach).all(|k| (step(k) - h).abs() <= 1e-9 * h).then_some(h)
}

/// Jumps of the one-sided derivatives of orders `1..=max_order` at each
/// junction. Stencils use every `stride`-th sample for the fine estimate
/// and every `2·stride`-th for the coarse one; the curve must be sampled
/// uniformly in arc length around each junction, with the junction itself
/// a sample.
pub fn smoothness_report(curve: &SampledCurve, junctions: &[f64], max_order: usize, stride: usize) -> Result<Vec<JumpEstimate>> {
    if !(1..=3).contains(&max_order) {
        return Err(Error::InvalidArgument(format!("max_order must be 1..=3, got {max_order}")));
    }
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    let reach = 8 * stride;
    if !curve.is_closed() || curve.len() < 2 * reach + 1 {
        return Err(Error::InsufficientResolution(format!(
            "stencils of {reach} samples per side need a closed curve with more than {} samples",
            2 * reach
        )));
    }
    let mut out = Vec::with_capacity(junctions.len() * max_order);
    for &sigma in junctions {
        let center = sample_index(curve, sigma)
            .ok_or_else(|| Error::InsufficientResolution(format!("junction {sigma} is not a sample position")))?;
        let h = uniform_spacing(curve, center, reach)
            .ok_or_else(|| Error::InsufficientResolution(format!("sampling is not uniform near junction {sigma}")))?;
        for order in 1..=max_order {
            let fine = jump(curve, center, stride, order, stride as f64 * h);
            let coarse = jump(curve, center, 2 * stride, order, 2.0 * stride as f64 * h);
            let gain = 2f64.powi(stencil_accuracy(order)) - 1.0;
            out.push(JumpEstimate {
                junction: sigma,
                order,
                spacing: stride as f64 * h,
                coarse,
                fine,
                extrapolated: fine + (fine - coarse) / gain,
                ratio: coarse / fine,
            });
        }
    }
    Ok(out)
}
