//! The four-corner caustic `γ(s) = A + ∫₀ˢ exp(i(φ(t) − α)) dt` on
//! `[0, ŝ]`, continued by quarter turns.

use crate::body::ConvexBody;
use crate::curve::{CurveSample, SampledCurve};
use crate::error::{Error, Result};
use crate::numeric::{GaussLegendre, PanelInterpolant};
use crate::point::PlanePoint;

use super::config::{SwitchedConfig, CORNER_A};
use super::phi::PhiFunction;

/// Largest accepted disagreement between the 16- and 8-point quadratures of
/// the quarter curve's end point.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Quarter curve `γ₀` tabulated on quadrature panels, and the full caustic
/// `γ(kŝ + r) = iᵏγ₀(r)`.
#[derive(Debug, Clone)]
pub struct Caustic {
    phi: PhiFunction,
    alpha: f64,
    s_hat: f64,
    panel: f64,
    /// Per panel: values at the left end, the 16 Gauss nodes and the right end.
    phi_vals: Vec<[f64; 18]>,
    gamma_vals: Vec<[PlanePoint; 18]>,
    rule_mismatch: f64,
}

pub fn build_gamma(phi: PhiFunction, config: &SwitchedConfig) -> Result<Caustic> {
    build_gamma_with(phi, config, 2048)
}

pub fn build_gamma_with(phi: PhiFunction, config: &SwitchedConfig, panels: usize) -> Result<Caustic> {
    let s_hat = config.s_hat;
    let alpha = config.alpha;
    let h = s_hat / panels as f64;
    let g = GaussLegendre::g16();
    let interp = PanelInterpolant::shared();
    let phi_vals: Vec<[f64; 18]> = (0..panels)
        .map(|j| {
            let a = j as f64 * h;
            let mut v = [0.0; 18];
            v[0] = phi.phi(a);
            v[17] = phi.phi(if j + 1 == panels { s_hat } else { a + h });
            for m in 0..16 {
                v[m + 1] = phi.phi(a + h * g.nodes[m]);
            }
            v
        })
        .collect();
    let dir = |p: f64| PlanePoint::from_angle(p - alpha);
    let mut gamma_vals = Vec::with_capacity(panels);
    let mut start = CORNER_A;
    let g8 = GaussLegendre::new(8);
    let mut coarse = CORNER_A;
    for vals in &phi_vals {
        let mut v = [PlanePoint::ZERO; 18];
        v[0] = start;
        for m in 0..16 {
            let u = g.nodes[m];
            let partial: PlanePoint = g.nodes.iter().zip(&g.weights).map(|(&x, &w)| dir(interp.eval(vals, u * x)) * w).sum();
            v[m + 1] = start + partial * (h * u);
        }
        let full: PlanePoint = (0..16).map(|m| dir(vals[m + 1]) * g.weights[m]).sum();
        let end = start + full * h;
        v[17] = end;
        let full8: PlanePoint = g8.nodes.iter().zip(&g8.weights).map(|(&x, &w)| dir(interp.eval(vals, x)) * w).sum();
        coarse += full8 * h;
        gamma_vals.push(v);
        start = end;
    }
    let rule_mismatch = (coarse - start).norm();
    if rule_mismatch.is_nan() || rule_mismatch > QUADRATURE_TOL {
        return Err(Error::QuadratureNonConvergence(rule_mismatch));
    }
    Ok(Caustic { phi, alpha, s_hat, panel: h, phi_vals, gamma_vals, rule_mismatch })
}

impl Caustic {
    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    pub fn s_hat(&self) -> f64 {
        self.s_hat
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn perimeter(&self) -> f64 {
        4.0 * self.s_hat
    }

    /// Disagreement between the two quadrature rules at `γ(ŝ)`.
    pub fn quadrature_mismatch(&self) -> f64 {
        self.rule_mismatch
    }

    fn split(&self, s: f64) -> (i32, f64) {
        let q = (s / self.s_hat).floor();
        let r = s - q * self.s_hat;
        ((q as i64).rem_euclid(4) as i32, r.clamp(0.0, self.s_hat))
    }

    /// Like `split`, but a corner belongs to the quarter that ends there.
    fn split_left(&self, s: f64) -> (i32, f64) {
        match self.split(s) {
            (q, 0.0) => (q - 1, self.s_hat),
            qr => qr,
        }
    }

    fn locate(&self, r: f64) -> (usize, f64) {
        let n = self.phi_vals.len();
        let j = ((r / self.panel) as usize).min(n - 1);
        (j, ((r - j as f64 * self.panel) / self.panel).clamp(0.0, 1.0))
    }

    /// `φ(r)` on the quarter `[0, ŝ]`.
    pub fn quarter_phi(&self, r: f64) -> f64 {
        let (j, u) = self.locate(r);
        PanelInterpolant::shared().eval(&self.phi_vals[j], u)
    }

    /// `γ₀(r)` on the quarter `[0, ŝ]`.
    pub fn quarter_point(&self, r: f64) -> PlanePoint {
        let (j, u) = self.locate(r);
        PanelInterpolant::shared().eval(&self.gamma_vals[j], u)
    }

    /// `γ(s)` for any `s` (period `4ŝ`).
    pub fn point(&self, s: f64) -> PlanePoint {
        let (q, r) = self.split(s);
        self.quarter_point(r).rot_quarter(q)
    }

    /// Unit tangent `γ′(s)`; at a corner, the outgoing one.
    pub fn tangent(&self, s: f64) -> PlanePoint {
        let (q, r) = self.split(s);
        PlanePoint::from_angle(self.quarter_phi(r) - self.alpha).rot_quarter(q)
    }

    /// Incoming unit tangent at `s`; differs from [`Caustic::tangent`] only at corners.
    pub fn tangent_left(&self, s: f64) -> PlanePoint {
        let (q, r) = self.split_left(s);
        PlanePoint::from_angle(self.quarter_phi(r) - self.alpha).rot_quarter(q)
    }

    /// Curvature `φ′` at `s`.
    pub fn curvature(&self, s: f64) -> f64 {
        let (_, r) = self.split(s);
        self.phi.rate(r)
    }

    /// End of the quarter curve, `γ(ŝ)`; `iA = 1 − i` when the construction closes.
    pub fn quarter_end(&self) -> PlanePoint {
        self.gamma_vals.last().unwrap()[17]
    }

    /// Sampled closed caustic with `per_quarter` samples on each quarter and
    /// corners at `iᵏA`.
    pub fn sampled(&self, per_quarter: usize) -> Result<SampledCurve> {
        if per_quarter < 2 {
            return Err(Error::InvalidArgument("need two samples per quarter".into()));
        }
        let mut samples = Vec::with_capacity(4 * per_quarter);
        let mut t_in = Vec::with_capacity(4 * per_quarter);
        let end_tangent = PlanePoint::from_angle(self.phi.phi(self.s_hat) - self.alpha);
        for q in 0..4 {
            for k in 0..per_quarter {
                let r = self.s_hat * k as f64 / per_quarter as f64;
                let s = q as f64 * self.s_hat + r;
                let point = self.quarter_point(r).rot_quarter(q);
                let tangent = PlanePoint::from_angle(self.quarter_phi(r) - self.alpha).rot_quarter(q);
                samples.push(CurveSample { s, point, tangent });
                t_in.push(if k == 0 { end_tangent.rot_quarter(q - 1) } else { tangent });
            }
        }
        SampledCurve::with_corners(samples, t_in, self.perimeter(), true)
    }

    pub fn body(&self, per_quarter: usize) -> Result<ConvexBody> {
        ConvexBody::curve(self.sampled(per_quarter)?)
    }
}
