//! Reference curves sampled uniformly in arc length.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::body::ConvexBody;
use crate::curve::{CurveSample, SampledCurve};
use crate::numeric::GaussLegendre;
use crate::point::PlanePoint;

pub fn circle_curve(center: PlanePoint, r: f64, n: usize) -> SampledCurve {
    let samples = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            CurveSample { s: r * t, point: center + PlanePoint::from_polar(r, t), tangent: PlanePoint::from_angle(t + FRAC_PI_2) }
        })
        .collect();
    SampledCurve::new(samples, TAU * r, true).expect("valid circle")
}

pub fn circle(center: PlanePoint, r: f64, n: usize) -> ConvexBody {
    ConvexBody::curve(circle_curve(center, r, n)).expect("circle is convex")
}

/// Arc length of `(a cos t, b sin t)` from the parameter origin.
struct EllipseArc {
    a: f64,
    b: f64,
    panel: f64,
    cumulative: Vec<f64>,
}

impl EllipseArc {
    const PANELS: usize = 512;

    fn new(a: f64, b: f64) -> Self {
        let panel = TAU / Self::PANELS as f64;
        let g = GaussLegendre::g16();
        let mut cumulative = vec![0.0; Self::PANELS + 1];
        for j in 0..Self::PANELS {
            let t0 = j as f64 * panel;
            cumulative[j + 1] = cumulative[j] + g.integrate(t0, t0 + panel, |t| Self::speed_of(a, b, t));
        }
        Self { a, b, panel, cumulative }
    }

    fn speed_of(a: f64, b: f64, t: f64) -> f64 {
        (a * t.sin()).hypot(b * t.cos())
    }

    fn speed(&self, t: f64) -> f64 {
        Self::speed_of(self.a, self.b, t)
    }

    fn length(&self) -> f64 {
        self.cumulative[Self::PANELS]
    }

    fn at(&self, t: f64) -> f64 {
        let j = ((t / self.panel) as usize).min(Self::PANELS - 1);
        let t0 = j as f64 * self.panel;
        self.cumulative[j] + GaussLegendre::g16().integrate(t0, t, |x| self.speed(x))
    }

    /// Parameter with arc length `sigma` (Newton from the proportional guess).
    fn invert(&self, sigma: f64) -> f64 {
        let mut t = TAU * sigma / self.length();
        for _ in 0..30 {
            let dt = (self.at(t) - sigma) / self.speed(t);
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        t
    }
}

/// Ellipse with semi-axes `a` (along x) and `b`, counterclockwise from
/// `(a, 0)`, `n` samples uniform in arc length.
pub fn ellipse_curve(center: PlanePoint, a: f64, b: f64, n: usize) -> SampledCurve {
    let arc = EllipseArc::new(a, b);
    let total = arc.length();
    let samples = (0..n)
        .map(|k| {
            let s = total * k as f64 / n as f64;
            let t = arc.invert(s);
            let (sn, cs) = t.sin_cos();
            CurveSample {
                s,
                point: center + PlanePoint::new(a * cs, b * sn),
                tangent: PlanePoint::new(-a * sn, b * cs).normalized(),
            }
        })
        .collect();
    SampledCurve::new(samples, total, true).expect("valid ellipse")
}

pub fn ellipse(center: PlanePoint, a: f64, b: f64, n: usize) -> ConvexBody {
    ConvexBody::curve(ellipse_curve(center, a, b, n)).expect("ellipse is convex")
}

/// Perimeter of the ellipse with semi-axes `a`, `b`.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    EllipseArc::new(a, b).length()
}

/// Semi-major axis of the ellipse confocal with `(a, b)` having semi-minor axis `b2`.
pub fn confocal_semi_major(a: f64, b: f64, b2: f64) -> f64 {
    (b2 * b2 + a * a - b * b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ellipse_samples_are_on_ellipse_and_uniform() {
        let c = ellipse_curve(PlanePoint::ZERO, 2.0, 1.0, 8192);
        // Ramanujan's second approximation is good to ~1e-9 here
        let h: f64 = (1.0f64 / 3.0).powi(2);
        let ram = PI * 3.0 * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((c.total_length() - ram).abs() < 1e-6);
        for s in c.samples() {
            let p = s.point;
            assert!(((p.re / 2.0).powi(2) + p.im.powi(2) - 1.0).abs() < 1e-14);
        }
        assert!(c.chord_fidelity() < 1e-6);
        assert!((c.point_at(c.total_length() / 4.0) - PlanePoint::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn confocal_axes() {
        let a2 = confocal_semi_major(2.0, 1.0, 0.5);
        assert!((a2 * a2 - 0.25 - 3.0).abs() < 1e-14);
    }
}
