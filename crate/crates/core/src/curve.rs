//! Arc-length sampled plane curves with unit tangents.
//!
//! Between samples the curve is the cubic Hermite interpolant of the two end
//! points and their tangents, scaled by the arc-length step. A sample may be
//! a corner, in which case it carries a separate incoming tangent and the
//! interpolant is only C⁰ there.

use crate::error::{Error, Result};
use crate::numeric::{brent, GaussLegendre};
use crate::point::PlanePoint;

/// Tolerance on `|tangent| = 1` when validating input samples.
pub const UNIT_TANGENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub point: PlanePoint,
    /// Outgoing unit tangent.
    pub tangent: PlanePoint,
}

/// One Hermite piece between consecutive samples.
#[derive(Debug, Clone, Copy)]
pub struct HermiteSegment {
    pub p0: PlanePoint,
    pub p1: PlanePoint,
    /// Tangents already scaled by `ds`.
    pub m0: PlanePoint,
    pub m1: PlanePoint,
    pub s0: f64,
    pub ds: f64,
}

impl HermiteSegment {
    /// Tangent handles have length `chord / cos²(Δθ/4)`, with `Δθ` the turn
    /// between the end tangents; this reproduces circular arcs to sixth order
    /// and straight segments exactly. `ds` only fixes the parametrization.
    pub fn new(p0: PlanePoint, t0: PlanePoint, p1: PlanePoint, t1: PlanePoint, s0: f64, ds: f64) -> Self {
        let chord = p0.distance(p1);
        let turn = t0.cross(t1).atan2(t0.dot(t1));
        let m = chord / (0.25 * turn).cos().powi(2);
        Self { p0, p1, m0: t0 * m, m1: t1 * m, s0, ds }
    }

    pub fn point(&self, u: f64) -> PlanePoint {
        let u2 = u * u;
        let u3 = u2 * u;
        self.p0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + self.m0 * (u3 - 2.0 * u2 + u)
            + self.p1 * (-2.0 * u3 + 3.0 * u2)
            + self.m1 * (u3 - u2)
    }

    /// Derivative with respect to the local parameter `u`.
    pub fn derivative(&self, u: f64) -> PlanePoint {
        let u2 = u * u;
        self.p0 * (6.0 * u2 - 6.0 * u)
            + self.m0 * (3.0 * u2 - 4.0 * u + 1.0)
            + self.p1 * (-6.0 * u2 + 6.0 * u)
            + self.m1 * (3.0 * u2 - 2.0 * u)
    }

    pub fn second_derivative(&self, u: f64) -> PlanePoint {
        self.p0 * (12.0 * u - 6.0)
            + self.m0 * (6.0 * u - 4.0)
            + self.p1 * (-12.0 * u + 6.0)
            + self.m1 * (6.0 * u - 2.0)
    }

    pub fn unit_tangent(&self, u: f64) -> PlanePoint {
        let d = self.derivative(u);
        if d.norm() == 0.0 {
            (self.p1 - self.p0).normalized()
        } else {
            d.normalized()
        }
    }

    /// Length of the interpolant over `[0, u]`.
    pub fn length_to(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        GaussLegendre::g16().integrate(0.0, u, |v| self.derivative(v).norm())
    }

    /// Arc-length position of the local parameter `u`, with the interpolant's
    /// own length rescaled onto the nominal step `ds`.
    pub fn arc_position(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.s0;
        }
        if u >= 1.0 {
            return self.s0 + self.ds;
        }
        let full = self.length_to(1.0);
        if full == 0.0 {
            return self.s0 + u * self.ds;
        }
        self.s0 + self.ds * self.length_to(u) / full
    }
}

/// Closed or open curve sampled by arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    samples: Vec<CurveSample>,
    tangent_in: Vec<PlanePoint>,
    total_length: f64,
    closed: bool,
}

impl SampledCurve {
    /// Smooth curve (no corners).
    pub fn new(samples: Vec<CurveSample>, total_length: f64, closed: bool) -> Result<Self> {
        let tangent_in = samples.iter().map(|c| c.tangent).collect();
        Self::with_corners(samples, tangent_in, total_length, closed)
    }

    /// Curve whose sample `k` has incoming tangent `tangent_in[k]`; samples
    /// where it differs from the outgoing tangent are corners.
    pub fn with_corners(
        samples: Vec<CurveSample>,
        tangent_in: Vec<PlanePoint>,
        total_length: f64,
        closed: bool,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidCurve("need at least two samples".into()));
        }
        if tangent_in.len() != samples.len() {
            return Err(Error::InvalidCurve("tangent_in length mismatch".into()));
        }
        if !(total_length.is_finite() && total_length > 0.0) {
            return Err(Error::InvalidCurve(format!("bad total length {total_length}")));
        }
        for (k, c) in samples.iter().enumerate() {
            if !(c.point.is_finite() && c.tangent.is_finite() && c.s.is_finite()) {
                return Err(Error::NonFinite(c.point.re, c.point.im));
            }
            if (c.tangent.norm() - 1.0).abs() > UNIT_TANGENT_TOL
                || (tangent_in[k].norm() - 1.0).abs() > UNIT_TANGENT_TOL
            {
                return Err(Error::InvalidCurve(format!("tangent at sample {k} is not unit")));
            }
            if k > 0 && c.s <= samples[k - 1].s {
                return Err(Error::InvalidCurve(format!("arc length not increasing at sample {k}")));
            }
        }
        let last = samples.last().unwrap().s;
        let s_ok = if closed { last < total_length } else { last <= total_length * (1.0 + 1e-12) };
        if samples[0].s < 0.0 || !s_ok {
            return Err(Error::InvalidCurve("arc length outside [0, total_length)".into()));
        }
        Ok(Self { samples, tangent_in, total_length, closed })
    }

    /// Builds a curve from points and tangents, measuring each step as the
    /// length of its Hermite interpolant.
    pub fn from_points_tangents(
        points: &[PlanePoint],
        tangents: &[PlanePoint],
        tangents_in: Option<&[PlanePoint]>,
        closed: bool,
    ) -> Result<Self> {
        let n = points.len();
        if n < 2 || tangents.len() != n || tangents_in.is_some_and(|t| t.len() != n) {
            return Err(Error::InvalidCurve("mismatched point/tangent lists".into()));
        }
        let t_out: Vec<_> = tangents.iter().map(|t| t.normalized()).collect();
        let t_in: Vec<_> = match tangents_in {
            Some(t) => t.iter().map(|t| t.normalized()).collect(),
            None => t_out.clone(),
        };
        let steps = if closed { n } else { n - 1 };
        let mut s = 0.0;
        let mut samples = Vec::with_capacity(n);
        let mut total = 0.0;
        for k in 0..steps {
            let j = (k + 1) % n;
            let ds = hermite_consistent_length(points[k], t_out[k], points[j], t_in[j]);
            samples.push(CurveSample { s, point: points[k], tangent: t_out[k] });
            s += ds;
            total = s;
        }
        if !closed {
            samples.push(CurveSample { s, point: points[n - 1], tangent: t_out[n - 1] });
        }
        Self::with_corners(samples, t_in, total, closed)
    }

    /// Closed polygon, every vertex a corner. Vertices are taken in order.
    pub fn polygon(vertices: &[PlanePoint]) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::InvalidCurve("polygon needs two vertices".into()));
        }
        let mut samples = Vec::with_capacity(n);
        let mut t_in = Vec::with_capacity(n);
        let mut s = 0.0;
        for k in 0..n {
            let next = vertices[(k + 1) % n];
            let prev = vertices[(k + n - 1) % n];
            let edge = next - vertices[k];
            if edge.norm() == 0.0 {
                return Err(Error::InvalidCurve(format!("repeated vertex {k}")));
            }
            samples.push(CurveSample { s, point: vertices[k], tangent: edge.normalized() });
            t_in.push((vertices[k] - prev).normalized());
            s += edge.norm();
        }
        Self::with_corners(samples, t_in, s, true)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn sample(&self, k: usize) -> &CurveSample {
        &self.samples[k]
    }

    pub fn tangent_in(&self, k: usize) -> PlanePoint {
        self.tangent_in[k]
    }

    pub fn tangents_in(&self) -> &[PlanePoint] {
        &self.tangent_in
    }

    pub fn is_corner(&self, k: usize) -> bool {
        (self.tangent_in[k] - self.samples[k].tangent).norm() > 1e-12
    }

    pub fn corner_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.is_corner(k)).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn points(&self) -> impl Iterator<Item = PlanePoint> + '_ {
        self.samples.iter().map(|c| c.point)
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    /// Hermite piece from sample `k` to the next one.
    pub fn segment(&self, k: usize) -> HermiteSegment {
        let n = self.len();
        let a = &self.samples[k];
        let j = (k + 1) % n;
        let b = &self.samples[j];
        let ds = if j == 0 { self.total_length - a.s + b.s } else { b.s - a.s };
        HermiteSegment::new(a.point, a.tangent, b.point, self.tangent_in[j], a.s, ds)
    }

    /// Reduces `sigma` into the parameter range (modulo the length when closed,
    /// clamped otherwise).
    pub fn wrap(&self, sigma: f64) -> f64 {
        if self.closed {
            let w = sigma.rem_euclid(self.total_length);
            if w >= self.total_length {
                0.0
            } else {
                w
            }
        } else {
            sigma.clamp(self.samples[0].s, self.samples.last().unwrap().s)
        }
    }

    /// Segment index and local parameter of the arc-length position `sigma`.
    pub fn locate(&self, sigma: f64) -> (usize, f64) {
        let sigma = self.wrap(sigma);
        let n = self.len();
        let k = match self.samples.binary_search_by(|c| c.s.partial_cmp(&sigma).unwrap()) {
            Ok(k) => return (k.min(self.segment_count() - 1), if k < self.segment_count() { 0.0 } else { 1.0 }),
            Err(0) => {
                // before the first sample on a closed curve: last segment
                if self.closed {
                    n - 1
                } else {
                    return (0, 0.0);
                }
            }
            Err(i) => i - 1,
        };
        let k = k.min(self.segment_count() - 1);
        let seg = self.segment(k);
        let mut rel = sigma - seg.s0;
        if rel < 0.0 {
            rel += self.total_length;
        }
        (k, (rel / seg.ds).clamp(0.0, 1.0))
    }

    pub fn point_at(&self, sigma: f64) -> PlanePoint {
        let (k, u) = self.locate(sigma);
        if u == 0.0 {
            return self.samples[k].point;
        }
        self.segment(k).point(u)
    }

    /// Unit tangent at `sigma` (outgoing tangent at a corner).
    pub fn tangent_at(&self, sigma: f64) -> PlanePoint {
        let (k, u) = self.locate(sigma);
        if u == 0.0 {
            return self.samples[k].tangent;
        }
        self.segment(k).unit_tangent(u)
    }

    /// Position `s_k + u·ds` of a point given by segment index and local
    /// parameter; the exact inverse of [`SampledCurve::locate`].
    pub fn param_position(&self, k: usize, u: f64) -> f64 {
        let seg = self.segment(k);
        self.wrap(seg.s0 + u * seg.ds)
    }

    /// Arc-length position measured along the interpolant (differs from
    /// [`SampledCurve::param_position`] at the interpolation-error level).
    pub fn arc_position(&self, k: usize, u: f64) -> f64 {
        self.wrap(self.segment(k).arc_position(u))
    }

    /// Signed area of the sample polygon (positive when counterclockwise).
    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| self.samples[k].point.cross(self.samples[(k + 1) % n].point))
            .sum::<f64>()
            * 0.5
    }

    /// Area centroid of the sample polygon; falls back to the vertex mean for
    /// degenerate polygons.
    pub fn centroid(&self) -> PlanePoint {
        let n = self.len();
        let area = self.signed_area();
        let mean = self.points().sum::<PlanePoint>() / n as f64;
        if area.abs() < 1e-14 * self.diameter().powi(2) {
            return mean;
        }
        let mut c = PlanePoint::ZERO;
        for k in 0..n {
            let a = self.samples[k].point - mean;
            let b = self.samples[(k + 1) % n].point - mean;
            c += (a + b) * a.cross(b);
        }
        mean + c / (6.0 * area)
    }

    /// Largest distance between two samples.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<_> = self.points().collect();
        let mut d: f64 = 0.0;
        // coarse bound is enough for tolerance scaling
        let step = (pts.len() / 256).max(1);
        for i in (0..pts.len()).step_by(step) {
            for p in &pts {
                d = d.max(pts[i].distance(*p));
            }
        }
        d
    }

    /// Chord-length perimeter at full and half resolution combined by
    /// Richardson extrapolation (chord error is `O(h²)`). Returns the
    /// extrapolated value and the size of the correction as an error estimate.
    pub fn chord_perimeter_estimate(&self) -> (f64, f64) {
        let n = self.len();
        let steps = self.segment_count();
        let chord = |stride: usize| -> f64 {
            let mut total = 0.0;
            let mut k = 0;
            while k < steps {
                let j = if self.closed { (k + stride).min(n) % n } else { (k + stride).min(n - 1) };
                total += self.samples[k].point.distance(self.samples[j].point);
                k += stride;
            }
            total
        };
        let fine = chord(1);
        let coarse = chord(2);
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        (extrapolated, (extrapolated - fine).abs())
    }

    /// Largest relative mismatch between chord lengths and arc-length steps.
    pub fn chord_fidelity(&self) -> f64 {
        (0..self.segment_count())
            .map(|k| {
                let seg = self.segment(k);
                ((seg.p1 - seg.p0).norm() - seg.ds).abs() / seg.ds
            })
            .fold(0.0, f64::max)
    }

    /// Signed turning angle at each sample between the incoming and outgoing
    /// chords (zero-length chords skipped). Corner spikes show up here.
    pub fn turning_angles(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            if !self.closed && (k == 0 || k == n - 1) {
                continue;
            }
            let prev = self.samples[(k + n - 1) % n].point;
            let here = self.samples[k].point;
            let next = self.samples[(k + 1) % n].point;
            let a = here - prev;
            let b = next - here;
            if a.norm() == 0.0 || b.norm() == 0.0 {
                continue;
            }
            *slot = a.cross(b).atan2(a.dot(b));
        }
        out
    }

    /// Tangent-based turning: angle from incoming to outgoing tangent at each
    /// sample, zero away from corners.
    pub fn corner_turning(&self, k: usize) -> f64 {
        let a = self.tangent_in[k];
        let b = self.samples[k].tangent;
        a.cross(b).atan2(a.dot(b))
    }

    /// Whether `p` lies inside the sample polygon of a closed
    /// counterclockwise curve, with slack `tol` (positive tol = stricter).
    pub fn contains_polygonal(&self, p: PlanePoint, tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|k| {
            let a = self.samples[k].point;
            let b = self.samples[(k + 1) % n].point;
            let e = b - a;
            let len = e.norm();
            len == 0.0 || e.cross(p - a) / len >= tol
        })
    }

    /// Distance from `p` to the interpolated curve.
    pub fn distance_to(&self, p: PlanePoint) -> f64 {
        let n = self.len();
        let (best, _) = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, c)| (k, c.point.distance(p)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { (x.0, x.1) } else { acc });
        let mut d = self.samples[best].point.distance(p);
        let candidates = [(best + n - 1) % n, best];
        for &k in &candidates {
            if k >= self.segment_count() {
                continue;
            }
            let seg = self.segment(k);
            let g = |u: f64| (seg.point(u) - p).dot(seg.derivative(u));
            let (g0, g1) = (g(0.0), g(1.0));
            if g0 < 0.0 && g1 > 0.0 {
                if let Ok(u) = brent(g, 0.0, 1.0, 1e-15) {
                    d = d.min(seg.point(u).distance(p));
                }
            }
        }
        d
    }

    /// Applies a map to every point and tangent (tangents use the linear part
    /// `tangent_map`). Arc lengths are kept, so the map should be an isometry.
    pub fn map_isometry<F, G>(&self, point_map: F, tangent_map: G) -> Self
    where
        F: Fn(PlanePoint) -> PlanePoint,
        G: Fn(PlanePoint) -> PlanePoint,
    {
        Self {
            samples: self
                .samples
                .iter()
                .map(|c| CurveSample { s: c.s, point: point_map(c.point), tangent: tangent_map(c.tangent) })
                .collect(),
            tangent_in: self.tangent_in.iter().map(|&t| tangent_map(t)).collect(),
            total_length: self.total_length,
            closed: self.closed,
        }
    }
}

/// Length of the Hermite piece between two oriented points.
fn hermite_consistent_length(p0: PlanePoint, t0: PlanePoint, p1: PlanePoint, t1: PlanePoint) -> f64 {
    HermiteSegment::new(p0, t0, p1, t1, 0.0, 1.0).length_to(1.0)
}
