//! Compact convex bodies: support function, tangent lines from an exterior
//! point and cap-body perimeters.

use std::f64::consts::{PI, TAU};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::numeric::brent;
use crate::point::PlanePoint;

/// Relative tolerance of geometric predicates, scaled by the body diameter.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Point,
    Segment,
    Polygon,
    Curve,
}

/// Boundary point where a supporting line touches the body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: PlanePoint,
    /// Arc-length position on the boundary (0 for a point body).
    pub sigma: f64,
}

/// The two tangency points seen from an exterior point. `left` is the
/// clockwise-most point of the body as seen from the viewer, `right` the
/// counterclockwise-most one; the boundary arc from `left` to `right`
/// (counterclockwise) is the far side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPair {
    pub left: BoundaryPoint,
    pub right: BoundaryPoint,
}

/// Convex compact set with a counterclockwise boundary.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    kind: BodyKind,
    /// `None` only for a point body.
    boundary: Option<SampledCurve>,
    point: PlanePoint,
    centroid: PlanePoint,
    diameter: f64,
    /// Unwrapped incoming/outgoing tangent angles at each sample.
    angle_in: Vec<f64>,
    angle_out: Vec<f64>,
}

impl ConvexBody {
    pub fn point(p: PlanePoint) -> Self {
        Self {
            kind: BodyKind::Point,
            boundary: None,
            point: p,
            centroid: p,
            diameter: 0.0,
            angle_in: Vec::new(),
            angle_out: Vec::new(),
        }
    }

    /// Segment, traversed both ways: perimeter is twice its length.
    pub fn segment(a: PlanePoint, b: PlanePoint) -> Result<Self> {
        if a == b {
            return Ok(Self::point(a));
        }
        let curve = SampledCurve::polygon(&[a, b])?;
        Ok(Self::from_boundary(BodyKind::Segment, curve))
    }

    /// Convex polygon from counterclockwise vertices.
    pub fn polygon(vertices: &[PlanePoint]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidCurve("polygon needs three vertices".into()));
        }
        let curve = SampledCurve::polygon(vertices)?;
        check_convex_ccw(&curve)?;
        Ok(Self::from_boundary(BodyKind::Polygon, curve))
    }

    /// Body bounded by a closed counterclockwise convex curve.
    pub fn curve(curve: SampledCurve) -> Result<Self> {
        if !curve.is_closed() {
            return Err(Error::InvalidCurve("boundary must be closed".into()));
        }
        check_convex_ccw(&curve)?;
        Ok(Self::from_boundary(BodyKind::Curve, curve))
    }

    /// Convex hull of a point cloud (monotone chain); degenerates to a
    /// segment or point as needed.
    pub fn hull(points: &[PlanePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        match hull.len() {
            0 => Err(Error::InvalidCurve("empty point set".into())),
            1 => Ok(Self::point(hull[0])),
            2 => Self::segment(hull[0], hull[1]),
            _ => Self::polygon(&hull),
        }
    }

    fn from_boundary(kind: BodyKind, curve: SampledCurve) -> Self {
        let centroid = match kind {
            BodyKind::Segment => (curve.sample(0).point + curve.sample(1).point) * 0.5,
            _ => curve.centroid(),
        };
        let diameter = curve.diameter();
        let n = curve.len();
        let mut angle_in = vec![0.0; n + 1];
        let mut angle_out = vec![0.0; n + 1];
        angle_out[0] = curve.sample(0).tangent.arg();
        angle_in[0] = angle_out[0] - curve.corner_turning(0).max(0.0);
        for k in 1..=n {
            let prev = curve.sample(k - 1).tangent;
            let t_in = curve.tangent_in(k % n);
            angle_in[k] = angle_out[k - 1] + turn(prev, t_in);
            angle_out[k] = angle_in[k] + curve.corner_turning(k % n);
        }
        // close the loop exactly
        angle_out[n] = angle_out[0] + TAU;
        Self { kind, point: curve.sample(0).point, boundary: Some(curve), centroid, diameter, angle_in, angle_out }
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn boundary(&self) -> Option<&SampledCurve> {
        self.boundary.as_ref()
    }

    pub fn centroid(&self) -> PlanePoint {
        self.centroid
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn perimeter(&self) -> f64 {
        self.boundary.as_ref().map_or(0.0, |c| c.total_length())
    }

    fn tol(&self) -> f64 {
        GEOM_TOL * self.diameter.max(1.0)
    }

    /// Support function `h_K(n) = max_{x∈K} ⟨x, n⟩` together with a maximizer.
    pub fn support(&self, n: PlanePoint) -> (f64, BoundaryPoint) {
        let Some(curve) = &self.boundary else {
            return (self.point.dot(n), BoundaryPoint { point: self.point, sigma: 0.0 });
        };
        let len = curve.len();
        // tangent direction of the supporting point, reduced into the first turn
        let base = self.angle_out[0];
        let target = base + (n.arg() + PI / 2.0 - base).rem_euclid(TAU);
        // largest k with angle_out[k] <= target
        let k = match self.angle_out[..len].partition_point(|&a| a <= target) {
            0 => 0,
            i => i - 1,
        };
        let next = (k + 1) % len;
        let at_sample = |j: usize| {
            let c = curve.sample(j);
            (c.point.dot(n), BoundaryPoint { point: c.point, sigma: c.s })
        };
        if target >= self.angle_in[k + 1] {
            return at_sample(next);
        }
        let seg = curve.segment(k);
        let g = |u: f64| seg.derivative(u).dot(n);
        let mut best = at_sample(k);
        let end = at_sample(next);
        if end.0 > best.0 {
            best = end;
        }
        if g(0.0) > 0.0 && g(1.0) < 0.0 {
            if let Ok(u) = brent(g, 0.0, 1.0, 1e-15) {
                let p = seg.point(u);
                let v = p.dot(n);
                if v >= best.0 {
                    best = (v, BoundaryPoint { point: p, sigma: curve.arc_position(k, u) });
                }
            }
        }
        best
    }

    pub fn support_value(&self, n: PlanePoint) -> f64 {
        self.support(n).0
    }

    /// `h_K(n(ψ)) − ⟨P, n(ψ)⟩`: negative exactly on the normals of lines
    /// separating `p` from the body.
    fn gap(&self, p: PlanePoint, psi: f64) -> f64 {
        let n = PlanePoint::from_angle(psi);
        self.support_value(n) - p.dot(n)
    }

    /// Normal angle minimizing the gap at `p`, with the gap there.
    fn most_separating(&self, p: PlanePoint) -> (f64, f64) {
        let psi0 = (p - self.centroid).arg();
        let g0 = self.gap(p, psi0);
        if g0 < -self.tol() {
            return (psi0, g0);
        }
        let mut best = (psi0, g0);
        let m = 256;
        for j in 0..m {
            let psi = psi0 + TAU * j as f64 / m as f64;
            let g = self.gap(p, psi);
            if g < best.1 {
                best = (psi, g);
            }
        }
        // golden-section refinement around the best grid direction
        let (mut a, mut b) = (best.0 - TAU / m as f64, best.0 + TAU / m as f64);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let mut f1 = self.gap(p, x1);
        let mut f2 = self.gap(p, x2);
        for _ in 0..80 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = self.gap(p, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = self.gap(p, x2);
            }
            if b - a < 1e-13 {
                break;
            }
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.1 {
                best = (x, f);
            }
        }
        best
    }

    /// Whether `p` lies in the closed body (boundary within tolerance).
    pub fn contains(&self, p: PlanePoint) -> bool {
        match self.kind {
            BodyKind::Point => p.distance(self.point) <= self.tol(),
            _ => self.most_separating(p).1 >= -self.tol(),
        }
    }

    /// Whether `p` lies in the interior, at least `tol` from the boundary.
    pub fn contains_strictly(&self, p: PlanePoint) -> bool {
        match self.kind {
            BodyKind::Point | BodyKind::Segment => false,
            _ => {
                let curve = self.boundary.as_ref().unwrap();
                curve.contains_polygonal(p, self.tol()) || self.most_separating(p).1 > self.tol()
            }
        }
    }

    /// Tangency points of the two supporting lines through `p`.
    pub fn tangent_points_from(&self, p: PlanePoint) -> Result<TangentPair> {
        if !p.is_finite() {
            return Err(Error::NonFinite(p.re, p.im));
        }
        if self.kind == BodyKind::Point {
            if p.distance(self.point) <= self.tol() {
                return Err(Error::DegenerateBody);
            }
            let bp = BoundaryPoint { point: self.point, sigma: 0.0 };
            return Ok(TangentPair { left: bp, right: bp });
        }
        let (psi_m, g) = self.most_separating(p);
        if g >= -self.tol() {
            return Err(Error::PointInsideBody(p.re, p.im));
        }
        let f = |psi: f64| self.gap(p, psi);
        let upper = brent(f, psi_m, psi_m + PI, 1e-15)?;
        let lower = brent(f, psi_m - PI, psi_m, 1e-15)?;
        let left = self.support(PlanePoint::from_angle(upper)).1;
        let right = self.support(PlanePoint::from_angle(lower)).1;
        Ok(TangentPair { left, right })
    }

    /// Counterclockwise boundary length from `from` to `to`; a full turn when
    /// they coincide.
    pub fn arc_between(&self, from: f64, to: f64) -> f64 {
        let l = self.perimeter();
        let d = (to - from).rem_euclid(l);
        if d == 0.0 {
            l
        } else {
            d
        }
    }

    /// Perimeter of `Conv({p} ∪ K)`.
    pub fn cap_body_perimeter(&self, p: PlanePoint) -> Result<f64> {
        if !p.is_finite() {
            return Err(Error::NonFinite(p.re, p.im));
        }
        match self.kind {
            BodyKind::Point => return Ok(2.0 * p.distance(self.point)),
            BodyKind::Segment => {
                let c = self.boundary.as_ref().unwrap();
                let (a, b) = (c.sample(0).point, c.sample(1).point);
                return Ok(p.distance(a) + p.distance(b) + a.distance(b));
            }
            _ => {}
        }
        let curve = self.boundary.as_ref().unwrap();
        if curve.contains_polygonal(p, self.tol()) {
            return Err(Error::PointInsideBody(p.re, p.im));
        }
        let (_, g) = self.most_separating(p);
        if g > self.tol() {
            return Err(Error::PointInsideBody(p.re, p.im));
        }
        if g >= -self.tol() {
            return Ok(self.perimeter());
        }
        let t = self.tangent_points_from(p)?;
        Ok(p.distance(t.left.point) + p.distance(t.right.point) + self.arc_between(t.left.sigma, t.right.sigma))
    }

    /// Image under a rigid motion `x ↦ rot·x + shift` (`|rot| = 1`).
    pub fn rigid_motion(&self, rot: PlanePoint, shift: PlanePoint) -> Self {
        match &self.boundary {
            None => Self::point(rot * self.point + shift),
            Some(c) => Self::from_boundary(self.kind, c.map_isometry(|p| rot * p + shift, |t| rot * t)),
        }
    }
}

/// Signed angle from `a` to `b`.
fn turn(a: PlanePoint, b: PlanePoint) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

fn check_convex_ccw(curve: &SampledCurve) -> Result<()> {
    let n = curve.len();
    let diam = curve.diameter();
    let tol = GEOM_TOL * diam * diam;
    if n >= 3 && curve.signed_area() <= 0.0 {
        return Err(Error::InvalidCurve("boundary is not counterclockwise".into()));
    }
    for k in 0..n {
        let a = curve.sample(k).point;
        let b = curve.sample((k + 1) % n).point;
        let c = curve.sample((k + 2) % n).point;
        if (b - a).cross(c - b) < -tol {
            return Err(Error::InvalidCurve(format!("boundary not convex at sample {}", (k + 1) % n)));
        }
    }
    Ok(())
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub fn convex_hull(points: &[PlanePoint]) -> Vec<PlanePoint> {
    let mut pts: Vec<PlanePoint> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<PlanePoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &PlanePoint>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::circle;
    use proptest::prelude::*;

    fn square() -> ConvexBody {
        ConvexBody::polygon(&[
            PlanePoint::new(-1.0, -1.0),
            PlanePoint::new(1.0, -1.0),
            PlanePoint::new(1.0, 1.0),
            PlanePoint::new(-1.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn circle_tangency_points() {
        let k = circle(PlanePoint::ZERO, 1.0, 1024);
        let t = k.tangent_points_from(PlanePoint::new(2.0, 0.0)).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((t.left.point - PlanePoint::new(0.5, h)).norm() < 1e-9, "{:?}", t.left);
        assert!((t.right.point - PlanePoint::new(0.5, -h)).norm() < 1e-9, "{:?}", t.right);
    }

    #[test]
    fn segment_tangency_points_are_endpoints() {
        let k = ConvexBody::segment(PlanePoint::new(-1.0, 0.0), PlanePoint::new(1.0, 0.0)).unwrap();
        let t = k.tangent_points_from(PlanePoint::new(0.0, 1.0)).unwrap();
        assert_eq!(t.left.point, PlanePoint::new(-1.0, 0.0));
        assert_eq!(t.right.point, PlanePoint::new(1.0, 0.0));
    }

    #[test]
    fn square_tangency_at_corners() {
        let t = square().tangent_points_from(PlanePoint::new(2.0, 0.0)).unwrap();
        assert_eq!(t.left.point, PlanePoint::new(1.0, 1.0));
        assert_eq!(t.right.point, PlanePoint::new(1.0, -1.0));
    }

    #[test]
    fn inside_points_rejected() {
        assert!(matches!(square().tangent_points_from(PlanePoint::ZERO), Err(Error::PointInsideBody(..))));
        assert!(matches!(square().cap_body_perimeter(PlanePoint::new(0.3, 0.2)), Err(Error::PointInsideBody(..))));
        let p = ConvexBody::point(PlanePoint::new(1.0, 2.0));
        assert_eq!(p.tangent_points_from(PlanePoint::new(1.0, 2.0)), Err(Error::DegenerateBody));
        let t = p.tangent_points_from(PlanePoint::ZERO).unwrap();
        assert_eq!(t.left, t.right);
        assert_eq!(p.perimeter(), 0.0);
    }

    #[test]
    fn cap_body_examples() {
        let seg = ConvexBody::segment(PlanePoint::new(-1.0, 0.0), PlanePoint::new(1.0, 0.0)).unwrap();
        assert_eq!(seg.perimeter(), 4.0);
        let v = seg.cap_body_perimeter(PlanePoint::new(0.0, 1.0)).unwrap();
        assert!((v - (2.0 * 2f64.sqrt() + 2.0)).abs() < 1e-15);
        let c = circle(PlanePoint::ZERO, 1.0, 2048);
        let v = c.cap_body_perimeter(PlanePoint::new(2.0, 0.0)).unwrap();
        assert!((v - (2.0 * 3f64.sqrt() + 4.0 * PI / 3.0)).abs() < 1e-10, "{}", v - 7.652882);
        let on = c.boundary().unwrap().sample(17).point;
        assert!((c.cap_body_perimeter(on).unwrap() - TAU).abs() < 1e-10);
        let sq = square().cap_body_perimeter(PlanePoint::new(2.0, 0.0)).unwrap();
        assert!((sq - (6.0 + 2.0 * 2f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn support_of_square_and_circle() {
        let sq = square();
        let (h, bp) = sq.support(PlanePoint::from_angle(0.3));
        assert_eq!(bp.point, PlanePoint::new(1.0, 1.0));
        assert!((h - (0.3f64.cos() + 0.3f64.sin())).abs() < 1e-15);
        let c = circle(PlanePoint::new(0.5, -0.25), 2.0, 512);
        for j in 0..100 {
            let n = PlanePoint::from_angle(0.0731 * j as f64);
            let expected = 2.0 + PlanePoint::new(0.5, -0.25).dot(n);
            assert!((c.support_value(n) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(2.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(2.0, 2.0),
            PlanePoint::new(0.0, 2.0),
            PlanePoint::new(1.0, 1.0),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert_eq!(ConvexBody::hull(&pts[..3]).unwrap().kind(), BodyKind::Segment);
    }

    proptest! {
        #[test]
        fn hull_turns_one_way(raw in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..60)) {
            let pts: Vec<_> = raw.iter().map(|&(x, y)| PlanePoint::new(x, y)).collect();
            let h = convex_hull(&pts);
            let n = h.len();
            if n >= 3 {
                for k in 0..n {
                    let a = h[k];
                    let b = h[(k + 1) % n];
                    let c = h[(k + 2) % n];
                    prop_assert!((b - a).cross(c - b) > 0.0);
                }
                for p in &pts {
                    for k in 0..n {
                        prop_assert!((h[(k + 1) % n] - h[k]).cross(*p - h[k]) >= -1e-9);
                    }
                }
            }
        }

        #[test]
        fn cap_perimeter_exceeds_perimeter(r in 1.0001..5.0f64, phi in 0.0..TAU) {
            let c = circle(PlanePoint::ZERO, 1.0, 512);
            let p = PlanePoint::from_polar(r, phi);
            prop_assert!(c.cap_body_perimeter(p).unwrap() > c.perimeter());
            let sq = square();
            let q = PlanePoint::from_polar(r * 1.5, phi);
            prop_assert!(sq.cap_body_perimeter(q).unwrap() > sq.perimeter() * (1.0 - 1e-10));
        }
    }
}
