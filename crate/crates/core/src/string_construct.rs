//! The string construction: the table is the locus of points whose cap-body
//! over the caustic has a fixed perimeter.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::body::{BodyKind, ConvexBody};
use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::point::PlanePoint;

/// Parameter tolerance of the per-ray bisection.
pub const RAY_TOL: f64 = 1e-12;

/// String parameter `S` and its slack `L = S − |K|` over the caustic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringParams {
    pub s: f64,
    pub lazutkin: f64,
}

impl StringParams {
    pub fn new(s: f64, caustic: &ConvexBody) -> Result<Self> {
        let perimeter = caustic.perimeter();
        if !(s.is_finite() && s > perimeter) {
            return Err(Error::StringTooShort { s, perimeter });
        }
        Ok(Self { s, lazutkin: s - perimeter })
    }
}

/// Cap-body perimeter, with the body's own perimeter for interior points so
/// the function is monotone along every ray from an interior point.
fn ray_perimeter(k: &ConvexBody, p: PlanePoint) -> Result<f64> {
    match k.cap_body_perimeter(p) {
        Err(Error::PointInsideBody(..)) => Ok(k.perimeter()),
        other => other,
    }
}

/// Unit outward normal of the table at `p`: it bisects the angle between the
/// two string segments.
fn string_normal(k: &ConvexBody, p: PlanePoint) -> Result<PlanePoint> {
    let (a, b) = match k.kind() {
        BodyKind::Segment => {
            let c = k.boundary().unwrap();
            (c.sample(0).point, c.sample(1).point)
        }
        _ => {
            let t = k.tangent_points_from(p)?;
            (t.left.point, t.right.point)
        }
    };
    let u = (a - p).normalized() + (b - p).normalized();
    if u.norm() < 1e-300 {
        return Err(Error::InvalidCurve("string segments are opposite".into()));
    }
    Ok(-u.normalized())
}

/// Table point on the ray from the centroid at angle `theta`.
pub fn solve_ray(k: &ConvexBody, s: f64, theta: f64) -> Result<PlanePoint> {
    let c = k.centroid();
    let dir = PlanePoint::from_angle(theta);
    let f = |r: f64| ray_perimeter(k, c + dir * r).map(|v| v - s);
    let mut hi = s.max(1.0);
    let mut tries = 0;
    while f(hi)? <= 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::RootBracketFailure(format!("no upper bracket on ray {theta}")));
        }
    }
    let mut failure = None;
    let r = bisect(
        |r| match f(r) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        hi,
        RAY_TOL,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(c + dir * r)
}

/// Samples the table of string parameter `s` around `k` on `n_samples`
/// uniformly spaced rays from the centroid.
pub fn string_table(k: &ConvexBody, s: f64, n_samples: usize) -> Result<SampledCurve> {
    StringParams::new(s, k)?;
    if n_samples < 16 {
        return Err(Error::InvalidArgument(format!("n_samples = {n_samples} < 16")));
    }
    let solved: Vec<Result<(PlanePoint, PlanePoint)>> = (0..n_samples)
        .into_par_iter()
        .map(|j| {
            let theta = TAU * j as f64 / n_samples as f64;
            let p = solve_ray(k, s, theta)?;
            let normal = string_normal(k, p)?;
            Ok((p, normal.rot90()))
        })
        .collect();
    let mut points = Vec::with_capacity(n_samples);
    let mut tangents = Vec::with_capacity(n_samples);
    for r in solved {
        let (p, t) = r?;
        points.push(p);
        tangents.push(t);
    }
    SampledCurve::from_points_tangents(&points, &tangents, None, true)
}

/// Mean cap-body perimeter over the table samples and the largest deviation
/// from it.
pub fn string_invariant(table: &SampledCurve, k: &ConvexBody) -> Result<(f64, f64)> {
    if let Some(b) = k.boundary() {
        let outside = b.points().find(|&p| !table.contains_polygonal(p, 0.0));
        if let Some(p) = outside {
            return Err(Error::CausticNotInside(p.re, p.im));
        }
    } else if !table.contains_polygonal(k.centroid(), 0.0) {
        let p = k.centroid();
        return Err(Error::CausticNotInside(p.re, p.im));
    }
    let values: Vec<Result<f64>> = table
        .samples()
        .par_iter()
        .map(|c| {
            k.cap_body_perimeter(c.point).map_err(|e| match e {
                Error::PointInsideBody(x, y) => Error::CausticNotInside(x, y),
                other => other,
            })
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let dev = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok((mean, dev))
}
