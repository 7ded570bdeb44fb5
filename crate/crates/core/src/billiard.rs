//! The billiard ball map on a convex table in phase-cylinder coordinates.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::body::ConvexBody;
use crate::curve::{HermiteSegment, SampledCurve};
use crate::error::{Error, Result};
use crate::numeric::brent;
use crate::point::PlanePoint;

/// States closer than this to tangential are rejected.
pub const GRAZING_CUTOFF: f64 = 1e-9;

/// Position on the boundary and angle of the outgoing ray, measured from
/// the forward (counterclockwise) tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub sigma: f64,
    pub theta: f64,
}

impl PhaseState {
    pub fn new(table: &SampledCurve, sigma: f64, theta: f64) -> Result<Self> {
        if !(sigma.is_finite() && theta.is_finite()) {
            return Err(Error::NonFinite(sigma, theta));
        }
        if !(GRAZING_CUTOFF..=PI - GRAZING_CUTOFF).contains(&theta) {
            return Err(Error::GrazingRay(theta));
        }
        Ok(Self { sigma: table.wrap(sigma), theta })
    }

    /// The same chord traversed backwards.
    pub fn reversed(self) -> Self {
        Self { sigma: self.sigma, theta: PI - self.theta }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrbitRecord {
    pub states: Vec<PhaseState>,
    /// Unreduced boundary position; increases by the arc advanced per bounce.
    pub lift: Vec<f64>,
}

/// Result of a bounce: the new state, the hit point, the outgoing direction
/// and the counterclockwise arc advanced.
#[derive(Debug, Clone, Copy)]
struct Bounce {
    state: PhaseState,
    point: PlanePoint,
    direction: PlanePoint,
    advance: f64,
}

fn signed_angle(a: PlanePoint, b: PlanePoint) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// First boundary point hit by the ray from boundary position `sigma`
/// (counterclockwise past `sigma`), with its segment and local parameter.
fn next_hit(table: &SampledCurve, sigma: f64, origin: PlanePoint, d: PlanePoint) -> Result<(usize, f64)> {
    let n = table.len();
    let (k, u0) = table.locate(sigma);
    let side = |p: PlanePoint| d.cross(p - origin);
    let solve = |seg: HermiteSegment, lo: f64, hi: f64| -> Result<f64> {
        brent(|u| side(seg.point(u)), lo, hi, 1e-15).map_err(|_| Error::NoIntersection(sigma))
    };
    let seg_k = table.segment(k);
    let first = table.sample((k + 1) % n).point;
    if side(first) >= 0.0 {
        // short chord inside the starting segment
        let lo = u0 + (1.0 - u0) * 1e-9;
        return Ok((k, solve(seg_k, lo, 1.0)?));
    }
    let last = if u0 > 0.0 { n } else { n - 1 };
    let at = |m: usize| side(table.sample((k + m) % n).point);
    if at(last) < 0.0 {
        return if u0 > 0.0 {
            Ok((k, solve(seg_k, 0.0, u0 * (1.0 - 1e-9))?))
        } else {
            let j = (k + n - 1) % n;
            Ok((j, solve(table.segment(j), 0.0, 1.0 - 1e-9)?))
        };
    }
    // at(1) < 0 <= at(last): binary search for the first non-negative sample
    let (mut lo, mut hi) = (1, last);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if at(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let j = (k + lo) % n;
    Ok((j, solve(table.segment(j), 0.0, 1.0)?))
}

fn bounce(table: &SampledCurve, state: PhaseState) -> Result<Bounce> {
    if state.theta < GRAZING_CUTOFF || state.theta > PI - GRAZING_CUTOFF {
        return Err(Error::GrazingRay(state.theta));
    }
    let origin = table.point_at(state.sigma);
    let tangent = table.tangent_at(state.sigma);
    let d = tangent * PlanePoint::from_angle(state.theta);
    let (j, u) = next_hit(table, state.sigma, origin, d)?;
    let seg = table.segment(j);
    let point = seg.point(u);
    let t_hit = seg.unit_tangent(u);
    let reflected = t_hit * (2.0 * d.dot(t_hit)) - d;
    let theta = signed_angle(t_hit, reflected);
    let sigma = table.param_position(j, u);
    let l = table.total_length();
    let mut advance = (sigma - state.sigma).rem_euclid(l);
    if advance == 0.0 {
        advance = l;
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::GrazingRay(theta));
    }
    Ok(Bounce { state: PhaseState { sigma, theta }, point, direction: reflected, advance })
}

/// One application of the billiard map.
pub fn billiard_map(table: &SampledCurve, state: PhaseState) -> Result<PhaseState> {
    bounce(table, state).map(|b| b.state)
}

pub fn orbit(table: &SampledCurve, initial: PhaseState, n_iters: usize) -> Result<OrbitRecord> {
    let mut rec = OrbitRecord { states: vec![initial], lift: vec![initial.sigma] };
    let mut state = initial;
    let mut lift = initial.sigma;
    for _ in 0..n_iters {
        let b = bounce(table, state)?;
        lift += b.advance;
        state = b.state;
        rec.states.push(state);
        rec.lift.push(lift);
    }
    Ok(rec)
}

/// Rotation number estimate: Birkhoff average of the advanced boundary
/// fraction, folded into `(0, ½]`, with the change against the half-length
/// average as a tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    pub rho: f64,
    pub tail: f64,
}

fn fold(rho: f64) -> f64 {
    rho.min(1.0 - rho)
}

fn rotation_from_lift(lift: &[f64], length: f64) -> RotationEstimate {
    let n = lift.len() - 1;
    let full = (lift[n] - lift[0]) / (n as f64 * length);
    let h = n / 2;
    let half = (lift[h] - lift[0]) / (h.max(1) as f64 * length);
    RotationEstimate { rho: fold(full), tail: (fold(full) - fold(half)).abs() }
}

pub fn rotation_number(table: &SampledCurve, initial: PhaseState, n_iters: usize) -> Result<RotationEstimate> {
    if n_iters < 100 {
        return Err(Error::InvalidArgument(format!("n_iters = {n_iters} < 100")));
    }
    let rec = orbit(table, initial, n_iters)?;
    Ok(rotation_from_lift(&rec.lift, table.total_length()))
}

/// Worst support-line residual and mean rotation number over the starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticCheck {
    pub max_tangency_error: f64,
    pub rho: f64,
}

/// Table state on the line through `x` with direction `d`, entering where
/// the line crosses the boundary behind `x`.
pub fn state_on_line(table: &SampledCurve, x: PlanePoint, d: PlanePoint) -> Result<PhaseState> {
    let n = table.len();
    let side = |p: PlanePoint| d.cross(p - x);
    // at the entry point the boundary crosses from the left of the line to its right
    let k = (0..n)
        .find(|&k| {
            let a = side(table.sample(k).point);
            let b = side(table.sample((k + 1) % n).point);
            a >= 0.0 && b < 0.0 || a > 0.0 && b <= 0.0
        })
        .ok_or(Error::NoIntersection(0.0))?;
    let seg = table.segment(k);
    let u = brent(|u| side(seg.point(u)), 0.0, 1.0, 1e-15)?;
    let sigma = table.param_position(k, u);
    let theta = signed_angle(seg.unit_tangent(u), d);
    PhaseState::new(table, sigma, theta)
}

/// Follows supporting lines of `k` through `n_iters` reflections each and
/// measures how far the reflected lines are from supporting `k`. After each
/// measurement the orbit continues from the parallel supporting line of `k`.
pub fn verify_caustic(
    table: &SampledCurve,
    k: &ConvexBody,
    n_starts: usize,
    n_iters: usize,
) -> Result<CausticCheck> {
    if n_starts == 0 || n_iters == 0 {
        return Err(Error::InvalidArgument("need at least one start and one iteration".into()));
    }
    if let Some(b) = k.boundary() {
        if let Some(p) = b.points().find(|&p| !table.contains_polygonal(p, 0.0)) {
            return Err(Error::CausticNotInside(p.re, p.im));
        }
    }
    let runs: Vec<Result<(f64, f64)>> = (0..n_starts)
        .into_par_iter()
        .map(|j| {
            let psi = 2.0 * PI * (j as f64 + 0.5) / n_starts as f64;
            let normal = PlanePoint::from_angle(psi);
            let (_, touch) = k.support(normal);
            let d = normal.rot90();
            let mut state = state_on_line(table, touch.point, d)?;
            let mut worst: f64 = 0.0;
            let mut lift = vec![state.sigma];
            let mut total = state.sigma;
            let length = table.total_length();
            for _ in 0..n_iters {
                let b = bounce(table, state)?;
                let n_out = -b.direction.rot90();
                let (h, touch) = k.support(n_out);
                worst = worst.max((h - b.point.dot(n_out)).abs());
                // continue along the parallel supporting line, so rounding
                // errors do not build up along the orbit
                let next = state_on_line(table, touch.point, b.direction)?;
                let shift = (next.sigma - b.state.sigma + 0.5 * length).rem_euclid(length) - 0.5 * length;
                total += b.advance + shift;
                lift.push(total);
                state = next;
            }
            Ok((worst, rotation_from_lift(&lift, table.total_length()).rho))
        })
        .collect();
    let mut max_err: f64 = 0.0;
    let mut rho_sum = 0.0;
    for r in runs {
        let (e, rho) = r?;
        max_err = max_err.max(e);
        rho_sum += rho;
    }
    Ok(CausticCheck { max_tangency_error: max_err, rho: rho_sum / n_starts as f64 })
}
