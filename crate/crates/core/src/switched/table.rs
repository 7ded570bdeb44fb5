//! The explicit table: two string branches and their quarter turns.
//!
//! Along a branch the string is pinned at a caustic corner on one side and
//! unwinds from `γ(s)` on the other, so the table point is
//! `Γ(s) = γ(s) − t(s)γ′(s)` with `t = p/p′` and
//! `p(s) = ½((s + c)² − |γ(s) + q|²)`. The plain branch uses
//! `(c, q) = (2ℓ, B)`, the hatted one `(c, q) = (−2ℓ̂, A)`.

use rayon::prelude::*;

use crate::body::ConvexBody;
use crate::curve::{CurveSample, SampledCurve};
use crate::error::{Error, Result};
use crate::numeric::{brent, GaussLegendre};
use crate::point::{PlanePoint, I};
use crate::string_construct::string_table;

use super::config::{SwitchedConfig, CORNER_A, CORNER_B};
use super::gamma::Caustic;

/// Smallest `|p′|` accepted on a branch.
pub const DERIVATIVE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// `Γ`, from the horizontal axis to the diagonal.
    Plain,
    /// `Γ̂`, from the diagonal to the horizontal axis.
    Hat,
}

/// Value and derivatives of a branch at one caustic parameter.
#[derive(Debug, Clone, Copy)]
pub struct BranchPoint {
    pub s: f64,
    pub point: PlanePoint,
    /// `dΓ/ds`.
    pub derivative: PlanePoint,
    pub p: f64,
    pub dp: f64,
    /// Length of the free string segment, `p/p′`.
    pub t: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Branch<'a> {
    caustic: &'a Caustic,
    kind: BranchKind,
    offset: f64,
    anchor: PlanePoint,
}

impl<'a> Branch<'a> {
    pub fn new(caustic: &'a Caustic, config: &SwitchedConfig, kind: BranchKind) -> Self {
        let (offset, anchor) = match kind {
            BranchKind::Plain => (2.0 * config.ell, CORNER_B),
            BranchKind::Hat => (-2.0 * config.ell_hat, CORNER_A),
        };
        Self { caustic, kind, offset, anchor }
    }

    pub fn kind(&self) -> BranchKind {
        self.kind
    }

    pub fn eval(&self, s: f64) -> BranchPoint {
        let g = self.caustic.point(s);
        // a branch starts at a corner and may end at the next one
        let tg = if s > 0.0 { self.caustic.tangent_left(s) } else { self.caustic.tangent(s) };
        let k = self.caustic.curvature(s);
        let w = g + self.anchor;
        let u = s + self.offset;
        let p = 0.5 * (u * u - w.norm_sqr());
        let dp = u - w.dot(tg);
        let ddp = -w.dot(I * tg * k);
        let t = p / dp;
        let derivative = (PlanePoint::new(p * ddp / (dp * dp), 0.0) - I * (t * k)) * tg;
        BranchPoint { s, point: g - tg * t, derivative, p, dp, t }
    }

    /// Switching event: signed distance of `Γ(s)` from the line through the
    /// corner where the string starts to wrap, along that corner's outgoing
    /// tangent. Vanishes at the end of the branch.
    pub fn switch_residual(&self, s: f64) -> f64 {
        let alpha = self.caustic.alpha();
        let q = match self.kind {
            BranchKind::Plain => 3,
            BranchKind::Hat => 2,
        };
        let dir = PlanePoint::from_angle(-alpha).rot_quarter(q);
        dir.cross(self.eval(s).point - CORNER_A.rot_quarter(q))
    }

    /// Branch end located from the switching event.
    pub fn locate_end(&self) -> Result<f64> {
        let s_hat = self.caustic.s_hat();
        brent(|s| self.switch_residual(s), 0.5 * s_hat, 1.5 * s_hat, 1e-15)
    }
}

/// Arc length along a branch as a function of `s`.
struct ArcLength<'a> {
    branch: Branch<'a>,
    panel: f64,
    cumulative: Vec<f64>,
}

impl<'a> ArcLength<'a> {
    const PANELS: usize = 1024;

    fn new(branch: Branch<'a>, s_end: f64) -> Result<Self> {
        let panel = s_end / Self::PANELS as f64;
        let g = GaussLegendre::g16();
        let per_panel: Vec<Result<f64>> = (0..Self::PANELS)
            .into_par_iter()
            .map(|j| {
                let a = j as f64 * panel;
                let mut sum = 0.0;
                for (&x, &w) in g.nodes.iter().zip(&g.weights) {
                    let b = branch.eval(a + panel * x);
                    if b.dp.is_nan() || b.dp.abs() < DERIVATIVE_TOL {
                        return Err(Error::DerivativeVanishes { s: b.s, value: b.dp });
                    }
                    sum += w * b.derivative.norm();
                }
                Ok(sum * panel)
            })
            .collect();
        let mut cumulative = Vec::with_capacity(Self::PANELS + 1);
        cumulative.push(0.0);
        for v in per_panel {
            cumulative.push(cumulative.last().unwrap() + v?);
        }
        Ok(Self { branch, panel, cumulative })
    }

    fn total(&self) -> f64 {
        self.cumulative[Self::PANELS]
    }

    fn at(&self, s: f64) -> f64 {
        let j = ((s / self.panel) as usize).min(Self::PANELS - 1);
        let a = j as f64 * self.panel;
        self.cumulative[j] + GaussLegendre::g16().integrate(a, s, |x| self.branch.eval(x).derivative.norm())
    }

    /// Parameter at arc length `sigma`.
    fn invert(&self, sigma: f64) -> f64 {
        let j = self.cumulative.partition_point(|&c| c <= sigma).clamp(1, Self::PANELS) - 1;
        let frac = (sigma - self.cumulative[j]) / (self.cumulative[j + 1] - self.cumulative[j]);
        let mut s = (j as f64 + frac) * self.panel;
        for _ in 0..20 {
            let ds = (self.at(s) - sigma) / self.branch.eval(s).derivative.norm();
            s -= ds;
            if ds.abs() < 1e-15 {
                break;
            }
        }
        s
    }
}

/// Options for [`explicit_table`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    /// Samples on each of the eight branches, uniform in arc length.
    pub per_branch: usize,
    /// Compare against the generic string construction and fail on mismatch.
    pub strict: bool,
    pub oracle_samples: usize,
    pub oracle_tol: f64,
    /// Samples per quarter of the caustic body used for `S` and the oracle.
    pub caustic_samples: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self { per_branch: 1024, strict: false, oracle_samples: 2048, oracle_tol: 1e-5, caustic_samples: 4096 }
    }
}

/// Assembled table with its construction data.
#[derive(Debug, Clone)]
pub struct ExplicitTable {
    pub curve: SampledCurve,
    /// Common arc length of the eight branches.
    pub branch_length: f64,
    pub per_branch: usize,
    /// Ends of the plain and hatted branches found from the switching events.
    pub branch_ends: (f64, f64),
    /// `3ŝ + 2ℓ`.
    pub string_parameter: f64,
    /// Cap-body perimeter of the caustic seen from `Γ(0)`.
    pub measured_parameter: f64,
    /// Free string length `t(0)` of the plain branch.
    pub t0: f64,
    pub min_abs_dp: f64,
    /// Largest gap between consecutive branch ends before stitching.
    pub stitch_gap: f64,
    /// Sup-distance from the generic string table, when computed.
    pub oracle_distance: Option<f64>,
}

impl ExplicitTable {
    /// Arc-length positions of the two kinds of junction: the diagonal one
    /// (end of `Γ`, start of `i³Γ̂`) and the axis one (end of `i³Γ̂`, start of `iΓ`).
    pub fn switching_points(&self) -> [f64; 2] {
        [self.branch_length, 2.0 * self.branch_length]
    }

    /// All eight junction positions.
    pub fn junctions(&self) -> Vec<f64> {
        (0..8).map(|b| b as f64 * self.branch_length).collect()
    }
}

/// Rotation power and kind of branch `b` in counterclockwise order from `Γ(0)`.
pub fn branch_layout(b: usize) -> (i32, BranchKind) {
    let b = (b % 8) as i32;
    if b % 2 == 0 {
        (b / 2, BranchKind::Plain)
    } else {
        ((b + 5) / 2 % 4, BranchKind::Hat)
    }
}

pub fn explicit_table(caustic: &Caustic, config: &SwitchedConfig, options: &TableOptions) -> Result<ExplicitTable> {
    if options.per_branch < 8 {
        return Err(Error::InvalidArgument("need at least 8 samples per branch".into()));
    }
    let plain = Branch::new(caustic, config, BranchKind::Plain);
    let hat = Branch::new(caustic, config, BranchKind::Hat);
    let ends = (plain.locate_end()?, hat.locate_end()?);
    let arcs = [ArcLength::new(plain, ends.0)?, ArcLength::new(hat, ends.1)?];
    let m = options.per_branch;
    let pieces: Vec<Vec<BranchPoint>> = arcs
        .iter()
        .map(|arc| {
            let total = arc.total();
            (0..m).into_par_iter().map(|k| arc.branch.eval(arc.invert(total * k as f64 / m as f64))).collect()
        })
        .collect();
    let min_abs_dp = pieces.iter().flatten().map(|b| b.dp.abs()).fold(f64::INFINITY, f64::min);
    if min_abs_dp < DERIVATIVE_TOL {
        let b = pieces.iter().flatten().find(|b| b.dp.abs() < DERIVATIVE_TOL).unwrap();
        return Err(Error::DerivativeVanishes { s: b.s, value: b.dp });
    }
    let sigma = 0.5 * (arcs[0].total() + arcs[1].total());
    let end_points = [plain.eval(ends.0).point, hat.eval(ends.1).point];
    let mut samples = Vec::with_capacity(8 * m);
    let mut stitch_gap: f64 = 0.0;
    for b in 0..8 {
        let (rot, kind) = branch_layout(b);
        let idx = if kind == BranchKind::Plain { 0 } else { 1 };
        let (next_rot, next_kind) = branch_layout(b + 1);
        let next_start = pieces[if next_kind == BranchKind::Plain { 0 } else { 1 }][0].point.rot_quarter(next_rot);
        stitch_gap = stitch_gap.max(end_points[idx].rot_quarter(rot).distance(next_start));
        for (k, bp) in pieces[idx].iter().enumerate() {
            samples.push(CurveSample {
                s: (b * m + k) as f64 * sigma / m as f64,
                point: bp.point.rot_quarter(rot),
                tangent: bp.derivative.normalized().rot_quarter(rot),
            });
        }
    }
    let curve = SampledCurve::new(samples, 8.0 * sigma, true)?;
    let body = caustic.body(options.caustic_samples)?;
    let start = pieces[0][0];
    let measured_parameter = body.cap_body_perimeter(start.point)?;
    let mut table = ExplicitTable {
        curve,
        branch_length: sigma,
        per_branch: m,
        branch_ends: ends,
        string_parameter: config.string_parameter(),
        measured_parameter,
        t0: start.t,
        min_abs_dp,
        stitch_gap,
        oracle_distance: None,
    };
    if options.strict {
        let d = oracle_distance(&table, &body, options.oracle_samples)?;
        table.oracle_distance = Some(d);
        if d.is_nan() || d > options.oracle_tol {
            return Err(Error::OracleMismatch(d));
        }
    }
    Ok(table)
}

/// Sup-distance from the generic string table of `body` (at the measured
/// string parameter) to the explicit table.
pub fn oracle_distance(table: &ExplicitTable, body: &ConvexBody, n_samples: usize) -> Result<f64> {
    let oracle = string_table(body, table.measured_parameter, n_samples)?;
    let d = oracle.samples().par_iter().map(|c| table.curve.distance_to(c.point)).reduce(|| 0.0, f64::max);
    Ok(d)
}
