//! Acceptance criteria A1–A10, one line each. Exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_8, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use caustica::billiard::state_on_line;
use caustica::shapes::{circle, circle_curve, confocal_semi_major, ellipse, ellipse_curve, ellipse_perimeter};
use caustica::switched::smoothness::{JumpEstimate, SMOOTHNESS_SAMPLES, SMOOTHNESS_STRIDE};
use caustica::switched::*;
use caustica::{
    rotation_number, string_invariant, string_table, verify_caustic, ConvexBody, PhaseState, PlanePoint, SampledCurve,
};

const ALPHA: f64 = 0.39;

type Criterion = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Switched {
    config: SwitchedConfig,
    caustic: Caustic,
    body: ConvexBody,
    table: ExplicitTable,
}

fn switched() -> &'static Switched {
    static CELL: OnceLock<Switched> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = SwitchedConfig::new(ALPHA).unwrap();
        let caustic = build_gamma(build_phi(&config).unwrap(), &config).unwrap();
        let body = caustic.body(4096).unwrap();
        let table = explicit_table(&caustic, &config, &TableOptions::default()).unwrap();
        Switched { config, caustic, body, table }
    })
}

fn a1() -> Outcome {
    let start = Instant::now();
    let k = ConvexBody::segment(PlanePoint::new(-1.0, 0.0), PlanePoint::new(1.0, 0.0)).unwrap();
    let t = string_table(&k, 6.0, 1024).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let (a, b) = (2.0, 3f64.sqrt());
    let dev = t
        .points()
        .map(|p| {
            let th = p.arg();
            (p.norm() - 1.0 / ((th.cos() / a).powi(2) + (th.sin() / b).powi(2)).sqrt()).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        dev < 1e-8 && elapsed < 1.0,
        format!("gardener ellipse: max radial deviation {dev:.2e} (< 1e-8), {elapsed:.3} s (< 1 s)"),
    )
}

fn a2() -> Outcome {
    let k = circle(PlanePoint::ZERO, 1.0, 2048);
    let s = 2.0 * 3f64.sqrt() + 4.0 * PI / 3.0;
    let t = string_table(&k, s, 1024).unwrap();
    let dev = t.points().map(|p| (p.norm() - 2.0).abs()).fold(0.0, f64::max);
    let (est, _) = string_invariant(&t, &k).unwrap();
    let rel = (est - s).abs() / s;
    outcome(
        dev < 1e-8 && rel < 1e-9,
        format!("circle R = 2: radial deviation {dev:.2e} (< 1e-8), S round trip {rel:.2e} relative (< 1e-9)"),
    )
}

/// Least-squares `x²/a² + y²/b² = 1`; returns `(a², b²)`.
fn fit_axis_aligned_ellipse(curve: &SampledCurve) -> (f64, f64) {
    let (mut sxx, mut sxy, mut syy, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in curve.points() {
        let (x2, y2) = (p.re * p.re, p.im * p.im);
        sxx += x2 * x2;
        sxy += x2 * y2;
        syy += y2 * y2;
        bx += x2;
        by += y2;
    }
    let det = sxx * syy - sxy * sxy;
    let u = (bx * syy - by * sxy) / det;
    let v = (sxx * by - sxy * bx) / det;
    (1.0 / u, 1.0 / v)
}

fn a3() -> Outcome {
    let k = ellipse(PlanePoint::ZERO, 2.0, 1.0, 4096);
    let s = ellipse_perimeter(2.0, 1.0) + 1.0;
    let t = string_table(&k, s, 2048).unwrap();
    let (a2, b2) = fit_axis_aligned_ellipse(&t);
    let gap = (a2 - b2 - 3.0).abs();
    let residual = t.points().map(|p| (p.re * p.re / a2 + p.im * p.im / b2 - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        gap < 1e-6 && residual < 1e-6,
        format!("confocal fit: |a'^2 - b'^2 - 3| = {gap:.2e} (< 1e-6), fit residual {residual:.2e}"),
    )
}

fn a4() -> Outcome {
    let at = |a: f64| feasibility(a).unwrap();
    let checks = [
        matches!(at(0.390), Feasibility::Feasible),
        matches!(at(0.380), Feasibility::Infeasible(caustica::Infeasibility::LowerBound)),
        matches!(at(0.40), Feasibility::Infeasible(caustica::Infeasibility::UpperBound)),
    ];
    let (lo, hi) = feasibility_window().unwrap();
    let window = (lo - 0.3872).abs() < 1e-3 && (hi - FRAC_PI_8).abs() < 1e-3;
    outcome(
        checks.iter().all(|&c| c) && window,
        format!(
            "0.390 feasible {}, 0.380 lower-infeasible {}, 0.40 upper-infeasible {}; window ({lo:.5}, {hi:.5})",
            checks[0], checks[1], checks[2]
        ),
    )
}

fn a5() -> Outcome {
    let b = switched();
    let check = verify_caustic(&b.table.curve, &b.body, 20, 200).unwrap();
    let (_, dev) = string_invariant(&b.table.curve, &b.body).unwrap();
    outcome(
        check.max_tangency_error < 1e-5 && dev < 1e-6,
        format!(
            "switched caustic: tangency error {:.2e} (< 1e-5) over 20 x 200, string invariant deviation {dev:.2e} (< 1e-6)",
            check.max_tangency_error
        ),
    )
}

fn a6() -> Outcome {
    let b = switched();
    let expected = FRAC_PI_2 - 2.0 * ALPHA;
    let m = 2048;
    let curve = b.caustic.sampled(m).unwrap();
    let turning = curve.turning_angles();
    let spikes: Vec<usize> = (0..turning.len()).filter(|&k| turning[k] > 0.1).collect();
    let placed = spikes == [0, m, 2 * m, 3 * m]
        && spikes.iter().enumerate().all(|(q, &k)| {
            (turning[k] - expected).abs() < 1e-3
                && curve.sample(k).point.distance(PlanePoint::new(-1.0, -1.0).rot_quarter(q as i32)) < 1e-8
        });
    let off_corner = |m: usize| {
        let t = b.caustic.sampled(m).unwrap().turning_angles();
        (0..t.len()).filter(|k| k % m != 0).map(|k| t[k]).fold(0.0, f64::max)
    };
    let (coarse, fine) = (off_corner(1024), off_corner(2048));
    let ratio = coarse / fine;
    outcome(
        placed && (ratio - 2.0).abs() < 0.1,
        format!(
            "{} spikes of {:.6} (expected {expected:.6}) at i^k A; off-corner max turning {coarse:.2e} -> {fine:.2e}, ratio {ratio:.3} (grid ratio 2)",
            spikes.len(),
            spikes.first().map_or(f64::NAN, |&k| turning[k])
        ),
    )
}

fn jumps(dphi1: f64) -> Vec<JumpEstimate> {
    let base = smoothness_config(SwitchedConfig::new(ALPHA).unwrap()).unwrap();
    let config = base.with_germ(base.phi1 + dphi1, base.phi2);
    let caustic = build_gamma(build_phi(&config).unwrap(), &config).unwrap();
    let options = TableOptions { per_branch: SMOOTHNESS_SAMPLES, ..Default::default() };
    let table = explicit_table(&caustic, &config, &options).unwrap();
    smoothness_report(&table.curve, &table.switching_points(), 3, SMOOTHNESS_STRIDE).unwrap()
}

/// Converges to zero: ratio within 30% of the stencil prediction.
fn vanishing(j: &JumpEstimate) -> bool {
    j.ratio_error(j.predicted_ratio()) < 0.3
}

/// Converges to a nonzero constant: ratio within 30% of 1.
fn persistent(j: &JumpEstimate) -> bool {
    j.ratio_error(1.0) < 0.3 && j.extrapolated > 1e-4
}

fn describe(report: &[JumpEstimate], order: usize) -> String {
    report
        .iter()
        .filter(|j| j.order == order)
        .map(|j| format!("{:.2e} (ratio {:.2})", j.extrapolated, j.ratio))
        .collect::<Vec<_>>()
        .join(" / ")
}

fn a7() -> Outcome {
    let smooth = jumps(0.0);
    let c2 = smooth.iter().filter(|j| j.order < 3).all(vanishing);
    let c3 = smooth.iter().filter(|j| j.order == 3).all(persistent);
    let perturbed = jumps(0.05);
    let broken = perturbed.iter().filter(|j| j.order == 2).all(persistent);
    outcome(
        c2 && c3 && broken,
        format!(
            "order 1 jumps {} [-> 0: {c2}]; order 2 {}; order 3 {} [nonzero: {c3}]; germ + (0.05, 0): order 2 {} [nonzero: {broken}]",
            describe(&smooth, 1),
            describe(&smooth, 2),
            describe(&smooth, 3),
            describe(&perturbed, 2)
        ),
    )
}

fn a8() -> Outcome {
    let b = switched();
    let options = TableOptions { strict: true, oracle_samples: 2048, ..TableOptions::default() };
    let strict = explicit_table(&b.caustic, &b.config, &options).unwrap();
    let d = strict.oracle_distance.unwrap();
    outcome(d < 1e-5, format!("sup-distance explicit vs string_table(gamma, S, 2048) = {d:.2e} (< 1e-5)"))
}

fn a9() -> Outcome {
    let circle_table = circle_curve(PlanePoint::ZERO, 2.0, 2048);
    let s = PhaseState::new(&circle_table, 0.3, FRAC_PI_3).unwrap();
    let rho_circle = rotation_number(&circle_table, s, 10_000).unwrap().rho;

    let table = ellipse_curve(PlanePoint::ZERO, 2.0, 1.0, 2048);
    let s = PhaseState::new(&table, table.total_length() / 4.0, FRAC_PI_2).unwrap();
    let rho_axis = rotation_number(&table, s, 10_000).unwrap().rho;

    let minors = [0.6, 0.3, 0.1, 1e-2, 1e-4];
    let caustics: Vec<ConvexBody> =
        minors.iter().map(|&b| ellipse(PlanePoint::ZERO, confocal_semi_major(2.0, 1.0, b), b, 2048)).collect();
    let rhos: Vec<f64> = caustics
        .iter()
        .map(|k| {
            let (_, touch) = k.support(PlanePoint::new(0.0, 1.0));
            let start = state_on_line(&table, touch.point, PlanePoint::new(-1.0, 0.0)).unwrap();
            rotation_number(&table, start, 10_000).unwrap().rho
        })
        .collect();
    let strings: Vec<f64> = caustics.iter().map(|k| string_invariant(&table, k).unwrap().0).collect();

    let ok = (rho_circle - 1.0 / 3.0).abs() < 1e-4
        && (rho_axis - 0.5).abs() < 1e-12
        && rhos.windows(2).all(|w| w[1] - w[0] > 1e-4)
        && rhos.iter().all(|&r| r < 0.5)
        && 0.5 - rhos[4] < 0.5 - rhos[0]
        && strings.windows(2).all(|w| w[1] < w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    outcome(
        ok,
        format!(
            "circle rho {rho_circle:.6}; axis orbit rho {rho_axis}; confocal rho [{}]; S [{}]",
            fmt(&rhos),
            fmt(&strings)
        ),
    )
}

fn a10() -> Outcome {
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let status = Command::new(env!("CARGO_BIN_EXE_caustica"))
                .args(["build-switched", "--alpha", "0.39", "--out", "table.csv", "--caustic", "gamma.csv"])
                .current_dir(dir.path())
                .output()
                .unwrap()
                .status;
            assert!(status.success());
            (std::fs::read(dir.path().join("table.csv")).unwrap(), std::fs::read(dir.path().join("gamma.csv")).unwrap())
        })
        .collect();
    let same = runs[0] == runs[1];
    outcome(
        same,
        format!(
            "two build-switched runs: table.csv {} bytes, gamma.csv {} bytes, identical {same}",
            runs[0].0.len(),
            runs[0].1.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] =
        [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6), ("A7", a7), ("A8", a8), ("A9", a9), ("A10", a10)];
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("{id:<4}{verdict}  {}  [{:.1} s]", result.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
