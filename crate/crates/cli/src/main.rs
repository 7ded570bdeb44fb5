//! `caustica`: build billiard tables from caustics, run orbits and checks.
//!
//! Reports are single-line JSON on stdout. Library failures print
//! `Name: message` on stderr and exit with status 1; usage errors exit with 2.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use caustica::io::{read_curve, write_curve, write_orbit};
use caustica::shapes::{circle, circle_curve, ellipse, ellipse_curve};
use caustica::switched::smoothness::{SMOOTHNESS_EPS_FRACTION, SMOOTHNESS_SAMPLES, SMOOTHNESS_STRIDE};
use caustica::switched::config::REFERENCE_ALPHA;
use caustica::switched::*;
use caustica::{
    orbit, rotation_number, string_invariant, string_table, verify_caustic, ConvexBody, Error, PhaseState, PlanePoint,
    SampledCurve, StringParams,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "caustica", version, about = "Billiard tables from convex caustics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the switched table and its four-corner caustic.
    BuildSwitched(BuildArgs),
    /// String construction around a caustic.
    StringTable(StringTableArgs),
    /// Iterate the billiard map and write the orbit.
    Simulate(OrbitArgs),
    /// Check that a curve is a caustic of a table.
    VerifyCaustic(VerifyArgs),
    /// Rotation number of one orbit.
    RotationNumber(OrbitArgs),
    /// Derivative jumps of the switched table at its junctions.
    Smoothness(SmoothnessArgs),
    /// Write reference curves and the tangent-angle function.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    alpha: f64,
    /// Samples on each of the eight table branches.
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    /// Samples on each quarter of the written caustic.
    #[arg(long, default_value_t = 1024)]
    caustic_samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    caustic: Option<PathBuf>,
    /// Compare against the generic string construction.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 1e-5)]
    oracle_tol: f64,
    /// Germ stretch as a fraction of the quarter length.
    #[arg(long)]
    eps_fraction: Option<f64>,
}

#[derive(Args, Debug)]
struct StringTableArgs {
    /// Caustic curve CSV.
    #[arg(long, conflicts_with = "shape", required_unless_present = "shape")]
    caustic: Option<PathBuf>,
    /// Built-in caustic: `circle:R`, `ellipse:A,B`, `segment:C` or `square:H`.
    #[arg(long)]
    shape: Option<String>,
    /// String parameter.
    #[arg(long = "S")]
    s: f64,
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Orbit CSV (simulate only).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    caustic: PathBuf,
    #[arg(long, default_value_t = 20)]
    starts: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    /// Fail with status 1 when the tangency error exceeds this.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SmoothnessArgs {
    #[arg(long, default_value_t = REFERENCE_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = SMOOTHNESS_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = SMOOTHNESS_STRIDE)]
    stride: usize,
    #[arg(long, default_value_t = SMOOTHNESS_EPS_FRACTION)]
    eps_fraction: f64,
    #[arg(long, default_value_t = 3)]
    max_order: usize,
    /// Added to the germ's first coefficient.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    dphi1: f64,
    /// Added to the germ's second coefficient.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    dphi2: f64,
    /// Measure a table CSV instead of building one; needs `--junctions`.
    #[arg(long, requires = "junctions")]
    table: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    junctions: Vec<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ExportKind {
    Circle,
    Ellipse,
    /// Tangent-angle function of the switched caustic, rows `s,phi`.
    Phi,
}

#[derive(Args, Debug)]
struct ExportArgs {
    kind: ExportKind,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = REFERENCE_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    #[arg(long)]
    out: PathBuf,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn load_curve(path: &Path) -> caustica::Result<SampledCurve> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    read_curve(BufReader::new(f))
}

fn save(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> caustica::Result<()>) -> caustica::Result<()> {
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    write(&mut w)?;
    w.flush().map_err(|e| io_err(path, e))
}

fn save_curve(path: &Path, curve: &SampledCurve) -> caustica::Result<()> {
    save(path, |w| write_curve(w, curve))
}

fn parse_shape(spec: &str) -> caustica::Result<ConvexBody> {
    let bad = || Error::InvalidArgument(format!("bad shape {spec:?}"));
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    let v: Vec<f64> = args.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(bad());
    }
    match (kind, v.as_slice()) {
        ("circle", [r]) => Ok(circle(PlanePoint::ZERO, *r, 2048)),
        ("ellipse", [a, b]) => Ok(ellipse(PlanePoint::ZERO, *a, *b, 4096)),
        ("segment", [c]) => ConvexBody::segment(PlanePoint::new(-c, 0.0), PlanePoint::new(*c, 0.0)),
        ("square", [h]) => ConvexBody::polygon(&[
            PlanePoint::new(-h, -h),
            PlanePoint::new(*h, -h),
            PlanePoint::new(*h, *h),
            PlanePoint::new(-h, *h),
        ]),
        _ => Err(bad()),
    }
}

fn build_switched(args: &BuildArgs) -> caustica::Result<Value> {
    let mut config = SwitchedConfig::new(args.alpha)?;
    if let Some(f) = args.eps_fraction {
        config = config.with_mollifier(f * config.s_hat, config.delta)?;
    }
    let caustic = build_gamma(build_phi(&config)?, &config)?;
    let options = TableOptions { per_branch: args.samples, strict: args.strict, oracle_tol: args.oracle_tol, ..Default::default() };
    let table = explicit_table(&caustic, &config, &options)?;
    let gamma = caustic.sampled(args.caustic_samples)?;
    if let Some(path) = &args.out {
        save_curve(path, &table.curve)?;
    }
    if let Some(path) = &args.caustic {
        save_curve(path, &gamma)?;
    }
    let corners: Vec<f64> = gamma.corner_indices().into_iter().map(|k| gamma.corner_turning(k)).collect();
    Ok(json!({
        "command": "build-switched",
        "alpha": config.alpha,
        "s_hat": config.s_hat,
        "ell": config.ell,
        "ell_hat": config.ell_hat,
        "germ": [config.phi1, config.phi2],
        "mixing_weight": caustic.phi().mixing_weight(),
        "string_parameter": table.string_parameter,
        "measured_string_parameter": table.measured_parameter,
        "corner_angles": corners,
        "expected_corner_angle": config.corner_angle(),
        "branch_length": table.branch_length,
        "switching_points": table.switching_points(),
        "table_samples": table.curve.len(),
        "table_length": table.curve.total_length(),
        "stitch_gap": table.stitch_gap,
        "oracle_distance": table.oracle_distance,
    }))
}

fn caustic_body(args: &StringTableArgs) -> caustica::Result<ConvexBody> {
    match (&args.caustic, &args.shape) {
        (Some(path), _) => ConvexBody::curve(load_curve(path)?),
        (None, Some(spec)) => parse_shape(spec),
        (None, None) => Err(Error::InvalidArgument("need --caustic or --shape".into())),
    }
}

fn string_table_cmd(args: &StringTableArgs) -> caustica::Result<Value> {
    let k = caustic_body(args)?;
    let params = StringParams::new(args.s, &k)?;
    let table = string_table(&k, args.s, args.samples)?;
    let (s_est, dev) = string_invariant(&table, &k)?;
    if let Some(path) = &args.out {
        save_curve(path, &table)?;
    }
    Ok(json!({
        "command": "string-table",
        "S": params.s,
        "lazutkin": params.lazutkin,
        "caustic_perimeter": k.perimeter(),
        "samples": table.len(),
        "table_length": table.total_length(),
        "S_estimate": s_est,
        "max_dev": dev,
    }))
}

fn simulate(args: &OrbitArgs) -> caustica::Result<Value> {
    let table = load_curve(&args.table)?;
    let start = PhaseState::new(&table, args.sigma, args.theta)?;
    let rec = orbit(&table, start, args.iters)?;
    if let Some(path) = &args.out {
        save(path, |w| write_orbit(w, &rec))?;
    }
    let last = rec.states.last().expect("orbit has its initial state");
    let advance = (rec.lift.last().unwrap() - rec.lift[0]) / table.total_length();
    Ok(json!({
        "command": "simulate",
        "iters": args.iters,
        "final": {"sigma": last.sigma, "theta": last.theta},
        "windings": advance,
    }))
}

fn rotation(args: &OrbitArgs) -> caustica::Result<Value> {
    let table = load_curve(&args.table)?;
    let start = PhaseState::new(&table, args.sigma, args.theta)?;
    let est = rotation_number(&table, start, args.iters)?;
    Ok(json!({"command": "rotation-number", "iters": args.iters, "rho": est.rho, "tail": est.tail}))
}

fn verify(args: &VerifyArgs) -> caustica::Result<Value> {
    let table = load_curve(&args.table)?;
    let k = ConvexBody::curve(load_curve(&args.caustic)?)?;
    let check = verify_caustic(&table, &k, args.starts, args.iters)?;
    let mut report = json!({
        "command": "verify-caustic",
        "starts": args.starts,
        "iters": args.iters,
        "max_tangency_error": check.max_tangency_error,
        "rho": check.rho,
    });
    if let Some(tol) = args.tol {
        report["pass"] = json!(check.max_tangency_error < tol);
    }
    Ok(report)
}

fn smoothness(args: &SmoothnessArgs) -> caustica::Result<Value> {
    let (curve, junctions) = match &args.table {
        Some(path) => (load_curve(path)?, args.junctions.clone()),
        None => {
            let base = SwitchedConfig::new(args.alpha)?;
            let config = base.with_mollifier(args.eps_fraction * base.s_hat, base.delta)?;
            let config = config.with_germ(config.phi1 + args.dphi1, config.phi2 + args.dphi2);
            let caustic = build_gamma(build_phi(&config)?, &config)?;
            let options = TableOptions { per_branch: args.samples, ..Default::default() };
            let table = explicit_table(&caustic, &config, &options)?;
            let junctions = table.switching_points().to_vec();
            (table.curve, junctions)
        }
    };
    let report = smoothness_report(&curve, &junctions, args.max_order, args.stride)?;
    let jumps: Vec<Value> = report
        .iter()
        .map(|j| {
            json!({
                "junction": j.junction,
                "order": j.order,
                "spacing": j.spacing,
                "coarse": j.coarse,
                "fine": j.fine,
                "extrapolated": j.extrapolated,
                "ratio": j.ratio,
                "predicted_ratio": j.predicted_ratio(),
            })
        })
        .collect();
    Ok(json!({"command": "smoothness", "junctions": junctions, "jumps": jumps}))
}

fn export(args: &ExportArgs) -> caustica::Result<Value> {
    match args.kind {
        ExportKind::Circle => save_curve(&args.out, &circle_curve(PlanePoint::ZERO, args.r, args.samples))?,
        ExportKind::Ellipse => save_curve(&args.out, &ellipse_curve(PlanePoint::ZERO, args.a, args.b, args.samples))?,
        ExportKind::Phi => {
            let config = SwitchedConfig::new(args.alpha)?;
            let phi = build_phi(&config)?;
            save(&args.out, |w| {
                writeln!(w, "s,phi")?;
                for (s, v) in phi.grid(args.samples) {
                    writeln!(w, "{},{}", caustica::io::fmt_g17(s), caustica::io::fmt_g17(v))?;
                }
                Ok(())
            })?;
        }
    }
    Ok(json!({"command": "export", "kind": format!("{:?}", args.kind).to_lowercase(), "out": args.out}))
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CAUSTICA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("CAUSTICA_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("CAUSTICA_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn execute(command: &Command) -> caustica::Result<Value> {
    match command {
        Command::BuildSwitched(a) => build_switched(a),
        Command::StringTable(a) => string_table_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::VerifyCaustic(a) => verify(a),
        Command::RotationNumber(a) => rotation(a),
        Command::Smoothness(a) => smoothness(a),
        Command::Export(a) => export(a),
    }
}

/// What the process prints and its exit status.
#[derive(Debug)]
struct Rendered {
    stdout: Option<String>,
    stderr: Option<String>,
    status: u8,
}

fn render(result: caustica::Result<Value>) -> Rendered {
    match result {
        Ok(report) => {
            let status = match report.get("pass") {
                Some(Value::Bool(false)) => 1,
                _ => 0,
            };
            Rendered { stdout: Some(report.to_string()), stderr: None, status }
        }
        Err(e) => Rendered { stdout: None, stderr: Some(format!("{}: {e}", e.name())), status: 1 },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let out = render(execute(&cli.command));
    if let Some(line) = out.stdout {
        println!("{line}");
    }
    if let Some(line) = out.stderr {
        eprintln!("{line}");
    }
    ExitCode::from(out.status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::error::ErrorKind;

    fn run(args: &[&str]) -> Rendered {
        let cli = Cli::try_parse_from(std::iter::once("caustica").chain(args.iter().copied())).expect("valid usage");
        render(execute(&cli.command))
    }

    fn report(out: &Rendered) -> Value {
        assert_eq!(out.status, 0, "{out:?}");
        serde_json::from_str(out.stdout.as_deref().unwrap()).unwrap()
    }

    fn path(dir: &tempfile::TempDir, name: &str) -> String {
        dir.path().join(name).to_str().unwrap().to_string()
    }

    #[test]
    fn build_and_verify_the_switched_table() {
        let dir = tempfile::tempdir().unwrap();
        let (t, g) = (path(&dir, "table.csv"), path(&dir, "gamma.csv"));
        let r = report(&run(&["build-switched", "--alpha", "0.39", "--out", &t, "--caustic", &g]));
        let s = r["measured_string_parameter"].as_f64().unwrap();
        assert!((s - r["string_parameter"].as_f64().unwrap()).abs() < 1e-9);
        let expected = r["expected_corner_angle"].as_f64().unwrap();
        let corners = r["corner_angles"].as_array().unwrap();
        assert_eq!(corners.len(), 4);
        assert!(corners.iter().all(|c| (c.as_f64().unwrap() - expected).abs() < 1e-3));

        let args = ["verify-caustic", "--table", &t, "--caustic", &g, "--starts", "20", "--iters", "200"];
        let r = report(&run(&args));
        assert!(r["max_tangency_error"].as_f64().unwrap() < 1e-5, "{r}");
        assert!(r["rho"].as_f64().unwrap() > 0.0);

        let out = run(&[&args[..], &["--tol", "1e-12"]].concat());
        assert_eq!(out.status, 1);
        assert!(out.stdout.unwrap().contains("\"pass\":false"));
    }

    #[test]
    fn domain_errors_are_named() {
        let out = run(&["build-switched", "--alpha", "0.42"]);
        assert_eq!((out.status, out.stdout), (1, None));
        assert_eq!(out.stderr.as_deref(), Some("InfeasibleAlpha: alpha >= pi/8"));
        assert!(run(&["build-switched", "--alpha", "0.8"]).stderr.unwrap().starts_with("AlphaOutOfRange: "));
        assert!(run(&["rotation-number", "--table", "/nonexistent.csv", "--theta", "1"]).stderr.unwrap().starts_with("Io: "));
        let out = run(&["string-table", "--shape", "circle:1", "--S", "6"]);
        assert!(out.stderr.unwrap().starts_with("StringTooShort: "));
        let out = run(&["string-table", "--shape", "blob:1", "--S", "6"]);
        assert!(out.stderr.unwrap().starts_with("InvalidArgument: "));
    }

    #[test]
    fn usage_errors_are_rejected_by_the_parser() {
        for args in [&["build-switched"][..], &["build-switched", "--alpha", "abc"], &["frobnicate"], &["string-table", "--S", "7"]] {
            let err = Cli::try_parse_from(std::iter::once("caustica").chain(args.iter().copied())).unwrap_err();
            assert_ne!(err.kind(), ErrorKind::DisplayHelp);
            assert_eq!(err.exit_code(), 2);
        }
    }

    #[test]
    fn outputs_are_deterministic() {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let files = ["t.csv", "g.csv", "e.csv", "o.csv"].map(|f| path(&dir, f));
                report(&run(&["build-switched", "--alpha", "0.39", "--out", &files[0], "--caustic", &files[1]]));
                report(&run(&["export", "ellipse", "--out", &files[2]]));
                report(&run(&["simulate", "--table", &files[2], "--theta", "0.7", "--iters", "200", "--out", &files[3]]));
                files.map(|f| std::fs::read(f).unwrap())
            })
            .collect();
        assert!(runs[0] == runs[1]);
    }

    #[test]
    fn string_table_and_orbit_commands() {
        let dir = tempfile::tempdir().unwrap();
        let t = path(&dir, "t.csv");
        let r = report(&run(&["string-table", "--shape", "circle:1", "--S", "7.652891823", "--samples", "128", "--out", &t]));
        assert!(r["max_dev"].as_f64().unwrap() < 1e-8);
        let table = load_curve(Path::new(&t)).unwrap();
        assert!(table.points().all(|p| (p.norm() - 2.0).abs() < 1e-6));

        let c = path(&dir, "c.csv");
        report(&run(&["export", "circle", "--r", "2", "--samples", "2048", "--out", &c]));
        let r = report(&run(&["rotation-number", "--table", &c, "--theta", "1.0471975511965976", "--iters", "10000"]));
        assert!((r["rho"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-4, "{r}");

        let o = path(&dir, "o.csv");
        report(&run(&["simulate", "--table", &c, "--theta", "0.5", "--iters", "10", "--out", &o]));
        let orbit = std::fs::read_to_string(&o).unwrap();
        assert_eq!(orbit.lines().next(), Some("k,sigma,theta,lift"));
        assert_eq!(orbit.lines().count(), 12);

        let phi = path(&dir, "phi.csv");
        report(&run(&["export", "phi", "--samples", "64", "--out", &phi]));
        let text = std::fs::read_to_string(&phi).unwrap();
        let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        let config = SwitchedConfig::new(REFERENCE_ALPHA).unwrap();
        assert!((last[0] - config.s_hat).abs() < 1e-12 && (last[1] - 2.0 * config.alpha).abs() < 1e-9, "{last:?}");
    }

    #[test]
    fn smoothness_of_an_exported_table() {
        let dir = tempfile::tempdir().unwrap();
        let c = path(&dir, "c.csv");
        report(&run(&["export", "circle", "--samples", "4096", "--out", &c]));
        let r = report(&run(&["smoothness", "--table", &c, "--junctions", "0,1.5707963267948966", "--stride", "4"]));
        let jumps = r["jumps"].as_array().unwrap();
        assert_eq!(jumps.len(), 6);
        assert!(jumps.iter().all(|j| j["extrapolated"].as_f64().unwrap().abs() < 1e-5), "{r}");
        let out = run(&["smoothness", "--table", &c, "--junctions", "0.001"]);
        assert!(out.stderr.unwrap().starts_with("InsufficientResolution: "));
    }
}
