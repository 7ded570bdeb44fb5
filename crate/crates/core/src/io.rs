//! Text formats for curves and orbits.
//!
//! Curve CSV: a header `# closed=<bool> length=<float>` followed by rows
//! `s,x,y,tx,ty`. A corner is written as two rows with the same `s`, the
//! incoming tangent first. Floats use `%.17g`, so doubles round-trip exactly.

use std::io::{BufRead, Write};

use crate::billiard::OrbitRecord;
use crate::curve::{CurveSample, SampledCurve};
use crate::error::{Error, Result};
use crate::point::PlanePoint;

/// C `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_curve<W: Write>(mut w: W, curve: &SampledCurve) -> Result<()> {
    writeln!(w, "# closed={} length={}", curve.is_closed(), fmt_g17(curve.total_length()))?;
    let row = |w: &mut W, s: f64, p: PlanePoint, t: PlanePoint| -> std::io::Result<()> {
        writeln!(w, "{},{},{},{},{}", fmt_g17(s), fmt_g17(p.re), fmt_g17(p.im), fmt_g17(t.re), fmt_g17(t.im))
    };
    for (k, c) in curve.samples().iter().enumerate() {
        if curve.is_corner(k) {
            row(&mut w, c.s, c.point, curve.tangent_in(k))?;
        }
        row(&mut w, c.s, c.point, c.tangent)?;
    }
    Ok(())
}

pub fn curve_to_string(curve: &SampledCurve) -> String {
    let mut buf = Vec::new();
    write_curve(&mut buf, curve).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|e| Error::Parse { line, msg: format!("{field:?}: {e}") })
}

pub fn read_curve<R: BufRead>(r: R) -> Result<SampledCurve> {
    let mut closed = None;
    let mut length = None;
    let mut samples: Vec<CurveSample> = Vec::new();
    let mut tangent_in: Vec<PlanePoint> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(header) = text.strip_prefix('#') {
            for kv in header.split_whitespace() {
                match kv.split_once('=') {
                    Some(("closed", v)) => {
                        closed = Some(v.parse::<bool>().map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?)
                    }
                    Some(("length", v)) => length = Some(parse_f64(v, lineno)?),
                    _ => {}
                }
            }
            continue;
        }
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse { line: lineno, msg: format!("expected 5 fields, got {}", fields.len()) });
        }
        let v = fields.iter().map(|f| parse_f64(f, lineno)).collect::<Result<Vec<_>>>()?;
        let point = PlanePoint::try_new(v[1], v[2])?;
        let tangent = PlanePoint::try_new(v[3], v[4])?;
        match samples.last_mut() {
            Some(prev) if prev.s == v[0] => {
                if prev.point != point {
                    return Err(Error::Parse { line: lineno, msg: "repeated s with a different point".into() });
                }
                prev.tangent = tangent;
            }
            _ => {
                samples.push(CurveSample { s: v[0], point, tangent });
                tangent_in.push(tangent);
            }
        }
    }
    let closed = closed.ok_or(Error::Parse { line: 1, msg: "missing closed= header".into() })?;
    let length = length.ok_or(Error::Parse { line: 1, msg: "missing length= header".into() })?;
    SampledCurve::with_corners(samples, tangent_in, length, closed)
}

pub fn parse_curve(text: &str) -> Result<SampledCurve> {
    read_curve(text.as_bytes())
}

pub fn write_orbit<W: Write>(mut w: W, orbit: &OrbitRecord) -> Result<()> {
    writeln!(w, "k,sigma,theta,lift")?;
    for (k, (s, lift)) in orbit.states.iter().zip(&orbit.lift).enumerate() {
        writeln!(w, "{},{},{},{}", k, fmt_g17(s.sigma), fmt_g17(s.theta), fmt_g17(*lift))?;
    }
    Ok(())
}
