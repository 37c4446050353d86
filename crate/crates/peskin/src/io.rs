//! CSV and JSON output with one fixed float format.
//!
//! Every float is written as `{:.16e}` — 17 significant digits — which is
//! enough to round-trip any f64 exactly. Identical runs therefore produce
//! byte-identical files, and the golden-data tests can compare values after
//! a lossless parse.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::curve::{Curve, TraceRecord};
use crate::error::{Error, Result};

/// The one true float format: 17 significant digits, scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub const CURVE_HEADER: &str = "theta,x,y";
pub const TRACE_HEADER: &str =
    "t,energy,area,star_norm,c1h_pi_norm,a_x,a_y,a_r,a_t,def_ratio_0,max_speed";
pub const FIELD_HEADER: &str = "x,y,u1,u2,p,masked";

/// Write a curve as `theta,x,y` rows.
pub fn write_curve_csv(path: &Path, theta: &[f64], c: &Curve) -> Result<()> {
    if theta.len() != c.n() {
        return Err(Error::SizeMismatch {
            expected: c.n(),
            got: theta.len(),
        });
    }
    let mut out = String::with_capacity(64 * c.n());
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for ((t, x), y) in theta.iter().zip(&c.x).zip(&c.y) {
        out.push_str(&fmt_float(*t));
        out.push(',');
        out.push_str(&fmt_float(*x));
        out.push(',');
        out.push_str(&fmt_float(*y));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Read a `theta,x,y` file back. Errors carry the 1-based line number.
pub fn read_curve_csv(path: &Path) -> Result<(Vec<f64>, Curve)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CURVE_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "{}: expected header '{CURVE_HEADER}', got {other:?}",
                path.display()
            )))
        }
    }
    let mut theta = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "{}:{}: expected 3 fields, got {}",
                path.display(),
                i + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "{}:{}: bad float {s:?}",
                    path.display(),
                    i + 2
                ))
            })
        };
        theta.push(parse(fields[0])?);
        x.push(parse(fields[1])?);
        y.push(parse(fields[2])?);
    }
    Ok((theta, Curve::new(x, y)?))
}

/// Write the trajectory trace.
pub fn write_trace_csv(path: &Path, trace: &[TraceRecord]) -> Result<()> {
    let mut out = String::with_capacity(256 * trace.len());
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in trace {
        let fields = [
            r.t,
            r.energy,
            r.area,
            r.star_norm,
            r.c1h_pi_norm,
            r.coeffs.a_x,
            r.coeffs.a_y,
            r.coeffs.a_r,
            r.coeffs.a_t,
            r.deformation_ratio_0,
            r.max_speed,
        ];
        push_row(&mut out, &fields);
    }
    write_atomic(path, out.as_bytes())
}

/// Write a two-column series under the given header ("t,log_pi_c1h" etc.).
pub fn write_series_csv(path: &Path, header: &str, rows: &[[f64; 2]]) -> Result<()> {
    let mut out = String::with_capacity(64 * rows.len());
    out.push_str(header);
    out.push('\n');
    for r in rows {
        push_row(&mut out, r);
    }
    write_atomic(path, out.as_bytes())
}

/// Write field samples; masked points keep empty velocity/pressure fields and
/// set the flag column to 1.
pub fn write_field_csv(path: &Path, samples: &[crate::biop::FieldSample]) -> Result<()> {
    let mut out = String::with_capacity(128 * samples.len());
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&fmt_float(s.point[0]));
        out.push(',');
        out.push_str(&fmt_float(s.point[1]));
        out.push(',');
        if let (Some(u), Some(p)) = (s.u, s.p) {
            out.push_str(&fmt_float(u[0]));
            out.push(',');
            out.push_str(&fmt_float(u[1]));
            out.push(',');
            out.push_str(&fmt_float(p));
            out.push_str(",0\n");
        } else {
            out.push_str(",,,1\n");
        }
    }
    write_atomic(path, out.as_bytes())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn push_row(out: &mut String, fields: &[f64]) {
    for (i, v) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_float(*v));
    }
    out.push('\n');
}

/// Write via a sibling temp file + rename so readers never see a torn file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
