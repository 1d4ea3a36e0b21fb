//! CSV output with C-style `%.10g` numbers.

use std::io::{self, Write};

use crate::lagrange::OccupationPoint;

pub const SWEEP_HEADER: &str = "model,quantity,eta,nbar,rho_t,y0,f,factor,error";
pub const PROFILE_HEADER: &str = "x,n,clamped";
pub const SCAN_HEADER: &str = "lambda_diff,mutual_info_bits";

/// Formats like C's `printf("%.10g", v)`.
pub fn format_g(v: f64) -> String {
    const PRECISION: i32 = 10;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let fixed = format!("{:.*}", (PRECISION - 1 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One line of a sweep file.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub model: String,
    pub quantity: String,
    pub eta: f64,
    pub nbar: f64,
    pub rho_t: f64,
    pub y0: f64,
    pub f: f64,
    pub factor: f64,
    /// Set when the point failed; the numeric columns are then `nan`.
    pub error: Option<String>,
}

fn clean(field: &str) -> String {
    field.replace([',', '\n', '\r'], " ")
}

pub fn write_sweep_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            r.quantity,
            format_g(r.eta),
            format_g(r.nbar),
            format_g(r.rho_t),
            format_g(r.y0),
            format_g(r.f),
            format_g(r.factor),
            r.error.as_deref().map(clean).unwrap_or_default()
        )?;
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(mut out: W, points: &[OccupationPoint]) -> io::Result<()> {
    writeln!(out, "{PROFILE_HEADER}")?;
    for p in points {
        writeln!(out, "{},{},{}", format_g(p.x), format_g(p.n), u8::from(p.clamped))?;
    }
    Ok(())
}

pub fn write_scan_csv<W: Write>(mut out: W, samples: &[(f64, f64)]) -> io::Result<()> {
    writeln!(out, "{SCAN_HEADER}")?;
    for &(d, i) in samples {
        writeln!(out, "{},{}", format_g(d), format_g(i))?;
    }
    Ok(())
}
