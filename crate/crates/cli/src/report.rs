//! Report rows and their CSV rendering.

use std::io::{self, Write};

use magnetic_berezin::identities::REL_ERR_FLOOR;

/// Header of the multiplier commands.
pub const MULTIPLIER_HEADER: &str = "lambda,f_numeric,f_closed,abs_err,rel_err,status";
/// Header of every other command.
pub const GENERIC_HEADER: &str = "inputs,computed,reference,abs_err,rel_err,status";

/// How a row is judged against `--tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Judge {
    /// `rel_err <= tol`.
    Relative,
    /// `abs_err <= tol * max(1, |reference|)`, for references that are zero
    /// by construction or of unit size.
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// `key=value` pairs separated by `;`.
    pub inputs: String,
    pub computed: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(inputs: String, computed: f64, reference: f64, abs_err: f64, judge: Judge, tol: f64) -> Self {
        let rel_err = abs_err / reference.abs().max(REL_ERR_FLOOR);
        let pass = match judge {
            Judge::Relative => rel_err <= tol,
            Judge::Mixed => abs_err <= tol * reference.abs().max(1.0),
        };
        ReportRow {
            inputs,
            computed,
            reference,
            abs_err,
            rel_err,
            pass,
        }
    }

    /// Row comparing two real values directly.
    pub fn compare(inputs: String, computed: f64, reference: f64, judge: Judge, tol: f64) -> Self {
        ReportRow::new(inputs, computed, reference, (computed - reference).abs(), judge, tol)
    }
}

/// Round-trip-safe rendering with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `inputs` is a bare `λ`.
    Multiplier,
    Generic,
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(out: &mut W, layout: Layout, rows: &[(Option<f64>, ReportRow)]) -> io::Result<()> {
    match layout {
        Layout::Multiplier => writeln!(out, "{MULTIPLIER_HEADER}")?,
        Layout::Generic => writeln!(out, "{GENERIC_HEADER}")?,
    }
    for (lambda, r) in rows {
        let key = match (layout, lambda) {
            (Layout::Multiplier, Some(l)) => float(*l),
            _ => r.inputs.clone(),
        };
        writeln!(
            out,
            "{key},{},{},{},{},{}",
            float(r.computed),
            float(r.reference),
            float(r.abs_err),
            float(r.rel_err),
            status(r.pass)
        )?;
    }
    Ok(())
}
