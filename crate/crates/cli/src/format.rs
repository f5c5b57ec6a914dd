//! Human-readable rendering of numbers, vectors and matrices.

use netdyn_core::Rational;
use num_traits::{One, Signed, Zero};

/// Significant digits used for text output unless `--precision` says otherwise.
pub const DEFAULT_PRECISION: u8 = 6;

#[derive(Clone, Copy, Debug)]
pub struct Fmt {
    pub precision: usize,
}

impl Default for Fmt {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION as usize,
        }
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Fmt {
    pub fn new(precision: u8) -> Self {
        Self {
            precision: precision.max(1) as usize,
        }
    }

    /// `v` rounded to the configured number of significant digits.
    pub fn num(&self, v: f64) -> String {
        if !v.is_finite() {
            return v.to_string();
        }
        if v == 0.0 {
            return "0".into();
        }
        let p = self.precision;
        let sci = format!("{:.*e}", p - 1, v);
        let (mantissa, exp) = sci.split_once('e').expect("exponent form");
        let exp: i32 = exp.parse().expect("integer exponent");
        let out = if exp < -4 || exp >= p as i32 {
            format!("{}e{exp}", trim_fraction(mantissa))
        } else {
            let decimals = (p as i32 - 1 - exp).max(0) as usize;
            trim_fraction(&format!("{v:.decimals$}")).to_string()
        };
        if out == "-0" {
            "0".into()
        } else {
            out
        }
    }

    pub fn vector(&self, v: &[f64]) -> String {
        let parts: Vec<String> = v.iter().map(|&x| self.num(x)).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Right-aligned rows, each prefixed by `indent`.
    pub fn matrix(&self, rows: &[Vec<f64>], indent: &str) -> String {
        let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&x| self.num(x)).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for row in &cells {
            out.push_str(indent);
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(&padded.join("  "));
            out.push('\n');
        }
        out
    }
}

/// `c·x = 0` written with node labels, e.g. `x[1] + x[3] - 2 x[4] = 0`.
pub fn relation(coeffs: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coeffs.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&format!("x[{label}]"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(" = 0");
    out
}
