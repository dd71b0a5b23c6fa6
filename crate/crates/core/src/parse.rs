//! Parsers for the small textual formats used on the command line:
//! inclusive grids, lengths with SI prefixes and angles in units of π.

use crate::error::{Error, Result};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn finite(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| err(format!("invalid {what}: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(format!("{what} must be finite: {s:?}")))
    }
}

/// Largest number of points accepted by [`parse_grid`].
pub const MAX_GRID: usize = 10_000_000;

/// `lo:hi:n` → n points from lo to hi inclusive. `n = 1` requires lo = hi.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(err(format!("grid must look like lo:hi:n, got {s:?}")));
    };
    let lo = finite(lo, "grid start")?;
    let hi = finite(hi, "grid end")?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| err(format!("invalid grid count: {n:?}")))?;
    if n == 0 || n > MAX_GRID {
        return Err(err(format!("grid count must be in 1..={MAX_GRID}, got {n}")));
    }
    if hi < lo {
        return Err(err(format!("grid end {hi} is below start {lo}")));
    }
    if n == 1 {
        return if lo == hi {
            Ok(vec![lo])
        } else {
            Err(err("a one-point grid needs lo == hi"))
        };
    }
    let step = (hi - lo) / (n - 1) as f64;
    if !step.is_finite() {
        return Err(err(format!("grid span overflows: {s:?}")));
    }
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

const LENGTH_UNITS: [(&str, f64); 8] = [
    ("fm", 1e-15),
    ("pm", 1e-12),
    ("nm", 1e-9),
    ("um", 1e-6),
    ("µm", 1e-6),
    ("μm", 1e-6),
    ("mm", 1e-3),
    ("m", 1.0),
];

/// Length in metres from `10nm`, `0.5 um`, `1e-8` (bare numbers are metres).
pub fn parse_length(s: &str) -> Result<f64> {
    let t = s.trim();
    let (num, scale) = LENGTH_UNITS
        .iter()
        .find_map(|&(u, k)| t.strip_suffix(u).map(|n| (n, k)))
        .unwrap_or((t, 1.0));
    if num.trim().is_empty() {
        return Err(err(format!("missing number in length {s:?}")));
    }
    let v = finite(num, "length")? * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(format!("length overflows: {s:?}")))
    }
}

/// Angle in radians from a number or a multiple of π:
/// `pi`, `-pi/4`, `2pi`, `3*pi/4`, `0.5`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = t.to_ascii_lowercase();
    let Some(idx) = lower.find("pi").or_else(|| lower.find('π')) else {
        return finite(&t, "angle");
    };
    let plen = if lower[idx..].starts_with("pi") {
        2
    } else {
        'π'.len_utf8()
    };
    let head = &lower[..idx];
    let tail = &lower[idx + plen..];
    let coef = match head.strip_suffix('*').unwrap_or(head) {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => finite(c, "angle coefficient")?,
    };
    let div = match tail {
        "" => 1.0,
        d => {
            let d = d
                .strip_prefix('/')
                .ok_or_else(|| err(format!("invalid angle {s:?}")))?;
            let v = finite(d, "angle divisor")?;
            if v == 0.0 {
                return Err(err("angle divisor is zero"));
            }
            v
        }
    };
    let v = coef * std::f64::consts::PI / div;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(format!("angle overflows: {s:?}")))
    }
}
