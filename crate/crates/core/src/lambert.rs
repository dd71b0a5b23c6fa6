//! Principal branch W₀ of the Lambert W function, w e^w = x.

use std::f64::consts::E;

use crate::error::{domain, Result};

const MAX_ITER: usize = 50;
/// −1/e
const BRANCH: f64 = -1.0 / E;

/// Series of W₀ around the branch point in p = √(2(ex + 1)).
fn branch_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        branch_series((2.0 * (E * x + 1.0)).max(0.0).sqrt())
    } else if x < 3.0 {
        // Padé-like start, good on (−1/4, 3).
        x * (1.0 + 4.0 / 3.0 * x) / (1.0 + x * (7.0 / 3.0 + 5.0 / 6.0 * x))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// W₀(x) for x ≥ −1/e.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH {
        return Err(domain(format!("lambert_w0 needs x >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == BRANCH {
        return Ok(-1.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    if p < 1e-3 {
        // Halley's step degenerates at w = −1; the truncated series is
        // already accurate to O(p⁶) here.
        return Ok(branch_series(p));
    }
    let mut w = initial_guess(x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}
