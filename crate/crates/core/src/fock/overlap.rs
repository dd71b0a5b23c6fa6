//! Overlaps between the number states of oscillators with different
//! frequencies, and the squeeze operator that relates the two bases.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::qfi::basis_jump_squeeze;

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// ⟨m_ω|n_ω₀⟩ for number states of oscillators at `omega` and `omega0`.
/// Vanishes unless m and n have the same parity.
pub fn basis_overlap(m: usize, n: usize, omega: f64, omega0: f64) -> f64 {
    let lf = ln_factorials(m.max(n));
    overlap_with(&lf, m, n, omega, omega0)
}

fn overlap_with(lf: &[f64], m: usize, n: usize, omega: f64, omega0: f64) -> f64 {
    if (m + n) % 2 == 1 {
        return 0.0;
    }
    let y1 = (omega0 - omega) / (omega0 + omega);
    let y2 = 2.0 * (omega0 * omega).sqrt() / (omega0 + omega);
    if y1 == 0.0 {
        return if m == n { 1.0 } else { 0.0 };
    }
    let base = 0.5 * (y2.ln() + lf[m] + lf[n] - (m + n) as f64 * std::f64::consts::LN_2);
    let mut sum = 0.0;
    // l runs over the parity of m (and n), from its smallest value.
    let mut l = m % 2;
    while l <= m.min(n) {
        let e = (m + n) / 2 - l;
        let ln_mag = base + l as f64 * (2.0 * y2).ln() - lf[l] + e as f64 * y1.abs().ln()
            - lf[(n - l) / 2]
            - lf[(m - l) / 2];
        let mut sign = if ((m - l) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if y1 < 0.0 && e % 2 == 1 {
            sign = -sign;
        }
        sum += sign * ln_mag.exp();
        l += 2;
    }
    sum
}

/// R[m, n] = ⟨m_ω|n_ω₀⟩ for m, n < dim.
pub fn overlap_matrix(dim: usize, omega: f64, omega0: f64) -> DMatrix<f64> {
    let lf = ln_factorials(dim);
    DMatrix::from_fn(dim, dim, |m, n| overlap_with(&lf, m, n, omega, omega0))
}

/// Matrix of S(s) = exp(½ s (a†² − a²)) for real s, computed on a larger
/// space and cropped to `dim`.
pub fn squeeze_matrix(dim: usize, s: f64) -> DMatrix<f64> {
    let work = dim + dim.max(40) * 2;
    let mut gen = DMatrix::<Complex64>::zeros(work, work);
    for n in 0..work.saturating_sub(2) {
        // (a†²)[n+2, n] = √((n+1)(n+2)); a² is its transpose.
        let v = 0.5 * s * (((n + 1) * (n + 2)) as f64).sqrt();
        gen[(n + 2, n)] = Complex64::new(v, 0.0);
        gen[(n, n + 2)] = Complex64::new(-v, 0.0);
    }
    let u = gen.exp();
    DMatrix::from_fn(dim, dim, |i, j| u[(i, j)].re)
}

/// Squeeze matrix for the basis change ω₀ → ω, with s from
/// [`basis_jump_squeeze`].
pub fn basis_jump_matrix(dim: usize, omega0: f64, omega: f64) -> Result<DMatrix<f64>> {
    Ok(squeeze_matrix(dim, basis_jump_squeeze(omega0, omega)?))
}
