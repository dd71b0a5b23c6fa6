//! Banded operators on a truncated Fock space, applied to dense
//! column-major density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Operator whose nonzero entries sit on a few diagonals; band `off`
/// stores B[i, i + off] at index i.
#[derive(Debug, Clone)]
pub(crate) struct Banded {
    dim: usize,
    bands: Vec<(isize, Vec<Complex64>)>,
}

impl Banded {
    fn empty(dim: usize) -> Self {
        Self {
            dim,
            bands: Vec::new(),
        }
    }

    fn band_mut(&mut self, off: isize) -> &mut Vec<Complex64> {
        let k = match self.bands.iter().position(|(o, _)| *o == off) {
            Some(k) => k,
            None => {
                self.bands.push((off, vec![Complex64::new(0.0, 0.0); self.dim]));
                self.bands.len() - 1
            }
        };
        &mut self.bands[k].1
    }

    /// Annihilator of the oscillator at frequency ω written in the Fock
    /// basis of ω₀: a_ω = μ a₀ + ν a₀†.
    pub(crate) fn jumped_annihilator(dim: usize, mu: f64, nu: f64) -> Self {
        let mut b = Self::empty(dim);
        // a₀[n−1, n] = √n sits on band +1 at row n − 1.
        let up = b.band_mut(1);
        for (i, v) in up.iter_mut().enumerate().take(dim.saturating_sub(1)) {
            *v = Complex64::new(mu * ((i + 1) as f64).sqrt(), 0.0);
        }
        if nu != 0.0 {
            // a₀†[n + 1, n] = √(n+1) sits on band −1 at row n + 1.
            let down = b.band_mut(-1);
            for (i, v) in down.iter_mut().enumerate().skip(1) {
                *v = Complex64::new(nu * (i as f64).sqrt(), 0.0);
            }
        }
        b
    }

    pub(crate) fn adjoint(&self) -> Self {
        let mut out = Self::empty(self.dim);
        for (off, vals) in &self.bands {
            let band = out.band_mut(-off);
            for (i, v) in band.iter_mut().enumerate() {
                let j = i as isize - off;
                if j >= 0 && (j as usize) < self.dim {
                    *v = vals[j as usize].conj();
                }
            }
        }
        out
    }

    pub(crate) fn product(&self, rhs: &Self) -> Self {
        let d = self.dim as isize;
        let mut out = Self::empty(self.dim);
        for (oa, va) in &self.bands {
            for (ob, vb) in &rhs.bands {
                let off = oa + ob;
                let band = out.band_mut(off);
                for i in 0..d {
                    let k = i + oa;
                    let j = k + ob;
                    if k >= 0 && k < d && j >= 0 && j < d {
                        band[i as usize] += va[i as usize] * vb[k as usize];
                    }
                }
            }
        }
        out
    }

    pub(crate) fn scaled(mut self, c: Complex64) -> Self {
        for (_, vals) in &mut self.bands {
            for v in vals.iter_mut() {
                *v *= c;
            }
        }
        self
    }

    pub(crate) fn plus(mut self, rhs: &Self) -> Self {
        for (off, vals) in &rhs.bands {
            let band = self.band_mut(*off);
            for (a, b) in band.iter_mut().zip(vals) {
                *a += b;
            }
        }
        self
    }

    /// out = B·x
    pub(crate) fn left_mul(&self, x: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let d = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        os.fill(Complex64::new(0.0, 0.0));
        for (off, vals) in &self.bands {
            let (lo, hi) = row_range(d, *off);
            for j in 0..d {
                let col = j * d;
                let src = &xs[col..col + d];
                let dst = &mut os[col..col + d];
                for i in lo..hi {
                    dst[i] += vals[i] * src[(i as isize + off) as usize];
                }
            }
        }
    }

    /// out += c·x·B
    pub(crate) fn right_mul_add(&self, x: &DMatrix<Complex64>, c: f64, out: &mut DMatrix<Complex64>) {
        let d = self.dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for (off, vals) in &self.bands {
            for j in 0..d {
                let k = j as isize - off;
                if k < 0 || k as usize >= d {
                    continue;
                }
                let k = k as usize;
                let v = vals[k] * c;
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &xs[k * d..k * d + d];
                let dst = &mut os[j * d..j * d + d];
                for (o, s) in dst.iter_mut().zip(src) {
                    *o += v * s;
                }
            }
        }
    }
}

/// Rows i with 0 ≤ i + off < d.
fn row_range(d: usize, off: isize) -> (usize, usize) {
    let lo = (-off).max(0) as usize;
    let hi = (d as isize - off.max(0)).max(0) as usize;
    (lo.min(d), hi)
}
