//! Fixed-step RK4 integration of the master equation on a truncated
//! Fock space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::banded::Banded;
use super::FockDensityMatrix;
use crate::error::{domain, Error, Result};
use crate::phase_space::BathParams;

/// Largest allowed dt times the spectral bound of the generator. RK4 is
/// stable up to about 2.8 on the imaginary axis and 2.78 on the real axis.
pub const STABILITY_LIMIT: f64 = 2.5;
/// dt times the spectral bound used when no step is given.
pub const DEFAULT_STEP_FACTOR: f64 = 0.5;

/// Bogoliubov coefficients of a_ω = μa₀ + νa₀†.
pub(crate) fn jump_coefficients(omega0: f64, omega: f64) -> (f64, f64) {
    let (x, y) = ((omega / omega0).sqrt(), (omega0 / omega).sqrt());
    (0.5 * (x + y), 0.5 * (x - y))
}

/// Upper bound on the spectral radius of the master-equation generator
/// at truncation `dim`, used for the RK4 step.
pub fn spectral_bound(dim: usize, bath: &BathParams, basis_omega: f64) -> f64 {
    let (mu, nu) = jump_coefficients(basis_omega, bath.omega());
    let spread = (mu + nu.abs()).powi(2) * dim as f64;
    spread * (bath.omega() + bath.gamma() * (2.0 * bath.nbar() + 1.0))
}

/// Default RK4 step for `rho` under `bath`.
pub fn default_step(dim: usize, bath: &BathParams, basis_omega: f64) -> f64 {
    DEFAULT_STEP_FACTOR / spectral_bound(dim, bath, basis_omega)
}

struct Generator {
    /// −iH − ½γ(n̄+1)a†a − ½γn̄ aa†
    k: Banded,
    k_adj: Banded,
    a: Banded,
    a_dag: Banded,
    loss: f64,
    gain: f64,
}

impl Generator {
    fn new(dim: usize, bath: &BathParams, basis_omega: f64) -> Self {
        let (mu, nu) = jump_coefficients(basis_omega, bath.omega());
        let a = Banded::jumped_annihilator(dim, mu, nu);
        let a_dag = a.adjoint();
        let num = a_dag.product(&a);
        let anti = a.product(&a_dag);
        let (w, gm, n) = (bath.omega(), bath.gamma(), bath.nbar());
        let k = num
            .clone()
            .scaled(Complex64::new(-0.5 * gm * (n + 1.0), -w))
            .plus(&anti.scaled(Complex64::new(-0.5 * gm * n, 0.0)));
        let k_adj = k.adjoint();
        Self {
            k,
            k_adj,
            a,
            a_dag,
            loss: gm * (n + 1.0),
            gain: gm * n,
        }
    }

    /// out = Kρ + ρK† + γ(n̄+1)aρa† + γn̄a†ρa
    fn apply(&self, rho: &DMatrix<Complex64>, tmp: &mut DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        // ρK† is formed explicitly: taking it as (Kρ)† would feed any
        // anti-Hermitian rounding back with the wrong sign and let it grow.
        self.k.left_mul(rho, out);
        self.k_adj.right_mul_add(rho, 1.0, out);
        if self.loss != 0.0 {
            self.a.left_mul(rho, tmp);
            self.a_dag.right_mul_add(tmp, self.loss, out);
        }
        if self.gain != 0.0 {
            self.a_dag.left_mul(rho, tmp);
            self.a.right_mul_add(tmp, self.gain, out);
        }
    }
}

fn axpy(out: &mut DMatrix<Complex64>, x: &DMatrix<Complex64>, c: f64, y: &DMatrix<Complex64>) {
    // out = x + c·y
    for ((o, a), b) in out.as_mut_slice().iter_mut().zip(x.as_slice()).zip(y.as_slice()) {
        *o = a + b * c;
    }
}

/// Evolves `rho` for time `t` with RK4 steps no longer than `dt`. The
/// Hamiltonian and jump operators are those of frequency `bath.omega()`,
/// expressed in the Fock basis of `rho`.
pub fn lindblad_evolve(
    rho: &FockDensityMatrix,
    bath: &BathParams,
    t: f64,
    dt: f64,
) -> Result<FockDensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(domain(format!("dt must be > 0, got {dt}")));
    }
    let dim = rho.dim();
    let steps = (t / dt).ceil().max(if t > 0.0 { 1.0 } else { 0.0 }) as usize;
    if steps == 0 {
        return Ok(rho.clone());
    }
    let h = t / steps as f64;
    let product = h * spectral_bound(dim, bath, rho.basis_omega());
    if product > STABILITY_LIMIT {
        return Err(Error::StepSize {
            dt: h,
            product,
            limit: STABILITY_LIMIT,
        });
    }

    let gen = Generator::new(dim, bath, rho.basis_omega());
    let zero = || DMatrix::<Complex64>::zeros(dim, dim);
    let mut state = rho.data().clone();
    let (mut k, mut acc, mut stage, mut tmp) = (zero(), zero(), zero(), zero());
    for _ in 0..steps {
        gen.apply(&state, &mut tmp, &mut k);
        acc.copy_from(&k);
        axpy(&mut stage, &state, 0.5 * h, &k);

        gen.apply(&stage, &mut tmp, &mut k);
        acc.as_mut_slice()
            .iter_mut()
            .zip(k.as_slice())
            .for_each(|(a, b)| *a += b * 2.0);
        axpy(&mut stage, &state, 0.5 * h, &k);

        gen.apply(&stage, &mut tmp, &mut k);
        acc.as_mut_slice()
            .iter_mut()
            .zip(k.as_slice())
            .for_each(|(a, b)| *a += b * 2.0);
        axpy(&mut stage, &state, h, &k);

        gen.apply(&stage, &mut tmp, &mut k);
        acc += &k;
        state
            .as_mut_slice()
            .iter_mut()
            .zip(acc.as_slice())
            .for_each(|(s, a)| *s += a * (h / 6.0));
    }
    let herm = (&state + state.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(FockDensityMatrix::from_raw(herm, rho.basis_omega()))
}
