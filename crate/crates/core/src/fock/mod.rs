//! Truncated Fock-space oracle: Gaussian states as density matrices,
//! master-equation evolution, Uhlmann fidelity and the SLD QFI.
//!
//! Everything here is deliberately brute force and shares no formulas
//! with the phase-space path beyond the model itself.

mod banded;
mod lindblad;
mod overlap;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_complex::Complex64;

pub use lindblad::{default_step, lindblad_evolve, spectral_bound, STABILITY_LIMIT};
pub use overlap::{basis_jump_matrix, basis_overlap, overlap_matrix, squeeze_matrix};

use crate::error::{domain, Error, Result};
use crate::phase_space::{BathParams, GaussianParams, PhaseSpaceState};
use crate::qfi::{OmegaSetup, DEFAULT_STEP};

/// Largest tail population tolerated when truncating a state.
pub const TAIL_TOL: f64 = 1e-10;
/// Largest dimension tried by the auto-escalating builders.
pub const MAX_DIM: usize = 320;
/// Relative SLD eigenvalue cutoff on λᵢ + λⱼ.
pub const SLD_CUTOFF: f64 = 1e-12;
/// Most negative eigenvalue accepted as rounding noise.
pub const EIGEN_FLOOR: f64 = -1e-8;

/// Density matrix in the Fock basis of an oscillator at `basis_omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    data: DMatrix<Complex64>,
    basis_omega: f64,
}

impl FockDensityMatrix {
    /// Checks squareness, Hermiticity (1e-12) and unit trace (1e-8).
    pub fn new(data: DMatrix<Complex64>, basis_omega: f64) -> Result<Self> {
        if !data.is_square() || data.nrows() == 0 {
            return Err(Error::InvalidState(
                "density matrix must be square and non-empty".into(),
            ));
        }
        if !(basis_omega > 0.0) {
            return Err(domain(format!("basis frequency must be > 0, got {basis_omega}")));
        }
        let scale = data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if (&data - data.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale) {
            return Err(Error::InvalidState("density matrix is not Hermitian".into()));
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = data.clone().symmetric_eigenvalues().min();
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { data, basis_omega })
    }

    pub(crate) fn from_raw(data: DMatrix<Complex64>, basis_omega: f64) -> Self {
        Self { data, basis_omega }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }
    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }
    pub fn basis_omega(&self) -> f64 {
        self.basis_omega
    }
    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// tr ρ²
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        self.data.clone().symmetric_eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().min()
    }

    /// Quadrature moments, with q = (a + a†)/√(2ω_b) and
    /// p = i√(ω_b/2)(a† − a) for the basis frequency ω_b.
    pub fn moments(&self) -> PhaseSpaceState {
        let d = self.dim();
        let rho = &self.data;
        let mut a = Complex64::new(0.0, 0.0);
        let mut a2 = Complex64::new(0.0, 0.0);
        let mut num = 0.0;
        for n in 0..d {
            num += n as f64 * rho[(n, n)].re;
            if n >= 1 {
                a += rho[(n, n - 1)] * (n as f64).sqrt();
            }
            if n >= 2 {
                a2 += rho[(n, n - 2)] * ((n * (n - 1)) as f64).sqrt();
            }
        }
        let w = self.basis_omega;
        let q = (2.0 / w).sqrt() * a.re;
        let p = (2.0 * w).sqrt() * a.im;
        let qq = (2.0 * a2.re + 2.0 * num + 1.0) / (2.0 * w);
        let pp = w / 2.0 * (2.0 * num + 1.0 - 2.0 * a2.re);
        let pq = a2.im;
        let sqq = qq - q * q;
        let spp = pp - p * p;
        let spq = pq - q * p;
        PhaseSpaceState::from_parts(Vector2::new(q, p), Matrix2::new(sqq, spq, spq, spp))
    }

    /// Matrix of the same operator in the Fock basis at `omega`, via the
    /// overlap matrix R[m, k] = ⟨m_ω|k_ω_b⟩. Weight pushed beyond the
    /// truncation is lost.
    pub fn to_basis(&self, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(domain(format!("basis frequency must be > 0, got {omega}")));
        }
        let r = overlap_matrix(self.dim(), omega, self.basis_omega).map(|x| Complex64::new(x, 0.0));
        let data = &r * &self.data * r.transpose();
        Ok(Self::from_raw(data, omega))
    }
}

/// Builds ρ = R(ψ)D(α)S(re^{iχ}) ν(N_th) S†D†R† truncated to `dim`, in the
/// Fock basis of `omega0`. Fails if more than 1e-10 of the population
/// lies beyond the truncation.
pub fn build_gaussian_fock(p: &GaussianParams, dim: usize, omega0: f64) -> Result<FockDensityMatrix> {
    GaussianUnitary::new(p, dim)?.state(p.n_th(), omega0)
}

/// [`build_gaussian_fock`], doubling `dim` up to [`MAX_DIM`] until the
/// tail check passes.
pub fn build_gaussian_fock_auto(p: &GaussianParams, dim: usize, omega0: f64) -> Result<FockDensityMatrix> {
    let mut d = dim.max(2);
    loop {
        match build_gaussian_fock(p, d, omega0) {
            Err(Error::Truncation { .. }) if d < MAX_DIM => d = (2 * d).min(MAX_DIM),
            other => return other,
        }
    }
}

/// U = R(ψ)D(α)S(z) on a padded space; the thermal kernel is applied
/// separately so temperature changes reuse the same unitary.
struct GaussianUnitary {
    u: DMatrix<Complex64>,
    dim: usize,
}

impl GaussianUnitary {
    fn new(p: &GaussianParams, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(domain("Fock dimension must be at least 2"));
        }
        let work = dim + (dim / 2).max(20);
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut disp = DMatrix::<Complex64>::zeros(work, work);
        let mut sq = DMatrix::<Complex64>::zeros(work, work);
        let z = Complex64::from_polar(p.r(), p.chi());
        for n in 0..work - 1 {
            let s = ((n + 1) as f64).sqrt();
            // α(a† − a)
            disp[(n + 1, n)] = c(p.alpha() * s);
            disp[(n, n + 1)] = c(-p.alpha() * s);
        }
        for n in 0..work.saturating_sub(2) {
            let s = (((n + 1) * (n + 2)) as f64).sqrt();
            // ½(z a†² − z* a²)
            sq[(n + 2, n)] = z * (0.5 * s);
            sq[(n, n + 2)] = -z.conj() * (0.5 * s);
        }
        let mut u = disp.exp() * sq.exp();
        for n in 0..work {
            let phase = Complex64::from_polar(1.0, p.psi() * n as f64);
            u.row_mut(n).iter_mut().for_each(|x| *x *= phase);
        }
        Ok(Self { u, dim })
    }

    fn state(&self, n_th: f64, omega0: f64) -> Result<FockDensityMatrix> {
        let work = self.u.nrows();
        let weights: Vec<f64> = if n_th == 0.0 {
            (0..work).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect()
        } else {
            let ratio = n_th / (1.0 + n_th);
            (0..work).map(|n| ratio.powi(n as i32) / (1.0 + n_th)).collect()
        };
        let mut scaled = self.u.clone();
        for (j, w) in weights.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|x| *x *= *w);
        }
        let full = scaled * self.u.adjoint();
        let rho = full.view((0, 0), (self.dim, self.dim)).into_owned();
        let tail = 1.0 - rho.trace().re;
        if tail > TAIL_TOL {
            return Err(Error::Truncation {
                tail,
                dim: self.dim,
                suggested_dim: 2 * self.dim,
            });
        }
        // Renormalize so that families differing only in their tail weight
        // have traceless derivatives.
        let herm = (&rho + rho.adjoint()) * Complex64::new(0.5 / (1.0 - tail), 0.0);
        Ok(FockDensityMatrix::from_raw(herm, omega0))
    }
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.min() < EIGEN_FLOOR {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {} below floor",
            eig.eigenvalues.min()
        )));
    }
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.adjoint())
}

/// Uhlmann fidelity (tr √(√ρ₁ ρ₂ √ρ₁))².
pub fn fidelity_fock(r1: &FockDensityMatrix, r2: &FockDensityMatrix) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(domain("density matrices differ in dimension"));
    }
    let s = hermitian_sqrt(r1.data())?;
    let m = &s * r2.data() * &s;
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = m.symmetric_eigenvalues();
    if eig.min() < EIGEN_FLOOR {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {} below floor",
            eig.min()
        )));
    }
    let t: f64 = eig.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok(t * t)
}

/// QFI from the symmetric logarithmic derivative,
/// I = 2 Σᵢⱼ |⟨i|∂ρ|j⟩|²/(λᵢ + λⱼ), skipping pairs with
/// λᵢ + λⱼ ≤ 1e-12·λ_max.
pub fn qfi_sld(rho: &FockDensityMatrix, drho: &DMatrix<Complex64>) -> Result<f64> {
    let d = rho.dim();
    if drho.nrows() != d || drho.ncols() != d {
        return Err(domain("derivative has the wrong dimension"));
    }
    let scale = drho.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if (drho - drho.adjoint()).iter().any(|z| z.norm() > 1e-8 * scale) {
        return Err(domain("density-matrix derivative is not Hermitian"));
    }
    let tr = drho.trace();
    if tr.norm() > 1e-8 * scale {
        return Err(domain(format!("density-matrix derivative has trace {tr}")));
    }
    let eig = rho.data().clone().symmetric_eigen();
    let lam = &eig.eigenvalues;
    let v = &eig.eigenvectors;
    let m = v.adjoint() * drho * v;
    let cutoff = SLD_CUTOFF * lam.max();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            let s = lam[i] + lam[j];
            if s > cutoff {
                sum += m[(i, j)].norm_sqr() / s;
            }
        }
    }
    Ok(2.0 * sum)
}

/// Truncation, differentiation and integration settings for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    /// Starting truncation; doubled up to [`MAX_DIM`] when the tail check fails.
    pub dim: usize,
    /// Relative central-difference step.
    pub step: f64,
    /// RK4 step; `None` picks one from the spectral bound.
    pub dt: Option<f64>,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            dim: 60,
            step: DEFAULT_STEP,
            dt: None,
        }
    }
}

fn unitary_auto(p: &GaussianParams, dims: usize, n_ths: &[f64], omega0: f64) -> Result<GaussianUnitary> {
    let mut d = dims.max(2);
    loop {
        let u = GaussianUnitary::new(p, d)?;
        let ok = n_ths.iter().try_for_each(|&n| u.state(n, omega0).map(|_| ()));
        match ok {
            Ok(()) => return Ok(u),
            Err(Error::Truncation { .. }) if d < MAX_DIM => d = (2 * d).min(MAX_DIM),
            Err(e) => return Err(e),
        }
    }
}

/// Frequency QFI from Fock-space evolution: the state is prepared in the
/// ω₀ basis and evolved with the generator at ω₀(1 ± h).
pub fn fock_qfi_omega(setup: &OmegaSetup, cfg: &FockConfig) -> Result<f64> {
    setup.validate()?;
    let w0 = setup.omega0;
    let dw = w0 * cfg.step;
    let omegas = [w0 - dw, w0, w0 + dw];
    let mut cases = Vec::with_capacity(3);
    for &w in &omegas {
        cases.push(setup.at(w)?);
    }
    let n_ths: Vec<f64> = cases.iter().map(|(p, _)| p.n_th()).collect();
    let u = unitary_auto(&setup.params, cfg.dim, &n_ths, w0)?;
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => cases
            .iter()
            .map(|(_, b)| default_step(u.dim, b, w0))
            .fold(f64::INFINITY, f64::min),
    };
    // One step count for all three runs keeps the integrator error smooth
    // in ω, so it cancels in the difference.
    let steps = (setup.t / dt).ceil().max(1.0);
    let h = setup.t / steps;
    let mut rhos = Vec::with_capacity(3);
    for (p, bath) in &cases {
        let rho0 = u.state(p.n_th(), w0)?;
        rhos.push(lindblad_evolve(&rho0, bath, setup.t, h * (1.0 + 1e-12))?);
    }
    let drho = (rhos[2].data() - rhos[0].data()) / Complex64::new(2.0 * dw, 0.0);
    qfi_sld(&rhos[1], &drho)
}

/// Damping QFI from Fock-space evolution with γ(1 ± h).
pub fn fock_qfi_gamma(p: &GaussianParams, bath: &BathParams, t: f64, cfg: &FockConfig) -> Result<f64> {
    if !(bath.gamma() > 0.0) {
        return Err(domain("damping QFI needs gamma > 0"));
    }
    let w = bath.omega();
    let dg = bath.gamma() * cfg.step;
    let baths = [
        BathParams::new(w, bath.gamma() - dg, bath.nbar())?,
        *bath,
        BathParams::new(w, bath.gamma() + dg, bath.nbar())?,
    ];
    let u = unitary_auto(p, cfg.dim, &[p.n_th()], w)?;
    let rho0 = u.state(p.n_th(), w)?;
    let dt = cfg.dt.unwrap_or_else(|| default_step(u.dim, &baths[2], w));
    let steps = (t / dt).ceil().max(1.0);
    let h = t / steps;
    let mut rhos = Vec::with_capacity(3);
    for b in &baths {
        rhos.push(lindblad_evolve(&rho0, b, t, h * (1.0 + 1e-12))?);
    }
    let drho = (rhos[2].data() - rhos[0].data()) / Complex64::new(2.0 * dg, 0.0);
    qfi_sld(&rhos[1], &drho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_is_projector() {
        let r = build_gaussian_fock(&GaussianParams::vacuum(), 10, 1.0).unwrap();
        assert_relative_eq!(r.data()[(0, 0)].re, 1.0, max_relative = 1e-14);
        assert!(r.data().iter().skip(1).all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn thermal_weights() {
        let r = build_gaussian_fock(&GaussianParams::thermal(1.0).unwrap(), 60, 1.0).unwrap();
        for n in 0..6 {
            assert_relative_eq!(
                r.data()[(n, n)].re,
                0.5f64.powi(n as i32 + 1),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn coherent_poisson_statistics() {
        let r = build_gaussian_fock(&GaussianParams::coherent(1.0).unwrap(), 40, 1.0).unwrap();
        let mut fact = 1.0;
        for n in 0..8 {
            if n > 0 {
                fact *= n as f64;
            }
            assert_relative_eq!(r.data()[(n, n)].re, (-1f64).exp() / fact, max_relative = 1e-12);
        }
        let mean_n: f64 = (0..40).map(|n| n as f64 * r.data()[(n, n)].re).sum();
        assert_relative_eq!(mean_n, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn truncation_is_detected() {
        let p = GaussianParams::coherent(4.0).unwrap();
        assert!(matches!(
            build_gaussian_fock(&p, 10, 1.0),
            Err(Error::Truncation { .. })
        ));
        let r = build_gaussian_fock_auto(&p, 10, 1.0).unwrap();
        assert!(r.dim() >= 40);
    }

    #[test]
    fn fidelity_examples() {
        let vac = build_gaussian_fock(&GaussianParams::vacuum(), 40, 1.0).unwrap();
        let coh = build_gaussian_fock(&GaussianParams::coherent(1.0).unwrap(), 40, 1.0).unwrap();
        let th = build_gaussian_fock(&GaussianParams::thermal(1.0).unwrap(), 40, 1.0).unwrap();
        assert_relative_eq!(fidelity_fock(&vac, &vac).unwrap(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(
            fidelity_fock(&vac, &coh).unwrap(),
            (-1f64).exp(),
            max_relative = 1e-8
        );
        assert_relative_eq!(fidelity_fock(&vac, &th).unwrap(), 0.5, max_relative = 1e-8);
    }

    #[test]
    fn sld_of_constant_family_is_zero() {
        let r = build_gaussian_fock(&GaussianParams::thermal(0.5).unwrap(), 30, 1.0).unwrap();
        assert_eq!(qfi_sld(&r, &DMatrix::zeros(30, 30)).unwrap(), 0.0);
        let bad = DMatrix::from_fn(30, 30, |i, j| Complex64::new(i as f64, j as f64));
        assert!(qfi_sld(&r, &bad).is_err());
    }

    #[test]
    fn sld_of_displacement_family() {
        // ρ(θ) = |θ⟩⟨θ| coherent: I = 4 Var(i(a† − a)) = 4.
        let h = 1e-5;
        let rp = build_gaussian_fock(&GaussianParams::coherent(1.0 + h).unwrap(), 40, 1.0).unwrap();
        let rm = build_gaussian_fock(&GaussianParams::coherent(1.0 - h).unwrap(), 40, 1.0).unwrap();
        let r0 = build_gaussian_fock(&GaussianParams::coherent(1.0).unwrap(), 40, 1.0).unwrap();
        let drho = (rp.data() - rm.data()) / Complex64::new(2.0 * h, 0.0);
        assert_relative_eq!(qfi_sld(&r0, &drho).unwrap(), 4.0, max_relative = 1e-7);
    }

    #[test]
    fn undamped_recurrence() {
        let r0 = build_gaussian_fock(&GaussianParams::coherent(1.0).unwrap(), 40, 1.0).unwrap();
        let bath = BathParams::new(1.0, 0.0, 0.0).unwrap();
        let t = 2.0 * std::f64::consts::PI;
        let r = lindblad_evolve(&r0, &bath, t, default_step(40, &bath, 1.0)).unwrap();
        assert!((r.data() - r0.data()).iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn unstable_step_is_rejected() {
        let r0 = build_gaussian_fock(&GaussianParams::vacuum(), 40, 1.0).unwrap();
        let bath = BathParams::new(1.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            lindblad_evolve(&r0, &bath, 1.0, 0.5),
            Err(Error::StepSize { .. })
        ));
    }
}
