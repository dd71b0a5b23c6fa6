//! Single-mode Gaussian states in phase space.
//!
//! Natural units throughout: ħ = 1, M = 1. Quadratures are
//! q = (a + a†)/√(2ω₀) and p = i√(ω₀/2)(a† − a), so the vacuum at ω₀ = 1
//! has Σ = diag(1/2, 1/2).

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::constants::{HBAR, K_B};
use crate::error::{domain, Error, Result};

/// Relative tolerance on det Σ − 1/4 used by the Heisenberg check.
pub const HEISENBERG_TOL: f64 = 1e-10;

/// Wraps an angle into (−π, π].
pub fn normalize_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {x}")))
    }
}

/// Parameters of a rotated, squeezed, displaced thermal state
/// ρ = R(ψ) D(α) S(r e^{iχ}) ν(N_th) S† D† R†.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    alpha: f64,
    psi: f64,
    r: f64,
    chi: f64,
    n_th: f64,
}

impl GaussianParams {
    pub fn new(alpha: f64, psi: f64, r: f64, chi: f64, n_th: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha", alpha),
            ("psi", psi),
            ("r", r),
            ("chi", chi),
            ("n_th", n_th),
        ] {
            check_finite(name, v)?;
        }
        if r < 0.0 {
            return Err(domain(format!("squeezing r must be >= 0, got {r}")));
        }
        if n_th < 0.0 {
            return Err(domain(format!("n_th must be >= 0, got {n_th}")));
        }
        Ok(Self {
            alpha,
            psi: normalize_angle(psi),
            r,
            chi: normalize_angle(chi),
            n_th,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            alpha: 0.0,
            psi: 0.0,
            r: 0.0,
            chi: 0.0,
            n_th: 0.0,
        }
    }

    pub fn coherent(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn thermal(n_th: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 0.0, 0.0, n_th)
    }

    pub fn squeezed(r: f64, chi: f64) -> Result<Self> {
        Self::new(0.0, 0.0, r, chi, 0.0)
    }

    /// Same state with a different initial thermal occupation.
    pub fn with_n_th(self, n_th: f64) -> Result<Self> {
        Self::new(self.alpha, self.psi, self.r, self.chi, n_th)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn psi(&self) -> f64 {
        self.psi
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn chi(&self) -> f64 {
        self.chi
    }
    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    /// ξ = χ + 2ψ, the only combination of the two angles the
    /// covariance depends on.
    pub fn xi(&self) -> f64 {
        self.chi + 2.0 * self.psi
    }
}

/// First and second moments of a Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceState {
    mean: Vector2<f64>,
    cov: Matrix2<f64>,
}

impl PhaseSpaceState {
    /// Validates symmetry, positive definiteness and the Heisenberg bound.
    pub fn new(mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<Self> {
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite moments".into()));
        }
        let scale = cov[(0, 1)].abs().max(cov[(1, 0)].abs()).max(1.0);
        if (cov[(0, 1)] - cov[(1, 0)]).abs() > 1e-12 * scale {
            return Err(Error::InvalidState("covariance not symmetric".into()));
        }
        let det = cov.determinant();
        if cov[(0, 0)] <= 0.0 || det <= 0.0 {
            return Err(Error::InvalidState("covariance not positive definite".into()));
        }
        if det < 0.25 * (1.0 - HEISENBERG_TOL) {
            return Err(Error::InvalidState(format!(
                "covariance violates the uncertainty bound: det = {det}"
            )));
        }
        Ok(Self { mean, cov })
    }

    /// Skips validation; used for results of exact propagation where the
    /// bound holds analytically.
    pub(crate) fn from_parts(mean: Vector2<f64>, cov: Matrix2<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn mean(&self) -> &Vector2<f64> {
        &self.mean
    }
    pub fn cov(&self) -> &Matrix2<f64> {
        &self.cov
    }
    pub fn sigma_qq(&self) -> f64 {
        self.cov[(0, 0)]
    }
    pub fn sigma_pp(&self) -> f64 {
        self.cov[(1, 1)]
    }
    pub fn sigma_pq(&self) -> f64 {
        self.cov[(0, 1)]
    }
}

/// Oscillator frequency, damping rate and bath occupation for the
/// Lindblad master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    omega: f64,
    gamma: f64,
    nbar: f64,
}

impl BathParams {
    pub fn new(omega: f64, gamma: f64, nbar: f64) -> Result<Self> {
        check_finite("omega", omega)?;
        check_finite("gamma", gamma)?;
        check_finite("nbar", nbar)?;
        if omega <= 0.0 {
            return Err(domain(format!("omega must be > 0, got {omega}")));
        }
        if gamma < 0.0 {
            return Err(domain(format!("gamma must be >= 0, got {gamma}")));
        }
        if nbar < 0.0 {
            return Err(domain(format!("nbar must be >= 0, got {nbar}")));
        }
        Ok(Self { omega, gamma, nbar })
    }

    /// Bath given by the dimensionless damping g = γ/ω.
    pub fn from_g(omega: f64, g: f64, nbar: f64) -> Result<Self> {
        Self::new(omega, g * omega, nbar)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn nbar(&self) -> f64 {
        self.nbar
    }
    pub fn g(&self) -> f64 {
        self.gamma / self.omega
    }
}

/// The three contributions to the Gaussian QFI: covariance, purity and
/// displacement terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiBreakdown {
    total: f64,
    term_cov: f64,
    term_purity: f64,
    term_disp: f64,
}

impl QfiBreakdown {
    pub fn new(term_cov: f64, term_purity: f64, term_disp: f64) -> Self {
        Self {
            total: term_cov + term_purity + term_disp,
            term_cov,
            term_purity,
            term_disp,
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn total(&self) -> f64 {
        self.total
    }
    pub fn term_cov(&self) -> f64 {
        self.term_cov
    }
    pub fn term_purity(&self) -> f64 {
        self.term_purity
    }
    pub fn term_disp(&self) -> f64 {
        self.term_disp
    }

    /// Multiplies every term by `k`, e.g. to convert ω²I back to I.
    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.term_cov * k, self.term_purity * k, self.term_disp * k)
    }
}

/// Bose–Einstein occupation 1/(e^x − 1) with x = ħω/(k_B T), SI inputs.
pub fn thermal_occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !(temperature > 0.0) {
        return Err(domain(format!(
            "omega and temperature must be > 0, got {omega}, {temperature}"
        )));
    }
    Ok(occupancy_from_x(HBAR * omega / (K_B * temperature)))
}

/// 1/(e^x − 1), the occupation at reduced energy x = ħω/k_BT.
pub fn occupancy_from_x(x: f64) -> f64 {
    x.exp_m1().recip()
}

/// Builds the phase-space moments of `p` at reference frequency `omega0`.
pub fn state_from_params(p: &GaussianParams, omega0: f64) -> Result<PhaseSpaceState> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(domain(format!("omega0 must be > 0, got {omega0}")));
    }
    let (sa, ca) = p.psi.sin_cos();
    let q = p.alpha * (2.0 / omega0).sqrt() * ca;
    let pm = p.alpha * (2.0 * omega0).sqrt() * sa;

    let k = 2.0 * p.n_th + 1.0;
    let (sx, cx) = p.xi().sin_cos();
    let (ch, sh) = ((2.0 * p.r).cosh(), (2.0 * p.r).sinh());
    let sqq = k / (2.0 * omega0) * (ch + cx * sh);
    let spp = k * omega0 / 2.0 * (ch - cx * sh);
    let spq = k / 2.0 * sx * sh;
    Ok(PhaseSpaceState::from_parts(
        Vector2::new(q, pm),
        Matrix2::new(sqq, spq, spq, spp),
    ))
}

/// Purity P = 1/(2√det Σ).
pub fn purity(s: &PhaseSpaceState) -> Result<f64> {
    let det = s.cov.determinant();
    if !(det > 0.0) {
        return Err(Error::InvalidState(format!(
            "non-positive covariance determinant {det}"
        )));
    }
    Ok(0.5 / det.sqrt())
}

/// Uhlmann fidelity between two single-mode Gaussian states.
///
/// F = exp(−½ dᵀ(Σ₁+Σ₂)⁻¹d) · (√(Δ+Λ) + √Λ)/Δ with Δ = det(Σ₁+Σ₂) and
/// Λ = (4 det Σ₁ − 1)(4 det Σ₂ − 1)/4. The Gaussian factor is combined in
/// the log domain when it would underflow.
pub fn fidelity(s1: &PhaseSpaceState, s2: &PhaseSpaceState) -> Result<f64> {
    let sum = s1.cov + s2.cov;
    let delta = sum.determinant();
    let inv = sum
        .try_inverse()
        .filter(|_| delta > 0.0)
        .ok_or_else(|| Error::NonFinite("singular covariance sum in fidelity".into()))?;
    let d = s2.mean - s1.mean;
    let exponent = -0.5 * d.dot(&(inv * d));
    let d1 = s1.cov.determinant();
    let d2 = s2.cov.determinant();
    let lambda = ((4.0 * d1 - 1.0) * (4.0 * d2 - 1.0) / 4.0).max(0.0);
    let prefactor = ((delta + lambda).sqrt() + lambda.sqrt()) / delta;
    let f = if exponent.abs() > 700.0 {
        (exponent + prefactor.ln()).exp()
    } else {
        exponent.exp() * prefactor
    };
    if !f.is_finite() {
        return Err(Error::NonFinite(format!("fidelity evaluated to {f}")));
    }
    Ok(f.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn angles_wrap_into_half_open_interval() {
        assert_eq!(normalize_angle(PI), PI);
        assert_relative_eq!(normalize_angle(-PI), PI);
        assert_relative_eq!(normalize_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_eq!(normalize_angle(0.3), 0.3);
    }

    #[test]
    fn rejects_negative_squeezing_and_occupation() {
        assert!(GaussianParams::new(0.0, 0.0, -0.1, 0.0, 0.0).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 0.0, 0.0, -1.0).is_err());
        assert!(BathParams::new(0.0, 0.1, 0.0).is_err());
        assert!(BathParams::new(1.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn occupancy_at_ln2_is_one() {
        assert_relative_eq!(occupancy_from_x(2f64.ln()), 1.0, max_relative = 1e-14);
        let omega = 2.0 * PI * 1.865e9;
        let n = thermal_occupancy(omega, 4.0).unwrap();
        assert!((n - 44.2).abs() < 0.3, "{n}");
        assert!(thermal_occupancy(omega, 1e-3).unwrap() < 1e-30);
        assert!(thermal_occupancy(omega, 0.0).is_err());
    }

    #[test]
    fn vacuum_and_coherent_moments() {
        let s = state_from_params(&GaussianParams::vacuum(), 1.0).unwrap();
        assert_eq!(*s.mean(), Vector2::zeros());
        assert_eq!(*s.cov(), Matrix2::new(0.5, 0.0, 0.0, 0.5));
        let s = state_from_params(&GaussianParams::coherent(1.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(s.mean()[0], 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(s.mean()[1], 0.0);
    }

    #[test]
    fn squeezed_vacuum_moments() {
        let s = state_from_params(&GaussianParams::squeezed(0.5, 0.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(s.sigma_qq(), 1f64.exp() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(s.sigma_pp(), (-1f64).exp() / 2.0, max_relative = 1e-14);
        assert_eq!(s.sigma_pq(), 0.0);
    }

    #[test]
    fn thermal_purity() {
        let s = state_from_params(&GaussianParams::thermal(2.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(purity(&s).unwrap(), 0.2, max_relative = 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let vac = state_from_params(&GaussianParams::vacuum(), 1.0).unwrap();
        let coh = state_from_params(&GaussianParams::coherent(1.0).unwrap(), 1.0).unwrap();
        let th = state_from_params(&GaussianParams::thermal(1.0).unwrap(), 1.0).unwrap();
        assert_relative_eq!(fidelity(&vac, &vac).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(fidelity(&vac, &coh).unwrap(), (-1f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(fidelity(&vac, &th).unwrap(), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn distant_states_underflow_to_zero() {
        let vac = state_from_params(&GaussianParams::vacuum(), 1.0).unwrap();
        let far = state_from_params(&GaussianParams::coherent(1e3).unwrap(), 1.0).unwrap();
        assert_eq!(fidelity(&vac, &far).unwrap(), 0.0);
    }

    #[test]
    fn state_validation() {
        let bad = PhaseSpaceState::new(Vector2::zeros(), Matrix2::new(0.1, 0.0, 0.0, 0.1));
        assert!(matches!(bad, Err(Error::InvalidState(_))));
        let asym = PhaseSpaceState::new(Vector2::zeros(), Matrix2::new(1.0, 0.1, 0.0, 1.0));
        assert!(asym.is_err());
        assert!(PhaseSpaceState::new(Vector2::zeros(), Matrix2::new(0.5, 0.0, 0.0, 0.5)).is_ok());
    }
}
