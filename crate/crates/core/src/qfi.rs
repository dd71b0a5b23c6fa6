//! The three-term Gaussian QFI, its fidelity-curvature cross-check, and
//! the frequency-jump scheme evaluated with finite differences.
//!
//! Estimating ω needs care because the Fock basis itself depends on ω. The
//! initial moments are built at the reference frequency ω₀ and then
//! evolved with the dynamics at ω, which is the phase-space form of
//! "prepare at ω₀, jump to ω, evolve". Differentiating the resulting
//! moments at ω = ω₀ gives ∂ω of the state.

use nalgebra::{Matrix2, Vector2};

use crate::dynamics::propagate;
use crate::error::{domain, Error, Result};
use crate::phase_space::{
    fidelity, purity, state_from_params, BathParams, GaussianParams, PhaseSpaceState, QfiBreakdown,
};

/// |1 − P| at or below this counts as a pure state.
pub const PURE_TOL: f64 = 1e-9;
/// |∂P| below this counts as zero at the pure-state boundary.
pub const DP_TOL: f64 = 1e-12;
/// Default relative finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Parameter derivative of the mean vector and covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDerivative {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl MomentDerivative {
    pub fn zero() -> Self {
        Self {
            mean: Vector2::zeros(),
            cov: Matrix2::zeros(),
        }
    }
}

/// I = ½tr[(Σ⁻¹∂Σ)²]/(1+P²) + 2(∂P)²/(1−P⁴) + ∂Xᵀ Σ⁻¹ ∂X.
pub fn qfi_from_moments(s: &PhaseSpaceState, ds: &MomentDerivative, p: f64, dp: f64) -> Result<QfiBreakdown> {
    if !(p > 0.0 && p <= 1.0 + PURE_TOL) {
        return Err(domain(format!("purity must lie in (0, 1], got {p}")));
    }
    let inv = s
        .cov()
        .try_inverse()
        .ok_or_else(|| Error::InvalidState("singular covariance".into()))?;
    let m = inv * ds.cov;
    let term_cov = 0.5 * (m * m).trace() / (1.0 + p * p);

    let one_minus_p = 1.0 - p;
    let term_purity = if one_minus_p.abs() <= PURE_TOL {
        if dp.abs() >= DP_TOL {
            return Err(Error::PureStateBoundary {
                purity: p,
                d_purity: dp,
            });
        }
        0.0
    } else {
        let one_minus_p4 = one_minus_p * (1.0 + p) * (1.0 + p * p);
        2.0 * dp * dp / one_minus_p4
    };

    let term_disp = ds.mean.dot(&(inv * ds.mean));
    Ok(QfiBreakdown::new(term_cov, term_purity, term_disp))
}

/// QFI from the curvature of the fidelity,
/// −2[F(θ, θ+ε) − 2 + F(θ, θ−ε)]/ε².
pub fn qfi_via_fidelity<F>(family: F, theta: f64, eps: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<PhaseSpaceState>,
{
    if !(eps > 0.0) {
        return Err(domain(format!("eps must be > 0, got {eps}")));
    }
    let s0 = family(theta)?;
    let fp = fidelity(&s0, &family(theta + eps)?)?;
    let fm = fidelity(&s0, &family(theta - eps)?)?;
    Ok(-2.0 * (fp - 2.0 + fm) / (eps * eps))
}

/// Squeezing parameter s = −atanh((ω₀ − ω)/(ω₀ + ω)) that maps the Fock
/// basis at ω onto the basis at ω₀. Equal to ½ ln(ω/ω₀).
pub fn basis_jump_squeeze(omega0: f64, omega: f64) -> Result<f64> {
    if !(omega0 > 0.0 && omega > 0.0) || !omega0.is_finite() || !omega.is_finite() {
        return Err(domain(format!(
            "frequencies must be finite and > 0, got {omega0}, {omega}"
        )));
    }
    let y1 = (omega0 - omega) / (omega0 + omega);
    Ok(-y1.atanh())
}

/// Moments after preparing `p` at `omega0`, jumping to `bath.omega()` and
/// evolving for time `t` under the bath at the new frequency.
pub fn scheme_state(p: &GaussianParams, omega0: f64, bath: &BathParams, t: f64) -> Result<PhaseSpaceState> {
    let s0 = state_from_params(p, omega0)?;
    propagate(&s0, bath, t)
}

/// How thermal occupations respond to a change of frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occupancy {
    /// Occupations set by a fixed temperature, n(ω) = 1/(e^{ħω/k_BT} − 1).
    /// Applies to both the bath n̄ and the initial N_th.
    #[default]
    Temperature,
    /// Occupations held constant under ∂ω.
    Fixed,
}

/// Occupation at frequency `omega` given occupation `n0` at `omega0`.
pub fn occupancy_at(n0: f64, omega0: f64, omega: f64, mode: Occupancy) -> f64 {
    match mode {
        Occupancy::Fixed => n0,
        Occupancy::Temperature => {
            if n0 == 0.0 {
                0.0
            } else {
                let x0 = (1.0 / n0).ln_1p();
                (x0 * omega / omega0).exp_m1().recip()
            }
        }
    }
}

/// Everything that defines the frequency-estimation problem: the state
/// prepared at ω₀, the damping g = γ/ω₀ (γ does not change with ω), the
/// bath occupation at ω₀, the evolution time and the occupancy model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaSetup {
    pub params: GaussianParams,
    pub omega0: f64,
    pub g: f64,
    pub nbar: f64,
    pub t: f64,
    pub occupancy: Occupancy,
}

impl OmegaSetup {
    /// Setup in dimensionless form: ω₀ = 1, t = τ.
    pub fn dimensionless(params: GaussianParams, g: f64, nbar: f64, tau: f64) -> Self {
        Self {
            params,
            omega0: 1.0,
            g,
            nbar,
            t: tau,
            occupancy: Occupancy::Temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(domain(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(domain(format!("g must be >= 0, got {}", self.g)));
        }
        if !(self.nbar >= 0.0) || !self.nbar.is_finite() {
            return Err(domain(format!("nbar must be >= 0, got {}", self.nbar)));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(domain(format!("t must be >= 0, got {}", self.t)));
        }
        Ok(())
    }

    /// Initial-state parameters and bath when the oscillator runs at `omega`.
    pub fn at(&self, omega: f64) -> Result<(GaussianParams, BathParams)> {
        let n_th = occupancy_at(self.params.n_th(), self.omega0, omega, self.occupancy);
        let nbar = occupancy_at(self.nbar, self.omega0, omega, self.occupancy);
        let params = self.params.with_n_th(n_th)?;
        let bath = BathParams::new(omega, self.g * self.omega0, nbar)?;
        Ok((params, bath))
    }

    /// Scheme state at frequency `omega`.
    pub fn state_at(&self, omega: f64) -> Result<PhaseSpaceState> {
        let (params, bath) = self.at(omega)?;
        scheme_state(&params, self.omega0, &bath, self.t)
    }
}

/// Finite-difference policy shared by the numeric engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Relative step h; the parameter is evaluated at θ(1 ± h).
    pub step: f64,
    /// Combine steps h and h/2 as (4D_{h/2} − D_h)/3.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            richardson: false,
        }
    }
}

struct Sample {
    state: PhaseSpaceState,
    purity: f64,
}

fn sample(state: PhaseSpaceState) -> Result<Sample> {
    let purity = purity(&state)?;
    Ok(Sample { state, purity })
}

fn central(plus: &Sample, minus: &Sample, width: f64) -> (MomentDerivative, f64) {
    let d = MomentDerivative {
        mean: (plus.state.mean() - minus.state.mean()) / width,
        cov: (plus.state.cov() - minus.state.cov()) / width,
    };
    (d, (plus.purity - minus.purity) / width)
}

/// Central-difference QFI of a one-parameter family of states at `theta`.
fn numeric_qfi<F>(family: F, theta: f64, opts: &FdOptions) -> Result<QfiBreakdown>
where
    F: Fn(f64) -> Result<PhaseSpaceState>,
{
    if !(opts.step > 0.0) || !opts.step.is_finite() {
        return Err(domain(format!("step must be > 0, got {}", opts.step)));
    }
    let centre = sample(family(theta)?)?;
    let diff = |h: f64| -> Result<(MomentDerivative, f64)> {
        let dt = theta * h;
        let plus = sample(family(theta + dt)?)?;
        let minus = sample(family(theta - dt)?)?;
        Ok(central(&plus, &minus, 2.0 * dt))
    };
    let (mut ds, mut dp) = diff(opts.step)?;
    if opts.richardson {
        let (ds2, dp2) = diff(opts.step / 2.0)?;
        ds = MomentDerivative {
            mean: (ds2.mean * 4.0 - ds.mean) / 3.0,
            cov: (ds2.cov * 4.0 - ds.cov) / 3.0,
        };
        dp = (4.0 * dp2 - dp) / 3.0;
    }
    // P is maximal (= 1) along a pure family, so ∂P vanishes there; the
    // finite difference only sees rounding noise.
    if (1.0 - centre.purity).abs() <= PURE_TOL {
        dp = 0.0;
    }
    qfi_from_moments(&centre.state, &ds, centre.purity, dp)
}

/// Frequency QFI I(ω₀) from the frequency-jump scheme.
pub fn qfi_omega_numeric(setup: &OmegaSetup, opts: &FdOptions) -> Result<QfiBreakdown> {
    setup.validate()?;
    numeric_qfi(|w| setup.state_at(w), setup.omega0, opts)
}

/// Damping QFI I(γ). The Fock basis does not depend on γ, so no basis
/// jump is involved.
pub fn qfi_gamma_numeric(
    p: &GaussianParams,
    bath: &BathParams,
    t: f64,
    opts: &FdOptions,
) -> Result<QfiBreakdown> {
    if !(bath.gamma() > 0.0) {
        return Err(domain("damping QFI needs gamma > 0"));
    }
    let s0 = state_from_params(p, bath.omega())?;
    let family = |gamma: f64| -> Result<PhaseSpaceState> {
        let b = BathParams::new(bath.omega(), gamma, bath.nbar())?;
        propagate(&s0, &b, t)
    };
    numeric_qfi(family, bath.gamma(), opts)
}
