//! Closed-form QFI expressions for frequency (ω) and damping (γ)
//! estimation.
//!
//! Every function returns the QFI I itself; multiply by ω² or γ² for the
//! dimensionless curves. Time enters as τ = ωt and damping as g = γ/ω.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::phase_space::{GaussianParams, QfiBreakdown};

/// Squeezing angle that maximizes the displaced-state ω-QFI.
pub const CHI_OPT_OMEGA: f64 = 0.0;
/// Squeezing angle that maximizes the displaced-state γ-QFI.
pub const CHI_OPT_GAMMA: f64 = PI;

/// Beyond this gτ the state equals the thermal equilibrium state to far
/// below double precision, and e^{4gτ}-sized intermediates would overflow.
const RELAXED_GT: f64 = 150.0;

fn nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and >= 0, got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {x}")))
    }
}

/// n(1+n) ln(1+1/n), with its limit 0 at n = 0.
fn n_log(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n * (1.0 + n) * (1.0 / n).ln_1p()
    }
}

/// Abbreviations of the damped-case expressions. `bath_*` refer to the
/// bath occupation n̄, `init_*` to the initial occupation N_th.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedQfiAbbrevs {
    /// 1 + 2n̄
    pub bath_a1: f64,
    /// 4n̄(1 + n̄)
    pub bath_a2: f64,
    /// ln(1 + 1/n̄), infinite at n̄ = 0
    pub bath_a3: f64,
    /// (e^{gτ} − 1)a₁
    pub bath_a1_tau: f64,
    /// (e^{gτ} − 1)a₂
    pub bath_a2_tau: f64,
    /// 1 + 2N_th
    pub init_a1: f64,
    /// 4N_th(1 + N_th)
    pub init_a2: f64,
    /// ln(1 + 1/N_th), infinite at N_th = 0
    pub init_a3: f64,
    /// Purity at time τ.
    pub p_tau: f64,
    /// cosh 2r
    pub c_r: f64,
    /// sinh 2r
    pub s_r: f64,
    /// χ + 2ψ
    pub xi: f64,
    /// e^{gτ} − 1
    pub e_m1: f64,
    /// a₂a₃ with its n̄ → 0 limit.
    pub bath_a23: f64,
    /// A₂A₃ with its N_th → 0 limit.
    pub init_a23: f64,
    /// A₁² + a₁,τ² + 2a₁,τA₁𝒞_r = e^{2gτ}/P².
    pub d: f64,
}

impl DampedQfiAbbrevs {
    pub fn new(p: &GaussianParams, g: f64, nbar: f64, tau: f64) -> Result<Self> {
        nonneg("g", g)?;
        nonneg("nbar", nbar)?;
        nonneg("tau", tau)?;
        let n = p.n_th();
        let e_m1 = (g * tau).exp_m1();
        let bath_a1 = 1.0 + 2.0 * nbar;
        let init_a1 = 1.0 + 2.0 * n;
        let c_r = (2.0 * p.r()).cosh();
        let bath_a1_tau = e_m1 * bath_a1;
        let d = init_a1 * init_a1 + bath_a1_tau * bath_a1_tau + 2.0 * bath_a1_tau * init_a1 * c_r;
        Ok(Self {
            bath_a1,
            bath_a2: 4.0 * nbar * (1.0 + nbar),
            bath_a3: (1.0 / nbar).ln_1p(),
            bath_a1_tau,
            bath_a2_tau: e_m1 * 4.0 * nbar * (1.0 + nbar),
            init_a1,
            init_a2: 4.0 * n * (1.0 + n),
            init_a3: (1.0 / n).ln_1p(),
            p_tau: (g * tau).exp() / d.sqrt(),
            c_r,
            s_r: (2.0 * p.r()).sinh(),
            xi: p.xi(),
            e_m1,
            bath_a23: 4.0 * n_log(nbar),
            init_a23: 4.0 * n_log(n),
            d,
        })
    }

    /// 1 − P⁴ without cancellation: D − e^{2gτ} is a sum of non-negative
    /// terms.
    pub fn one_minus_p4(&self, p: &GaussianParams, nbar: f64) -> f64 {
        let n = p.n_th();
        let e = self.e_m1;
        let s2 = p.r().sinh().powi(2);
        // A₁a₁𝒞_r − 1 = (A₁a₁ − 1) + A₁a₁(𝒞_r − 1)
        let cross = 2.0 * n + 2.0 * nbar + 4.0 * n * nbar + self.init_a1 * self.bath_a1 * 2.0 * s2;
        let gap = self.init_a2 + e * e * self.bath_a2 + 2.0 * e * cross;
        let full = (1.0 + e).powi(2);
        gap * (self.d + full) / (self.d * self.d)
    }
}

/// Undamped frequency QFI for the general initial state (thermal,
/// squeezed, displaced, rotated).
pub fn qfi_omega_undamped(p: &GaussianParams, tau: f64, omega: f64) -> Result<f64> {
    nonneg("tau", tau)?;
    positive("omega", omega)?;
    let n = p.n_th();
    let c1 = (1.0 + 2.0 * n).powi(2) / (1.0 + 2.0 * n * (1.0 + n));
    let c2 = 1.0 / (c1 * (1.0 + 2.0 * n));
    let c3 = if n == 0.0 {
        0.0
    } else {
        n * (1.0 + n) * (1.0 / n).ln_1p().powi(2)
    };
    let (al2, psi, chi) = (p.alpha() * p.alpha(), p.psi(), p.chi());
    let (ch, sh, sh4) = ((2.0 * p.r()).cosh(), (2.0 * p.r()).sinh(), (4.0 * p.r()).sinh());
    let x = chi + 2.0 * psi - tau;

    let osc = 2.0
        * c1
        * tau.sin().powi(2)
        * (sh * sh * x.cos().powi(2)
            + 1.0
            + 2.0 * c2 * al2 * (ch + (chi + 4.0 * psi - 2.0 * tau).cos() * sh));
    let lin = 2.0
        * c1
        * tau
        * tau.sin()
        * (4.0 * c2 * al2 * (2.0 * psi - tau).cos() * ch + x.cos() * (4.0 * c2 * al2 * sh + sh4));
    let quad = 2.0 * c1 * tau * tau * (2.0 * c2 * al2 * (ch + chi.cos() * sh) + sh * sh);
    Ok((c3 + osc + lin + quad) / (omega * omega))
}

/// Frequency QFI of a pure Gaussian state after time `t` without damping,
/// from the variance of the local generator.
pub fn qfi_omega_pure(alpha: f64, psi: f64, r: f64, chi: f64, omega: f64, t: f64) -> Result<f64> {
    nonneg("t", t)?;
    nonneg("r", r)?;
    positive("omega", omega)?;
    let wt = omega * t;
    let al2 = alpha * alpha;
    let (ch, sh, sh4) = ((2.0 * r).cosh(), (2.0 * r).sinh(), (4.0 * r).sinh());
    let x = chi + 2.0 * psi - wt;
    let lin = 2.0 * t / omega
        * wt.sin()
        * (4.0 * al2 * (2.0 * psi - wt).cos() * ch + x.cos() * (4.0 * al2 * sh + sh4));
    let osc = 2.0 / (omega * omega)
        * wt.sin().powi(2)
        * (sh * sh * x.cos().powi(2) + 1.0 + 2.0 * al2 * (ch + (chi + 4.0 * psi - 2.0 * wt).cos() * sh));
    let quad = 2.0 * t * t * (2.0 * al2 * (ch + chi.cos() * sh) + sh * sh);
    Ok(lin + osc + quad)
}

/// Undamped frequency QFI of a thermal state, (2C₁ sin²τ + C₃)/ω².
pub fn qfi_omega_thermal(n_th: f64, tau: f64, omega: f64) -> Result<f64> {
    nonneg("n_th", n_th)?;
    nonneg("tau", tau)?;
    positive("omega", omega)?;
    let n = n_th;
    let c1 = (1.0 + 2.0 * n).powi(2) / (1.0 + 2.0 * n * (1.0 + n));
    let c3 = if n == 0.0 {
        0.0
    } else {
        n * (1.0 + n) * (1.0 / n).ln_1p().powi(2)
    };
    Ok((2.0 * c1 * tau.sin().powi(2) + c3) / (omega * omega))
}

/// Term breakdown of the frequency QFI of the thermal equilibrium state,
/// with n̄ following the bath temperature.
pub fn qfi_omega_longterm_terms(nbar: f64, omega: f64) -> Result<QfiBreakdown> {
    nonneg("nbar", nbar)?;
    positive("omega", omega)?;
    let k = 1.0 + 2.0 * nbar;
    let dk = if nbar == 0.0 {
        0.0
    } else {
        -2.0 * n_log(nbar) / omega
    };
    let w2 = omega * omega;
    let term_cov = (1.0 / w2 + dk * dk / (k * k)) * k * k / (k * k + 1.0);
    let term_purity = if nbar == 0.0 {
        0.0
    } else {
        2.0 * dk * dk / (k.powi(4) - 1.0)
    };
    Ok(QfiBreakdown::new(term_cov, term_purity, 0.0))
}

/// Frequency QFI of the thermal equilibrium state reached as τ → ∞.
/// Independent of the damping constant; tends to 2/ω² for n̄ → ∞.
pub fn qfi_omega_longterm(nbar: f64, omega: f64) -> Result<f64> {
    nonneg("nbar", nbar)?;
    positive("omega", omega)?;
    let m = nbar * (1.0 + nbar);
    let l = if nbar == 0.0 {
        0.0
    } else {
        2.0 * m * (1.0 / nbar).ln_1p().powi(2)
    };
    Ok((l + (1.0 + 4.0 * m) / (1.0 + 2.0 * m)) / (2.0 * omega * omega))
}

/// Damped frequency QFI for the general initial state, split into the
/// covariance, purity and displacement terms.
pub fn qfi_omega_damped_full(
    p: &GaussianParams,
    g: f64,
    nbar: f64,
    tau: f64,
    omega: f64,
) -> Result<QfiBreakdown> {
    positive("omega", omega)?;
    let ab = DampedQfiAbbrevs::new(p, g, nbar, tau)?;
    if g * tau > RELAXED_GT {
        return qfi_omega_longterm_terms(nbar, omega);
    }
    let w2 = omega * omega;
    let (a1, a1t) = (ab.init_a1, ab.bath_a1_tau);
    let (a23, a2t3) = (ab.init_a23, ab.e_m1 * ab.bath_a23);
    let (cr, sr, xi) = (ab.c_r, ab.s_r, ab.xi);
    let d = ab.d;
    let pt = ab.p_tau;
    let (st, ct) = tau.sin_cos();
    let (sx, cx) = xi.sin_cos();
    let c2t = (2.0 * tau).cos();
    let sr2 = sr * sr;

    let i1 = {
        let b1 = 8.0 * a1 * a1 * d * sr2 * tau * tau;
        let b2 = 8.0 * a1 * d * (a1 * sx * cr + (a1t + a1 * cr) * (2.0 * tau - xi).sin()) * sr * tau;
        let b3 = a1 * a1 / 2.0
            * (4.0 * a1 * a1 * (sr2 + 2.0)
                + a23 * a23
                + 2.0 * a23 * a2t3 * cr
                + a2t3 * a2t3 * (2.0 * sr2 + 1.0)
                - 2.0
                    * a1
                    * (4.0 * a1 * c2t
                        + a1 * ((2.0 * xi).cos() + (4.0 * tau - 2.0 * xi).cos()
                            - 4.0 * sx * (2.0 * tau - xi).sin())
                            * sr2
                        - 4.0 * a2t3 * st * (tau - xi).sin() * sr));
        let b4 = a1
            * a1t
            * (2.0
                * a1
                * (4.0 * a1 * cr * st * st * (3.0 + 2.0 * (tau - xi).cos().powi(2) * sr2)
                    + sr * (2.0 * tau - xi).cos() * (a23 - 2.0 * a2t3 * cr)
                    - 2.0 * a23 * sr * cx)
                + a23 * a23 * cr
                + 2.0 * a23 * a2t3
                + a2t3 * a2t3 * cr);
        let b5 = a1t * a1t / 2.0
            * (4.0 * a1 * a1 * (7.0 + 6.0 * sr2)
                + a2t3 * a2t3
                + a23 * (2.0 * a2t3 * cr + a23 * (1.0 + 2.0 * sr2))
                + 2.0
                    * a1
                    * (a1
                        * sr2
                        * (2.0 * ((2.0 * tau - 2.0 * xi).cos() - 5.0 * c2t) - (4.0 * tau - 2.0 * xi).cos()
                            + (2.0 * xi).cos())
                        - 12.0 * a1 * c2t
                        - 8.0 * a23 * cr * sr * st * (tau - xi).sin()
                        - 4.0 * a2t3 * sr * ct * (tau - xi).cos()));
        let b6 = a1t.powi(3) * (2.0 * a23 * sr * (2.0 * tau - xi).cos() - 4.0 * a1 * cr * (c2t - 2.0));
        let b7 = 2.0 * a1t.powi(4);
        // P⁴e^{−4gτ} = 1/D²
        (b1 + b2 + b3 + b4 + b5 + b6 + b7) / (2.0 * d * d * (1.0 + pt * pt))
    };

    let i2 = {
        let br = a1 * a23 + a1t * a2t3 + (a1 * a2t3 + a1t * a23) * cr - 2.0 * a1t * a1 * cx * sr;
        let gap = ab.one_minus_p4(p, nbar);
        if gap == 0.0 {
            0.0
        } else {
            // P⁶e^{−4gτ} = P²/D²
            pt * pt * br * br / (2.0 * d * d * gap)
        }
    };

    let i3 = {
        let (psi, chi) = (p.psi(), p.chi());
        let al2 = p.alpha() * p.alpha();
        let bracket = (a1t + a1 * (cr + chi.cos() * sr)) * tau * tau
            + ((tau - 2.0 * psi).cos() * (a1t + a1 * cr) + a1 * (tau - xi).cos() * sr) * 2.0 * tau * st
            + (a1t + a1 * (cr + (2.0 * tau - xi - 2.0 * psi).cos() * sr)) * st * st;
        // P²e^{−2gτ} = 1/D
        4.0 * al2 * bracket / d
    };

    Ok(QfiBreakdown::new(i1 / w2, i2 / w2, i3 / w2))
}

/// Damped frequency QFI of the initial ground state.
pub fn qfi_omega_ground_state(g: f64, nbar: f64, tau: f64, omega: f64) -> Result<f64> {
    nonneg("g", g)?;
    nonneg("nbar", nbar)?;
    nonneg("tau", tau)?;
    positive("omega", omega)?;
    if g * tau > RELAXED_GT {
        return qfi_omega_longterm(nbar, omega);
    }
    let e = (g * tau).exp_m1();
    let a1t = e * (1.0 + 2.0 * nbar);
    let b = 1.0 + a1t;
    // 1 + B² − 2B cos 2τ and the denominator, rearranged to avoid
    // cancellation at small gτ and large n̄.
    let num = a1t * a1t + 4.0 * b * tau.sin().powi(2);
    let den = 2.0 * (1.0 + 2.0 * e * (1.0 + nbar) + e * e * (1.0 + 2.0 * nbar + 2.0 * nbar * nbar));
    let t2 = if nbar == 0.0 {
        0.0
    } else {
        let l = (1.0 / nbar).ln_1p();
        e * nbar * (1.0 + nbar).powi(2) * l * l / (1.0 + e * (1.0 + nbar))
    };
    Ok((num / den + t2) / (omega * omega))
}

/// Displacement contribution I_α of a coherent state; the full coherent
/// QFI is the ground-state QFI plus this term.
pub fn qfi_omega_coherent_term(alpha: f64, g: f64, nbar: f64, tau: f64, omega: f64) -> Result<f64> {
    nonneg("g", g)?;
    nonneg("nbar", nbar)?;
    nonneg("tau", tau)?;
    positive("omega", omega)?;
    let num = tau.sin().powi(2) + tau * (2.0 * tau).sin() + tau * tau;
    let den = 1.0 + (g * tau).exp_m1() * (1.0 + 2.0 * nbar);
    Ok(4.0 * alpha * alpha * num / (omega * omega * den))
}

/// Which squeezed-state expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezedMode {
    /// Exact result, valid only for a zero-temperature bath.
    ExactZeroT,
    /// Large-squeezing, low-temperature approximation.
    Approx,
}

/// Damped frequency QFI of a squeezed vacuum with χ = ψ = 0.
pub fn qfi_omega_squeezed(
    r: f64,
    g: f64,
    nbar: f64,
    tau: f64,
    omega: f64,
    mode: SqueezedMode,
) -> Result<f64> {
    nonneg("r", r)?;
    nonneg("g", g)?;
    nonneg("nbar", nbar)?;
    nonneg("tau", tau)?;
    positive("omega", omega)?;
    let w2 = omega * omega;
    match mode {
        SqueezedMode::ExactZeroT => {
            if nbar != 0.0 {
                return Err(Error::UnsupportedRegime(
                    "exact squeezed-state QFI requires nbar = 0".into(),
                ));
            }
            let eg = (g * tau).exp();
            let e = (g * tau).exp_m1();
            let (c2r, s2r, c4r) = ((2.0 * r).cosh(), (2.0 * r).sinh(), (4.0 * r).cosh());
            let shr2 = r.sinh().powi(2);
            let num = 16.0 * tau * s2r * (2.0 * tau).sin() * (e + c2r)
                - 4.0 * e * c2r * (2.0 * (2.0 * tau).cos() - 3.0)
                + 4.0 * eg * e
                + (8.0 * tau * tau + 1.0) * c4r
                - 8.0 * shr2 * r.cosh().powi(2) * (4.0 * tau).cos()
                - 8.0 * tau * tau
                - 8.0 * (2.0 * tau).cos()
                + 7.0;
            // 2e^{gτ} sinh²r + e^{2gτ} − cosh 2r + 1
            let den = 8.0 * w2 * (2.0 * e * shr2 + eg * eg);
            Ok(num / den)
        }
        SqueezedMode::Approx => {
            if tau == 0.0 {
                return Ok(0.0);
            }
            let e = (g * tau).exp_m1();
            let s = 2.0 * tau + (2.0 * tau).sin();
            Ok((2.0 * r).exp() * s * s / (4.0 * w2 * e * (1.0 + 2.0 * nbar)))
        }
    }
}

/// Damping QFI for the general initial state, split into covariance,
/// purity and displacement terms. Independent of ψ.
pub fn qfi_gamma_general_terms(
    p: &GaussianParams,
    g: f64,
    nbar: f64,
    tau: f64,
    gamma: f64,
) -> Result<QfiBreakdown> {
    positive("gamma", gamma)?;
    let ab = DampedQfiAbbrevs::new(p, g, nbar, tau)?;
    if g * tau > RELAXED_GT {
        return Ok(QfiBreakdown::zero());
    }
    let (a1, a1t, b1) = (ab.init_a1, ab.bath_a1_tau, ab.bath_a1);
    let (cr, sr) = (ab.c_r, ab.s_r);
    let d = ab.d;
    let pt = ab.p_tau;
    let eg2 = (2.0 * g * tau).exp();
    let pre = (g * tau).powi(2) / (gamma * gamma);
    // a₁ − b₁ and 𝒞_r − 1 without cancellation
    let da = 2.0 * (p.n_th() - nbar);
    let xr = 2.0 * p.r().sinh().powi(2);

    // P²e^{−4gτ}·α²e^{2gτ} = α²/D
    let disp = p.alpha().powi(2) * (a1 * (cr - p.chi().cos() * sr) + a1t) / d;
    let gap = ab.one_minus_p4(p, nbar);
    let pur = if gap == 0.0 {
        0.0
    } else {
        // a₁² + a₁(a₁τ − b₁)𝒞_r − b₁a₁τ, kept exact as N_th → n̄
        let m = da * (a1 + a1t) + a1 * (a1t - b1) * xr;
        // P²e^{−4gτ}·2P⁴ = 2e^{2gτ}/D³
        2.0 * eg2 * m * m / (d * d * d * gap)
    };
    let cov = {
        let yr = 2.0 * (2.0 * p.r()).sinh().powi(2);
        let base = da * (a1 + a1t);
        let m = base * base
            + 2.0 * xr * a1 * (a1t - b1) * (a1 * a1 - b1 * a1t)
            + a1 * a1 * yr * (a1t * a1t + b1 * b1);
        // P²e^{−4gτ}·P² = 1/D²
        m / (d * d * (1.0 + pt * pt))
    };
    Ok(QfiBreakdown::new(pre * cov, pre * pur, pre * disp))
}

/// Damping QFI for the general initial state.
pub fn qfi_gamma_general(p: &GaussianParams, g: f64, nbar: f64, tau: f64, gamma: f64) -> Result<f64> {
    Ok(qfi_gamma_general_terms(p, g, nbar, tau, gamma)?.total())
}

/// Damping QFI of a thermal state with N_th photons in a bath with n̄.
pub fn qfi_gamma_thermal(n_th: f64, g: f64, nbar: f64, tau: f64, gamma: f64) -> Result<f64> {
    nonneg("n_th", n_th)?;
    nonneg("g", g)?;
    nonneg("nbar", nbar)?;
    nonneg("tau", tau)?;
    positive("gamma", gamma)?;
    let e = (g * tau).exp_m1();
    let lo = e * nbar + n_th;
    if lo == 0.0 || nbar == n_th {
        return Ok(0.0);
    }
    let hi = (g * tau).exp() * (1.0 + nbar) + n_th - nbar;
    Ok((nbar - n_th).powi(2) * (g * tau).powi(2) / (gamma * gamma * lo * hi))
}

/// Damping QFI of a displaced thermal state.
pub fn qfi_gamma_displaced_thermal(
    alpha: f64,
    n_th: f64,
    g: f64,
    nbar: f64,
    tau: f64,
    gamma: f64,
) -> Result<f64> {
    let th = qfi_gamma_thermal(n_th, g, nbar, tau, gamma)?;
    // 2N − 2n̄ + e^{gτ}(1 + 2n̄)
    let den = 1.0 + 2.0 * n_th + (g * tau).exp_m1() * (1.0 + 2.0 * nbar);
    Ok(th + alpha * alpha * (g * tau).powi(2) / (gamma * gamma * den))
}

/// Damping QFI of a squeezed vacuum in a zero-temperature bath.
pub fn qfi_gamma_squeezed(r: f64, g: f64, nbar: f64, tau: f64, gamma: f64) -> Result<f64> {
    nonneg("r", r)?;
    nonneg("g", g)?;
    nonneg("tau", tau)?;
    positive("gamma", gamma)?;
    if nbar != 0.0 {
        return Err(Error::UnsupportedRegime(
            "squeezed-state damping QFI requires nbar = 0".into(),
        ));
    }
    let e = (g * tau).exp_m1();
    if e == 0.0 {
        return Ok(0.0);
    }
    let s2 = r.sinh().powi(2);
    let eg2 = (2.0 * g * tau).exp();
    // e^{2gτ} − 2(e^{gτ} − 1) = 1 + (e^{gτ} − 1)²
    let num = (1.0 + e * e) * (g * tau).powi(2) * s2;
    Ok(num / (gamma * gamma * e * (2.0 * e * s2 + eg2)))
}
