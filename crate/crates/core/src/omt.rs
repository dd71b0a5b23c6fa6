//! Optimal measurement times (OMT): Lambert-W closed forms and a generic
//! grid + golden-section maximizer for arbitrary QFI curves.

use std::f64::consts::E;

use crate::closed_forms::qfi_omega_ground_state;
use crate::error::{domain, Error, Result};
use crate::lambert::lambert_w0;

/// Location and height of a QFI maximum in dimensionless time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmtResult {
    pub tau_max: f64,
    /// Objective at `tau_max`: the curve value, or curve/τ when rescaled.
    /// For the closed forms this is ω²I per unit α² (ω²I/τ when rescaled).
    pub i_max: f64,
    /// Whether I/τ (time as a resource) was maximized instead of I.
    pub rescaled: bool,
    /// The maximum sits on the edge of the search bracket.
    pub at_boundary: bool,
}

fn check_g(g: f64) -> Result<()> {
    if g > 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("g must be > 0, got {g}")))
    }
}

fn check_nbar(nbar: f64) -> Result<()> {
    if nbar >= 0.0 && nbar.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("nbar must be >= 0, got {nbar}")))
    }
}

/// OMT of the displacement term I_α with oscillations neglected:
/// τ_max = (2 + W(−4n̄/(e²(1+2n̄))))/g.
pub fn omt_coherent(g: f64, nbar: f64) -> Result<OmtResult> {
    check_g(g)?;
    check_nbar(nbar)?;
    let a1 = 1.0 + 2.0 * nbar;
    let w = lambert_w0(-4.0 * nbar / (E * E * a1))?;
    // With W e^W = x the 1/n̄ prefactor folds into e^{−W}.
    let i_max = 8.0 * (-w).exp() * (2.0 + w) / (g * g * E * E * a1);
    Ok(OmtResult {
        tau_max: (2.0 + w) / g,
        i_max,
        rescaled: false,
        at_boundary: false,
    })
}

/// OMT of I_α/τ: τ_max = (1 + W(−2n̄/(e(1+2n̄))))/g.
pub fn omt_coherent_rescaled(g: f64, nbar: f64) -> Result<OmtResult> {
    check_g(g)?;
    check_nbar(nbar)?;
    let a1 = 1.0 + 2.0 * nbar;
    let w = lambert_w0(-2.0 * nbar / (E * a1))?;
    let i_max = 4.0 * (-w).exp() / (g * E * a1);
    Ok(OmtResult {
        tau_max: (1.0 + w) / g,
        i_max,
        rescaled: true,
        at_boundary: false,
    })
}

/// OMT of the squeezed-state approximation, (2 + W(−2/e²))/g.
pub fn omt_squeezed(g: f64) -> Result<f64> {
    check_g(g)?;
    Ok((2.0 + lambert_w0(-2.0 / (E * E))?) / g)
}

/// Closed-form damping-estimation OMT cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaOmtCase {
    /// Thermal initial state in a zero-temperature bath.
    Thermal { n_th: f64 },
    /// Displaced thermal state with N_th = n̄.
    Displaced,
    /// Displaced thermal state, maximizing I/τ.
    DisplacedRescaled,
}

/// OMT for estimating γ.
pub fn omt_gamma(case: GammaOmtCase, g: f64) -> Result<f64> {
    check_g(g)?;
    match case {
        GammaOmtCase::Thermal { n_th } => {
            check_nbar(n_th)?;
            Ok((2.0 + lambert_w0(2.0 * n_th / (E * E))?) / g)
        }
        GammaOmtCase::Displaced => Ok(2.0 / g),
        GammaOmtCase::DisplacedRescaled => Ok(1.0 / g),
    }
}

/// Settings for [`omt_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmtSearch {
    pub grid: usize,
    /// Relative tolerance on τ for the golden-section refinement.
    pub rel_tol: f64,
}

impl Default for OmtSearch {
    fn default() -> Self {
        Self {
            grid: 2048,
            rel_tol: 1e-8,
        }
    }
}

/// Default search bracket (10⁻³/g, 20/g).
pub fn default_bracket(g: f64) -> (f64, f64) {
    (1e-3 / g, 20.0 / g)
}

fn eval<F>(curve: &F, tau: f64, rescaled: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let v = curve(tau)?;
    let v = if rescaled { v / tau } else { v };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("curve value {v} at tau = {tau}")))
    }
}

/// Golden-section maximization of `f` on [a, b].
fn golden_max<F>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (a.abs() + b.abs()) * 0.5 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Global maximum of `curve` (or `curve(τ)/τ`) on a bracket: grid scan,
/// then golden-section refinement around the best grid point.
pub fn omt_numeric<F>(curve: F, bracket: (f64, f64), rescaled: bool, search: &OmtSearch) -> Result<OmtResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let (lo, hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!("invalid bracket ({lo}, {hi})")));
    }
    if rescaled && lo <= 0.0 {
        return Err(domain("rescaled search needs a bracket with tau_lo > 0"));
    }
    let n = search.grid.max(3);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..n {
        let tau = if k == n - 1 { hi } else { lo + k as f64 * step };
        let v = eval(&curve, tau, rescaled)?;
        if v > best.1 {
            best = (k, v);
        }
    }
    let (k, v) = best;
    if k == 0 || k == n - 1 {
        let tau = if k == 0 { lo } else { hi };
        return Ok(OmtResult {
            tau_max: tau,
            i_max: v,
            rescaled,
            at_boundary: true,
        });
    }
    let a = lo + (k - 1) as f64 * step;
    let b = (lo + (k + 1) as f64 * step).min(hi);
    let (tau, val) = golden_max(|t| eval(&curve, t, rescaled), a, b, search.rel_tol)?;
    let (tau, val) = if val >= v {
        (tau, val)
    } else {
        (lo + k as f64 * step, v)
    };
    Ok(OmtResult {
        tau_max: tau,
        i_max: val,
        rescaled,
        at_boundary: false,
    })
}

/// Location of the largest ground-state frequency QFI found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStatePeak {
    /// ω²I at the maximum.
    pub value: f64,
    pub tau: f64,
    pub g: f64,
    pub nbar: f64,
}

/// Search box for [`ground_state_peak`], in log₁₀ of g and n̄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSearch {
    pub log_g: (f64, f64),
    pub log_nbar: (f64, f64),
    pub tau_max: f64,
    pub grid_g: usize,
    pub grid_nbar: usize,
}

impl Default for PeakSearch {
    fn default() -> Self {
        Self {
            log_g: (-6.0, 0.0),
            log_nbar: (-2.0, 8.0),
            tau_max: 60.0,
            grid_g: 25,
            grid_nbar: 41,
        }
    }
}

/// Maximizes the ground-state ω²I jointly over (τ, g, n̄) inside `box_`.
/// The supremum is approached as g → 0 with g·n̄·τ fixed, so the result
/// lies on the small-g edge of the box.
pub fn ground_state_peak(box_: &PeakSearch) -> Result<GroundStatePeak> {
    let inner = OmtSearch {
        grid: 1024,
        rel_tol: 1e-10,
    };
    let best_tau = |lg: f64, ln: f64| -> Result<(f64, f64)> {
        let (g, n) = (10f64.powf(lg), 10f64.powf(ln));
        let r = omt_numeric(
            |t| qfi_omega_ground_state(g, n, t, 1.0),
            (1e-3, box_.tau_max),
            false,
            &inner,
        )?;
        Ok((r.tau_max, r.i_max))
    };
    let lin = |(a, b): (f64, f64), k: usize, n: usize| a + (b - a) * k as f64 / (n - 1) as f64;

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for i in 0..box_.grid_g {
        let lg = lin(box_.log_g, i, box_.grid_g);
        for j in 0..box_.grid_nbar {
            let ln = lin(box_.log_nbar, j, box_.grid_nbar);
            let (tau, v) = best_tau(lg, ln)?;
            if v > best.0 {
                best = (v, tau, lg, ln);
            }
        }
    }

    // Coordinate refinement in (log g, log n̄), each step re-maximizing τ.
    let (mut lg, mut ln) = (best.2, best.3);
    let dg = (box_.log_g.1 - box_.log_g.0) / (box_.grid_g - 1) as f64;
    let dn = (box_.log_nbar.1 - box_.log_nbar.0) / (box_.grid_nbar - 1) as f64;
    for _ in 0..4 {
        let a = (ln - dn).max(box_.log_nbar.0);
        let b = (ln + dn).min(box_.log_nbar.1);
        ln = golden_max(|x| Ok(best_tau(lg, x)?.1), a, b, 1e-10)?.0;
        let a = (lg - dg).max(box_.log_g.0);
        let b = (lg + dg).min(box_.log_g.1);
        lg = golden_max(|x| Ok(best_tau(x, ln)?.1), a, b, 1e-10)?.0;
    }
    let (tau, value) = best_tau(lg, ln)?;
    let out = if value >= best.0 {
        GroundStatePeak {
            value,
            tau,
            g: 10f64.powf(lg),
            nbar: 10f64.powf(ln),
        }
    } else {
        GroundStatePeak {
            value: best.0,
            tau: best.1,
            g: 10f64.powf(best.2),
            nbar: 10f64.powf(best.3),
        }
    };
    Ok(out)
}
