//! Moment evolution under the damped-oscillator master equation
//!
//! dρ/dt = −i[H, ρ] + γ(n̄+1)D[a]ρ + γn̄ D[a†]ρ,
//!
//! in closed form and through matrix exponentials of the drift matrices.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2, Vector3};

use crate::error::{domain, Error, Result};
use crate::phase_space::{BathParams, PhaseSpaceState};

/// Below this value of γ/ω the inhomogeneous term is integrated through
/// an augmented exponential instead of K⁻¹(e^{Kt} − I).
const SMALL_G: f64 = 1e-6;

/// Drift matrices of the moment equations, with the second moments packed
/// as S = (ωσ_qq, σ_pp/ω, σ_pq).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentGenerators {
    pub g_matrix: Matrix2<f64>,
    pub k_matrix: Matrix3<f64>,
    pub s_inh: Vector3<f64>,
}

impl MomentGenerators {
    pub fn new(bath: &BathParams) -> Self {
        let (w, gm, n) = (bath.omega(), bath.gamma(), bath.nbar());
        let g_matrix = Matrix2::new(-gm / 2.0, 1.0, -w * w, -gm / 2.0);
        #[rustfmt::skip]
        let k_matrix = Matrix3::new(
            -gm, 0.0, 2.0 * w,
            0.0, -gm, -2.0 * w,
            -w, w, -gm,
        );
        let h = gm * (2.0 * n + 1.0) / 2.0;
        Self {
            g_matrix,
            k_matrix,
            s_inh: Vector3::new(h, h, 0.0),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Exact moments at time `t`.
pub fn propagate(s: &PhaseSpaceState, bath: &BathParams, t: f64) -> Result<PhaseSpaceState> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(*s);
    }
    let (w, gm, n) = (bath.omega(), bath.gamma(), bath.nbar());
    let (sn, cs) = (w * t).sin_cos();
    let decay = (-gm * t).exp();
    let half = (-gm * t / 2.0).exp();
    let gain = -(-gm * t).exp_m1();
    let k = 1.0 + 2.0 * n;

    let (q0, p0) = (s.mean()[0], s.mean()[1]);
    let q = half * (cs * q0 + sn * p0 / w);
    let p = half * (cs * p0 - w * sn * q0);

    let (sqq, spp, spq) = (s.sigma_qq(), s.sigma_pp(), s.sigma_pq());
    let (c2, s2, sc) = (cs * cs, sn * sn, sn * cs);
    let nqq = k * gain / (2.0 * w) + decay * (c2 * sqq + s2 * spp / (w * w) + 2.0 * sc * spq / w);
    let npp = w * k * gain / 2.0 + decay * (c2 * spp + w * w * s2 * sqq - 2.0 * w * sc * spq);
    let npq = decay * ((c2 - s2) * spq + sc * (spp - w * w * sqq) / w);

    Ok(PhaseSpaceState::from_parts(
        Vector2::new(q, p),
        Matrix2::new(nqq, npq, npq, npp),
    ))
}

/// Moments at time `t` from exp(Gt) and exp(Kt); independent of the
/// closed form in [`propagate`].
pub fn propagate_numeric(s: &PhaseSpaceState, bath: &BathParams, t: f64) -> Result<PhaseSpaceState> {
    check_time(t)?;
    let gens = MomentGenerators::new(bath);
    let w = bath.omega();
    let mean = (gens.g_matrix * t).exp() * s.mean();

    let s0 = Vector3::new(w * s.sigma_qq(), s.sigma_pp() / w, s.sigma_pq());
    let ekt = (gens.k_matrix * t).exp();
    let forced = if bath.g() >= SMALL_G {
        let rhs = (ekt - Matrix3::identity()) * gens.s_inh;
        gens.k_matrix
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::NonFinite("singular drift matrix".into()))?
    } else {
        // exp of [[K, S_inh], [0, 0]] t carries ∫₀ᵗ e^{Ks} ds S_inh in its
        // last column, which stays finite at γ = 0.
        let mut aug = Matrix4::zeros();
        aug.fixed_view_mut::<3, 3>(0, 0).copy_from(&gens.k_matrix);
        aug.fixed_view_mut::<3, 1>(0, 3).copy_from(&gens.s_inh);
        let e = (aug * t).exp();
        Vector3::new(e[(0, 3)], e[(1, 3)], e[(2, 3)])
    };
    let st = ekt * s0 + forced;
    let (sqq, spp, spq) = (st[0] / w, st[1] * w, st[2]);
    Ok(PhaseSpaceState::from_parts(
        mean,
        Matrix2::new(sqq, spq, spq, spp),
    ))
}

/// Thermal equilibrium state of the bath at frequency ω.
pub fn steady_state(bath: &BathParams) -> Result<PhaseSpaceState> {
    if bath.gamma() == 0.0 {
        return Err(Error::NoSteadyState);
    }
    let (w, k) = (bath.omega(), 1.0 + 2.0 * bath.nbar());
    Ok(PhaseSpaceState::from_parts(
        Vector2::zeros(),
        Matrix2::new(k / (2.0 * w), 0.0, 0.0, w * k / 2.0),
    ))
}
