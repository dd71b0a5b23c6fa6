//! Closed-form OMTs against numeric maximization of the curves they
//! approximate.

use std::f64::consts::PI;

use gqfi_core::closed_forms::*;
use gqfi_core::omt::*;
use gqfi_core::GaussianParams;

/// Numeric optimum of `curve` on the default bracket.
fn numeric(curve: impl Fn(f64) -> gqfi_core::Result<f64>, g: f64, rescaled: bool) -> OmtResult {
    omt_numeric(curve, default_bracket(g), rescaled, &OmtSearch::default()).unwrap()
}

/// Closed form within half an oscillation period of the numeric optimum,
/// and the curve there within 2% of the optimum.
fn check(curve: impl Fn(f64) -> gqfi_core::Result<f64>, tau_closed: f64, g: f64, rescaled: bool) {
    let at = curve(tau_closed).unwrap() / if rescaled { tau_closed } else { 1.0 };
    let num = numeric(curve, g, rescaled);
    assert!(
        (tau_closed - num.tau_max).abs() <= 0.5 * PI,
        "closed {tau_closed} numeric {}",
        num.tau_max
    );
    assert!(at >= 0.98 * num.i_max, "closed {at} numeric {}", num.i_max);
}

/// I_α with the oscillating terms dropped; the coherent OMTs maximize this.
fn coherent_envelope(g: f64, n: f64) -> impl Fn(f64) -> gqfi_core::Result<f64> {
    move |t: f64| Ok(4.0 * t * t / ((1.0 + 2.0 * n) * (g * t).exp() - 2.0 * n))
}

#[test]
fn coherent_omts_are_exact_envelope_maxima() {
    for &(g, n) in &[(0.1, 5.0), (0.05, 0.5), (0.2, 20.0), (0.1, 0.0)] {
        let c = omt_coherent(g, n).unwrap();
        let num = numeric(coherent_envelope(g, n), g, false);
        assert!(
            (c.tau_max - num.tau_max).abs() < 1e-6 * c.tau_max,
            "{c:?} {num:?}"
        );
        assert!((c.i_max - num.i_max).abs() < 1e-10 * c.i_max, "{c:?} {num:?}");
        let r = omt_coherent_rescaled(g, n).unwrap();
        let num = numeric(coherent_envelope(g, n), g, true);
        assert!(
            (r.tau_max - num.tau_max).abs() < 1e-6 * r.tau_max,
            "{r:?} {num:?}"
        );
        assert!((r.i_max - num.i_max).abs() < 1e-10 * r.i_max, "{r:?} {num:?}");
    }
}

#[test]
fn squeezed_omt_is_exact_envelope_maximum() {
    for &g in &[0.05, 0.1, 0.2] {
        let env = |t: f64| Ok((2.0 * t).powi(2) / (g * t).exp_m1());
        let num = numeric(env, g, false);
        let c = omt_squeezed(g).unwrap();
        assert!((c - num.tau_max).abs() < 1e-6 * c, "{c} {num:?}");
    }
}

#[test]
fn coherent_omt_against_full_curve() {
    let (g, n) = (0.1, 5.0);
    let curve = |t| qfi_omega_coherent_term(1.0, g, n, t, 1.0);
    check(curve, omt_coherent(g, n).unwrap().tau_max, g, false);
    // At τ_max the full curve and I_max differ only by the neglected
    // oscillating terms.
    let c = omt_coherent(g, n).unwrap();
    let t = c.tau_max;
    let den = (1.0 + 2.0 * n) * (g * t).exp() - 2.0 * n;
    let osc = 4.0 * (t.sin().powi(2) + t * (2.0 * t).sin()) / den;
    assert!((curve(t).unwrap() - osc - c.i_max).abs() < 1e-12 * c.i_max);
}

#[test]
fn squeezed_omt_against_full_curve_at_weak_damping() {
    let g = 0.05;
    check(
        |t| qfi_omega_squeezed(2.5, g, 0.01, t, 1.0, SqueezedMode::Approx),
        omt_squeezed(g).unwrap(),
        g,
        false,
    );
}

#[test]
fn gamma_omts_match_numeric() {
    let g = 0.1;
    check(
        |t| qfi_gamma_thermal(10.0, g, 0.0, t, g),
        omt_gamma(GammaOmtCase::Thermal { n_th: 10.0 }, g).unwrap(),
        g,
        false,
    );
    let disp = |t| qfi_gamma_displaced_thermal(1.0, 0.5, g, 0.5, t, g);
    check(disp, omt_gamma(GammaOmtCase::Displaced, g).unwrap(), g, false);
    check(
        disp,
        omt_gamma(GammaOmtCase::DisplacedRescaled, g).unwrap(),
        g,
        true,
    );
}

#[test]
fn thermal_gamma_omt_within_one_percent() {
    let g = 0.1;
    let closed = omt_gamma(GammaOmtCase::Thermal { n_th: 10.0 }, g).unwrap();
    let num = omt_numeric(
        |t| qfi_gamma_thermal(10.0, g, 0.0, t, g),
        default_bracket(g),
        false,
        &OmtSearch::default(),
    )
    .unwrap();
    assert!(
        (closed - num.tau_max).abs() <= 0.01 * num.tau_max,
        "{closed} {}",
        num.tau_max
    );
}

#[test]
fn coherent_scaling_laws() {
    let n = 5.0;
    let base = omt_coherent(0.1, n).unwrap();
    for &g in &[0.2, 0.05] {
        let c = omt_coherent(g, n).unwrap();
        let k = 0.1 / g;
        assert!((c.tau_max / base.tau_max - k).abs() < 1e-12 * k);
        assert!((c.i_max / base.i_max - k * k).abs() < 1e-12 * k * k);
    }
}

#[test]
fn coherent_full_qfi_is_ground_plus_displacement() {
    let p = GaussianParams::coherent(1.3).unwrap();
    for &tau in &[0.5, 3.0, 17.0] {
        let full = qfi_omega_damped_full(&p, 0.1, 5.0, tau, 1.0).unwrap().total();
        let split = qfi_omega_ground_state(0.1, 5.0, tau, 1.0).unwrap()
            + qfi_omega_coherent_term(1.3, 0.1, 5.0, tau, 1.0).unwrap();
        assert!((full - split).abs() <= 1e-12 * full, "{full} {split}");
    }
}
