use gqfi_core::dynamics::propagate;
use gqfi_core::fock::{
    basis_jump_matrix, build_gaussian_fock, build_gaussian_fock_auto, default_step, fidelity_fock,
    fock_qfi_gamma, fock_qfi_omega, lindblad_evolve, overlap_matrix, FockConfig,
};
use gqfi_core::qfi::{qfi_gamma_numeric, qfi_omega_numeric, FdOptions, OmegaSetup};
use gqfi_core::{fidelity, state_from_params, BathParams, GaussianParams};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_params(rng: &mut ChaCha8Rng) -> GaussianParams {
    GaussianParams::new(
        rng.random_range(0.0..1.0),
        rng.random_range(-PI..PI),
        rng.random_range(0.0..0.5),
        rng.random_range(-PI..PI),
        rng.random_range(0.0..1.0),
    )
    .unwrap()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn moments_of_built_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let rho = build_gaussian_fock_auto(&p, 60, 1.3).unwrap();
        let m = rho.moments();
        let g = state_from_params(&p, 1.3).unwrap();
        assert!((m.mean() - g.mean()).amax() < 1e-9);
        assert!((m.cov() - g.cov()).amax() < 1e-9);
    }
}

#[test]
fn squeezed_vacuum_covariance() {
    let rho = build_gaussian_fock(&GaussianParams::squeezed(0.5, 0.0).unwrap(), 60, 1.0).unwrap();
    let m = rho.moments();
    assert!((m.sigma_qq() - 1f64.exp() / 2.0).abs() < 1e-10);
    assert!((m.sigma_pp() - (-1f64).exp() / 2.0).abs() < 1e-10);
    assert!(m.sigma_pq().abs() < 1e-10);
}

#[test]
fn thermal_purity() {
    let rho = build_gaussian_fock(&GaussianParams::thermal(2.0).unwrap(), 160, 1.0).unwrap();
    assert!((rho.purity() - 0.2).abs() < 1e-9);
}

#[test]
fn fidelity_matches_gaussian_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..8 {
        let p1 = random_params(&mut rng);
        let p2 = random_params(&mut rng);
        let dim = build_gaussian_fock_auto(&p1, 60, 1.0)
            .unwrap()
            .dim()
            .max(build_gaussian_fock_auto(&p2, 60, 1.0).unwrap().dim());
        let f_fock = fidelity_fock(
            &build_gaussian_fock(&p1, dim, 1.0).unwrap(),
            &build_gaussian_fock(&p2, dim, 1.0).unwrap(),
        )
        .unwrap();
        let f_gauss = fidelity(
            &state_from_params(&p1, 1.0).unwrap(),
            &state_from_params(&p2, 1.0).unwrap(),
        )
        .unwrap();
        assert!((f_fock - f_gauss).abs() < 1e-6, "{f_fock} vs {f_gauss}");
    }
}

#[test]
fn evolution_tracks_moment_dynamics() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let p = random_params(&mut rng);
        let omega = rng.random_range(0.5..2.0);
        let g = rng.random_range(0.0..0.2);
        let bath = BathParams::from_g(omega, g, rng.random_range(0.0..1.0)).unwrap();
        let t = rng.random_range(0.0..10.0) / omega;
        let rho0 = build_gaussian_fock_auto(&p, 60, omega).unwrap();
        let rho = lindblad_evolve(&rho0, &bath, t, default_step(rho0.dim(), &bath, omega)).unwrap();
        let want = propagate(&state_from_params(&p, omega).unwrap(), &bath, t).unwrap();
        let got = rho.moments();
        assert!((got.mean() - want.mean()).amax() < 1e-5);
        assert!((got.cov() - want.cov()).amax() < 1e-5);
        assert!((rho.trace() - 1.0).abs() < 1e-8);
        assert!(rho.min_eigenvalue() > -1e-8);
        assert!(max_abs(&(rho.data() - rho.data().adjoint())) < 1e-12);
    }
}

#[test]
fn evolution_in_a_jumped_basis() {
    // Prepared at ω₀ = 1, evolved at ω = 1.5: moments follow the jump scheme.
    let p = GaussianParams::new(0.7, 0.3, 0.3, -1.0, 0.2).unwrap();
    let bath = BathParams::from_g(1.5, 0.1, 0.4).unwrap();
    let rho0 = build_gaussian_fock(&p, 60, 1.0).unwrap();
    let rho = lindblad_evolve(&rho0, &bath, 3.0, default_step(60, &bath, 1.0)).unwrap();
    let got = rho.moments();
    let want = propagate(&state_from_params(&p, 1.0).unwrap(), &bath, 3.0).unwrap();
    assert!((got.mean() - want.mean()).amax() < 1e-5);
    assert!((got.cov() - want.cov()).amax() < 1e-5);
}

#[test]
fn relaxes_to_thermal_state() {
    let bath = BathParams::new(1.0, 0.5, 0.5).unwrap();
    let rho0 = build_gaussian_fock(&GaussianParams::coherent(1.0).unwrap(), 40, 1.0).unwrap();
    let rho = lindblad_evolve(&rho0, &bath, 80.0, default_step(40, &bath, 1.0)).unwrap();
    let th = build_gaussian_fock(&GaussianParams::thermal(0.5).unwrap(), 40, 1.0).unwrap();
    assert!(
        max_abs(&(rho.data() - th.data())) < 1e-8,
        "{}",
        max_abs(&(rho.data() - th.data()))
    );
}

#[test]
fn overlap_matrix_is_orthogonal() {
    // Rows spread over more Fock states as the jump grows; at dim 80 the
    // first 41 rows stay inside the truncation for ω/ω₀ in [0.8, 1.3].
    for &omega in &[0.8, 1.0, 1.25, 1.3] {
        let r = overlap_matrix(80, omega, 1.0);
        let rrt = &r * r.transpose();
        for m in 0..=40 {
            for n in 0..=40 {
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((rrt[(m, n)] - want).abs() < 1e-8, "({m},{n}) {}", rrt[(m, n)]);
            }
        }
    }
    // Large jumps are exact once the truncation is wide enough.
    let r = overlap_matrix(300, 2.0, 1.0);
    let rrt = &r * r.transpose();
    for m in 0..=40 {
        assert!((rrt[(m, m)] - 1.0).abs() < 1e-8);
    }
}

#[test]
fn overlap_equals_squeeze_matrix() {
    for &omega in &[0.5, 1.3, 2.0] {
        let r = overlap_matrix(40, omega, 1.0);
        let s = basis_jump_matrix(40, 1.0, omega).unwrap();
        assert!((&r - &s).amax() < 1e-8, "omega {omega}: {}", (&r - &s).amax());
    }
}

#[test]
fn basis_change_is_a_squeeze() {
    // The same params built in the ω basis, re-expressed in the ω₀ basis,
    // equal the squeeze-conjugated matrix.
    let p = GaussianParams::new(0.5, 0.2, 0.2, 0.4, 0.3).unwrap();
    let (omega0, omega) = (1.0, 1.4);
    let at_w = build_gaussian_fock(&p, 80, omega).unwrap();
    let s = basis_jump_matrix(80, omega0, omega)
        .unwrap()
        .map(|x| Complex64::new(x, 0.0));
    let conj = s.transpose() * at_w.data() * &s;
    let moved = at_w.to_basis(omega0).unwrap();
    let d = 40;
    let diff = conj.view((0, 0), (d, d)) - moved.data().view((0, 0), (d, d));
    assert!(max_abs(&diff.into_owned()) < 1e-8);
}

#[test]
fn sld_qfi_matches_gaussian_engine() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cfg = FockConfig::default();
    for _ in 0..3 {
        let p = random_params(&mut rng);
        let g = rng.random_range(0.01..0.2);
        let nbar = rng.random_range(0.0..1.0);
        let tau = rng.random_range(0.5..5.0);
        let setup = OmegaSetup::dimensionless(p, g, nbar, tau);
        let want = qfi_omega_numeric(&setup, &FdOptions::default()).unwrap().total();
        let got = fock_qfi_omega(&setup, &cfg).unwrap();
        assert!((got - want).abs() <= 1e-3 * want, "omega: {got} vs {want}");

        let bath = BathParams::from_g(1.0, g, nbar).unwrap();
        let want = qfi_gamma_numeric(&p, &bath, tau, &FdOptions::default())
            .unwrap()
            .total();
        let got = fock_qfi_gamma(&p, &bath, tau, &cfg).unwrap();
        assert!((got - want).abs() <= 1e-3 * want, "gamma: {got} vs {want}");
    }
}
