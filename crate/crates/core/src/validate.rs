//! Seeded cross-check suites shared by the CLI and the test suite:
//! reductions between closed forms, closed forms against the numeric
//! scheme, and the Gaussian path against the Fock oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closed_forms::*;
use crate::error::Result;
use crate::fock::{fock_qfi_gamma, fock_qfi_omega, FockConfig};
use crate::phase_space::{BathParams, GaussianParams};
use crate::qfi::{qfi_gamma_numeric, qfi_omega_numeric, FdOptions, OmegaSetup};

/// Tolerance of the reduction lattice.
pub const REDUCTION_TOL: f64 = 1e-12;
/// Tolerance of closed forms against the numeric scheme.
pub const SCHEME_TOL: f64 = 1e-6;
/// Tolerance of the Fock oracle against the Gaussian path.
pub const FOCK_TOL: f64 = 1e-3;

/// One comparison of a value against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub label: String,
    pub value: f64,
    pub reference: f64,
    pub rel_err: f64,
    pub tol: f64,
}

impl CaseResult {
    pub fn new(label: impl Into<String>, value: f64, reference: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            value,
            reference,
            rel_err: rel_err(value, reference),
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.rel_err <= self.tol
    }
}

/// |a − b|/|b|, or |a − b| when b = 0.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else if d.is_nan() {
        f64::INFINITY
    } else {
        d / b.abs()
    }
}

fn params(rng: &mut ChaCha8Rng, alpha: f64, r: f64, n_th: f64) -> GaussianParams {
    use std::f64::consts::PI;
    GaussianParams::new(
        rng.random_range(0.0..=alpha),
        rng.random_range(-PI..PI),
        rng.random_range(0.0..=r),
        rng.random_range(-PI..PI),
        rng.random_range(0.0..=n_th),
    )
    .expect("sampled parameters are valid")
}

/// Every special-case closed form against its general parent under the
/// matching substitution, `n` random points per pair.
pub fn reductions(seed: u64, n: usize) -> Result<Vec<CaseResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let tol = REDUCTION_TOL;
    for i in 0..n {
        let g = rng.random_range(1e-3..0.5);
        let nbar = rng.random_range(0.0..5.0);
        let tau = rng.random_range(0.0..30.0);
        let alpha = rng.random_range(0.0..3.0);
        let r = rng.random_range(0.0..1.5);
        let n_th = rng.random_range(0.0..5.0);
        let tag =
            |name: &str| format!("{name}#{i} g={g} nbar={nbar} tau={tau} alpha={alpha} r={r} n_th={n_th}");

        let parent = qfi_omega_damped_full(&GaussianParams::vacuum(), g, nbar, tau, 1.0)?.total();
        out.push(CaseResult::new(
            tag("omega:ground"),
            qfi_omega_ground_state(g, nbar, tau, 1.0)?,
            parent,
            tol,
        ));

        let coh = GaussianParams::coherent(alpha)?;
        let parent = qfi_omega_damped_full(&coh, g, nbar, tau, 1.0)?.total();
        let special =
            qfi_omega_ground_state(g, nbar, tau, 1.0)? + qfi_omega_coherent_term(alpha, g, nbar, tau, 1.0)?;
        out.push(CaseResult::new(tag("omega:coherent"), special, parent, tol));

        let sq = GaussianParams::squeezed(r, 0.0)?;
        let parent = qfi_omega_damped_full(&sq, g, 0.0, tau, 1.0)?.total();
        let special = qfi_omega_squeezed(r, g, 0.0, tau, 1.0, SqueezedMode::ExactZeroT)?;
        out.push(CaseResult::new(tag("omega:squeezed"), special, parent, tol));

        let p = params(&mut rng, 3.0, 1.5, 5.0);
        let parent = qfi_omega_damped_full(&p, 0.0, nbar, tau, 1.0)?.total();
        out.push(CaseResult::new(
            tag("omega:undamped"),
            qfi_omega_undamped(&p, tau, 1.0)?,
            parent,
            tol,
        ));

        let th = GaussianParams::thermal(n_th)?;
        let parent = qfi_omega_undamped(&th, tau, 1.0)?;
        out.push(CaseResult::new(
            tag("omega:thermal"),
            qfi_omega_thermal(n_th, tau, 1.0)?,
            parent,
            tol,
        ));

        let pure = p.with_n_th(0.0)?;
        let parent = qfi_omega_undamped(&pure, tau, 1.0)?;
        let special = qfi_omega_pure(pure.alpha(), pure.psi(), pure.r(), pure.chi(), 1.0, tau)?;
        out.push(CaseResult::new(tag("omega:pure"), special, parent, tol));

        let parent = qfi_omega_longterm_terms(nbar, 1.0)?.total();
        out.push(CaseResult::new(
            tag("omega:longterm"),
            qfi_omega_longterm(nbar, 1.0)?,
            parent,
            tol,
        ));

        let parent = qfi_gamma_general(&th, g, nbar, tau, g)?;
        out.push(CaseResult::new(
            tag("gamma:thermal"),
            qfi_gamma_thermal(n_th, g, nbar, tau, g)?,
            parent,
            tol,
        ));

        let dth = GaussianParams::new(alpha, 0.0, 0.0, 0.0, n_th)?;
        let parent = qfi_gamma_general(&dth, g, nbar, tau, g)?;
        let special = qfi_gamma_displaced_thermal(alpha, n_th, g, nbar, tau, g)?;
        out.push(CaseResult::new(
            tag("gamma:displaced-thermal"),
            special,
            parent,
            tol,
        ));

        let parent = qfi_gamma_general(&sq, g, 0.0, tau, g)?;
        out.push(CaseResult::new(
            tag("gamma:squeezed"),
            qfi_gamma_squeezed(r, g, 0.0, tau, g)?,
            parent,
            tol,
        ));
    }
    Ok(out)
}

/// Sampling box of the closed-vs-numeric suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeBox {
    pub alpha: f64,
    pub r: f64,
    pub n_th: f64,
    pub nbar: f64,
    pub g: f64,
    pub tau: f64,
}

impl Default for SchemeBox {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            r: 1.0,
            n_th: 3.0,
            nbar: 3.0,
            g: 0.3,
            tau: 20.0,
        }
    }
}

/// General ω and γ closed forms against the finite-difference scheme.
pub fn closed_vs_numeric(seed: u64, n: usize, bx: &SchemeBox) -> Result<Vec<CaseResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = FdOptions::default();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let p = params(&mut rng, bx.alpha, bx.r, bx.n_th);
        let g = rng.random_range(0.0..=bx.g);
        let nbar = rng.random_range(0.0..=bx.nbar);
        let tau = rng.random_range(0.0..=bx.tau);
        let tag = |name: &str| format!("{name}#{i} {p:?} g={g} nbar={nbar} tau={tau}");
        let closed = qfi_omega_damped_full(&p, g, nbar, tau, 1.0)?.total();
        let num = qfi_omega_numeric(&OmegaSetup::dimensionless(p, g, nbar, tau), &opts)?.total();
        out.push(CaseResult::new(tag("omega"), num, closed, SCHEME_TOL));
        if g > 0.0 {
            let closed = qfi_gamma_general(&p, g, nbar, tau, g)?;
            let bath = BathParams::new(1.0, g, nbar)?;
            let num = qfi_gamma_numeric(&p, &bath, tau, &opts)?.total();
            out.push(CaseResult::new(tag("gamma"), num, closed, SCHEME_TOL));
        }
    }
    Ok(out)
}

/// One oracle comparison point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCase {
    pub params: GaussianParams,
    pub g: f64,
    pub nbar: f64,
    pub tau: f64,
}

/// Random cases with α ≤ 1, r ≤ 0.5, N_th, n̄ ≤ 1, g ≤ 0.2, τ ≤ 5.
pub fn fock_cases(seed: u64, n: usize) -> Vec<FockCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| FockCase {
            params: params(&mut rng, 1.0, 0.5, 1.0),
            g: rng.random_range(0.01..=0.2),
            nbar: rng.random_range(0.0..=1.0),
            tau: rng.random_range(0.2..=5.0),
        })
        .collect()
}

/// Fock-oracle SLD QFI against the Gaussian scheme, for ω and γ.
pub fn check_fock_case(c: &FockCase, cfg: &FockConfig) -> Result<[CaseResult; 2]> {
    let opts = FdOptions::default();
    let tag = |name: &str| format!("{name} {:?} g={} nbar={} tau={}", c.params, c.g, c.nbar, c.tau);
    let setup = OmegaSetup::dimensionless(c.params, c.g, c.nbar, c.tau);
    let gauss = qfi_omega_numeric(&setup, &opts)?.total();
    let omega = CaseResult::new(tag("omega"), fock_qfi_omega(&setup, cfg)?, gauss, FOCK_TOL);
    let bath = BathParams::from_g(1.0, c.g, c.nbar)?;
    let gauss = qfi_gamma_numeric(&c.params, &bath, c.tau, &opts)?.total();
    let gamma = CaseResult::new(
        tag("gamma"),
        fock_qfi_gamma(&c.params, &bath, c.tau, cfg)?,
        gauss,
        FOCK_TOL,
    );
    Ok([omega, gamma])
}
