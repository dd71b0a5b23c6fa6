//! `gqfi`: parameter sweeps of the frequency and damping QFI, optimal
//! measurement times, resonator sensitivity reports and oracle checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use gqfi_core::closed_forms::{qfi_gamma_displaced_thermal, qfi_gamma_thermal, qfi_omega_coherent_term};
use gqfi_core::closed_forms::{
    qfi_gamma_general_terms, qfi_omega_damped_full, qfi_omega_squeezed, SqueezedMode,
};
use gqfi_core::constants::{ATOMIC_MASS_UNIT, ELECTRON_MASS, PROTON_MASS};
use gqfi_core::fock::FockConfig;
use gqfi_core::omt::*;
use gqfi_core::parse::{parse_angle, parse_grid, parse_length};
use gqfi_core::qfi::{qfi_gamma_numeric, qfi_omega_numeric, FdOptions, Occupancy, OmegaSetup, DEFAULT_STEP};
use gqfi_core::sensing::{preset, sensitivity, DampingConvention, Drive, ResonatorSpec, PRESET_NAMES};
use gqfi_core::validate::{
    check_fock_case, closed_vs_numeric, fock_cases, reductions, CaseResult, SchemeBox,
};
use gqfi_core::{thermal_occupancy, BathParams, GaussianParams, QfiBreakdown};

use output::{Format, Table};

/// Above this g the weak-coupling master equation is doubtful.
const G_WARN: f64 = 0.5;

#[derive(Parser)]
#[command(
    name = "gqfi",
    version,
    about = "Quantum Fisher information of a damped oscillator in Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the QFI over a time grid.
    Qfi {
        #[command(subcommand)]
        subject: Subject,
    },
    /// Closed-form and numeric optimal measurement times side by side.
    Omt(OmtArgs),
    /// Mass-sensing report for a resonator.
    Sense(SenseArgs),
    /// Run a cross-check suite; exits non-zero if any case fails.
    Validate(ValidateArgs),
}

#[derive(Subcommand)]
enum Subject {
    /// Frequency QFI; the table reports ω²I.
    Omega(QfiArgs),
    /// Damping QFI; the table reports γ²I.
    Gamma(QfiArgs),
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Coherent amplitude α.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Rotation angle ψ (accepts pi/2 style input).
    #[arg(long, default_value = "0", value_parser = angle)]
    psi: f64,
    /// Squeezing magnitude r.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Squeezing angle χ.
    #[arg(long, default_value = "0", value_parser = angle)]
    chi: f64,
    /// Initial thermal occupation N_th.
    #[arg(long, default_value_t = 0.0)]
    nth: f64,
}

impl StateArgs {
    fn params(&self) -> Result<GaussianParams> {
        Ok(GaussianParams::new(
            self.alpha, self.psi, self.r, self.chi, self.nth,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Closed,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OccupancyArg {
    Temperature,
    Fixed,
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn grid(s: &str) -> std::result::Result<Grid, String> {
    parse_grid(s).map(Grid).map_err(|e| e.to_string())
}
fn angle(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}
fn length(s: &str) -> std::result::Result<f64, String> {
    parse_length(s).map_err(|e| e.to_string())
}

#[derive(Args, Clone)]
struct QfiArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Damping g = γ/ω.
    #[arg(long, default_value_t = 0.0)]
    g: f64,
    /// Bath occupation n̄.
    #[arg(long, default_value_t = 0.0)]
    nbar: f64,
    /// Dimensionless time grid lo:hi:n (inclusive).
    #[arg(long, value_parser = grid)]
    tau: Option<Grid>,
    /// Read --omega, --gamma, --temperature and --time in SI units.
    #[arg(long)]
    physical: bool,
    /// Angular frequency in rad/s (with --physical).
    #[arg(long, requires = "physical")]
    omega: Option<f64>,
    /// Damping rate in 1/s (with --physical).
    #[arg(long, requires = "physical")]
    gamma: Option<f64>,
    /// Bath temperature in K (with --physical); sets n̄.
    #[arg(long, requires = "physical", conflicts_with = "nbar")]
    temperature: Option<f64>,
    /// Time grid in seconds (with --physical).
    #[arg(long, value_parser = grid, requires = "physical")]
    time: Option<Grid>,
    #[arg(long, value_enum, default_value = "closed")]
    engine: Engine,
    /// How occupations respond to ∂ω (numeric engine only).
    #[arg(long, value_enum, default_value = "temperature")]
    occupancy: OccupancyArg,
    /// Relative finite-difference step (numeric engine).
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    /// Richardson-extrapolate the finite differences (numeric engine).
    #[arg(long)]
    richardson: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OmtCase {
    Coherent,
    CoherentRescaled,
    Squeezed,
    GammaThermal,
    GammaDisplaced,
    GammaDisplacedRescaled,
    GroundPeak,
}

#[derive(Args)]
struct OmtArgs {
    #[arg(value_enum)]
    case: OmtCase,
    #[arg(long, default_value_t = 0.1)]
    g: f64,
    /// Bath occupation n̄ (defaults: 5 coherent, 0.01 squeezed, 0 gamma-thermal, 1 gamma-displaced).
    #[arg(long)]
    nbar: Option<f64>,
    /// Initial N_th for gamma-thermal.
    #[arg(long, default_value_t = 10.0)]
    nth: f64,
    /// Squeezing r of the squeezed curve.
    #[arg(long, default_value_t = 2.5)]
    r: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    /// g = 1/Q
    InverseQ,
    /// g = 1/(2Q)
    HalfInverseQ,
}

#[derive(Args)]
struct SenseArgs {
    /// Resonator preset.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
    preset: Option<String>,
    /// Drive amplitude with unit, e.g. 10nm.
    #[arg(long, value_parser = length, conflicts_with = "alpha")]
    amplitude: Option<f64>,
    /// Coherent amplitude α instead of a displacement.
    #[arg(long)]
    alpha: Option<f64>,
    /// Mass in kg.
    #[arg(long)]
    mass: Option<f64>,
    /// Frequency in Hz.
    #[arg(long)]
    freq_hz: Option<f64>,
    /// Temperature in K.
    #[arg(long)]
    temperature: Option<f64>,
    /// Quality factor.
    #[arg(long)]
    quality: Option<f64>,
    /// Number of repetitions m.
    #[arg(long, default_value_t = 1)]
    shots: u64,
    #[arg(long, value_enum, default_value = "inverse-q")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    GaussianVsFock,
    ClosedVsNumeric,
    Reductions,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    scope: Scope,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of random cases (defaults: 20 Fock, 200 otherwise).
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn warn_g(g: f64) {
    if g > G_WARN {
        eprintln!("warning: g = {g} > {G_WARN}; the weak-coupling master equation may not apply");
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

/// Resolved sweep: ω, g, n̄ and the (τ, t) pairs.
struct Sweep {
    omega: f64,
    g: f64,
    nbar: f64,
    points: Vec<(f64, f64)>,
}

fn resolve_sweep(a: &QfiArgs) -> Result<Sweep> {
    if a.physical {
        let omega = a
            .omega
            .unwrap_or_else(|| usage_error("--physical needs --omega (rad/s)"));
        let gamma = a.gamma.unwrap_or(0.0);
        let time = a
            .time
            .clone()
            .unwrap_or_else(|| usage_error("--physical needs --time lo:hi:n (s)"));
        if a.tau.is_some() {
            usage_error("use --time, not --tau, with --physical");
        }
        if !(omega > 0.0) || !(gamma >= 0.0) {
            usage_error("--omega must be > 0 and --gamma >= 0");
        }
        let nbar = match a.temperature {
            Some(t) => thermal_occupancy(omega, t)?,
            None => a.nbar,
        };
        let points = time.0.iter().map(|&t| (omega * t, t)).collect();
        Ok(Sweep {
            omega,
            g: gamma / omega,
            nbar,
            points,
        })
    } else {
        let tau = a
            .tau
            .clone()
            .unwrap_or_else(|| usage_error("missing --tau lo:hi:n"));
        Ok(Sweep {
            omega: 1.0,
            g: a.g,
            nbar: a.nbar,
            points: tau.0.iter().map(|&t| (t, t)).collect(),
        })
    }
}

fn threads() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GQFI_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow!("GQFI_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err(anyhow!("GQFI_THREADS must be a positive integer, got 0"));
        }
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn cmd_qfi(subject: Subject) -> Result<()> {
    let (is_omega, a) = match subject {
        Subject::Omega(a) => (true, a),
        Subject::Gamma(a) => (false, a),
    };
    let p = a.state.params()?;
    let sw = resolve_sweep(&a)?;
    warn_g(sw.g);
    let occupancy = match a.occupancy {
        OccupancyArg::Temperature => Occupancy::Temperature,
        OccupancyArg::Fixed => Occupancy::Fixed,
    };
    if a.engine == Engine::Closed && occupancy == Occupancy::Fixed {
        usage_error("--occupancy fixed needs --engine numeric; the closed forms follow the temperature");
    }
    if !is_omega && !(sw.g > 0.0) {
        usage_error("the damping QFI needs g > 0");
    }
    let opts = FdOptions {
        step: a.step,
        richardson: a.richardson,
    };
    let gamma = sw.g * sw.omega;
    let eval = |tau: f64, t: f64| -> gqfi_core::Result<QfiBreakdown> {
        match (is_omega, a.engine) {
            (true, Engine::Closed) => qfi_omega_damped_full(&p, sw.g, sw.nbar, tau, sw.omega),
            (true, Engine::Numeric) => {
                let setup = OmegaSetup {
                    params: p,
                    omega0: sw.omega,
                    g: sw.g,
                    nbar: sw.nbar,
                    t,
                    occupancy,
                };
                qfi_omega_numeric(&setup, &opts)
            }
            (false, Engine::Closed) => qfi_gamma_general_terms(&p, sw.g, sw.nbar, tau, gamma),
            (false, Engine::Numeric) => {
                qfi_gamma_numeric(&p, &BathParams::new(sw.omega, gamma, sw.nbar)?, t, &opts)
            }
        }
    };
    let rows: Vec<gqfi_core::Result<QfiBreakdown>> =
        threads()?.install(|| sw.points.par_iter().map(|&(tau, t)| eval(tau, t)).collect());

    let scale = if is_omega {
        sw.omega * sw.omega
    } else {
        gamma * gamma
    };
    let engine = match a.engine {
        Engine::Closed => "closed",
        Engine::Numeric => "numeric",
    };
    let columns = vec![
        "tau",
        "t",
        "scaled_qfi",
        "qfi",
        "term_cov",
        "term_purity",
        "term_disp",
        "engine",
    ];
    let mut table = Table::new(stdout(), a.format, columns)?;
    for (&(tau, t), row) in sw.points.iter().zip(rows) {
        let q = row.with_context(|| format!("at tau = {tau}"))?;
        let s = q.scaled(scale);
        table.row(vec![
            tau.into(),
            t.into(),
            s.total().into(),
            q.total().into(),
            s.term_cov().into(),
            s.term_purity().into(),
            s.term_disp().into(),
            engine.into(),
        ])?;
    }
    table.finish()?;
    Ok(())
}

fn cmd_omt(a: OmtArgs) -> Result<()> {
    let g = a.g;
    warn_g(g);
    let search = OmtSearch::default();
    let columns = vec![
        "case",
        "g",
        "nbar",
        "tau_closed",
        "tau_numeric",
        "tau_discrepancy",
        "value_closed",
        "value_numeric",
        "value_ratio",
        "at_boundary",
    ];
    if a.case == OmtCase::GroundPeak {
        let peak = ground_state_peak(&PeakSearch::default())?;
        let mut t = Table::new(stdout(), a.format, vec!["case", "value", "tau", "g", "nbar"])?;
        t.row(vec![
            "ground-peak".into(),
            peak.value.into(),
            peak.tau.into(),
            peak.g.into(),
            peak.nbar.into(),
        ])?;
        return Ok(t.finish()?);
    }
    let nbar = a.nbar.unwrap_or(match a.case {
        OmtCase::Coherent | OmtCase::CoherentRescaled => 5.0,
        OmtCase::Squeezed => 0.01,
        OmtCase::GammaThermal => 0.0,
        _ => 1.0,
    });
    type Curve = Box<dyn Fn(f64) -> gqfi_core::Result<f64>>;
    let (name, rescaled, tau_closed, curve): (&str, bool, Option<f64>, Curve) = match a.case {
        OmtCase::Coherent => (
            "coherent",
            false,
            Some(omt_coherent(g, nbar)?.tau_max),
            Box::new(move |t| qfi_omega_coherent_term(1.0, g, nbar, t, 1.0)),
        ),
        OmtCase::CoherentRescaled => (
            "coherent-rescaled",
            true,
            Some(omt_coherent_rescaled(g, nbar)?.tau_max),
            Box::new(move |t| qfi_omega_coherent_term(1.0, g, nbar, t, 1.0)),
        ),
        OmtCase::Squeezed => {
            let r = a.r;
            (
                "squeezed",
                false,
                Some(omt_squeezed(g)?),
                Box::new(move |t| qfi_omega_squeezed(r, g, nbar, t, 1.0, SqueezedMode::Approx)),
            )
        }
        OmtCase::GammaThermal => {
            let nth = a.nth;
            // The closed form assumes a zero-temperature bath.
            let closed = if nbar == 0.0 {
                Some(omt_gamma(GammaOmtCase::Thermal { n_th: nth }, g)?)
            } else {
                None
            };
            (
                "gamma-thermal",
                false,
                closed,
                Box::new(move |t| qfi_gamma_thermal(nth, g, nbar, t, g)),
            )
        }
        OmtCase::GammaDisplaced | OmtCase::GammaDisplacedRescaled => {
            let rescaled = a.case == OmtCase::GammaDisplacedRescaled;
            let case = if rescaled {
                GammaOmtCase::DisplacedRescaled
            } else {
                GammaOmtCase::Displaced
            };
            let name = if rescaled {
                "gamma-displaced-rescaled"
            } else {
                "gamma-displaced"
            };
            (
                name,
                rescaled,
                Some(omt_gamma(case, g)?),
                Box::new(move |t| qfi_gamma_displaced_thermal(1.0, nbar, g, nbar, t, g)),
            )
        }
        OmtCase::GroundPeak => unreachable!(),
    };
    let num = omt_numeric(&curve, default_bracket(g), rescaled, &search)?;
    let value = |t: f64| -> gqfi_core::Result<f64> { Ok(curve(t)? / if rescaled { t } else { 1.0 }) };
    let (tc, vc) = match tau_closed {
        Some(t) => (t, value(t)?),
        None => (f64::NAN, f64::NAN),
    };
    let mut table = Table::new(stdout(), a.format, columns)?;
    table.row(vec![
        name.into(),
        g.into(),
        nbar.into(),
        tc.into(),
        num.tau_max.into(),
        ((tc - num.tau_max).abs() / num.tau_max).into(),
        vc.into(),
        num.i_max.into(),
        (vc / num.i_max).into(),
        num.at_boundary.into(),
    ])?;
    Ok(table.finish()?)
}

fn cmd_sense(a: SenseArgs) -> Result<()> {
    let mut spec = match &a.preset {
        Some(name) => preset(name).expect("clap restricts preset names"),
        None => {
            let (Some(mass), Some(f), Some(t), Some(q)) = (a.mass, a.freq_hz, a.temperature, a.quality)
            else {
                usage_error(
                    "without --preset, --mass, --freq-hz, --temperature and --quality are all required",
                );
            };
            ResonatorSpec {
                name: "custom",
                mass,
                omega: 2.0 * std::f64::consts::PI * f,
                temperature: t,
                quality: q,
                ..ResonatorSpec::chaste2012()
            }
        }
    };
    if a.preset.is_some() {
        if let Some(m) = a.mass {
            spec.mass = m;
        }
        if let Some(f) = a.freq_hz {
            spec.omega = 2.0 * std::f64::consts::PI * f;
        }
        if let Some(t) = a.temperature {
            spec.temperature = t;
        }
        if let Some(q) = a.quality {
            spec.quality = q;
        }
    }
    spec.drive = match (a.amplitude, a.alpha) {
        (Some(x), _) => Some(Drive::Amplitude(x)),
        (None, Some(al)) => Some(Drive::Alpha(al)),
        (None, None) => usage_error(format!(
            "missing --amplitude (or --alpha): the drive amplitude for {} is not stated by the source, so none is assumed",
            spec.name
        )),
    };
    spec.shots = a.shots;
    spec.convention = match a.convention {
        ConventionArg::InverseQ => DampingConvention::InverseQ,
        ConventionArg::HalfInverseQ => DampingConvention::HalfInverseQ,
    };
    let r = sensitivity(&spec)?;
    let columns = vec![
        "name",
        "mass",
        "omega",
        "temperature",
        "quality",
        "g",
        "shots",
        "alpha",
        "nbar",
        "tau_max",
        "t_max",
        "i_max",
        "delta_m",
        "delta_m_proton",
        "sens",
        "sens_electron",
        "sens_amu",
    ];
    let mut t = Table::new(stdout(), a.format, columns)?;
    t.row(vec![
        spec.name.into(),
        spec.mass.into(),
        spec.omega.into(),
        spec.temperature.into(),
        spec.quality.into(),
        r.g.into(),
        spec.shots.into(),
        r.alpha.into(),
        r.nbar.into(),
        r.tau_max.into(),
        r.t_max.into(),
        r.i_max.into(),
        r.delta_m.into(),
        (r.delta_m / PROTON_MASS).into(),
        r.sens.into(),
        (r.sens / ELECTRON_MASS).into(),
        (r.sens / ATOMIC_MASS_UNIT).into(),
    ])?;
    Ok(t.finish()?)
}

fn cmd_validate(a: ValidateArgs) -> Result<bool> {
    let results: Vec<CaseResult> = match a.scope {
        Scope::Reductions => reductions(a.seed, a.cases.unwrap_or(200))?,
        Scope::ClosedVsNumeric => closed_vs_numeric(a.seed, a.cases.unwrap_or(200), &SchemeBox::default())?,
        Scope::GaussianVsFock => {
            let cases = fock_cases(a.seed, a.cases.unwrap_or(20));
            let cfg = FockConfig::default();
            let per: Vec<gqfi_core::Result<[CaseResult; 2]>> =
                threads()?.install(|| cases.par_iter().map(|c| check_fock_case(c, &cfg)).collect());
            let mut out = Vec::with_capacity(2 * cases.len());
            for r in per {
                out.extend(r?);
            }
            out
        }
    };
    let columns = vec!["case", "label", "value", "reference", "rel_err", "tol", "pass"];
    let mut t = Table::new(stdout(), a.format, columns)?;
    for (i, r) in results.iter().enumerate() {
        t.row(vec![
            (i as u64).into(),
            r.label.clone().into(),
            r.value.into(),
            r.reference.into(),
            r.rel_err.into(),
            r.tol.into(),
            r.passed().into(),
        ])?;
    }
    t.finish()?;
    let failed = results.iter().filter(|r| !r.passed()).count();
    let worst = results.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    eprintln!(
        "{} cases, {failed} failed, worst rel err {worst:.3e}",
        results.len()
    );
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Qfi { subject } => cmd_qfi(subject).map(|_| true),
        Command::Omt(a) => cmd_omt(a).map(|_| true),
        Command::Sense(a) => cmd_sense(a).map(|_| true),
        Command::Validate(a) => cmd_validate(a),
    };
    let _ = io::stderr().flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            if let Some(io_err) = e.downcast_ref::<io::Error>() {
                if io_err.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
