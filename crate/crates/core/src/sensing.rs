//! Minimum resolvable mass of a coherently driven nanomechanical
//! resonator, from the OMT of the frequency QFI.

use std::fmt;

use crate::constants::HBAR;
use crate::error::{domain, Result};
use crate::omt::omt_coherent;
use crate::phase_space::thermal_occupancy;

/// How the coherent drive is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Peak displacement in metres.
    Amplitude(f64),
    /// Coherent amplitude α directly.
    Alpha(f64),
}

/// Mapping from the quality factor to g = γ/ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DampingConvention {
    /// g = 1/Q
    #[default]
    InverseQ,
    /// g = 1/(2Q)
    HalfInverseQ,
}

impl DampingConvention {
    pub fn g(self, quality: f64) -> f64 {
        match self {
            Self::InverseQ => 1.0 / quality,
            Self::HalfInverseQ => 0.5 / quality,
        }
    }
}

/// Physical resonator and measurement settings, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorSpec {
    pub name: &'static str,
    /// kg
    pub mass: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    pub quality: f64,
    /// Required for [`sensitivity`]; the presets leave it unset.
    pub drive: Option<Drive>,
    pub shots: u64,
    pub convention: DampingConvention,
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 2] = ["chaste2012", "jensen2008"];

impl ResonatorSpec {
    /// Carbon-nanotube resonator at 1.865 GHz and 4 K.
    pub fn chaste2012() -> Self {
        Self {
            name: "chaste2012",
            mass: 3e-22,
            omega: 2.0 * std::f64::consts::PI * 1.865e9,
            temperature: 4.0,
            quality: 1e3,
            drive: None,
            shots: 1,
            convention: DampingConvention::InverseQ,
        }
    }

    /// Carbon-nanotube resonator at 328.5 MHz and room temperature.
    pub fn jensen2008() -> Self {
        Self {
            name: "jensen2008",
            mass: 1e-21,
            omega: 2.0 * std::f64::consts::PI * 328.5e6,
            temperature: 300.0,
            quality: 1e3,
            drive: None,
            shots: 1,
            convention: DampingConvention::InverseQ,
        }
    }

    pub fn with_drive(mut self, drive: Drive) -> Self {
        self.drive = Some(drive);
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn with_convention(mut self, convention: DampingConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn g(&self) -> f64 {
        self.convention.g(self.quality)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mass", self.mass),
            ("omega", self.omega),
            ("temperature", self.temperature),
            ("quality", self.quality),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.shots == 0 {
            return Err(domain("shots must be >= 1"));
        }
        match self.drive {
            Some(Drive::Amplitude(x)) | Some(Drive::Alpha(x)) if !(x > 0.0 && x.is_finite()) => {
                Err(domain(format!("drive must be finite and > 0, got {x}")))
            }
            _ => Ok(()),
        }
    }

    pub fn alpha(&self) -> Result<f64> {
        match self.drive {
            Some(Drive::Alpha(a)) => Ok(a),
            Some(Drive::Amplitude(x)) => alpha_from_amplitude(x, self.mass, self.omega),
            None => Err(domain(
                "drive amplitude is required: the source gives no amplitude for this \
                 resonator, so none is assumed",
            )),
        }
    }
}

impl fmt::Display for ResonatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: mass={} kg omega={} rad/s temperature={} K quality={} g={} shots={}",
            self.name,
            self.mass,
            self.omega,
            self.temperature,
            self.quality,
            self.g(),
            self.shots
        )?;
        match self.drive {
            Some(Drive::Amplitude(x)) => write!(f, " amplitude={x} m"),
            Some(Drive::Alpha(a)) => write!(f, " alpha={a}"),
            None => write!(f, " drive=unset"),
        }
    }
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<ResonatorSpec> {
    match name {
        "chaste2012" => Some(ResonatorSpec::chaste2012()),
        "jensen2008" => Some(ResonatorSpec::jensen2008()),
        _ => None,
    }
}

/// α = x/√(2ħ/(Mω)).
pub fn alpha_from_amplitude(x_amp: f64, mass: f64, omega: f64) -> Result<f64> {
    if !(x_amp > 0.0 && mass > 0.0 && omega > 0.0) {
        return Err(domain("amplitude, mass and omega must be > 0"));
    }
    Ok(x_amp / (2.0 * HBAR / (mass * omega)).sqrt())
}

/// δM = 2M/(ω√(m I_max)) for a QFI `i_max` in s².
pub fn delta_m_min(mass: f64, omega: f64, i_max: f64, shots: u64) -> Result<f64> {
    if !(i_max > 0.0) || shots == 0 {
        return Err(domain("i_max must be > 0 and shots >= 1"));
    }
    Ok(2.0 * mass / (omega * (shots as f64 * i_max).sqrt()))
}

/// Intermediate and final values of the sensitivity pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub nbar: f64,
    pub alpha: f64,
    pub g: f64,
    pub tau_max: f64,
    /// Frequency QFI at the OMT, s².
    pub i_max: f64,
    /// s
    pub t_max: f64,
    /// kg
    pub delta_m: f64,
    /// kg/√Hz
    pub sens: f64,
}

/// Thermal occupancy, coherent-state OMT, then δM and δM√t_max.
pub fn sensitivity(spec: &ResonatorSpec) -> Result<SensitivityReport> {
    spec.validate()?;
    let alpha = spec.alpha()?;
    let nbar = thermal_occupancy(spec.omega, spec.temperature)?;
    let g = spec.g();
    let omt = omt_coherent(g, nbar)?;
    let i_max = alpha * alpha * omt.i_max / (spec.omega * spec.omega);
    let t_max = omt.tau_max / spec.omega;
    let delta_m = delta_m_min(spec.mass, spec.omega, i_max, spec.shots)?;
    Ok(SensitivityReport {
        nbar,
        alpha,
        g,
        tau_max: omt.tau_max,
        i_max,
        t_max,
        delta_m,
        sens: delta_m * t_max.sqrt(),
    })
}
