//! CODATA 2018 physical constants (SI). Only the sensing layer and the
//! SI entry points use these; everything else runs in natural units
//! with ħ = 1 and M = 1.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Proton mass, kg.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
