use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const HBAR: f64 = 1.054_571_817e-34; // J s
const K_B: f64 = 1.380_649e-23; // J / K
const EV: f64 = 1.602_176_634e-19; // J
const DALTON: f64 = 1.660_539_066_60e-27; // kg

/// Host-material parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Longitudinal sound speed `s` (m/s).
    pub sound_speed: f64,
    /// Deformation constant `D` (J).
    pub deformation_constant: f64,
    /// Mass within one unit cell `M_0` (kg).
    pub unit_cell_mass: f64,
    /// Number of unit cells inside the mean Bohr volume `a_B³`.
    pub cells_per_bohr_volume: f64,
    /// Mean Bohr radius `a_B` (m).
    pub bohr_radius: f64,
    /// Temperature `T` (K).
    pub temperature: f64,
}

impl MaterialParams {
    /// Phosphorus donors in silicon at liquid-helium temperature.
    ///
    /// `s = 9000 m/s`, `D = 9 eV`, `a_B = 2 nm`, and `M_0` the mass of the
    /// 8-atom cubic cell (lattice constant 0.5431 nm), so that
    /// `N_B = (a_B / 0.5431 nm)³`.
    pub fn silicon_phosphorus() -> Self {
        let lattice: f64 = 0.5431e-9;
        let bohr_radius = 2.0e-9;
        Self {
            sound_speed: 9000.0,
            deformation_constant: 9.0 * EV,
            unit_cell_mass: 8.0 * 28.0855 * DALTON,
            cells_per_bohr_volume: (bohr_radius / lattice).powi(3),
            bohr_radius,
            temperature: 4.2,
        }
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::silicon_phosphorus()
    }
}

/// Physical rate and temperature scales derived from [`MaterialParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureScales {
    /// Characteristic temperature `T_B` (K).
    pub t_b: f64,
    /// `ω_B = 2π s / a_B` (rad/s).
    pub omega_b: f64,
    /// `Γ_T = ω_B T / T_B` (rad/s).
    pub gamma_t: f64,
    /// `ħ ω_B / (k_B T_B)`, dimensionless.
    pub bohr_energy_ratio: f64,
}

impl TemperatureScales {
    pub fn temperature_ratio(&self, temperature: f64) -> f64 {
        temperature / self.t_b
    }

    /// `ħ s / (a_B k_B T)` for a temperature ratio `T/T_B`: the factor
    /// multiplying `k a_B` in the Bose occupation exponent.
    pub fn inverse_temperature(&self, temperature_ratio: f64) -> f64 {
        self.bohr_energy_ratio / (2.0 * std::f64::consts::PI * temperature_ratio)
    }
}

/// `ω_B = 2πs/a_B`, `k_B T_B = N_B M_0 s² (ħω_B/D)²`, `Γ_T = ω_B T/T_B`.
pub fn temperature_scales(p: &MaterialParams) -> Result<TemperatureScales> {
    let fields = [
        ("sound_speed", p.sound_speed),
        ("deformation_constant", p.deformation_constant),
        ("unit_cell_mass", p.unit_cell_mass),
        ("cells_per_bohr_volume", p.cells_per_bohr_volume),
        ("bohr_radius", p.bohr_radius),
        ("temperature", p.temperature),
    ];
    for (name, v) in fields {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!("material parameter {name} must be positive, got {v}")));
        }
    }
    let omega_b = 2.0 * std::f64::consts::PI * p.sound_speed / p.bohr_radius;
    let energy_ratio = HBAR * omega_b / p.deformation_constant;
    let k_t_b = p.cells_per_bohr_volume * p.unit_cell_mass * p.sound_speed.powi(2) * energy_ratio.powi(2);
    let t_b = k_t_b / K_B;
    Ok(TemperatureScales {
        t_b,
        omega_b,
        gamma_t: omega_b * p.temperature / t_b,
        bohr_energy_ratio: HBAR * omega_b / k_t_b,
    })
}
