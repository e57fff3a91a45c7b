use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::spectro::{self, RadiationMode};

/// Parameters of one gas run, in reduced units (ħ = k_B = 1).
///
/// The energy quantum is ħω = `omega`. Collisions are drawn in a single
/// well-mixed periodic cell; positions are advected but do not gate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GasConfig {
    pub n_particles: usize,
    pub box_length: f64,
    pub r0: f64,
    pub mass: f64,
    pub omega: f64,
    /// Cap on quanta transferred in one collision.
    pub n_max: u32,
    pub force: [f64; 3],
    pub dt: f64,
    pub steps: u64,
    pub seed: u64,
    pub ordering_rule: bool,
    pub collisions: bool,
    pub radiation_mode: RadiationMode,
    pub bath_temperature: f64,
    /// Einstein A of the 1→0 transition, in reduced inverse time.
    pub spontaneous_rate: f64,
    /// Radiative ladder size; absorption out of the top level is blocked.
    pub n_levels: u32,
    /// Temperature of the initial Maxwellian.
    pub initial_temperature: f64,
    pub initial_level: u32,
}

impl Default for GasConfig {
    fn default() -> Self {
        Self {
            n_particles: 1000,
            box_length: 1.0,
            r0: 0.01,
            mass: 1.0,
            omega: 1.0,
            n_max: 2,
            force: [0.0; 3],
            dt: 0.01,
            steps: 1000,
            seed: 1,
            ordering_rule: true,
            collisions: true,
            radiation_mode: RadiationMode::Off,
            bath_temperature: 1.0,
            spontaneous_rate: 0.1,
            n_levels: 8,
            initial_temperature: 2.0,
            initial_level: 0,
        }
    }
}

/// Radiative rates of the reduced oscillator ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ladder {
    pub a_spont: f64,
    pub k_eq: f64,
    pub n_levels: u32,
}

impl Ladder {
    pub fn off() -> Self {
        Self {
            a_spont: 0.0,
            k_eq: 0.0,
            n_levels: 1,
        }
    }

    /// Rate of n → n−1.
    pub fn down(&self, n: u32) -> f64 {
        f64::from(n) * (self.a_spont + self.k_eq)
    }

    /// Rate of n → n+1; zero at or above the top retained level.
    pub fn up(&self, n: u32) -> f64 {
        if n + 1 < self.n_levels {
            f64::from(n + 1) * self.k_eq
        } else {
            0.0
        }
    }

    pub fn exit(&self, n: u32) -> f64 {
        self.down(n) + self.up(n)
    }

    /// Largest exit rate over levels 0..=`top`.
    pub fn max_exit(&self, top: u32) -> f64 {
        (0..=top).map(|n| self.exit(n)).fold(0.0, f64::max)
    }

    pub fn generator(&self) -> nalgebra::DMatrix<f64> {
        spectro::ladder_generator(self.a_spont, self.k_eq, self.n_levels as usize)
    }
}

/// Largest rate·dt allowed for a single radiative step.
pub const MAX_RATE_DT: f64 = 0.1;

impl GasConfig {
    pub fn quantum(&self) -> f64 {
        self.omega
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    /// Hard-sphere cross-section π(2r₀)².
    pub fn cross_section(&self) -> f64 {
        std::f64::consts::PI * (2.0 * self.r0).powi(2)
    }

    pub fn ladder(&self) -> Result<Ladder> {
        Ok(match self.radiation_mode {
            RadiationMode::Off => Ladder::off(),
            RadiationMode::Spontaneous => Ladder {
                a_spont: self.spontaneous_rate,
                k_eq: 0.0,
                n_levels: self.n_levels,
            },
            RadiationMode::Full => {
                if !(self.bath_temperature > 0.0) {
                    return config(format!(
                        "bath_temperature must be positive in full radiation mode, got {}",
                        self.bath_temperature
                    ));
                }
                Ladder {
                    a_spont: self.spontaneous_rate,
                    k_eq: self.spontaneous_rate
                        * spectro::planck_occupation(self.omega / self.bath_temperature),
                    n_levels: self.n_levels,
                }
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                config(format!("{name} must be positive and finite, got {v}"))
            }
        };
        if self.n_particles < 2 {
            return config(format!(
                "n_particles must be at least 2, got {}",
                self.n_particles
            ));
        }
        positive("box_length", self.box_length)?;
        positive("r0", self.r0)?;
        positive("mass", self.mass)?;
        positive("omega", self.omega)?;
        positive("dt", self.dt)?;
        positive("initial_temperature", self.initial_temperature)?;
        if !(self.box_length > 4.0 * self.r0) {
            return config(format!(
                "box_length {} must exceed 4·r0 = {}",
                self.box_length,
                4.0 * self.r0
            ));
        }
        if self.force.iter().any(|f| !f.is_finite()) {
            return config("force components must be finite");
        }
        if !(self.spontaneous_rate.is_finite() && self.spontaneous_rate >= 0.0) {
            return config(format!(
                "spontaneous_rate must be non-negative, got {}",
                self.spontaneous_rate
            ));
        }
        if self.n_levels < 2 {
            return config(format!(
                "n_levels must be at least 2, got {}",
                self.n_levels
            ));
        }
        let ladder = self.ladder()?;
        let top = (self.n_levels - 1).max(self.initial_level);
        let worst = ladder.max_exit(top) * self.dt;
        if worst >= MAX_RATE_DT {
            return config(format!(
                "radiative rate × dt = {worst} at level ≤ {top} must stay below {MAX_RATE_DT}; reduce dt or spontaneous_rate"
            ));
        }
        Ok(())
    }
}

/// Conversions between the engine's reduced units and physical CGS units.
///
/// Energies are measured in ħω, temperatures in ħω/k_B and times in
/// `time_unit` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedUnits {
    pub quantum_erg: f64,
    pub time_unit: f64,
}

impl ReducedUnits {
    pub fn new(spec: &spectro::OscillatorSpec, time_unit: f64) -> Self {
        Self {
            quantum_erg: spec.quantum(),
            time_unit,
        }
    }

    pub fn temperature_to_reduced(&self, kelvin: f64) -> f64 {
        spectro::BOLTZMANN * kelvin / self.quantum_erg
    }

    pub fn temperature_to_kelvin(&self, reduced: f64) -> f64 {
        reduced * self.quantum_erg / spectro::BOLTZMANN
    }

    pub fn rate_to_reduced(&self, per_second: f64) -> f64 {
        per_second * self.time_unit
    }

    pub fn rate_to_physical(&self, reduced: f64) -> f64 {
        reduced / self.time_unit
    }
}
