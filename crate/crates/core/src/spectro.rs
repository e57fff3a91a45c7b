//! Radiative quantities of a harmonic molecular oscillator.
//!
//! Everything here is in Gaussian-CGS units with temperatures in kelvin. The
//! engine works in reduced units and only uses [`ladder_generator`], which is
//! unit-agnostic.

use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;
/// Boltzmann constant, erg/K.
pub const BOLTZMANN: f64 = 1.380_649e-16;
/// One debye in esu·cm.
pub const DEBYE: f64 = 1.0e-18;

/// A single vibrational mode with its 1→0 transition dipole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Transition dipole for 1→0, esu·cm.
    pub dipole: f64,
    /// Number of retained levels.
    pub n_levels: usize,
}

impl OscillatorSpec {
    pub fn new(omega: f64, dipole: f64, n_levels: usize) -> Result<Self> {
        let spec = Self {
            omega,
            dipole,
            n_levels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return domain(format!(
                "omega must be positive and finite, got {}",
                self.omega
            ));
        }
        if !(self.dipole.is_finite() && self.dipole >= 0.0) {
            return domain(format!(
                "dipole must be non-negative and finite, got {}",
                self.dipole
            ));
        }
        if self.n_levels < 2 {
            return domain(format!(
                "n_levels must be at least 2, got {}",
                self.n_levels
            ));
        }
        Ok(())
    }

    /// Level spacing ħω in erg.
    pub fn quantum(&self) -> f64 {
        HBAR * self.omega
    }

    /// E_n = ħω(n + 1/2).
    pub fn level_energy(&self, n: usize) -> f64 {
        self.quantum() * (n as f64 + 0.5)
    }
}

/// Which radiative processes the level generator includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiationMode {
    Off,
    /// Spontaneous emission only (a zero-temperature bath).
    Spontaneous,
    /// Spontaneous emission plus bath-induced absorption and stimulated emission.
    Full,
}

impl FromStr for RadiationMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(Self::Off),
            "spontaneous" | "spontaneous-only" | "spontaneous_only" => Ok(Self::Spontaneous),
            "full" => Ok(Self::Full),
            other => config(format!(
                "unknown radiation mode {other:?} (expected off, spontaneous or full)"
            )),
        }
    }
}

/// Rates of one oscillator in contact with a radiation bath.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSet {
    /// Population ratio n₁/n₀ at the bath temperature.
    pub boltzmann: f64,
    pub k_eq: f64,
    pub a_spont: f64,
    /// Generator with zero column sums, `kappa[(to, from)]`.
    #[serde(with = "matrix_rows")]
    pub kappa: DMatrix<f64>,
}

/// Population ratio n_j/n_k = exp(−(E_j − E_k)/(k_B T)).
pub fn boltzmann_ratio(e_j: f64, e_k: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    Ok((-(e_j - e_k) / (BOLTZMANN * t)).exp())
}

/// Einstein A coefficient, 4ω³d²/(3ħc³).
pub fn spontaneous_rate(spec: &OscillatorSpec) -> f64 {
    4.0 * spec.omega.powi(3) * spec.dipole.powi(2) / (3.0 * HBAR * SPEED_OF_LIGHT.powi(3))
}

/// Mean thermal photon number 1/(exp(x) − 1), returning 0 when x overflows.
pub fn planck_occupation(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// Equilibrium (bath-driven) rate, A/(exp(ħω/k_B T) − 1).
pub fn equilibrium_rate(spec: &OscillatorSpec, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    Ok(spontaneous_rate(spec) * planck_occupation(spec.quantum() / (BOLTZMANN * t)))
}

/// Harmonic dipole ladder with Δn = ±1 and |d_{n,n−1}|² = n·d².
///
/// Downward n→n−1 runs at n·(A + k), upward n→n+1 at (n+1)·k; no upward
/// transition leaves the top retained level. Columns sum to zero.
pub fn ladder_generator(a_spont: f64, k_eq: f64, n_levels: usize) -> DMatrix<f64> {
    let mut kappa = DMatrix::zeros(n_levels, n_levels);
    for n in 0..n_levels {
        if n > 0 {
            let down = n as f64 * (a_spont + k_eq);
            kappa[(n - 1, n)] += down;
            kappa[(n, n)] -= down;
        }
        if n + 1 < n_levels {
            let up = (n + 1) as f64 * k_eq;
            kappa[(n + 1, n)] += up;
            kappa[(n, n)] -= up;
        }
    }
    kappa
}

/// Builds κ for the given mode. Spontaneous mode ignores `t` (any t ≥ 0 is
/// accepted); full mode needs t > 0.
pub fn relaxation_generator(
    spec: &OscillatorSpec,
    t: f64,
    mode: RadiationMode,
) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_levels;
    match mode {
        RadiationMode::Off => Ok(DMatrix::zeros(n, n)),
        RadiationMode::Spontaneous => {
            if !(t >= 0.0) {
                return domain(format!("temperature must be non-negative, got {t}"));
            }
            Ok(ladder_generator(spontaneous_rate(spec), 0.0, n))
        }
        RadiationMode::Full => Ok(ladder_generator(
            spontaneous_rate(spec),
            equilibrium_rate(spec, t)?,
            n,
        )),
    }
}

/// All rates of `spec` at bath temperature `t`.
pub fn rate_set(spec: &OscillatorSpec, t: f64, mode: RadiationMode) -> Result<RateSet> {
    spec.validate()?;
    Ok(RateSet {
        boltzmann: boltzmann_ratio(spec.level_energy(1), spec.level_energy(0), t)?,
        k_eq: equilibrium_rate(spec, t)?,
        a_spont: spontaneous_rate(spec),
        kappa: relaxation_generator(spec, t, mode)?,
    })
}

/// Normalized null vector of a generator, by replacing one balance row with
/// the normalization constraint and solving the linear system.
pub fn stationary_distribution(kappa: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = kappa.nrows();
    if n == 0 || kappa.ncols() != n {
        return domain("generator must be a non-empty square matrix");
    }
    let mut system = kappa.clone();
    let mut rhs = nalgebra::DVector::zeros(n);
    for j in 0..n {
        system[(n - 1, j)] = 1.0;
    }
    rhs[n - 1] = 1.0;
    match system.lu().solve(&rhs) {
        Some(v) => Ok(v.iter().copied().collect()),
        None => domain("generator has no unique stationary distribution"),
    }
}

mod matrix_rows {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }
}
