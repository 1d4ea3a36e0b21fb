//! Noise models and the reservoir occupation profile `N̄(ω)`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{CapacityError, Result};
use crate::kernels::validate_eta;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_8e-34;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Planck constant `h = 2πħ` (J·s).
pub const PLANCK: f64 = 2.0 * PI * HBAR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseModel {
    /// Reservoir in the vacuum.
    Loss,
    /// Every reservoir mode holds the same `N̄` photons.
    WhiteNoise,
    /// Reservoir modes Bose-distributed at temperature `T`.
    Thermal,
    /// Reservoir occupation equal to the signal occupation.
    Dephasing,
}

impl NoiseModel {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseModel::Loss => "loss",
            NoiseModel::WhiteNoise => "white",
            NoiseModel::Thermal => "thermal",
            NoiseModel::Dephasing => "dephasing",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseModel {
    type Err = CapacityError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "loss" | "lossy" => Ok(NoiseModel::Loss),
            "white" | "white_noise" | "whitenoise" => Ok(NoiseModel::WhiteNoise),
            "thermal" => Ok(NoiseModel::Thermal),
            "dephasing" => Ok(NoiseModel::Dephasing),
            other => Err(CapacityError::Config(format!("unknown noise model '{other}'"))),
        }
    }
}

/// A broadband channel: noise model, uniform quantum efficiency and noise
/// parameters.
///
/// `nbar` is only read for [`NoiseModel::WhiteNoise`] and `rho_t` (the ratio
/// `R_T/R_C` of thermal to noiseless classical rate) only for
/// [`NoiseModel::Thermal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub model: NoiseModel,
    pub eta: f64,
    pub nbar: f64,
    pub rho_t: f64,
}

impl ChannelSpec {
    pub fn loss(eta: f64) -> Self {
        Self { model: NoiseModel::Loss, eta, nbar: 0.0, rho_t: 0.0 }
    }

    pub fn white(eta: f64, nbar: f64) -> Self {
        Self { model: NoiseModel::WhiteNoise, eta, nbar, rho_t: 0.0 }
    }

    pub fn thermal(eta: f64, rho_t: f64) -> Self {
        Self { model: NoiseModel::Thermal, eta, nbar: 1.0, rho_t }
    }

    pub fn dephasing(eta: f64) -> Self {
        Self { model: NoiseModel::Dephasing, eta, nbar: 0.0, rho_t: 0.0 }
    }

    /// Same channel with a different efficiency.
    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..*self }
    }

    /// Only the thermal reservoir has a characteristic frequency.
    pub fn has_char_freq(&self) -> bool {
        self.model == NoiseModel::Thermal
    }

    pub fn validate(&self) -> Result<()> {
        validate_eta(self.eta).map_err(|_| CapacityError::Config(format!("eta = {} outside [0, 1]", self.eta)))?;
        match self.model {
            NoiseModel::WhiteNoise if !(self.nbar >= 0.0 && self.nbar.is_finite()) => {
                Err(CapacityError::Config(format!("nbar = {} must be finite and >= 0", self.nbar)))
            }
            NoiseModel::Thermal if !(self.rho_t >= 0.0 && self.rho_t.is_finite()) => {
                Err(CapacityError::Config(format!("rho_t = {} must be finite and >= 0", self.rho_t)))
            }
            _ => Ok(()),
        }
    }

    /// Reservoir profile in scaled frequency for a given `y₀`.
    ///
    /// A thermal channel with `y₀ = 0` (zero temperature) reduces to loss.
    pub(crate) fn profile(&self, y0: f64) -> NoiseProfile {
        match self.model {
            NoiseModel::Loss => NoiseProfile::Vacuum,
            NoiseModel::WhiteNoise if self.nbar == 0.0 => NoiseProfile::Vacuum,
            NoiseModel::WhiteNoise => NoiseProfile::Constant(self.nbar),
            NoiseModel::Thermal if y0 > 0.0 => NoiseProfile::Bose { y0 },
            NoiseModel::Thermal => NoiseProfile::Vacuum,
            NoiseModel::Dephasing => NoiseProfile::Tracking,
        }
    }
}

/// Resolved reservoir occupation as a function of scaled frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum NoiseProfile {
    Vacuum,
    Constant(f64),
    Bose {
        y0: f64,
    },
    /// `N̄ = N`, resolved inside the per-mode problem.
    Tracking,
}

impl NoiseProfile {
    /// `N̄(x)`; meaningless for [`NoiseProfile::Tracking`].
    #[inline]
    pub(crate) fn nbar(&self, x: f64) -> f64 {
        match *self {
            NoiseProfile::Vacuum | NoiseProfile::Tracking => 0.0,
            NoiseProfile::Constant(n) => n,
            NoiseProfile::Bose { y0 } => 1.0 / (x / y0).exp_m1(),
        }
    }

    pub(crate) fn is_tracking(&self) -> bool {
        matches!(self, NoiseProfile::Tracking)
    }
}

/// Reservoir occupation at scaled frequency `x = ω/Ω`.
///
/// `y0 = ω̄/Ω` is required (and must be positive) for the thermal model;
/// `signal_n` is the current signal occupation, used by the dephasing model.
pub fn nbar_at(spec: &ChannelSpec, x: f64, y0: f64, signal_n: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(CapacityError::domain("nbar_at", format!("scaled frequency x = {x} must be > 0")));
    }
    match spec.model {
        NoiseModel::Loss => Ok(0.0),
        NoiseModel::WhiteNoise => Ok(spec.nbar),
        NoiseModel::Thermal => {
            if !(y0 > 0.0) {
                return Err(CapacityError::Config(format!("thermal noise needs y0 > 0, got {y0}")));
            }
            Ok(1.0 / (x / y0).exp_m1())
        }
        NoiseModel::Dephasing => Ok(signal_n),
    }
}

/// Input power, bath temperature and transmission time, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalInputs {
    /// Average input power (W).
    pub power: f64,
    /// Bath temperature (K).
    pub temperature: f64,
    /// Transmission time (s).
    pub transmission_time: f64,
}

impl PhysicalInputs {
    pub fn new(power: f64, temperature: f64, transmission_time: f64) -> Result<Self> {
        let p = Self { power, temperature, transmission_time };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(CapacityError::Config(format!("power = {} W must be > 0", self.power)));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(CapacityError::Config(format!("temperature = {} K must be >= 0", self.temperature)));
        }
        if !(self.transmission_time > 0.0 && self.transmission_time.is_finite()) {
            return Err(CapacityError::Config(format!("transmission time = {} s must be > 0", self.transmission_time)));
        }
        Ok(())
    }
}

/// Noiseless classical rate `R_C = √(π𝒫/(3ħ)) / ln 2` in bits/s.
pub fn noiseless_rate(power: f64) -> f64 {
    (PI * power / (3.0 * HBAR)).sqrt() / LN_2
}

/// Thermal rate `R_T = (π²/(3 ln 2))·KT/h` in bits/s.
pub fn thermal_rate(temperature: f64) -> f64 {
    PI * PI / (3.0 * LN_2) * BOLTZMANN * temperature / PLANCK
}

/// Dimensionless ratio `R_T/R_C` that parametrizes the thermal channel.
pub fn thermal_ratio(p: &PhysicalInputs) -> f64 {
    thermal_rate(p.temperature) / noiseless_rate(p.power)
}

/// Temperature at which `R_T = R_C` for the given power, i.e.
/// `T_c = √(12πħ𝒫)/(πK)`.
pub fn critical_temperature(power: f64) -> f64 {
    (12.0 * PI * HBAR * power).sqrt() / (PI * BOLTZMANN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nbar_examples() {
        let loss = ChannelSpec::loss(0.5);
        for x in [1e-3, 1.0, 50.0] {
            assert_eq!(nbar_at(&loss, x, 0.0, 3.0).unwrap(), 0.0);
        }
        let th = ChannelSpec::thermal(0.5, 0.4);
        let y0 = 0.37;
        assert_relative_eq!(nbar_at(&th, y0 * LN_2, y0, 0.0).unwrap(), 1.0, epsilon = 1e-14);
        let white = ChannelSpec::white(0.5, 1.0);
        assert_eq!(nbar_at(&white, 2.5, 0.0, 0.0).unwrap(), 1.0);
        let deph = ChannelSpec::dephasing(0.3);
        assert_eq!(nbar_at(&deph, 1.0, 0.0, 2.5).unwrap(), 2.5);
    }

    #[test]
    fn nbar_errors() {
        let th = ChannelSpec::thermal(0.5, 0.4);
        assert!(matches!(nbar_at(&th, 1.0, 0.0, 0.0), Err(CapacityError::Config(_))));
        assert!(nbar_at(&ChannelSpec::loss(0.5), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn thermal_profile_monotone_with_limits() {
        let th = ChannelSpec::thermal(0.5, 1.0);
        let y0 = 0.5;
        let xs: Vec<f64> = (0..200).map(|i| 1e-6 * 1.12f64.powi(i)).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| nbar_at(&th, x, y0, 0.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        assert!(vals[0] > 1e4);
        let far = nbar_at(&th, 40.0, y0, 0.0).unwrap();
        assert!(far < 1e-30 && far > 0.0);
    }

    #[test]
    fn thermal_ratio_scaling() {
        let power = 1e-3;
        assert_eq!(thermal_ratio(&PhysicalInputs::new(power, 0.0, 1.0).unwrap()), 0.0);
        let tc = critical_temperature(power);
        let at_tc = thermal_ratio(&PhysicalInputs::new(power, tc, 1.0).unwrap());
        assert_relative_eq!(at_tc, 1.0, epsilon = 1e-10);
        let r1 = thermal_ratio(&PhysicalInputs::new(power, 3.0, 1.0).unwrap());
        let r2 = thermal_ratio(&PhysicalInputs::new(power, 6.0, 1.0).unwrap());
        assert_relative_eq!(r2, 2.0 * r1, epsilon = 1e-14);
    }

    #[test]
    fn rate_square_root_law() {
        assert_relative_eq!(noiseless_rate(4.0e-6), 2.0 * noiseless_rate(1.0e-6), epsilon = 1e-14);
    }

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::loss(1.5).validate().is_err());
        assert!(ChannelSpec::white(0.5, -1.0).validate().is_err());
        assert!(ChannelSpec::thermal(0.5, f64::NAN).validate().is_err());
        assert!(ChannelSpec::dephasing(0.0).validate().is_ok());
        assert!(PhysicalInputs::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalInputs::new(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn parse_models() {
        assert_eq!("white".parse::<NoiseModel>().unwrap(), NoiseModel::WhiteNoise);
        assert!("pink".parse::<NoiseModel>().is_err());
        assert!(ChannelSpec::thermal(0.5, 0.1).has_char_freq());
        assert!(!ChannelSpec::white(0.5, 0.1).has_char_freq());
    }
}
