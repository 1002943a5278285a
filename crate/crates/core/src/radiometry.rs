//! Bolometer read-out, photon counting and the free-space link budget.
//!
//! Powers are in nW, frequencies in GHz, lengths in m, solid angles in sr.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::constants::{PhysicalConstants, FEMTOSECOND, GHZ, NANOWATT, PICOSECOND};
use crate::error::{check_non_negative, check_positive, Error, Result};

/// Lock-in amplitude factor between the read-out voltage and the incident power.
pub const LOCKIN_COEFFICIENT: f64 = 2.0 * SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorCalibration {
    pub name: String,
    /// optical responsivity, mV/nW
    pub responsivity_mv_per_nw: f64,
    pub lockin_coefficient: f64,
}

impl DetectorCalibration {
    pub fn new(name: impl Into<String>, responsivity_mv_per_nw: f64) -> Result<Self> {
        Self::with_coefficient(name, responsivity_mv_per_nw, LOCKIN_COEFFICIENT)
    }

    pub fn with_coefficient(name: impl Into<String>, responsivity_mv_per_nw: f64, lockin_coefficient: f64) -> Result<Self> {
        check_positive("responsivity", responsivity_mv_per_nw)?;
        check_positive("lock-in coefficient", lockin_coefficient)?;
        Ok(Self {
            name: name.into(),
            responsivity_mv_per_nw,
            lockin_coefficient,
        })
    }

    /// Hot-electron bolometer, 3.3 mV/nW.
    pub fn heb() -> Self {
        Self::new("HEB", 3.3).expect("preset is valid")
    }

    /// Silicon bolometer, 11 mV/nW.
    pub fn silicon() -> Self {
        Self::new("Si", 11.0).expect("preset is valid")
    }

    /// Looks up a preset by name (`heb`, `si`), case-insensitively.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "heb" => Some(Self::heb()),
            "si" | "silicon" => Some(Self::silicon()),
            _ => None,
        }
    }
}

/// Detected power (nW) for a lock-in output voltage `output_mv` (mV).
pub fn power_from_output_voltage(output_mv: f64, cal: &DetectorCalibration) -> Result<f64> {
    check_non_negative("output voltage", output_mv)?;
    Ok(cal.lockin_coefficient * output_mv / cal.responsivity_mv_per_nw)
}

/// Single-photon energy `h f` in J.
pub fn photon_energy(frequency_ghz: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_positive("frequency", frequency_ghz)?;
    Ok(constants.planck * frequency_ghz * GHZ)
}

/// Photon flux at one power level, on three time scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonRate {
    pub per_second: f64,
    pub per_picosecond: f64,
    pub per_femtosecond: f64,
}

/// Photons per unit time carried by `power_nw` at `frequency_ghz`.
pub fn photon_rate(power_nw: f64, frequency_ghz: f64, constants: &PhysicalConstants) -> Result<PhotonRate> {
    check_non_negative("power", power_nw)?;
    let per_second = power_nw * NANOWATT / photon_energy(frequency_ghz, constants)?;
    Ok(PhotonRate {
        per_second,
        per_picosecond: per_second * PICOSECOND,
        per_femtosecond: per_second * FEMTOSECOND,
    })
}

/// Power transmission through `path_m` of air at `attenuation_db_per_km`.
pub fn air_transmission(attenuation_db_per_km: f64, path_m: f64) -> Result<f64> {
    check_non_negative("air attenuation", attenuation_db_per_km)?;
    check_non_negative("path length", path_m)?;
    Ok(10f64.powf(-attenuation_db_per_km * (path_m / 1000.0) / 10.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub label: String,
    pub transmission: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub detected_power_nw: f64,
    pub measurement_solid_angle_sr: f64,
    pub emission_solid_angle_sr: f64,
    pub windows: Vec<Window>,
    pub air_attenuation_db_per_km: f64,
    pub path_length_m: f64,
    pub frequency_ghz: f64,
}

impl Default for LinkBudget {
    /// Cryostat-to-detector link: quartz and polythene windows, 10 cm of air
    /// at 1000 dB/km, 0.02 sr detector aperture, hemispherical emission.
    fn default() -> Self {
        Self {
            detected_power_nw: 0.194,
            measurement_solid_angle_sr: 0.02,
            emission_solid_angle_sr: 2.0 * PI,
            windows: vec![
                Window { label: "quartz".into(), transmission: 0.75 },
                Window { label: "polythene".into(), transmission: 0.90 },
            ],
            air_attenuation_db_per_km: 1000.0,
            path_length_m: 0.1,
            frequency_ghz: 750.0,
        }
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("detected power", self.detected_power_nw)?;
        if self.measurement_solid_angle_sr == 0.0 {
            return Err(Error::OutOfRange {
                name: "measurement solid angle",
                expected: "non-zero",
                value: 0.0,
            });
        }
        for (name, omega) in [
            ("measurement solid angle", self.measurement_solid_angle_sr),
            ("emission solid angle", self.emission_solid_angle_sr),
        ] {
            if !(omega > 0.0 && omega <= 4.0 * PI) {
                return Err(Error::OutOfRange {
                    name,
                    expected: "in (0, 4pi] sr",
                    value: omega,
                });
            }
        }
        for w in &self.windows {
            if !(w.transmission > 0.0 && w.transmission <= 1.0) {
                return Err(Error::OutOfRange {
                    name: "window transmission",
                    expected: "in (0, 1]",
                    value: w.transmission,
                });
            }
        }
        check_non_negative("air attenuation", self.air_attenuation_db_per_km)?;
        check_non_negative("path length", self.path_length_m)?;
        check_positive("frequency", self.frequency_ghz)?;
        Ok(())
    }
}

/// Every factor of the back-calculation, for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourcePowerEstimate {
    pub solid_angle_ratio: f64,
    pub window_transmissions: Vec<Window>,
    pub window_product: f64,
    pub air_transmission: f64,
    pub total_transmission: f64,
    pub source_power_nw: f64,
    pub detected_photon_rate: PhotonRate,
    pub source_photon_rate: PhotonRate,
}

/// Source power implied by the detected power after undoing the aperture
/// fraction and every transmission loss along the path.
pub fn source_power_estimate(budget: &LinkBudget, constants: &PhysicalConstants) -> Result<SourcePowerEstimate> {
    budget.validate()?;
    let solid_angle_ratio = budget.emission_solid_angle_sr / budget.measurement_solid_angle_sr;
    let window_product: f64 = budget.windows.iter().map(|w| w.transmission).product();
    let air = air_transmission(budget.air_attenuation_db_per_km, budget.path_length_m)?;
    let total_transmission = window_product * air;
    let source_power_nw = budget.detected_power_nw * solid_angle_ratio / total_transmission;
    Ok(SourcePowerEstimate {
        solid_angle_ratio,
        window_transmissions: budget.windows.clone(),
        window_product,
        air_transmission: air,
        total_transmission,
        source_power_nw,
        detected_photon_rate: photon_rate(budget.detected_power_nw, budget.frequency_ghz, constants)?,
        source_photon_rate: photon_rate(source_power_nw, budget.frequency_ghz, constants)?,
    })
}
