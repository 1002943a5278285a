//! Physical constants and unit conversions, kept in one place.

use serde::{Deserialize, Serialize};

/// Exact SI values (2019 redefinition) plus the BSCCO junction pitch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// elementary charge, C
    pub elementary_charge: f64,
    /// Planck constant, J s
    pub planck: f64,
    /// speed of light in vacuum, m/s
    pub speed_of_light: f64,
    /// thickness of one intrinsic junction, nm
    pub junction_thickness_nm: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        elementary_charge: 1.602_176_634e-19,
        planck: 6.626_070_15e-34,
        speed_of_light: 299_792_458.0,
        junction_thickness_nm: 1.533,
    };

    /// `2e/h` in GHz per volt.
    pub fn josephson_ghz_per_volt(&self) -> f64 {
        2.0 * self.elementary_charge / self.planck / GHZ
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

pub const GHZ: f64 = 1e9;
pub const MICROMETRE: f64 = 1e-6;
pub const NANOMETRE: f64 = 1e-9;
pub const NANOWATT: f64 = 1e-9;
pub const PICOSECOND: f64 = 1e-12;
pub const FEMTOSECOND: f64 = 1e-15;
