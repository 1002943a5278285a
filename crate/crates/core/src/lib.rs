//! Analysis chain for elliptical-mesa intrinsic-Josephson-junction THz emitters.
//!
//! * [`mathieu`]: angular and radial Mathieu functions built from scratch
//! * [`cavity`]: elliptical geometry, TM(m, r) Neumann eigenmodes, field maps
//! * [`josephson`]: AC-Josephson frequency/voltage relation and junction fitting
//! * [`radiometry`]: bolometer power, photon rates and the free-space link budget

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod cavity;
pub mod constants;
pub mod error;
pub mod josephson;
pub mod mathieu;
pub mod radiometry;

pub use cavity::{CavityMode, EllipseGeometry, FieldMap, ScanOptions};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use josephson::{JosephsonBranch, VoltageFrequency};
pub use mathieu::{MathieuSolution, Parity};
pub use radiometry::{DetectorCalibration, LinkBudget, PhotonRate, SourcePowerEstimate};
