//! AC-Josephson relation `f = 2eV / (hN)` for a stack of `N` junctions in
//! series, junction counting from mesa thickness, and exhaustive integer
//! fitting of `N` to measured (voltage, frequency) branches.

use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, MICROMETRE, NANOMETRE};
use crate::error::{check_positive, Error, Result};

/// Default junction-number search range.
pub const DEFAULT_N_MIN: u32 = 100;
pub const DEFAULT_N_MAX: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoltageFrequency {
    /// bias voltage across the whole stack, V
    pub voltage: f64,
    /// emission frequency, GHz
    pub frequency_ghz: f64,
}

/// A set of emission points with its best integer junction count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JosephsonBranch {
    pub points: Vec<VoltageFrequency>,
    pub fitted_n: u32,
    /// RMS of `f_i - 2eV_i/(hN)` at `fitted_n`, GHz
    pub residual_rms_ghz: f64,
}

/// Emission frequency in GHz for bias `voltage` (V) across `junctions` junctions.
pub fn frequency_from_voltage(voltage: f64, junctions: u32, constants: &PhysicalConstants) -> Result<f64> {
    check_positive("voltage", voltage)?;
    if junctions == 0 {
        return Err(Error::OutOfRange {
            name: "junction count",
            expected: ">= 1",
            value: 0.0,
        });
    }
    Ok(constants.josephson_ghz_per_volt() * voltage / junctions as f64)
}

/// Non-integer junction count implied by frequency `frequency_ghz` at bias `voltage`.
pub fn junctions_from_fv(frequency_ghz: f64, voltage: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_positive("frequency", frequency_ghz)?;
    check_positive("voltage", voltage)?;
    Ok(constants.josephson_ghz_per_volt() * voltage / frequency_ghz)
}

/// Number of junctions in a stack of thickness `thickness_um`, rounded.
pub fn total_junctions_from_thickness(thickness_um: f64, constants: &PhysicalConstants) -> Result<u64> {
    check_positive("thickness", thickness_um)?;
    let ratio = thickness_um * MICROMETRE / (constants.junction_thickness_nm * NANOMETRE);
    Ok(ratio.round() as u64)
}

fn rms_residual(points: &[VoltageFrequency], k: f64, n: u32) -> f64 {
    let n = n as f64;
    let ss: f64 = points
        .iter()
        .map(|p| {
            let r = p.frequency_ghz - k * p.voltage / n;
            r * r
        })
        .sum();
    (ss / points.len() as f64).sqrt()
}

/// Exhaustive search for the integer `N` in `[n_min, n_max]` minimising the
/// RMS frequency residual. Ties go to the smaller `N`.
pub fn fit_branch_junctions(
    points: &[VoltageFrequency],
    n_min: u32,
    n_max: u32,
    constants: &PhysicalConstants,
) -> Result<JosephsonBranch> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidJunctionRange { min: n_min, max: n_max });
    }
    for p in points {
        if !p.voltage.is_finite() || !p.frequency_ghz.is_finite() {
            return Err(Error::OutOfRange {
                name: "branch point",
                expected: "finite",
                value: if p.voltage.is_finite() { p.frequency_ghz } else { p.voltage },
            });
        }
    }
    if points.iter().all(|p| p.voltage == 0.0) {
        return Err(Error::ZeroVoltages);
    }

    let k = constants.josephson_ghz_per_volt();
    let (fitted_n, residual_rms_ghz) = (n_min..=n_max)
        .map(|n| (n, rms_residual(points, k, n)))
        .fold((n_min, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });

    Ok(JosephsonBranch {
        points: points.to_vec(),
        fitted_n,
        residual_rms_ghz,
    })
}

/// RMS residual of a branch at an arbitrary junction count.
pub fn branch_residual(points: &[VoltageFrequency], n: u32, constants: &PhysicalConstants) -> f64 {
    rms_residual(points, constants.josephson_ghz_per_volt(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const C: PhysicalConstants = PhysicalConstants::CODATA;

    #[test]
    fn frequency_at_400_junctions() {
        // 483597.8484 * 0.6204 / 400
        let f = frequency_from_voltage(0.6204, 400, &C).unwrap();
        assert_relative_eq!(f, 750.0602, max_relative = 1e-6);
        assert!((f - 750.06).abs() < 0.005);
    }

    #[test]
    fn inverse_relation() {
        let n = junctions_from_fv(750.0, 0.6204, &C).unwrap();
        assert!((n - 400.0).abs() < 0.05, "{n}");
        let f1 = frequency_from_voltage(0.3, 350, &C).unwrap();
        let f2 = frequency_from_voltage(0.6, 350, &C).unwrap();
        assert_relative_eq!(f2, 2.0 * f1, max_relative = 1e-15);
    }

    #[test]
    fn junction_count_from_thickness() {
        assert_eq!(total_junctions_from_thickness(1.0, &C).unwrap(), 652);
        assert_eq!(total_junctions_from_thickness(0.001533, &C).unwrap(), 1);
        assert_eq!(total_junctions_from_thickness(0.766, &C).unwrap(), 500);
        assert!(total_junctions_from_thickness(0.0, &C).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(frequency_from_voltage(-1.0, 10, &C).is_err());
        assert!(frequency_from_voltage(1.0, 0, &C).is_err());
        assert!(junctions_from_fv(0.0, 1.0, &C).is_err());
        let pts = [VoltageFrequency { voltage: 0.5, frequency_ghz: 600.0 }];
        assert_eq!(fit_branch_junctions(&[], 1, 10, &C), Err(Error::EmptyPoints));
        assert_eq!(fit_branch_junctions(&pts, 1, 10, &C), Err(Error::TooFewPoints(1)));
        let zero = [
            VoltageFrequency { voltage: 0.0, frequency_ghz: 1.0 },
            VoltageFrequency { voltage: 0.0, frequency_ghz: 2.0 },
        ];
        assert_eq!(fit_branch_junctions(&zero, 1, 10, &C), Err(Error::ZeroVoltages));
        let two = [pts[0], pts[0]];
        assert!(matches!(fit_branch_junctions(&two, 0, 10, &C), Err(Error::InvalidJunctionRange { .. })));
        assert!(matches!(fit_branch_junctions(&two, 11, 10, &C), Err(Error::InvalidJunctionRange { .. })));
    }

    #[test]
    fn noiseless_branch_recovers_planted_count() {
        let pts: Vec<_> = (0..12)
            .map(|i| {
                let v = 0.55 + 0.01 * i as f64;
                VoltageFrequency { voltage: v, frequency_ghz: frequency_from_voltage(v, 400, &C).unwrap() }
            })
            .collect();
        let fit = fit_branch_junctions(&pts, 300, 500, &C).unwrap();
        assert_eq!(fit.fitted_n, 400);
        assert!(fit.residual_rms_ghz < 1e-9);
    }

    #[test]
    fn ties_go_to_smaller_count() {
        // one point on each prediction: the two residual sums are bit-identical
        let k = C.josephson_ghz_per_volt();
        let v = 1.0;
        let pts = [
            VoltageFrequency { voltage: v, frequency_ghz: k * v / 10.0 },
            VoltageFrequency { voltage: v, frequency_ghz: k * v / 11.0 },
        ];
        assert_eq!(branch_residual(&pts, 10, &C), branch_residual(&pts, 11, &C));
        let fit = fit_branch_junctions(&pts, 10, 11, &C).unwrap();
        assert_eq!(fit.fitted_n, 10);
    }
}
