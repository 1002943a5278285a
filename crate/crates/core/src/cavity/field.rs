//! Mode fields of the standalone mesa sampled on a Cartesian grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CavityMode, EllipseGeometry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub value: f64,
    pub d_mu: f64,
    pub d_nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridResolution {
    pub nx: usize,
    pub ny: usize,
}

impl GridResolution {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self { nx, ny }
    }
}

/// Field values on an `nx` by `ny` grid spanning `[-a, a] x [-b, b]`.
///
/// `values` is row-major with `y` outermost; points outside the ellipse are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMap {
    pub x_um: Vec<f64>,
    pub y_um: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl FieldMap {
    pub fn nx(&self) -> usize {
        self.x_um.len()
    }

    pub fn ny(&self) -> usize {
        self.y_um.len()
    }

    pub fn get(&self, ix: usize, iy: usize) -> Option<f64> {
        self.values[iy * self.nx() + ix]
    }

    /// Largest `|value|` over the unmasked points.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Evenly spaced points on `[-half, half]`, mirrored so that `p[i] == -p[n-1-i]` exactly.
fn symmetric_axis(half: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let mut pts: Vec<f64> = (0..n)
        .map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect();
    for i in 0..n / 2 {
        pts[n - 1 - i] = -pts[i];
    }
    if n % 2 == 1 {
        pts[n / 2] = 0.0;
    }
    pts
}

/// Samples `R(mu) A(v)` over the mesa; outside points are masked.
pub fn field_map(mode: &CavityMode, geom: &EllipseGeometry, resolution: GridResolution) -> Result<FieldMap> {
    if resolution.nx == 0 || resolution.ny == 0 {
        return Err(Error::OutOfRange {
            name: "grid resolution",
            expected: ">= 1 point per axis",
            value: 0.0,
        });
    }
    let (a, b) = (geom.semi_major_um(), geom.semi_minor_um());
    let x_um = symmetric_axis(a, resolution.nx);
    let y_um = symmetric_axis(b, resolution.ny);

    let rows: Vec<Vec<Option<f64>>> = y_um
        .par_iter()
        .map(|&y| {
            x_um.iter()
                .map(|&x| {
                    if (x / a).powi(2) + (y / b).powi(2) > 1.0 {
                        return Ok(None);
                    }
                    let (mu, nu) = geom.to_elliptic(x, y);
                    let radial = mode.solution.radial_value(mu)?;
                    Ok(Some(radial * mode.solution.angular_value(nu)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    Ok(FieldMap {
        x_um,
        y_um,
        values: rows.into_iter().flatten().collect(),
    })
}

/// Sign changes of the mode along the rim, sampled at `samples` points
/// offset by half a step from `v = 0`.
pub fn boundary_sign_changes(mode: &CavityMode, geom: &EllipseGeometry, samples: usize) -> Result<usize> {
    let mu0 = geom.mu0();
    let radial = mode.solution.radial_value(mu0)?;
    let signs: Vec<f64> = (0..samples)
        .map(|k| {
            let nu = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / samples as f64;
            radial * mode.solution.angular_value(nu)
        })
        .filter(|v| *v != 0.0)
        .map(f64::signum)
        .collect();
    if signs.is_empty() {
        return Ok(0);
    }
    let changes = (0..signs.len())
        .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
        .count();
    Ok(changes)
}
