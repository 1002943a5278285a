//! TM eigenmodes of a thin elliptical cavity with an open (Neumann) edge.
//!
//! In confocal elliptic coordinates `x = l_f cosh(mu) cos(v)`,
//! `y = l_f sinh(mu) sin(v)` the rim of the mesa is `mu = mu0 = atanh(b/a)`.
//! A TM(m, r) mode is `Ce_m(mu, q) ce_m(v, q)` or `Se_m(mu, q) se_m(v, q)` with
//! `q` the r-th positive root of `d/dmu Ce_m(mu0, q) = 0` (resp. `Se_m`).
//! The in-plane wavevector follows from `q = k^2 l_f^2 / 4` and
//! `k = n omega / c`; the thickness direction carries no wavevector.

mod field;
mod scan;

use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, GHZ, MICROMETRE};
use crate::error::{check_non_negative, Error, Result};
use crate::mathieu::{MathieuSolution, Parity};

pub use field::{boundary_sign_changes, field_map, FieldMap, FieldPoint, GridResolution};
pub use scan::{boundary_derivative, enumerate_modes, find_mode, neumann_roots, ScanOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseGeometry {
    semi_major_um: f64,
    semi_minor_um: f64,
    thickness_um: f64,
    refractive_index_sq: f64,
}

impl EllipseGeometry {
    pub fn new(semi_major_um: f64, semi_minor_um: f64, thickness_um: f64, refractive_index_sq: f64) -> Result<Self> {
        let finite = [semi_major_um, semi_minor_um, thickness_um, refractive_index_sq]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGeometry("all geometry values must be finite".into()));
        }
        if !(semi_minor_um > 0.0) {
            return Err(Error::InvalidGeometry(format!("semi-minor axis must be > 0 (got {semi_minor_um} um)")));
        }
        if semi_minor_um >= semi_major_um {
            return Err(Error::InvalidGeometry(format!(
                "semi-minor axis {semi_minor_um} um must be smaller than semi-major axis {semi_major_um} um"
            )));
        }
        if !(thickness_um > 0.0) {
            return Err(Error::InvalidGeometry(format!("thickness must be > 0 (got {thickness_um} um)")));
        }
        if !(refractive_index_sq > 1.0) {
            return Err(Error::InvalidGeometry(format!(
                "refractive index squared must be > 1 (got {refractive_index_sq})"
            )));
        }
        Ok(Self {
            semi_major_um,
            semi_minor_um,
            thickness_um,
            refractive_index_sq,
        })
    }

    /// The BSCCO mesa: a = 245 um, b = 52 um, d = 1 um, n^2 = 17.76.
    pub fn bscco_mesa() -> Self {
        Self::new(245.0, 52.0, 1.0, 17.76).expect("reference geometry is valid")
    }

    pub fn semi_major_um(&self) -> f64 {
        self.semi_major_um
    }

    pub fn semi_minor_um(&self) -> f64 {
        self.semi_minor_um
    }

    pub fn thickness_um(&self) -> f64 {
        self.thickness_um
    }

    pub fn refractive_index_sq(&self) -> f64 {
        self.refractive_index_sq
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index_sq.sqrt()
    }

    /// Elliptic radial coordinate of the rim, `atanh(b/a)`.
    pub fn mu0(&self) -> f64 {
        (self.semi_minor_um / self.semi_major_um).atanh()
    }

    /// Half the distance between the foci, um.
    pub fn focal_length_um(&self) -> f64 {
        let (a, b) = (self.semi_major_um, self.semi_minor_um);
        ((a - b) * (a + b)).sqrt()
    }

    /// Same shape with both semi-axes multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.semi_major_um * factor,
            self.semi_minor_um * factor,
            self.thickness_um,
            self.refractive_index_sq,
        )
    }

    pub fn with_refractive_index_sq(&self, refractive_index_sq: f64) -> Result<Self> {
        Self::new(self.semi_major_um, self.semi_minor_um, self.thickness_um, refractive_index_sq)
    }

    /// Metric scale factor `h = l_f sqrt(sinh^2 mu + sin^2 v)`, um.
    pub fn scale_factor(&self, mu: f64, nu: f64) -> f64 {
        self.focal_length_um() * (mu.sinh().powi(2) + nu.sin().powi(2)).sqrt()
    }

    /// Cartesian position (um) of elliptic point `(mu, v)`.
    pub fn to_cartesian(&self, mu: f64, nu: f64) -> (f64, f64) {
        let lf = self.focal_length_um();
        (lf * mu.cosh() * nu.cos(), lf * mu.sinh() * nu.sin())
    }

    /// Elliptic coordinates `(mu, v)` of a Cartesian point, `v` in `[-pi, pi]`.
    ///
    /// Uses the roots of `l_f^2 s^2 - (x^2 + y^2 - l_f^2) s - y^2 = 0` for
    /// `sinh^2 mu` and `sin^2 v`, picking the cancellation-free form of each,
    /// so points on the focal segment map to `mu = 0` exactly.
    pub fn to_elliptic(&self, x_um: f64, y_um: f64) -> (f64, f64) {
        let lf = self.focal_length_um();
        let (x, y) = (x_um / lf, y_um / lf);
        let p = x * x + y * y - 1.0;
        let r = p.hypot(2.0 * y);
        let (sinh2, sin2) = if p >= 0.0 {
            let big = p + r;
            (0.5 * big, if big > 0.0 { 2.0 * y * y / big } else { 0.0 })
        } else {
            let big = r - p;
            (2.0 * y * y / big, 0.5 * big)
        };
        let mu = sinh2.sqrt().asinh();
        let base = sin2.sqrt().min(1.0).asin();
        let nu = if x < 0.0 { std::f64::consts::PI - base } else { base };
        (mu, if y < 0.0 { -nu } else { nu })
    }
}

/// `(mu0, l_f)` for a geometry: the rim coordinate and the focal half-distance in um.
pub fn derive_coordinates(geom: &EllipseGeometry) -> (f64, f64) {
    (geom.mu0(), geom.focal_length_um())
}

/// Mode frequency (GHz) for Mathieu parameter `q`: `f = c sqrt(q) / (pi n l_f)`.
pub fn frequency_from_q(q: f64, geom: &EllipseGeometry) -> Result<f64> {
    check_non_negative("q", q)?;
    let c = PhysicalConstants::CODATA.speed_of_light;
    let lf = geom.focal_length_um() * MICROMETRE;
    Ok(c * q.sqrt() / (std::f64::consts::PI * geom.refractive_index() * lf) / GHZ)
}

/// Inverse of [`frequency_from_q`].
pub fn q_from_frequency(frequency_ghz: f64, geom: &EllipseGeometry) -> Result<f64> {
    check_non_negative("frequency", frequency_ghz)?;
    let c = PhysicalConstants::CODATA.speed_of_light;
    let lf = geom.focal_length_um() * MICROMETRE;
    let root = std::f64::consts::PI * geom.refractive_index() * lf * frequency_ghz * GHZ / c;
    Ok(root * root)
}

/// One TM(m, r) eigenmode of the standalone mesa.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityMode {
    pub parity: Parity,
    pub m: u32,
    pub r: usize,
    pub q_root: f64,
    pub frequency_ghz: f64,
    /// `|d/dmu R(mu0, q_root)|` over the largest `|d/dmu R(mu0, q)|` at the
    /// ends of the scan bracket that isolated the root.
    pub boundary_residual: f64,
    pub solution: MathieuSolution,
}

impl CavityMode {
    /// Mode field and its elliptic-coordinate derivatives at `(mu, v)`.
    pub fn field_at(&self, mu: f64, nu: f64) -> Result<FieldPoint> {
        let radial = self.solution.radial_jet(mu)?;
        let angular = self.solution.angular_jet(nu);
        Ok(FieldPoint {
            value: radial.value * angular.value,
            d_mu: radial.d1 * angular.value,
            d_nu: radial.value * angular.d1,
        })
    }

    /// `TM(m,r)` label with parity, e.g. `even TM(2,1)`.
    pub fn label(&self) -> String {
        format!("{} TM({},{})", self.parity, self.m, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_coordinates() {
        let g = EllipseGeometry::bscco_mesa();
        let (mu0, lf) = derive_coordinates(&g);
        assert!((mu0 - 0.215521).abs() < 1e-6, "{mu0}");
        assert!((lf - 239.418).abs() < 1e-3, "{lf}");
        assert_relative_eq!(lf * mu0.cosh(), 245.0, max_relative = 1e-14);
        assert_relative_eq!(lf * mu0.sinh(), 52.0, max_relative = 1e-13);
    }

    #[test]
    fn similarity_keeps_mu0() {
        let g = EllipseGeometry::bscco_mesa();
        let big = EllipseGeometry::new(490.0, 104.0, 1.0, 17.76).unwrap();
        assert_relative_eq!(big.mu0(), g.mu0(), max_relative = 1e-15);
        assert_relative_eq!(big.focal_length_um(), 2.0 * g.focal_length_um(), max_relative = 1e-15);
    }

    #[test]
    fn degenerate_geometries_rejected() {
        assert!(EllipseGeometry::new(52.0, 52.0, 1.0, 17.76).is_err());
        assert!(EllipseGeometry::new(50.0, 52.0, 1.0, 17.76).is_err());
        assert!(EllipseGeometry::new(245.0, 0.0, 1.0, 17.76).is_err());
        assert!(EllipseGeometry::new(245.0, 52.0, 0.0, 17.76).is_err());
        assert!(EllipseGeometry::new(245.0, 52.0, 1.0, 1.0).is_err());
        assert!(EllipseGeometry::new(f64::NAN, 52.0, 1.0, 17.76).is_err());
    }

    #[test]
    fn q_to_frequency() {
        let g = EllipseGeometry::bscco_mesa();
        let f = frequency_from_q(55.20466, &g).unwrap();
        assert!((f - 702.7).abs() < 0.05, "{f}");
        assert!((f - 701.66).abs() / 701.66 < 0.005);
        let f1 = frequency_from_q(14.6126, &g).unwrap();
        assert!((f1 - 361.5).abs() < 0.1, "{f1}");
        assert_eq!(frequency_from_q(0.0, &g).unwrap(), 0.0);
        assert!(frequency_from_q(-1.0, &g).is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let g = EllipseGeometry::bscco_mesa();
        for &(mu, nu) in &[(0.1, 0.4), (0.2, 2.0), (0.05, -1.3), (0.21, -2.9), (1e-7, 0.8), (0.3, 1.57)] {
            let (x, y) = g.to_cartesian(mu, nu);
            let (m2, n2) = g.to_elliptic(x, y);
            assert_relative_eq!(m2, mu, max_relative = 1e-9);
            assert_relative_eq!(n2, nu, max_relative = 1e-9);
        }
        assert_eq!(g.to_elliptic(100.0, 0.0).0, 0.0);
        assert_eq!(g.to_elliptic(-100.0, 0.0), (0.0, (-100.0 / g.focal_length_um()).acos()));
        let (mu, nu) = g.to_elliptic(0.0, -30.0);
        assert_relative_eq!(nu, -std::f64::consts::FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(g.focal_length_um() * mu.sinh(), 30.0, max_relative = 1e-14);
    }
}
