//! JSON run configuration. Every physical quantity carries its unit in the key.

use std::path::{Path, PathBuf};

use mesa_core::cavity::q_from_frequency;
use mesa_core::josephson::{DEFAULT_N_MAX, DEFAULT_N_MIN};
use mesa_core::radiometry::{Window, LOCKIN_COEFFICIENT};
use mesa_core::{DetectorCalibration, EllipseGeometry, LinkBudget, PhysicalConstants, ScanOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub constants: ConstantsConfig,
    pub detector: DetectorConfig,
    pub scan: ScanConfig,
    pub field_map: FieldMapConfig,
    pub junctions: JunctionConfig,
    pub photons: PhotonConfig,
    pub link_budget: LinkBudgetConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub semi_major_um: f64,
    pub semi_minor_um: f64,
    pub thickness_um: f64,
    pub refractive_index_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub elementary_charge_c: f64,
    pub planck_j_s: f64,
    pub junction_thickness_nm: f64,
}

/// Either a named preset (`heb`, `si`) or a custom responsivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub preset: Option<String>,
    pub responsivity_mv_per_nw: Option<f64>,
    pub lockin_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub f_max_ghz: f64,
    pub m_max: u32,
    /// search limit for single-mode lookups; derived from `f_max_ghz` when absent
    pub q_max: Option<f64>,
    pub grid_step_q: f64,
    pub max_refinements: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldMapConfig {
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JunctionConfig {
    pub n_min: u32,
    pub n_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhotonConfig {
    pub frequency_ghz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub label: String,
    pub transmission: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkBudgetConfig {
    pub detected_power_nw: f64,
    pub measurement_solid_angle_sr: f64,
    pub emission_solid_angle_sr: f64,
    pub windows: Vec<WindowConfig>,
    pub air_attenuation_db_per_km: f64,
    pub path_length_m: f64,
    pub frequency_ghz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        let g = EllipseGeometry::bscco_mesa();
        Self {
            semi_major_um: g.semi_major_um(),
            semi_minor_um: g.semi_minor_um(),
            thickness_um: g.thickness_um(),
            refractive_index_sq: g.refractive_index_sq(),
        }
    }
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        let c = PhysicalConstants::CODATA;
        Self {
            elementary_charge_c: c.elementary_charge,
            planck_j_s: c.planck,
            junction_thickness_nm: c.junction_thickness_nm,
        }
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            preset: Some("heb".into()),
            responsivity_mv_per_nw: None,
            lockin_coefficient: LOCKIN_COEFFICIENT,
        }
    }
}

impl Default for ScanConfig {
    fn default() -> Self {
        let opts = ScanOptions::default();
        Self {
            f_max_ghz: 1500.0,
            m_max: opts.m_max,
            q_max: None,
            grid_step_q: opts.grid_step,
            max_refinements: opts.max_refinements,
        }
    }
}

impl Default for FieldMapConfig {
    fn default() -> Self {
        Self { nx: 197, ny: 43 }
    }
}

impl Default for JunctionConfig {
    fn default() -> Self {
        Self {
            n_min: DEFAULT_N_MIN,
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl Default for PhotonConfig {
    fn default() -> Self {
        Self { frequency_ghz: 750.0 }
    }
}

impl Default for LinkBudgetConfig {
    fn default() -> Self {
        let b = LinkBudget::default();
        Self {
            detected_power_nw: b.detected_power_nw,
            measurement_solid_angle_sr: b.measurement_solid_angle_sr,
            emission_solid_angle_sr: b.emission_solid_angle_sr,
            windows: b
                .windows
                .into_iter()
                .map(|w| WindowConfig { label: w.label, transmission: w.transmission })
                .collect(),
            air_attenuation_db_per_km: b.air_attenuation_db_per_km,
            path_length_m: b.path_length_m,
            frequency_ghz: b.frequency_ghz,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            formats: vec![Format::Csv, Format::Json, Format::Svg],
        }
    }
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{name} must be finite and > 0 (got {v})")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Checks every section, so a bad value is reported before any work starts.
    pub fn validate(&self) -> CliResult<()> {
        self.geometry()?;
        self.constants()?;
        self.detector()?;
        self.scan_options()?;
        positive("scan.f_max_ghz", self.scan.f_max_ghz)?;
        if let Some(q) = self.scan.q_max {
            positive("scan.q_max", q)?;
        }
        if self.field_map.nx == 0 || self.field_map.ny == 0 {
            return Err(CliError::Invalid("field_map.nx and field_map.ny must be >= 1".into()));
        }
        if self.field_map.nx * self.field_map.ny > 4_000_000 {
            return Err(CliError::Invalid("field map larger than 4e6 points".into()));
        }
        let j = &self.junctions;
        if j.n_min == 0 || j.n_min > j.n_max {
            return Err(CliError::Invalid(format!(
                "junctions range [{}, {}] must be non-empty and start at >= 1",
                j.n_min, j.n_max
            )));
        }
        positive("photons.frequency_ghz", self.photons.frequency_ghz)?;
        self.link_budget()?;
        Ok(())
    }

    pub fn geometry(&self) -> CliResult<EllipseGeometry> {
        let g = &self.geometry;
        EllipseGeometry::new(g.semi_major_um, g.semi_minor_um, g.thickness_um, g.refractive_index_sq)
            .map_err(|e| CliError::Invalid(e.to_string()))
    }

    pub fn constants(&self) -> CliResult<PhysicalConstants> {
        let c = &self.constants;
        positive("constants.elementary_charge_c", c.elementary_charge_c)?;
        positive("constants.planck_j_s", c.planck_j_s)?;
        positive("constants.junction_thickness_nm", c.junction_thickness_nm)?;
        Ok(PhysicalConstants {
            elementary_charge: c.elementary_charge_c,
            planck: c.planck_j_s,
            junction_thickness_nm: c.junction_thickness_nm,
            ..PhysicalConstants::CODATA
        })
    }

    pub fn detector(&self) -> CliResult<DetectorCalibration> {
        let d = &self.detector;
        let invalid = |e: mesa_core::Error| CliError::Invalid(e.to_string());
        match (&d.preset, d.responsivity_mv_per_nw) {
            (Some(_), Some(_)) => Err(CliError::Invalid(
                "detector: give either preset or responsivity_mv_per_nw, not both".into(),
            )),
            (Some(name), None) => {
                let preset = DetectorCalibration::preset(name)
                    .ok_or_else(|| CliError::Invalid(format!("unknown detector preset `{name}` (expected heb or si)")))?;
                DetectorCalibration::with_coefficient(preset.name, preset.responsivity_mv_per_nw, d.lockin_coefficient)
                    .map_err(invalid)
            }
            (None, Some(alpha)) => {
                DetectorCalibration::with_coefficient("custom", alpha, d.lockin_coefficient).map_err(invalid)
            }
            (None, None) => Err(CliError::Invalid("detector: preset or responsivity_mv_per_nw required".into())),
        }
    }

    pub fn scan_options(&self) -> CliResult<ScanOptions> {
        positive("scan.grid_step_q", self.scan.grid_step_q)?;
        Ok(ScanOptions {
            grid_step: self.scan.grid_step_q,
            max_refinements: self.scan.max_refinements,
            m_max: self.scan.m_max,
        })
    }

    /// Search limit for single-mode lookups.
    pub fn q_max(&self) -> CliResult<f64> {
        match self.scan.q_max {
            Some(q) => Ok(q),
            None => Ok(q_from_frequency(self.scan.f_max_ghz, &self.geometry()?)?),
        }
    }

    pub fn link_budget(&self) -> CliResult<LinkBudget> {
        let l = &self.link_budget;
        let budget = LinkBudget {
            detected_power_nw: l.detected_power_nw,
            measurement_solid_angle_sr: l.measurement_solid_angle_sr,
            emission_solid_angle_sr: l.emission_solid_angle_sr,
            windows: l
                .windows
                .iter()
                .map(|w| Window { label: w.label.clone(), transmission: w.transmission })
                .collect(),
            air_attenuation_db_per_km: l.air_attenuation_db_per_km,
            path_length_m: l.path_length_m,
            frequency_ghz: l.frequency_ghz,
        };
        budget
            .validate()
            .map_err(|e| CliError::Invalid(format!("link_budget: {e}")))?;
        Ok(budget)
    }

    pub fn wants(&self, format: Format) -> bool {
        self.output.formats.contains(&format)
    }

    /// SHA-256 of the effective configuration, output location excluded.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputConfig::default();
        let bytes = serde_json::to_vec(&canonical).expect("config serialises");
        hex::encode(Sha256::digest(&bytes))
    }
}
