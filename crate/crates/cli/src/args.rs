use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mesa_core::Parity;

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "mesa", version, about = "Elliptical-mesa THz emitter analysis")]
pub struct Cli {
    /// JSON run configuration; command-line flags override its keys
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Directory for output files [default: config output.dir, else .]
    #[arg(long, global = true, env = "MESA_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate TM(m, r) cavity modes up to a maximum frequency
    Modes(ModesArgs),
    /// Sample one mode's field over the mesa (CSV grid and SVG heat map)
    FieldMap(FieldMapArgs),
    /// Fit integer junction counts to (voltage, frequency) branches
    FitJunctions(FitArgs),
    /// Convert bolometer read-out sweeps to power and photon rate
    Photons(PhotonArgs),
    /// Back-calculate source power through the free-space link
    LinkBudget(LinkArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GeometryArgs {
    #[arg(long)]
    pub semi_major_um: Option<f64>,
    #[arg(long)]
    pub semi_minor_um: Option<f64>,
    #[arg(long)]
    pub thickness_um: Option<f64>,
    #[arg(long)]
    pub refractive_index_sq: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub f_max_ghz: Option<f64>,
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub grid_step_q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Debug, Args)]
pub struct FieldMapArgs {
    #[arg(long, default_value = "even")]
    pub parity: Parity,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub scan: ScanArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with voltage_V, frequency_GHz and optional temperature_K, branch_id
    pub input: PathBuf,
    #[arg(long)]
    pub n_min: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PhotonArgs {
    /// CSV with bias_voltage, output_voltage_mV and optional temperature_K
    pub input: PathBuf,
    /// Detector preset (heb, si)
    #[arg(long, conflicts_with = "responsivity_mv_per_nw")]
    pub detector: Option<String>,
    /// Custom detector responsivity
    #[arg(long)]
    pub responsivity_mv_per_nw: Option<f64>,
    #[arg(long)]
    pub frequency_ghz: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    #[arg(long)]
    pub detected_power_nw: Option<f64>,
    #[arg(long)]
    pub measurement_solid_angle_sr: Option<f64>,
    #[arg(long)]
    pub emission_solid_angle_sr: Option<f64>,
    #[arg(long)]
    pub air_attenuation_db_per_km: Option<f64>,
    #[arg(long)]
    pub path_length_m: Option<f64>,
    #[arg(long)]
    pub frequency_ghz: Option<f64>,
}

fn set<T: Copy>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

impl GeometryArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.geometry.semi_major_um, self.semi_major_um);
        set(&mut cfg.geometry.semi_minor_um, self.semi_minor_um);
        set(&mut cfg.geometry.thickness_um, self.thickness_um);
        set(&mut cfg.geometry.refractive_index_sq, self.refractive_index_sq);
    }
}

impl ScanArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.scan.f_max_ghz, self.f_max_ghz);
        set(&mut cfg.scan.m_max, self.m_max);
        set(&mut cfg.scan.grid_step_q, self.grid_step_q);
        if self.q_max.is_some() {
            cfg.scan.q_max = self.q_max;
        }
    }
}

impl Command {
    /// Folds this command's flags into the configuration.
    pub fn apply(&self, cfg: &mut RunConfig) {
        match self {
            Command::Modes(a) => {
                a.geometry.apply(cfg);
                a.scan.apply(cfg);
            }
            Command::FieldMap(a) => {
                a.geometry.apply(cfg);
                a.scan.apply(cfg);
                set(&mut cfg.field_map.nx, a.nx);
                set(&mut cfg.field_map.ny, a.ny);
            }
            Command::FitJunctions(a) => {
                set(&mut cfg.junctions.n_min, a.n_min);
                set(&mut cfg.junctions.n_max, a.n_max);
            }
            Command::Photons(a) => {
                if let Some(name) = &a.detector {
                    cfg.detector.preset = Some(name.clone());
                    cfg.detector.responsivity_mv_per_nw = None;
                }
                if a.responsivity_mv_per_nw.is_some() {
                    cfg.detector.preset = None;
                    cfg.detector.responsivity_mv_per_nw = a.responsivity_mv_per_nw;
                }
                set(&mut cfg.photons.frequency_ghz, a.frequency_ghz);
            }
            Command::LinkBudget(a) => {
                let l = &mut cfg.link_budget;
                set(&mut l.detected_power_nw, a.detected_power_nw);
                set(&mut l.measurement_solid_angle_sr, a.measurement_solid_angle_sr);
                set(&mut l.emission_solid_angle_sr, a.emission_solid_angle_sr);
                set(&mut l.air_attenuation_db_per_km, a.air_attenuation_db_per_km);
                set(&mut l.path_length_m, a.path_length_m);
                set(&mut l.frequency_ghz, a.frequency_ghz);
            }
        }
    }
}
