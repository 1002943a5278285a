//! The five subcommands. Each returns the files it wrote plus a short
//! human-readable summary for stdout.

use std::path::{Path, PathBuf};

use mesa_core::cavity::{enumerate_modes, field_map, find_mode, GridResolution};
use mesa_core::josephson::fit_branch_junctions;
use mesa_core::radiometry::{photon_rate, power_from_output_voltage, source_power_estimate};
use mesa_core::{CavityMode, Parity};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliResult;
use crate::input::{read_branches, read_sweep, InputFile};
use crate::output::{csv_text, field_svg, fixed, sci, write_file, Stamp, TOOL, VERSION};

#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config_sha256: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<&'a str>,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(stamp: &Stamp, body: T) -> String {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        config_sha256: &stamp.config_sha256,
        input_sha256: stamp.input_sha256.as_deref(),
        body,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("serialisable");
    text.push('\n');
    text
}

#[derive(Debug, Serialize)]
pub struct ModeRow {
    pub parity: Parity,
    pub m: u32,
    pub r: usize,
    pub q: f64,
    pub f_ghz: f64,
    pub residual: f64,
}

impl From<&CavityMode> for ModeRow {
    fn from(m: &CavityMode) -> Self {
        Self {
            parity: m.parity,
            m: m.m,
            r: m.r,
            q: m.q_root,
            f_ghz: m.frequency_ghz,
            residual: m.boundary_residual,
        }
    }
}

pub fn modes(cfg: &RunConfig, out: &Path) -> CliResult<Report> {
    let geom = cfg.geometry()?;
    let modes = enumerate_modes(&geom, cfg.scan.f_max_ghz, &cfg.scan_options()?)?;
    let stamp = Stamp { config_sha256: cfg.digest(), input_sha256: None };
    let rows: Vec<ModeRow> = modes.iter().map(ModeRow::from).collect();
    let mut report = Report::default();

    if cfg.wants(Format::Csv) {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.parity.to_string(),
                    r.m.to_string(),
                    r.r.to_string(),
                    fixed(r.q, 10),
                    fixed(r.f_ghz, 2),
                    sci(r.residual),
                ]
            })
            .collect();
        let text = csv_text(&stamp, &["parity", "m", "r", "q", "f_GHz", "residual"], &cells);
        report.files.push(write_file(out, "modes.csv", &text)?);
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Body<'a> {
            geometry: &'a crate::config::GeometryConfig,
            mu0: f64,
            focal_length_um: f64,
            f_max_ghz: f64,
            modes: &'a [ModeRow],
        }
        let text = json(
            &stamp,
            Body {
                geometry: &cfg.geometry,
                mu0: geom.mu0(),
                focal_length_um: geom.focal_length_um(),
                f_max_ghz: cfg.scan.f_max_ghz,
                modes: &rows,
            },
        );
        report.files.push(write_file(out, "modes.json", &text)?);
    }

    let mut s = format!(
        "{} mode(s) up to {} GHz (mu0 = {:.6}, l_f = {:.3} um)\n",
        rows.len(),
        cfg.scan.f_max_ghz,
        geom.mu0(),
        geom.focal_length_um()
    );
    s.push_str("parity  m  r            q       f_GHz\n");
    for r in &rows {
        s.push_str(&format!("{:<6} {:>2} {:>2} {:>12.6} {:>11.2}\n", r.parity.as_str(), r.m, r.r, r.q, r.f_ghz));
    }
    report.summary = s;
    Ok(report)
}

pub fn field(cfg: &RunConfig, out: &Path, parity: Parity, m: u32, r: usize) -> CliResult<Report> {
    let geom = cfg.geometry()?;
    let mode = find_mode(parity, m, r, &geom, cfg.q_max()?, &cfg.scan_options()?)?;
    let map = field_map(&mode, &geom, GridResolution::new(cfg.field_map.nx, cfg.field_map.ny))?;
    let stamp = Stamp { config_sha256: cfg.digest(), input_sha256: None };
    let stem = format!("field_{}_{}_{}", parity, m, r);
    let scale = map.max_abs();
    let mut report = Report::default();

    if cfg.wants(Format::Csv) {
        let mut cells = Vec::with_capacity(map.values.len());
        for (iy, y) in map.y_um.iter().enumerate() {
            for (ix, x) in map.x_um.iter().enumerate() {
                let v = map.get(ix, iy).map_or(String::new(), |v| fixed(if scale > 0.0 { v / scale } else { 0.0 }, 9));
                cells.push(vec![fixed(*x, 6), fixed(*y, 6), v]);
            }
        }
        let text = csv_text(&stamp, &["x_um", "y_um", "field"], &cells);
        report.files.push(write_file(out, &format!("{stem}.csv"), &text)?);
    }
    if cfg.wants(Format::Svg) {
        let title = format!("{} at {:.2} GHz (q = {:.6})", mode.label(), mode.frequency_ghz, mode.q_root);
        report.files.push(write_file(out, &format!("{stem}.svg"), &field_svg(&map, &title, &stamp))?);
    }
    report.summary = format!(
        "{}: q = {:.6}, f = {:.2} GHz, {} x {} grid, {} interior points\n",
        mode.label(),
        mode.q_root,
        mode.frequency_ghz,
        map.nx(),
        map.ny(),
        map.values.iter().flatten().count()
    );
    Ok(report)
}

pub fn fit_junctions(cfg: &RunConfig, out: &Path, input: &Path) -> CliResult<Report> {
    let file = InputFile::read(input)?;
    let branches = read_branches(&file)?;
    let constants = cfg.constants()?;
    let stamp = Stamp { config_sha256: cfg.digest(), input_sha256: Some(file.sha256()) };
    let k = constants.josephson_ghz_per_volt();

    let mut summary_rows = Vec::new();
    let mut point_rows = Vec::new();
    let mut s = format!("junction fit over N in [{}, {}]\n", cfg.junctions.n_min, cfg.junctions.n_max);
    for b in &branches {
        let fit = fit_branch_junctions(&b.points, cfg.junctions.n_min, cfg.junctions.n_max, &constants)?;
        let temperature = if b.temperatures_k.is_empty() {
            String::new()
        } else {
            fixed(b.temperatures_k.iter().sum::<f64>() / b.temperatures_k.len() as f64, 3)
        };
        summary_rows.push(vec![
            b.id.clone(),
            b.points.len().to_string(),
            fit.fitted_n.to_string(),
            fixed(fit.residual_rms_ghz, 6),
            temperature,
        ]);
        for p in &b.points {
            let model = k * p.voltage / fit.fitted_n as f64;
            point_rows.push(vec![
                b.id.clone(),
                fixed(p.voltage, 9),
                fixed(p.frequency_ghz, 6),
                fixed(model, 6),
                fixed(p.frequency_ghz - model, 6),
            ]);
        }
        s.push_str(&format!(
            "branch {}: N = {} (rms {:.4} GHz, {} points)\n",
            b.id,
            fit.fitted_n,
            fit.residual_rms_ghz,
            b.points.len()
        ));
    }

    let mut report = Report { summary: s, ..Report::default() };
    let text = csv_text(
        &stamp,
        &["branch_id", "points", "fitted_N", "residual_rms_GHz", "mean_temperature_K"],
        &summary_rows,
    );
    report.files.push(write_file(out, "junctions.csv", &text)?);
    let text = csv_text(
        &stamp,
        &["branch_id", "voltage_V", "frequency_GHz", "model_GHz", "residual_GHz"],
        &point_rows,
    );
    report.files.push(write_file(out, "junction_points.csv", &text)?);
    Ok(report)
}

pub fn photons(cfg: &RunConfig, out: &Path, input: &Path) -> CliResult<Report> {
    let file = InputFile::read(input)?;
    let sweep = read_sweep(&file)?;
    let detector = cfg.detector()?;
    let constants = cfg.constants()?;
    let f = cfg.photons.frequency_ghz;
    let stamp = Stamp { config_sha256: cfg.digest(), input_sha256: Some(file.sha256()) };

    let mut rows = Vec::with_capacity(sweep.len());
    let mut peak = 0.0f64;
    for p in &sweep {
        let power = power_from_output_voltage(p.output_voltage_mv, &detector)?;
        let rate = photon_rate(power, f, &constants)?;
        peak = peak.max(power);
        rows.push(vec![
            fixed(p.bias_voltage, 6),
            p.temperature_k.map_or(String::new(), |t| fixed(t, 3)),
            fixed(power, 6),
            fixed(rate.per_picosecond, 6),
        ]);
    }
    let text = csv_text(&stamp, &["bias_voltage", "temperature_K", "power_nW", "photons_per_ps"], &rows);
    let path = write_file(out, "photons.csv", &text)?;
    Ok(Report {
        files: vec![path],
        summary: format!(
            "{} points, {} detector ({} mV/nW), {} GHz, peak {:.4} nW\n",
            rows.len(),
            detector.name,
            detector.responsivity_mv_per_nw,
            f,
            peak
        ),
    })
}

pub fn link_budget(cfg: &RunConfig, out: &Path) -> CliResult<Report> {
    let budget = cfg.link_budget()?;
    let est = source_power_estimate(&budget, &cfg.constants()?)?;
    let stamp = Stamp { config_sha256: cfg.digest(), input_sha256: None };

    let mut factors: Vec<(String, f64, &str)> = vec![
        ("detected_power".into(), budget.detected_power_nw, "nW"),
        ("emission_solid_angle".into(), budget.emission_solid_angle_sr, "sr"),
        ("measurement_solid_angle".into(), budget.measurement_solid_angle_sr, "sr"),
        ("solid_angle_ratio".into(), est.solid_angle_ratio, "1"),
    ];
    for w in &est.window_transmissions {
        factors.push((format!("window_{}", w.label), w.transmission, "1"));
    }
    factors.extend([
        ("window_product".into(), est.window_product, "1"),
        ("air_attenuation".into(), budget.air_attenuation_db_per_km, "dB/km"),
        ("path_length".into(), budget.path_length_m, "m"),
        ("air_transmission".into(), est.air_transmission, "1"),
        ("total_transmission".into(), est.total_transmission, "1"),
        ("source_power".into(), est.source_power_nw, "nW"),
        ("frequency".into(), budget.frequency_ghz, "GHz"),
        ("detected_photons".into(), est.detected_photon_rate.per_second, "1/s"),
        ("source_photons".into(), est.source_photon_rate.per_second, "1/s"),
        ("source_photons_per_ps".into(), est.source_photon_rate.per_picosecond, "1/ps"),
    ]);

    let mut report = Report::default();
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<String>> = factors
            .iter()
            .map(|(name, v, unit)| vec![name.clone(), format!("{v:.9e}"), unit.to_string()])
            .collect();
        let text = csv_text(&stamp, &["factor", "value", "unit"], &rows);
        report.files.push(write_file(out, "link_budget.csv", &text)?);
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Body<'a> {
            budget: &'a mesa_core::LinkBudget,
            estimate: &'a mesa_core::SourcePowerEstimate,
        }
        let text = json(&stamp, Body { budget: &budget, estimate: &est });
        report.files.push(write_file(out, "link_budget.json", &text)?);
    }
    let mut s = String::new();
    for (name, v, unit) in &factors {
        s.push_str(&format!("{name:<26} {v:>14.6e} {unit}\n"));
    }
    report.summary = s;
    Ok(report)
}
