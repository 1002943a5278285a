//! File writers. Everything is formatted explicitly so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mesa_core::FieldMap;

use crate::error::{CliError, CliResult};

pub const TOOL: &str = "mesa";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance carried by every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stamp {
    pub config_sha256: String,
    pub input_sha256: Option<String>,
}

impl Stamp {
    pub fn comment_line(&self) -> String {
        let mut line = format!("# {TOOL} {VERSION} config_sha256={}", self.config_sha256);
        if let Some(input) = &self.input_sha256 {
            let _ = write!(line, " input_sha256={input}");
        }
        line
    }
}

/// CSV text: the stamp as a `#` comment, a header row, then `rows`.
pub fn csv_text(stamp: &Stamp, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    wtr.write_record(header).expect("in-memory write");
    for row in rows {
        wtr.write_record(row).expect("in-memory write");
    }
    let body = String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8");
    format!("{}\n{body}", stamp.comment_line())
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn fixed(v: f64, decimals: usize) -> String {
    format!("{v:.decimals$}")
}

pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

/// 256-level blue-white-red ramp, index 0 = -1, 255 = +1.
pub fn diverging_ramp() -> [[u8; 3]; 256] {
    const COLD: [f64; 3] = [59.0, 76.0, 192.0];
    const MID: [f64; 3] = [247.0, 247.0, 247.0];
    const HOT: [f64; 3] = [180.0, 4.0, 38.0];
    let mut ramp = [[0u8; 3]; 256];
    for (i, entry) in ramp.iter_mut().enumerate() {
        let t = i as f64 / 255.0;
        let (from, to, s) = if t < 0.5 { (COLD, MID, 2.0 * t) } else { (MID, HOT, 2.0 * t - 1.0) };
        for c in 0..3 {
            entry[c] = (from[c] + (to[c] - from[c]) * s).round() as u8;
        }
    }
    ramp
}

/// Ramp index for a value already scaled into `[-1, 1]`.
pub fn ramp_index(v: f64) -> usize {
    (((v.clamp(-1.0, 1.0) + 1.0) * 0.5 * 255.0).round()) as usize
}

/// Rect-grid heat map; values are scaled by the largest magnitude and
/// masked points are left out.
pub fn field_svg(map: &FieldMap, title: &str, stamp: &Stamp) -> String {
    const CELL: usize = 4;
    let (nx, ny) = (map.nx(), map.ny());
    let scale = map.max_abs();
    let ramp = diverging_ramp();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w = nx * CELL,
        h = ny * CELL
    );
    let _ = writeln!(svg, "<!-- {} -->", stamp.comment_line().trim_start_matches("# "));
    let _ = writeln!(svg, "<title>{title}</title>");
    for iy in 0..ny {
        // SVG rows run downwards, the grid's y upwards
        let top = (ny - 1 - iy) * CELL;
        for ix in 0..nx {
            if let Some(v) = map.get(ix, iy) {
                let t = if scale > 0.0 { v / scale } else { 0.0 };
                let [r, g, b] = ramp[ramp_index(t)];
                let _ = writeln!(
                    svg,
                    r##"<rect x="{}" y="{top}" width="{CELL}" height="{CELL}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                    ix * CELL
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
