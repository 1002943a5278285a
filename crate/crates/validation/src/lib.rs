//! Published reference values the acceptance suite compares against.

use mesa_core::Parity;

/// One row of the published eigenfrequency table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedMode {
    pub parity: Parity,
    pub m: u32,
    pub r: usize,
    pub q: f64,
    pub frequency_ghz: f64,
}

const fn row(parity: Parity, m: u32, r: usize, q: f64, frequency_ghz: f64) -> PublishedMode {
    PublishedMode { parity, m, r, q, frequency_ghz }
}

/// Eigenfrequency table for the 245 x 52 um mesa at n^2 = 17.76.
pub const PUBLISHED_MODES: [PublishedMode; 10] = [
    row(Parity::Even, 0, 1, 55.20466, 701.66),
    row(Parity::Even, 0, 2, 213.9617, 1381.35),
    row(Parity::Even, 1, 1, 62.99719, 749.55),
    row(Parity::Even, 1, 2, 228.843, 1428.59),
    row(Parity::Even, 2, 1, 71.56025, 798.87),
    row(Parity::Even, 2, 2, 244.4761, 1476.58),
    row(Parity::Odd, 1, 1, 14.6126, 361.0),
    row(Parity::Odd, 1, 2, 121.652, 1041.59),
    row(Parity::Odd, 2, 1, 18.8, 409.47),
    row(Parity::Odd, 2, 2, 132.99, 1089.05),
];

/// Relative tolerance on q and f for the table regression.
pub const TABLE_TOLERANCE: f64 = 0.005;

/// Time budget for the default mode scan, s.
pub const MODE_SCAN_BUDGET_S: f64 = 10.0;

/// A row of a `modes.csv` file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub parity: Parity,
    pub m: u32,
    pub r: usize,
    pub q: f64,
    pub frequency_ghz: f64,
}

/// Parses the body of a `modes.csv` file (stamp comment and header skipped).
pub fn parse_modes_csv(text: &str) -> Result<Vec<ModeRow>, String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .enumerate()
        .map(|(i, l)| {
            let c: Vec<&str> = l.split(',').collect();
            if c.len() != 6 {
                return Err(format!("row {}: expected 6 fields", i + 1));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 1));
            Ok(ModeRow {
                parity: c[0].parse()?,
                m: c[1].parse().map_err(|e| format!("row {}: {e}", i + 1))?,
                r: c[2].parse().map_err(|e| format!("row {}: {e}", i + 1))?,
                q: num(c[3])?,
                frequency_ghz: num(c[4])?,
            })
        })
        .collect()
}
