//! Root scanning of the Neumann condition `d/dmu R(mu0, q) = 0` over `q`.
//!
//! `g(q)` is sampled on a uniform grid, sign changes are bracketed and each
//! bracket is bisected down to adjacent floating-point values. The scan is
//! repeated on a 4x finer grid; the root count must agree between two
//! successive grids before the roots are accepted.

use rayon::prelude::*;

use super::{frequency_from_q, q_from_frequency, CavityMode, EllipseGeometry};
use crate::error::{check_positive, Error, Result};
use crate::mathieu::{solve_characteristic, Parity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// coarse grid step in q
    pub grid_step: f64,
    /// how many 4x refinements may be spent to reach a stable root count
    pub max_refinements: u32,
    /// highest angular order scanned by [`enumerate_modes`]
    pub m_max: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            grid_step: 0.5,
            max_refinements: 3,
            m_max: 4,
        }
    }
}

/// `d/dmu` of the radial Mathieu function at the rim, at parameter `q`.
pub fn boundary_derivative(parity: Parity, m: u32, q: f64, mu0: f64) -> Result<f64> {
    solve_characteristic(parity, m, q)?.radial_derivative(mu0)
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    lo: f64,
    hi: f64,
    g_lo: f64,
    g_hi: f64,
}

fn sample(parity: Parity, m: u32, mu0: f64, q_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    // q = 0 is a trivial root for m = 0, so the grid starts just above it.
    let mut qs = vec![step * 1e-3];
    let n = (q_max / step).floor() as usize;
    qs.extend((1..=n).map(|i| i as f64 * step));
    if qs.last().is_some_and(|&q| q < q_max) {
        qs.push(q_max);
    }
    qs.into_iter()
        .map(|q| Ok((q, boundary_derivative(parity, m, q, mu0)?)))
        .collect()
}

fn brackets(samples: &[(f64, f64)]) -> Vec<Bracket> {
    samples
        .windows(2)
        .filter_map(|w| {
            let ((lo, g_lo), (hi, g_hi)) = (w[0], w[1]);
            // a grid point that lands exactly on a root is kept by the bracket to its right
            (g_lo != 0.0 && (g_lo.signum() != g_hi.signum() || g_hi == 0.0))
                .then_some(Bracket { lo, hi, g_lo, g_hi })
        })
        .collect()
}

/// Bisects to adjacent doubles; returns the root estimate.
fn bisect(parity: Parity, m: u32, mu0: f64, b: Bracket) -> Result<f64> {
    if b.g_hi == 0.0 {
        return Ok(b.hi);
    }
    let (mut lo, mut hi, mut g_lo) = (b.lo, b.hi, b.g_lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = boundary_derivative(parity, m, mid, mu0)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All positive roots of the Neumann condition for one `(parity, m)` below
/// `q_max`, as modes ordered by `r`.
pub fn neumann_roots(
    parity: Parity,
    m: u32,
    geom: &EllipseGeometry,
    q_max: f64,
    options: &ScanOptions,
) -> Result<Vec<CavityMode>> {
    check_positive("q_max", q_max)?;
    check_positive("grid step", options.grid_step)?;
    let mu0 = geom.mu0();

    let mut step = options.grid_step;
    let mut previous = brackets(&sample(parity, m, mu0, q_max, step)?);
    let mut stable = None;
    for _ in 0..=options.max_refinements {
        step /= 4.0;
        let finer = brackets(&sample(parity, m, mu0, q_max, step)?);
        if finer.len() == previous.len() {
            stable = Some(finer);
            break;
        }
        previous = finer;
    }
    let found = stable.ok_or(Error::GridTooCoarse { step })?;

    found
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let q_root = bisect(parity, m, mu0, *b)?;
            let solution = solve_characteristic(parity, m, q_root)?;
            let g = solution.radial_derivative(mu0)?;
            let scale = b.g_lo.abs().max(b.g_hi.abs());
            Ok(CavityMode {
                parity,
                m,
                r: i + 1,
                q_root,
                frequency_ghz: frequency_from_q(q_root, geom)?,
                boundary_residual: g.abs() / scale,
                solution,
            })
        })
        .collect()
}

/// The r-th (1-based) TM mode of one `(parity, m)` family, searching `q <= q_max`.
pub fn find_mode(
    parity: Parity,
    m: u32,
    r: usize,
    geom: &EllipseGeometry,
    q_max: f64,
    options: &ScanOptions,
) -> Result<CavityMode> {
    if r == 0 {
        return Err(Error::OutOfRange {
            name: "root index r",
            expected: ">= 1",
            value: 0.0,
        });
    }
    let mut roots = neumann_roots(parity, m, geom, q_max, options)?;
    if roots.len() < r {
        return Err(Error::RootNotFound {
            found: roots.len(),
            requested: r,
            q_max,
        });
    }
    Ok(roots.swap_remove(r - 1))
}

/// Every mode with frequency up to `f_max_ghz` and `m <= options.m_max`,
/// sorted by frequency, then even before odd, then `m`.
pub fn enumerate_modes(geom: &EllipseGeometry, f_max_ghz: f64, options: &ScanOptions) -> Result<Vec<CavityMode>> {
    check_positive("f_max", f_max_ghz)?;
    let q_max = q_from_frequency(f_max_ghz, geom)?;
    let families: Vec<(Parity, u32)> = (0..=options.m_max)
        .map(|m| (Parity::Even, m))
        .chain((1..=options.m_max).map(|m| (Parity::Odd, m)))
        .collect();

    let per_family: Vec<Vec<CavityMode>> = families
        .par_iter()
        .map(|&(p, m)| neumann_roots(p, m, geom, q_max, options))
        .collect::<Result<_>>()?;

    let mut modes: Vec<CavityMode> = per_family
        .into_iter()
        .flatten()
        .filter(|mode| mode.frequency_ghz <= f_max_ghz)
        .collect();
    modes.sort_by(|a, b| {
        a.frequency_ghz
            .total_cmp(&b.frequency_ghz)
            .then(a.parity.cmp(&b.parity))
            .then(a.m.cmp(&b.m))
            .then(a.r.cmp(&b.r))
    });
    Ok(modes)
}
