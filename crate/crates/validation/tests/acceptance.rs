//! Acceptance criteria, one `[PASS]` / `[FAIL]` line each, with the
//! supporting numbers indented underneath. Exits non-zero if any fail.

use std::time::Instant;

use mesa_core::cavity::{
    boundary_sign_changes, enumerate_modes, field_map, find_mode, frequency_from_q, q_from_frequency, GridResolution,
};
use mesa_core::josephson::{fit_branch_junctions, frequency_from_voltage, junctions_from_fv};
use mesa_core::mathieu::{solve_characteristic, solve_truncated, Equation};
use mesa_core::radiometry::{photon_rate, power_from_output_voltage};
use mesa_core::{CavityMode, DetectorCalibration, EllipseGeometry, Parity, PhysicalConstants, ScanOptions, VoltageFrequency};
use mesa_validation::{parse_modes_csv, MODE_SCAN_BUDGET_S, PUBLISHED_MODES, TABLE_TOLERANCE};
use mesa_oracle::{brute_force_junctions, characteristic_value, periodic_integral, radial_shoot, Angular, Order};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C: PhysicalConstants = PhysicalConstants::CODATA;
const Q_GRID: [f64; 4] = [5.0, 55.2, 132.99, 244.48];

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        if !ok {
            self.pass = false;
            self.notes.push(format!("FAIL {note}"));
        } else {
            self.notes.push(format!("ok   {note}"));
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(format!("     {}", note.into()));
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn order_of(p: Parity, m: u32) -> Order {
    match p {
        Parity::Even => Order::ce(m),
        Parity::Odd => Order::se(m),
    }
}

fn published_table() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "mesa", "modes", "--semi-major-um", "245", "--semi-minor-um", "52", "--refractive-index-sq", "17.76", "--out-dir",
    ];
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    argv.push(dir.path().display().to_string());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let start = Instant::now();
    let code = mesa_cli::run(argv, &mut out, &mut err);
    let elapsed = start.elapsed().as_secs_f64();
    o.check(code == 0, format!("mesa modes exit code {code}"));
    o.check(elapsed < MODE_SCAN_BUDGET_S, format!("runtime {elapsed:.2} s < {MODE_SCAN_BUDGET_S} s"));
    let text = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap_or_default();
    let rows = parse_modes_csv(&text).unwrap_or_else(|e| {
        o.check(false, format!("modes.csv unreadable: {e}"));
        Vec::new()
    });
    o.note(format!("{} rows in the default table", rows.len()));

    for t in PUBLISHED_MODES {
        let (p, m, r, q_t, f_t) = (t.parity, t.m, t.r, t.q, t.frequency_ghz);
        let label = format!("{p} ({m},{r})");
        match rows.iter().find(|x| x.parity == p && x.m == m && x.r == r) {
            Some(x) => {
                let (dq, df) = (rel(x.q, q_t), rel(x.frequency_ghz, f_t));
                o.check(
                    dq < TABLE_TOLERANCE && df < TABLE_TOLERANCE,
                    format!(
                        "{label}: q {:.5} vs {q_t} ({:+.2}%), f {:.2} vs {f_t} ({:+.2}%)",
                        x.q,
                        (x.q / q_t - 1.0) * 100.0,
                        x.frequency_ghz,
                        (x.frequency_ghz / f_t - 1.0) * 100.0
                    ),
                );
            }
            None => o.check(false, format!("{label}: no such row")),
        }
        if let Some(near) = rows
            .iter()
            .filter(|x| x.parity == p && x.m == m)
            .min_by(|a, b| rel(a.q, q_t).total_cmp(&rel(b.q, q_t)))
        {
            o.note(format!(
                "  nearest {p} m={m} root: r={} q {:.5} ({:+.2}%), f {:.2} ({:+.2}%)",
                near.r,
                near.q,
                (near.q / q_t - 1.0) * 100.0,
                near.frequency_ghz,
                (near.frequency_ghz / f_t - 1.0) * 100.0
            ));
        }
    }
    o
}

fn self_consistency(modes: &[CavityMode], geom: &EllipseGeometry) -> Outcome {
    let mut o = Outcome::new();
    let mut worst_f = 0.0f64;
    let mut worst_res = 0.0f64;
    for m in modes {
        worst_f = worst_f.max(rel(frequency_from_q(m.q_root, geom).unwrap(), m.frequency_ghz));
        worst_res = worst_res.max(m.boundary_residual);
    }
    o.check(!modes.is_empty(), format!("{} modes", modes.len()));
    o.check(worst_f <= 1e-12, format!("max |f(q) - f| / f = {worst_f:.1e} <= 1e-12"));
    o.check(worst_res < 1e-9, format!("max boundary residual = {worst_res:.1e} < 1e-9"));
    o
}

fn oracle_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let mut worst_a = 0.0f64;
    let mut worst_ang = 0.0f64;
    let mut worst_rad = 0.0f64;
    let mut worst_fd = 0.0f64;
    let families: Vec<(Parity, u32)> =
        (0..=4).map(|m| (Parity::Even, m)).chain((1..=4).map(|m| (Parity::Odd, m))).collect();
    let mut cases = 0;
    for &(p, m) in &families {
        for q in Q_GRID {
            cases += 1;
            let sol = solve_characteristic(p, m, q).unwrap();
            let oracle = Angular::new(order_of(p, m), q);
            worst_a = worst_a.max((sol.char_value() - oracle.a).abs() / oracle.a.abs().max(1.0));
            for nu in [0.35, 1.2] {
                let (ours, theirs) = (sol.angular_value(nu), oracle.value(nu));
                worst_ang = worst_ang.max((ours - theirs).abs() / theirs.abs().max(1e-2));
            }
            if q < 200.0 {
                let (y0, dy0) = (sol.radial_value(0.0).unwrap(), sol.radial_derivative(0.0).unwrap());
                let (y, _) = radial_shoot(oracle.a, q, 0.0, y0, dy0, 0.2);
                let jet = sol.radial_jet(0.2).unwrap();
                let scale = jet.value.abs().max(0.05 * jet.d1.abs());
                worst_rad = worst_rad.max((jet.value - y).abs() / scale);
            }
            for mu in [0.05, 0.2155, 0.4] {
                let h = 1e-6;
                let fd = (sol.radial_value(mu + h).unwrap() - sol.radial_value(mu - h).unwrap()) / (2.0 * h);
                let an = sol.radial_derivative(mu).unwrap();
                let scale = an.abs().max(sol.radial_value(mu).unwrap().abs());
                worst_fd = worst_fd.max((fd - an).abs() / scale);
            }
        }
    }
    o.note(format!("{cases} (family, q) cases: ce_0..ce_4 and se_1..se_4 over q in {Q_GRID:?}"));
    o.check(worst_a < 1e-7, format!("characteristic values vs shooting: {worst_a:.1e} < 1e-7"));
    o.check(worst_ang < 1e-7, format!("ce/se values vs shooting: {worst_ang:.1e} < 1e-7"));
    o.check(worst_rad < 1e-7, format!("Ce/Se values vs shooting (q < 200): {worst_rad:.1e} < 1e-7"));
    o.check(worst_fd < 1e-5, format!("analytic d/dmu vs central difference: {worst_fd:.1e} < 1e-5"));

    let sol = solve_characteristic(Parity::Even, 1, 62.99719).unwrap();
    let a = characteristic_value(Order::ce(1), 62.99719);
    let (y, _) = radial_shoot(a, 62.99719, 0.0, sol.radial_value(0.0).unwrap(), 0.0, 0.3);
    let d = rel(sol.radial_value(0.3).unwrap(), y);
    o.check(d < 1e-7, format!("Ce_1(0.3, 62.99719) vs shooting: {d:.1e}"));
    o
}

fn scaling(base: &[CavityMode], geom: &EllipseGeometry) -> Outcome {
    let mut o = Outcome::new();
    let opts = ScanOptions::default();
    let big = geom.scaled(2.0).unwrap();
    let doubled = enumerate_modes(&big, 750.0, &opts).unwrap();
    o.check(doubled.len() == base.len(), format!("{} modes before and after doubling", base.len()));
    let dq = base.iter().zip(&doubled).map(|(a, b)| rel(b.q_root, a.q_root)).fold(0.0, f64::max);
    let df = base
        .iter()
        .zip(&doubled)
        .map(|(a, b)| rel(b.frequency_ghz, a.frequency_ghz / 2.0))
        .fold(0.0, f64::max);
    o.check(dq < 1e-10, format!("q_root change under doubling: {dq:.1e} < 1e-10"));
    o.check(df < 1e-12, format!("frequency halving error: {df:.1e} < 1e-12"));

    let q_max = q_from_frequency(1500.0, geom).unwrap();
    let fam = |n2: f64| {
        let g = geom.with_refractive_index_sq(n2).unwrap();
        mesa_core::cavity::neumann_roots(Parity::Even, 2, &g, q_max, &opts)
            .unwrap()
            .iter()
            .map(|m| m.frequency_ghz * g.refractive_index())
            .collect::<Vec<_>>()
    };
    let reference = fam(17.76);
    let mut worst = 0.0f64;
    for n2 in [10.0, 30.0] {
        for (a, b) in fam(n2).iter().zip(&reference) {
            worst = worst.max(rel(*a, *b));
        }
    }
    o.check(worst < 1e-12, format!("f * n constant over n^2 in {{10, 17.76, 30}}: {worst:.1e}"));
    o
}

fn josephson() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let v = rng.gen_range(1e-3..5.0);
        let n = rng.gen_range(1..5000u32);
        let f = frequency_from_voltage(v, n, &C).unwrap();
        worst = worst.max(rel(junctions_from_fv(f, v, &C).unwrap(), n as f64));
    }
    o.check(worst <= 1e-12, format!("round trip over 1000 random (V, N): {worst:.1e} <= 1e-12"));

    let branch = |noise: f64, rng: &mut ChaCha8Rng| -> Vec<VoltageFrequency> {
        (0..8)
            .map(|i| {
                let voltage = 0.55 + 0.02 * i as f64;
                VoltageFrequency {
                    voltage,
                    frequency_ghz: frequency_from_voltage(voltage, 400, &C).unwrap() + rng.gen_range(-noise..=noise),
                }
            })
            .collect()
    };
    let clean = fit_branch_junctions(&branch(0.0, &mut rng), 100, 1000, &C).unwrap();
    o.check(clean.fitted_n == 400, format!("noiseless branch: N = {}", clean.fitted_n));
    let k = C.josephson_ghz_per_volt();
    let mut hits = 0;
    let mut agree = 0;
    let trials = 20;
    for _ in 0..trials {
        let pts = branch(1.0, &mut rng);
        let fit = fit_branch_junctions(&pts, 100, 1000, &C).unwrap();
        let plain: Vec<(f64, f64)> = pts.iter().map(|p| (p.voltage, p.frequency_ghz)).collect();
        let (n, _) = brute_force_junctions(&plain, 100, 1000, k);
        hits += usize::from(fit.fitted_n == 400);
        agree += usize::from(fit.fitted_n == n);
    }
    o.check(hits == trials, format!("+-1 GHz noise: planted N = 400 recovered in {hits}/{trials} branches"));
    o.check(agree == trials, format!("fit equals brute-force oracle in {agree}/{trials}"));
    o
}

fn radiometry() -> Outcome {
    let mut o = Outcome::new();
    let p = power_from_output_voltage(0.16, &DetectorCalibration::heb()).unwrap();
    o.check((p - 0.137).abs() <= 0.001, format!("0.16 mV at 3.3 mV/nW -> {p:.4} nW (0.137 +- 0.001)"));
    let r = photon_rate(250.0, 750.0, &C).unwrap().per_second;
    o.check(rel(r, 5.03e14) <= 0.005, format!("250 nW at 750 GHz -> {r:.4e} photons/s (5.03e14 +- 0.5%)"));
    o
}

fn properties(modes: &[CavityMode], geom: &EllipseGeometry) -> Outcome {
    let mut o = Outcome::new();
    let opts = ScanOptions::default();

    // truncation convergence
    let mut worst = 0.0f64;
    for p in [Parity::Even, Parity::Odd] {
        for m in u32::from(p == Parity::Odd)..=8 {
            for q in [1.0, 55.2, 150.0, 300.0] {
                let s = solve_characteristic(p, m, q).unwrap();
                let t = solve_truncated(p, m, q, 2 * s.truncation()).unwrap();
                worst = worst.max((s.char_value() - t.char_value()).abs() / s.char_value().abs().max(1.0));
            }
        }
    }
    o.check(worst < 1e-12, format!("doubling truncation moves char values by {worst:.1e} < 1e-12"));

    // orthogonality
    let sols: Vec<_> = (0..=4).map(|m| solve_characteristic(Parity::Even, m, 55.2).unwrap()).collect();
    let mut worst = 0.0f64;
    for i in 0..sols.len() {
        for j in i + 1..sols.len() {
            let ip = periodic_integral(|v| sols[i].angular_value(v) * sols[j].angular_value(v), 512);
            worst = worst.max(ip.abs() / std::f64::consts::PI);
        }
    }
    o.check(worst < 1e-9, format!("ce_m orthogonality at q = 55.2: {worst:.1e} < 1e-9"));

    // ODE residual
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for p in [Parity::Even, Parity::Odd] {
        for m in u32::from(p == Parity::Odd)..=4 {
            for q in Q_GRID {
                let s = solve_characteristic(p, m, q).unwrap();
                for _ in 0..50 {
                    let a = s.ode_residual(rng.gen_range(0.0..std::f64::consts::TAU), Equation::Angular).unwrap();
                    let r = s.ode_residual(rng.gen_range(0.0..0.6), Equation::Radial).unwrap();
                    worst = worst.max(a.relative()).max(r.relative());
                }
            }
        }
    }
    o.check(worst < 1e-8, format!("scaled ODE residual at 50 random points per case: {worst:.1e} < 1e-8"));

    // root completeness and round trip
    let fine = enumerate_modes(geom, 1500.0, &ScanOptions { grid_step: 0.125, ..opts }).unwrap();
    o.check(fine.len() == modes.len(), format!("root count {} stable under 4x grid refinement", modes.len()));
    let worst = [1e-3, 14.6126, 55.20466, 300.0]
        .iter()
        .map(|&q| rel(q_from_frequency(frequency_from_q(q, geom).unwrap(), geom).unwrap(), q))
        .fold(0.0, f64::max);
    o.check(worst < 1e-12, format!("q -> f -> q round trip: {worst:.1e}"));

    // Neumann condition on the rim of each field
    let mu0 = geom.mu0();
    let mut worst = 0.0f64;
    for mode in modes.iter().filter(|m| m.frequency_ghz < 900.0) {
        let mut interior = 0.0f64;
        for i in 1..30 {
            for j in 0..96 {
                let (mu, nu) = (mu0 * i as f64 / 30.0, std::f64::consts::TAU * (j as f64 + 0.5) / 96.0);
                let pt = mode.field_at(mu, nu).unwrap();
                interior = interior.max(pt.d_mu.hypot(pt.d_nu) / geom.scale_factor(mu, nu));
            }
        }
        for j in 0..64 {
            let nu = std::f64::consts::TAU * (j as f64 + 0.5) / 64.0;
            let dn = mode.field_at(mu0, nu).unwrap().d_mu.abs() / geom.scale_factor(mu0, nu);
            worst = worst.max(dn / interior);
        }
    }
    o.check(worst < 1e-6, format!("rim normal derivative / interior max gradient: {worst:.1e} < 1e-6"));

    // field-map parity and nodal counts
    for (m, nodes) in [(0u32, 0usize), (1, 2), (2, 4)] {
        for r in 1..=2 {
            let mode = find_mode(Parity::Even, m, r, geom, 300.0, &opts).unwrap();
            let changes = boundary_sign_changes(&mode, geom, 720).unwrap();
            let map = field_map(&mode, geom, GridResolution::new(61, 21)).unwrap();
            let tol = 1e-12 * map.max_abs();
            let x_sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mut symmetric = true;
            for iy in 0..map.ny() {
                for ix in 0..map.nx() {
                    if let (Some(v), Some(vy), Some(vx)) = (
                        map.get(ix, iy),
                        map.get(ix, map.ny() - 1 - iy),
                        map.get(map.nx() - 1 - ix, iy),
                    ) {
                        symmetric &= (v - vy).abs() <= tol && (v - x_sign * vx).abs() <= tol;
                    }
                }
            }
            o.check(
                changes == nodes && symmetric,
                format!(
                    "TM({m},{r}) at {:.2} GHz: {changes} rim sign changes (want {nodes}), mirror symmetry {}",
                    mode.frequency_ghz,
                    if symmetric { "holds" } else { "broken" }
                ),
            );
        }
    }
    o.note("full property suites: crates/core/tests/*, crates/cli/tests/cli.rs");
    o
}

fn main() {
    let geom = EllipseGeometry::bscco_mesa();
    let modes = enumerate_modes(&geom, 1500.0, &ScanOptions::default()).expect("mode scan");

    let results = [
        ("1", "published mode table regression (q and f within 0.5%, runtime < 10 s)", published_table()),
        ("2", "q <-> f self-consistency and boundary residual", self_consistency(&modes, &geom)),
        ("3", "Mathieu series vs ODE-shooting oracle", oracle_equivalence()),
        ("4", "geometry and index scaling", scaling(&modes, &geom)),
        ("5", "Josephson round trip and junction fitting", josephson()),
        ("6", "radiometry point checks", radiometry()),
        ("7", "property suite and field-map checks", properties(&modes, &geom)),
    ];

    let mut failed = 0;
    for (id, name, outcome) in &results {
        println!("[{}] {id}. {name}", if outcome.pass { "PASS" } else { "FAIL" });
        for n in &outcome.notes {
            println!("      {n}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("\nacceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
