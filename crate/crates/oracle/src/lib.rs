//! Reference computations that share no code with `mesa-core`.
//!
//! Everything here integrates the defining differential equations directly
//! (RK4 with one Richardson step) or scans exhaustively; it is slow and only
//! meant to check the fast series-based paths.

use std::f64::consts::{FRAC_PI_2, PI};

/// Integrates `y'' = p(t) y` from `t0` to `t1` with `steps` RK4 steps and one
/// Richardson extrapolation against the half-step solution.
pub fn shoot<F: Fn(f64) -> f64>(p: &F, t0: f64, t1: f64, y0: f64, dy0: f64, steps: usize) -> (f64, f64) {
    let coarse = rk4(p, t0, t1, y0, dy0, steps);
    let fine = rk4(p, t0, t1, y0, dy0, 2 * steps);
    (
        fine.0 + (fine.0 - coarse.0) / 15.0,
        fine.1 + (fine.1 - coarse.1) / 15.0,
    )
}

fn rk4<F: Fn(f64) -> f64>(p: &F, t0: f64, t1: f64, y0: f64, dy0: f64, steps: usize) -> (f64, f64) {
    let h = (t1 - t0) / steps as f64;
    let (mut y, mut v) = (y0, dy0);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let (k1y, k1v) = (v, p(t) * y);
        let (k2y, k2v) = (v + 0.5 * h * k1v, p(t + 0.5 * h) * (y + 0.5 * h * k1y));
        let (k3y, k3v) = (v + 0.5 * h * k2v, p(t + 0.5 * h) * (y + 0.5 * h * k2y));
        let (k4y, k4v) = (v + h * k3v, p(t + h) * (y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (y, v)
}

/// Samples of `y` on a uniform grid of `steps + 1` points (plain RK4).
fn rk4_trajectory<F: Fn(f64) -> f64>(p: &F, t1: f64, y0: f64, dy0: f64, steps: usize) -> Vec<f64> {
    let h = t1 / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let (mut y, mut v) = (y0, dy0);
    out.push(y);
    for i in 0..steps {
        let t = i as f64 * h;
        let (k1y, k1v) = (v, p(t) * y);
        let (k2y, k2v) = (v + 0.5 * h * k1v, p(t + 0.5 * h) * (y + 0.5 * h * k1y));
        let (k3y, k3v) = (v + 0.5 * h * k2v, p(t + 0.5 * h) * (y + 0.5 * h * k2y));
        let (k4y, k4v) = (v + h * k3v, p(t + h) * (y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push(y);
    }
    out
}

/// Which periodic Mathieu solution: even (`ce`) or odd (`se`), and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Order {
    pub even: bool,
    pub m: u32,
}

impl Order {
    pub fn ce(m: u32) -> Self {
        Self { even: true, m }
    }

    pub fn se(m: u32) -> Self {
        Self { even: false, m }
    }

    fn initial(&self) -> (f64, f64) {
        if self.even {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    }

    /// ce_2n and se_2n+1 are symmetric about pi/2 (y' = 0 there),
    /// ce_2n+1 and se_2n+2 antisymmetric (y = 0 there).
    fn symmetric_at_half_period(&self) -> bool {
        (self.even && self.m.is_multiple_of(2)) || (!self.even && self.m % 2 == 1)
    }

    /// Rank of the order among eigenvalues with the same boundary conditions.
    fn rank(&self) -> usize {
        if self.even {
            (self.m / 2) as usize
        } else {
            ((self.m - 1) / 2) as usize
        }
    }
}

const SHOOT_STEPS: usize = 6000;
const SCAN_STEPS: usize = 800;

fn half_period_mismatch(order: Order, a: f64, q: f64, steps: usize) -> f64 {
    let p = |t: f64| -(a - 2.0 * q * (2.0 * t).cos());
    let (y0, dy0) = order.initial();
    let (y, dy) = shoot(&p, 0.0, FRAC_PI_2, y0, dy0, steps);
    if order.symmetric_at_half_period() {
        dy
    } else {
        y
    }
}

/// Characteristic value `a_m(q)` / `b_m(q)` by shooting over `[0, pi/2]` and
/// bisecting on `a`. The eigenvalue is picked by counting sign changes of the
/// half-period mismatch from below `-2q`.
pub fn characteristic_value(order: Order, q: f64) -> f64 {
    let lo_bound = -2.0 * q - 2.0 - std::f64::consts::FRAC_1_SQRT_2 / 10.0;
    let step = 0.25;
    let mut a = lo_bound;
    let mut prev = half_period_mismatch(order, a, q, SCAN_STEPS);
    let mut seen = 0;
    loop {
        let next = a + step;
        let cur = half_period_mismatch(order, next, q, SCAN_STEPS);
        if cur.signum() != prev.signum() {
            if seen == order.rank() {
                return bisect_on_a(order, q, a, next);
            }
            seen += 1;
        }
        a = next;
        prev = cur;
        assert!(a < 4.0 * q + (order.m as f64 + 4.0).powi(2), "eigenvalue scan ran away");
    }
}

fn bisect_on_a(order: Order, q: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = half_period_mismatch(order, lo, q, SHOOT_STEPS);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = half_period_mismatch(order, mid, q, SHOOT_STEPS);
        if f.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ce_m(v, q)` or `se_m(v, q)` by shooting, normalised so that the square
/// integrates to `pi` over a period, with the sign fixed at `v = pi/2` as in
/// the `q = 0` limit `cos(mv)` / `sin(mv)`.
#[derive(Debug, Clone, Copy)]
pub struct Angular {
    pub order: Order,
    pub q: f64,
    pub a: f64,
    factor: f64,
}

impl Angular {
    pub fn new(order: Order, q: f64) -> Self {
        let a = characteristic_value(order, q);
        let p = |t: f64| -(a - 2.0 * q * (2.0 * t).cos());
        let (y0, dy0) = order.initial();

        let n = 20_000;
        let traj = rk4_trajectory(&p, FRAC_PI_2, y0, dy0, n);
        let h = FRAC_PI_2 / n as f64;
        // Simpson on [0, pi/2]; a period is four quarter-periods.
        let quarter = h / 3.0
            * traj
                .iter()
                .enumerate()
                .map(|(i, y)| {
                    let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * y * y
                })
                .sum::<f64>();
        let scale = (PI / (4.0 * quarter)).sqrt();

        let (y_half, dy_half) = shoot(&p, 0.0, FRAC_PI_2, y0, dy0, SHOOT_STEPS);
        let reference = if order.symmetric_at_half_period() { y_half } else { dy_half };
        let n_half = order.rank() as i32;
        let expected = match (order.even, order.m % 2) {
            (true, 0) | (false, 1) => (-1f64).powi(n_half),
            _ => (-1f64).powi(n_half + 1),
        };
        let sign = if reference * expected < 0.0 { -1.0 } else { 1.0 };
        Self { order, q, a, factor: sign * scale }
    }

    /// Value at `v` in `[0, pi/2]`.
    pub fn value(&self, nu: f64) -> f64 {
        assert!((0.0..=FRAC_PI_2).contains(&nu));
        let (a, q) = (self.a, self.q);
        let p = |t: f64| -(a - 2.0 * q * (2.0 * t).cos());
        let (y0, dy0) = self.order.initial();
        self.factor * shoot(&p, 0.0, nu, y0, dy0, SHOOT_STEPS).0
    }
}

/// Integrates the modified Mathieu equation `Y'' = (a - 2q cosh 2u) Y` from
/// `mu0` to `mu1`, returning `(Y, Y')`.
pub fn radial_shoot(a: f64, q: f64, mu0: f64, y0: f64, dy0: f64, mu1: f64) -> (f64, f64) {
    let p = |t: f64| a - 2.0 * q * (2.0 * t).cosh();
    shoot(&p, mu0, mu1, y0, dy0, SHOOT_STEPS)
}

/// `Y'(mu0) / Y_scale` for the modified equation started from the initial
/// data of `ce` (`Y = 1, Y' = 0`) or `se` (`Y = 0, Y' = 1`); its sign changes
/// in `q` locate the Neumann roots.
pub fn radial_boundary_slope(order: Order, q: f64, mu0: f64) -> f64 {
    let a = characteristic_value(order, q);
    let (y0, dy0) = order.initial();
    radial_shoot(a, q, 0.0, y0, dy0, mu0).1
}

/// Exhaustive junction-count scan over plain `(voltage_V, frequency_GHz)`
/// pairs; returns `(N, rms)` with ties to the smaller `N`.
pub fn brute_force_junctions(points: &[(f64, f64)], n_min: u32, n_max: u32, ghz_per_volt: f64) -> (u32, f64) {
    let mut best = (n_min, f64::INFINITY);
    for n in n_min..=n_max {
        let mut ss = 0.0;
        for &(v, f) in points {
            let d = f - ghz_per_volt * v / n as f64;
            ss += d * d;
        }
        let rms = (ss / points.len() as f64).sqrt();
        if rms < best.1 {
            best = (n, rms);
        }
    }
    best
}

/// Trapezoid rule over one period of a `2pi`-periodic integrand.
pub fn periodic_integral<F: Fn(f64) -> f64>(f: F, samples: usize) -> f64 {
    let h = 2.0 * PI / samples as f64;
    (0..samples).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shooting_reproduces_trig_limit() {
        // q = 0: y'' = -m^2 y
        let p = |_t: f64| -9.0;
        let (y, dy) = shoot(&p, 0.0, 1.0, 1.0, 0.0, 2000);
        assert!((y - 3f64.cos()).abs() < 1e-12);
        assert!((dy + 3.0 * 3f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn characteristic_value_at_q_zero() {
        assert!((characteristic_value(Order::ce(2), 0.0) - 4.0).abs() < 1e-9);
        assert!((characteristic_value(Order::se(3), 0.0) - 9.0).abs() < 1e-9);
        assert!(characteristic_value(Order::ce(0), 0.0).abs() < 1e-9);
    }

    #[test]
    fn angular_value_trig_limit() {
        assert!((Angular::new(Order::ce(2), 0.0).value(FRAC_PI_2) + 1.0).abs() < 1e-8);
        assert!((Angular::new(Order::se(1), 0.0).value(0.4) - 0.4f64.sin()).abs() < 1e-8);
        assert!((Angular::new(Order::ce(0), 0.0).value(1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    }
}
