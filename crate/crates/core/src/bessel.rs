//! Bessel functions of the first kind, integer order, real non-negative argument.
//!
//! The product series for the radial Mathieu functions needs every order
//! `J_0 .. J_N` at one argument, so the main entry point is [`BesselJTable`],
//! filled by Miller's downward recurrence and normalised with
//! `J_0 + 2 (J_2 + J_4 + ...) = 1`. Small arguments fall back to the
//! ascending series, which is exact to rounding there.

/// Below this argument every order comes from the ascending series.
const SERIES_CUTOFF: f64 = 1.0;

const RESCALE_LIMIT: f64 = 1e250;

/// `J_n(x)` from the ascending power series.
///
/// Converges for every `x`, but loses accuracy through cancellation once
/// `x` is much larger than `n`; use it for small arguments and as a
/// cross-check.
pub fn bessel_j_series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let quarter_sq = -half * half;
    for k in 1..500 {
        term *= quarter_sq / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_0(x) .. J_{max_order}(x)` plus first and second derivatives.
#[derive(Debug, Clone)]
pub struct BesselJTable {
    x: f64,
    // orders 0 ..= max_order + 2, so derivatives of the top order are available
    values: Vec<f64>,
}

impl BesselJTable {
    pub fn new(max_order: usize, x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "Bessel argument must be finite and >= 0");
        let len = max_order + 3;
        let values = if x == 0.0 {
            let mut v = vec![0.0; len];
            v[0] = 1.0;
            v
        } else if x < SERIES_CUTOFF {
            (0..len).map(|n| bessel_j_series(n as u32, x)).collect()
        } else {
            miller(len - 1, x)
        };
        Self { x, values }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 3
    }

    /// `J_n(x)`, with `J_{-n} = (-1)^n J_n`.
    pub fn value(&self, n: i64) -> f64 {
        let k = n.unsigned_abs() as usize;
        let v = self.values[k];
        if n < 0 && k % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `J_n'(x) = (J_{n-1} - J_{n+1}) / 2`
    pub fn derivative(&self, n: i64) -> f64 {
        0.5 * (self.value(n - 1) - self.value(n + 1))
    }

    /// `J_n''(x) = (J_{n-2} - 2 J_n + J_{n+2}) / 4`
    pub fn second_derivative(&self, n: i64) -> f64 {
        0.25 * (self.value(n - 2) - 2.0 * self.value(n) + self.value(n + 2))
    }
}

/// Miller's algorithm: recur downward from an order far above both `top`
/// and `x`, where the minimal solution dominates, then normalise.
fn miller(top: usize, x: f64) -> Vec<f64> {
    let scale = top.max(x.ceil() as usize) as f64;
    let mut start = (scale + 20.0 + (60.0 * scale).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let mut out = vec![0.0; top + 1];
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut even_sum = 0.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{k-1}
        let order = k - 1;
        if order <= top {
            out[order] = cur;
        }
        if order % 2 == 0 && order > 0 {
            even_sum += cur;
        }
        if cur.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            cur *= s;
            next *= s;
            even_sum *= s;
            for v in out.iter_mut().skip(order) {
                *v *= s;
            }
        }
    }
    let norm = cur + 2.0 * even_sum;
    for v in &mut out {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values from an independent implementation (Cephes/AMOS via scipy).
    const REFERENCE: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.7651976865579666),
        (1, 1.0, 0.44005058574493355),
        (0, 10.0, -0.24593576445134832),
        (5, 10.0, -0.2340615281867936),
        (2, 19.6, -0.18033221441239644),
        (12, 3.5, 1.3580962085685715e-06),
        (30, 12.7, 1.2092657647382862e-09),
        (3, 0.01, 2.083320312532557e-08),
    ];

    #[test]
    fn table_matches_reference_values() {
        for &(n, x, want) in REFERENCE {
            let table = BesselJTable::new(n as usize, x);
            assert_relative_eq!(table.value(n as i64), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn series_matches_reference_for_small_arguments() {
        for &(n, x, want) in REFERENCE.iter().filter(|r| r.1 <= 3.5) {
            assert_relative_eq!(bessel_j_series(n, x), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn miller_agrees_with_series_where_series_is_clean() {
        for &x in &[1.0, 2.5, 4.0, 6.0] {
            let table = BesselJTable::new(30, x);
            for n in 0..=30 {
                let s = bessel_j_series(n, x);
                let scale = s.abs().max(1e-300);
                assert!(
                    (table.value(n as i64) - s).abs() <= 1e-12 * scale,
                    "n={n} x={x}: {} vs {s}",
                    table.value(n as i64)
                );
            }
        }
    }

    #[test]
    fn zero_argument() {
        let t = BesselJTable::new(4, 0.0);
        assert_eq!(t.value(0), 1.0);
        assert_eq!(t.value(3), 0.0);
        assert_eq!(t.derivative(1), 0.5);
    }

    #[test]
    fn derivatives_satisfy_bessel_equation() {
        // x^2 J'' + x J' + (x^2 - n^2) J = 0
        for &x in &[0.3, 2.0, 11.0, 19.0] {
            let t = BesselJTable::new(20, x);
            for n in 0..20i64 {
                let r = x * x * t.second_derivative(n) + x * t.derivative(n)
                    + (x * x - (n * n) as f64) * t.value(n);
                let scale = x * x * t.second_derivative(n).abs()
                    + x * t.derivative(n).abs()
                    + (x * x + (n * n) as f64) * t.value(n).abs();
                assert!(r.abs() <= 1e-12 * scale.max(1e-300), "n={n} x={x} r={r}");
            }
        }
    }

    #[test]
    fn negative_orders() {
        let t = BesselJTable::new(3, 2.0);
        assert_eq!(t.value(-1), -t.value(1));
        assert_eq!(t.value(-2), t.value(2));
    }
}
