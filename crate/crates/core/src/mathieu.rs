//! Angular and radial (modified) Mathieu functions of integer order.
//!
//! The angular functions solve
//!
//! ```text
//! y'' + (a - 2q cos 2v) y = 0
//! ```
//!
//! and the radial functions solve the modified equation
//!
//! ```text
//! Y'' - (a - 2q cosh 2u) Y = 0
//! ```
//!
//! with the same characteristic value `a`. Characteristic values and Fourier
//! coefficients come from the three-term recurrence, written as a symmetric
//! tridiagonal eigenproblem: the eigenvalue is located by Sturm-sequence
//! bisection and the coefficient vector by inverse iteration.
//!
//! Conventions:
//!
//! * `ce_m` and `se_m` are normalised so that the integral of their square over
//!   one period `[0, 2pi]` is `pi`.
//! * Signs follow the `q = 0` limit `ce_m = cos(mv)`, `se_m = sin(mv)`, fixed at
//!   `v = pi/2`, where the functions (or their derivatives) never vanish:
//!   `ce_2n(pi/2)` and `se_2n+1(pi/2)` have sign `(-1)^n`, `ce_2n+1'(pi/2)` and
//!   `se_2n+2'(pi/2)` have sign `(-1)^(n+1)`.
//! * Radial functions are the Bessel-product sums themselves, multiplied by
//!   `(-1)^n`. They differ from `ce_m(iu)` and `se_m(iu)/i` by a constant that
//!   depends only on `q`, so their zeros (and the zeros of their derivatives)
//!   are the same. At `q = 0` the exact limits `cosh(mu)` and `sinh(mu)` are
//!   returned.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::bessel::BesselJTable;
use crate::error::{Error, Result};

/// Tail coefficient must be below this fraction of the largest coefficient.
pub const TAIL_TOLERANCE: f64 = 1e-14;

const MAX_TRUNCATION: usize = 4096;

/// `sqrt(q) * e^mu` above which the radial series is refused.
const MAX_RADIAL_ARGUMENT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "e" | "ce" => Ok(Parity::Even),
            "odd" | "o" | "se" => Ok(Parity::Odd),
            other => Err(format!("unknown parity `{other}` (expected even or odd)")),
        }
    }
}

/// The four recurrence families: parity of the function times parity of the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// ce_2n, harmonics 0, 2, 4, ...
    EvenEven,
    /// ce_2n+1, harmonics 1, 3, 5, ...
    EvenOdd,
    /// se_2n+1, harmonics 1, 3, 5, ...
    OddOdd,
    /// se_2n+2, harmonics 2, 4, 6, ...
    OddEven,
}

impl Family {
    fn of(parity: Parity, order: u32) -> Self {
        match (parity, order % 2) {
            (Parity::Even, 0) => Family::EvenEven,
            (Parity::Even, _) => Family::EvenOdd,
            (Parity::Odd, 1) => Family::OddOdd,
            (Parity::Odd, _) => Family::OddEven,
        }
    }

    fn first_harmonic(self) -> u32 {
        match self {
            Family::EvenEven => 0,
            Family::EvenOdd | Family::OddOdd => 1,
            Family::OddEven => 2,
        }
    }

    /// Position of order `m` among the eigenvalues of this family.
    fn eigen_index(self, order: u32) -> usize {
        match self {
            Family::EvenEven | Family::OddEven => (order / 2) as usize - usize::from(self == Family::OddEven),
            Family::EvenOdd | Family::OddOdd => ((order - 1) / 2) as usize,
        }
    }

    /// Offset between the two Bessel orders in the radial product series.
    fn bessel_shift(self) -> i64 {
        match self {
            Family::EvenEven => 0,
            Family::EvenOdd | Family::OddOdd => 1,
            Family::OddEven => 2,
        }
    }
}

/// Characteristic value and Fourier coefficients of one Mathieu function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuSolution {
    parity: Parity,
    order: u32,
    q: f64,
    char_value: f64,
    /// `coeffs[k]` multiplies harmonic `first_harmonic + 2k`.
    coeffs: Vec<f64>,
}

/// Default matrix size before tail-driven doubling.
pub fn initial_truncation(order: u32, q: f64) -> usize {
    let guess = order as usize + 10 + (1.5 * q.sqrt()).ceil() as usize;
    guess.max(25)
}

fn validate(parity: Parity, order: u32, q: f64) -> Result<()> {
    if parity == Parity::Odd && order == 0 {
        return Err(Error::InvalidOrder(order));
    }
    if !q.is_finite() || q < 0.0 {
        return Err(Error::InvalidParameter(q));
    }
    Ok(())
}

/// Solves for `a_m(q)` (even) or `b_m(q)` (odd) and the Fourier coefficients,
/// growing the truncation until the last coefficient is negligible.
pub fn solve_characteristic(parity: Parity, order: u32, q: f64) -> Result<MathieuSolution> {
    validate(parity, order, q)?;
    let mut size = initial_truncation(order, q);
    loop {
        let sol = solve_truncated(parity, order, q, size)?;
        if sol.tail_ratio() < TAIL_TOLERANCE {
            return Ok(sol);
        }
        size *= 2;
        if size > MAX_TRUNCATION {
            return Err(Error::TruncationNotConverged { order, q, size });
        }
    }
}

/// Same as [`solve_characteristic`] with a fixed matrix size and no tail check.
pub fn solve_truncated(parity: Parity, order: u32, q: f64, size: usize) -> Result<MathieuSolution> {
    validate(parity, order, q)?;
    let family = Family::of(parity, order);
    let index = family.eigen_index(order);
    let size = size.max(index + 2);

    let (diag, off) = recurrence_matrix(family, q, size);
    let char_value = kth_eigenvalue(&diag, &off, index);
    let mut w = eigenvector(&diag, &off, char_value);

    // Undo the symmetrising scale on A_0.
    if family == Family::EvenEven {
        w[0] /= std::f64::consts::SQRT_2;
    }

    let mut sol = MathieuSolution {
        parity,
        order,
        q,
        char_value,
        coeffs: w,
    };
    let (reference, expected_sign) = sol.sign_reference();
    if reference * expected_sign < 0.0 {
        sol.coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(sol)
}

fn recurrence_matrix(family: Family, q: f64, size: usize) -> (Vec<f64>, Vec<f64>) {
    let h0 = family.first_harmonic() as f64;
    let mut diag: Vec<f64> = (0..size)
        .map(|k| {
            let h = h0 + 2.0 * k as f64;
            h * h
        })
        .collect();
    let mut off = vec![q; size - 1];
    match family {
        Family::EvenEven => off[0] = std::f64::consts::SQRT_2 * q,
        Family::EvenOdd => diag[0] += q,
        Family::OddOdd => diag[0] -= q,
        Family::OddEven => {}
    }
    (diag, off)
}

/// Number of eigenvalues strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut p = diag[0] - x;
    for i in 0..diag.len() {
        if i > 0 {
            p = (diag[i] - x) - off[i - 1] * off[i - 1] / p;
        }
        if p == 0.0 {
            p = -tiny;
        }
        if p < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        left + right
    };
    let mut lo = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    lo -= 1.0;
    hi += 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse iteration on `T - lambda I` with a partially pivoted tridiagonal LU.
fn eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let norm = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())) + 2.0 * off.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let eps_pivot = f64::EPSILON * norm.max(1.0);

    // LU of (T - lambda I) with row interchanges; U has up to two superdiagonals.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];

    let mut d = diag[0] - lambda;
    let mut e = if n > 1 { off[0] } else { 0.0 };
    for i in 0..n - 1 {
        let sub = off[i];
        let next_d = diag[i + 1] - lambda;
        let next_e = if i + 2 < n { off[i + 1] } else { 0.0 };
        if d.abs() >= sub.abs() {
            let pivot = if d == 0.0 { eps_pivot } else { d };
            u0[i] = pivot;
            u1[i] = e;
            u2[i] = 0.0;
            mult[i] = sub / pivot;
            swapped[i] = false;
            d = next_d - mult[i] * e;
            e = next_e;
        } else {
            u0[i] = sub;
            u1[i] = next_d;
            u2[i] = next_e;
            mult[i] = d / sub;
            swapped[i] = true;
            d = e - mult[i] * next_d;
            e = -mult[i] * next_e;
        }
    }
    u0[n - 1] = if d.abs() < eps_pivot { eps_pivot } else { d };

    let mut x = vec![1.0; n];
    for _ in 0..3 {
        // forward elimination on the right-hand side
        for i in 0..n - 1 {
            if swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= mult[i] * x[i];
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
        }
        let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= len);
    }
    x
}

/// Value with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Angular,
    Radial,
}

/// Residual of the defining ODE and the magnitude of its terms (for the
/// angular equation, of the Fourier terms that make them up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    pub residual: f64,
    pub scale: f64,
}

impl OdeResidual {
    /// `|residual| / scale`, or 0 when every term vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }
}

impl MathieuSolution {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn char_value(&self) -> f64 {
        self.char_value
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    fn family(&self) -> Family {
        Family::of(self.parity, self.order)
    }

    /// Harmonic multiplying `coeffs()[k]`.
    pub fn harmonic(&self, k: usize) -> u32 {
        self.family().first_harmonic() + 2 * k as u32
    }

    /// |last coefficient| / max |coefficient|.
    pub fn tail_ratio(&self) -> f64 {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        self.coeffs.last().map_or(0.0, |c| c.abs() / max)
    }

    /// Same function with every coefficient multiplied by `factor`.
    ///
    /// The result is no longer normalised; zeros are unchanged.
    pub fn scaled(&self, factor: f64) -> MathieuSolution {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    fn sign_reference(&self) -> (f64, f64) {
        let n = self.family().eigen_index(self.order) as i32;
        let alt = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let pow = |e: i32| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        match self.family() {
            // ce_2n(pi/2) = sum (-1)^k A_2k
            Family::EvenEven => (self.coeffs.iter().enumerate().map(|(k, c)| alt(k) * c).sum(), pow(n)),
            // se_2n+1(pi/2) = sum (-1)^k B_2k+1
            Family::OddOdd => (self.coeffs.iter().enumerate().map(|(k, c)| alt(k) * c).sum(), pow(n)),
            // ce_2n+1'(pi/2) = -sum (-1)^k (2k+1) A_2k+1
            Family::EvenOdd => (
                -self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| alt(k) * (2 * k + 1) as f64 * c)
                    .sum::<f64>(),
                pow(n + 1),
            ),
            // se_2n+2'(pi/2) = sum (-1)^(k+1) (2k+2) B_2k+2
            Family::OddEven => (
                -self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| alt(k) * (2 * k + 2) as f64 * c)
                    .sum::<f64>(),
                pow(n + 1),
            ),
        }
    }

    /// `ce_m(v, q)` or `se_m(v, q)` and its first two derivatives in `v`.
    pub fn angular_jet(&self, nu: f64) -> Jet {
        let h0 = self.family().first_harmonic() as f64;
        let mut jet = Jet { value: 0.0, d1: 0.0, d2: 0.0 };
        for (k, &c) in self.coeffs.iter().enumerate() {
            let h = h0 + 2.0 * k as f64;
            let (s, co) = (h * nu).sin_cos();
            match self.parity {
                Parity::Even => {
                    jet.value += c * co;
                    jet.d1 -= c * h * s;
                    jet.d2 -= c * h * h * co;
                }
                Parity::Odd => {
                    jet.value += c * s;
                    jet.d1 += c * h * co;
                    jet.d2 -= c * h * h * s;
                }
            }
        }
        jet
    }

    pub fn angular_value(&self, nu: f64) -> f64 {
        self.angular_jet(nu).value
    }

    pub fn angular_derivative(&self, nu: f64) -> f64 {
        self.angular_jet(nu).d1
    }

    /// `Ce_m(mu, q)` or `Se_m(mu, q)` and its first two derivatives in `mu`,
    /// summed term by term from the Bessel-product series.
    pub fn radial_jet(&self, mu: f64) -> Result<Jet> {
        if !mu.is_finite() {
            return Err(Error::RadialOverflow { mu, arg: f64::INFINITY });
        }
        if self.q == 0.0 {
            return Ok(self.radial_jet_q0(mu));
        }
        let root_q = self.q.sqrt();
        let v1 = root_q * (-mu).exp();
        let v2 = root_q * mu.exp();
        let arg = v1.max(v2);
        if !(arg <= MAX_RADIAL_ARGUMENT) {
            return Err(Error::RadialOverflow { mu, arg });
        }

        let family = self.family();
        let shift = family.bessel_shift();
        let top = self.coeffs.len() + shift as usize;
        let t1 = BesselJTable::new(top, v1);
        let t2 = BesselJTable::new(top, v2);

        // d/dmu J(v1) = -v1 J'(v1);  d2/dmu2 J(v1) = v1 J'(v1) + v1^2 J''(v1)
        let inner = |n: i64| {
            let d = t1.derivative(n);
            (t1.value(n), -v1 * d, v1 * d + v1 * v1 * t1.second_derivative(n))
        };
        // d/dmu J(v2) = v2 J'(v2);  d2/dmu2 J(v2) = v2 J'(v2) + v2^2 J''(v2)
        let outer = |n: i64| {
            let d = t2.derivative(n);
            (t2.value(n), v2 * d, v2 * d + v2 * v2 * t2.second_derivative(n))
        };
        let product = |(x, dx, ddx): (f64, f64, f64), (y, dy, ddy): (f64, f64, f64)| {
            (x * y, dx * y + x * dy, ddx * y + 2.0 * dx * dy + x * ddy)
        };

        let mut jet = Jet { value: 0.0, d1: 0.0, d2: 0.0 };
        for (k, &c) in self.coeffs.iter().enumerate() {
            let k = k as i64;
            let term = if shift == 0 {
                product(inner(k), outer(k))
            } else {
                let a = product(inner(k), outer(k + shift));
                let b = product(inner(k + shift), outer(k));
                match self.parity {
                    Parity::Even => (a.0 + b.0, a.1 + b.1, a.2 + b.2),
                    Parity::Odd => (a.0 - b.0, a.1 - b.1, a.2 - b.2),
                }
            };
            let w = if k % 2 == 0 { c } else { -c };
            jet.value += w * term.0;
            jet.d1 += w * term.1;
            jet.d2 += w * term.2;
        }
        if family.eigen_index(self.order) % 2 == 1 {
            jet.value = -jet.value;
            jet.d1 = -jet.d1;
            jet.d2 = -jet.d2;
        }
        Ok(jet)
    }

    fn radial_jet_q0(&self, mu: f64) -> Jet {
        let m = self.order as f64;
        let (c, s) = ((m * mu).cosh(), (m * mu).sinh());
        // the coefficient vector may have been rescaled
        let amp = self.coeffs.iter().fold(0.0f64, |a, c| if c.abs() > a.abs() { *c } else { a });
        match self.parity {
            Parity::Even => Jet { value: amp * c, d1: amp * m * s, d2: amp * m * m * c },
            Parity::Odd => Jet { value: amp * s, d1: amp * m * c, d2: amp * m * m * s },
        }
    }

    pub fn radial_value(&self, mu: f64) -> Result<f64> {
        Ok(self.radial_jet(mu)?.value)
    }

    /// Exact `mu`-derivative of the radial function (no finite differences).
    pub fn radial_derivative(&self, mu: f64) -> Result<f64> {
        Ok(self.radial_jet(mu)?.d1)
    }

    /// `y'' + (a - 2q cos 2v) y` (angular) or `Y'' - (a - 2q cosh 2u) Y` (radial).
    pub fn ode_residual(&self, x: f64, equation: Equation) -> Result<OdeResidual> {
        let (jet, potential) = match equation {
            Equation::Angular => (self.angular_jet(x), self.char_value - 2.0 * self.q * (2.0 * x).cos()),
            Equation::Radial => (self.radial_jet(x)?, -(self.char_value - 2.0 * self.q * (2.0 * x).cosh())),
        };
        let mut scale = jet.d2.abs() + (potential * jet.value).abs();
        if equation == Equation::Angular {
            // where the function is exponentially small the Fourier sum cancels,
            // so the attainable residual is set by the term sizes
            let h0 = self.family().first_harmonic() as f64;
            let (sum, sum_h2) = self.coeffs.iter().enumerate().fold((0.0, 0.0), |(s, s2), (k, c)| {
                let h = h0 + 2.0 * k as f64;
                (s + c.abs(), s2 + c.abs() * h * h)
            });
            scale += sum_h2 + potential.abs() * sum;
        }
        Ok(OdeResidual {
            residual: jet.d2 + potential * jet.value,
            scale,
        })
    }
}
