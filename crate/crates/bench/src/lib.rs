//! Benchmark fixtures shared by the criterion targets in `benches/`.

use mesa_core::Parity;

/// `(parity, m, q)` cases spanning the orders and q range of the mode table.
pub const CHARACTERISTIC_CASES: [(Parity, u32, f64); 4] = [
    (Parity::Even, 0, 55.2),
    (Parity::Even, 2, 244.48),
    (Parity::Odd, 1, 14.6),
    (Parity::Odd, 4, 132.99),
];
