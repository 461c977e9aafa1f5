//! Small numerical helpers shared by the state constructors and the
//! phase-space kernels.

use alloc::vec::Vec;

use crate::C64;

/// `ln n!` for `n = 0..=n_max`, accumulated as a running sum of logarithms.
pub fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n_max {
        acc += libm::log(k as f64);
        out.push(acc);
    }
    out
}

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> C64 {
    C64::new(libm::cos(phi), libm::sin(phi))
}

/// `e^{-i pi k / 2}` evaluated exactly from `k mod 4`.
#[inline]
pub fn quarter_turns(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, -1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 1.0),
    }
}

/// Euclidean remainder `x mod m` in `[0, m)` for `m > 0`.
#[inline]
pub fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = libm::fmod(x, m);
    if r < 0.0 { r + m } else { r }
}

/// Binomial coefficient as a float (small arguments only).
pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
