//! Cantor pairing `π(i, j) = (i + j)(i + j + 1)/2 + j`, the fixed coding of
//! `ℕ × ℕ` into `ℕ`. Column `i` is `{π(i, j) : j ∈ ℕ}`, row `j` is
//! `{π(i, j) : i ∈ ℕ}`.

pub const PAIRING_VERSION: &str = "cantor-pairing/1";

pub fn pair(i: u64, j: u64) -> u64 {
    let s = i + j;
    s * (s + 1) / 2 + j
}

pub fn unpair(n: u64) -> (u64, u64) {
    // w = floor((sqrt(8n + 1) - 1) / 2), computed in u128 to avoid overflow.
    let w = (((8 * n as u128 + 1).isqrt() - 1) / 2) as u64;
    let t = w * (w + 1) / 2;
    let j = n - t;
    (w - j, j)
}
