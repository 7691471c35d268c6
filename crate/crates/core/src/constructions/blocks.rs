//! The blocks `A_m`: nonempty clopens `⋃ [sᵢ] × {mᵢ}` with every `sᵢ` of
//! length `m + 1`, every `mᵢ ≤ m`, and `sᵢ↾m ≠ sⱼ↾m` whenever `mᵢ = mⱼ`.
//!
//! On canonical forms this is: nonempty, every word of length exactly
//! `m + 1`, every level at most `m`. A shorter canonical word would refine
//! into a pair of siblings; two siblings of length `m + 1` would have been
//! merged.

use crate::cantor::{ClopenX, RepSet};
use crate::error::Result;
use crate::topology::{block_witness, BasicOpen};

/// `φ ∈ A_m`
pub fn in_a_m(phi: &ClopenX, m: u64) -> bool {
    !phi.is_empty()
        && phi
            .cylinders()
            .iter()
            .all(|c| c.word.len() as u64 == m + 1 && u64::from(c.level) <= m)
}

/// The unique `m` with `φ ∈ A_m`, if any.
pub fn block_of(phi: &ClopenX) -> Option<u64> {
    let first = phi.cylinders().first()?;
    let m = (first.word.len() as u64).checked_sub(1)?;
    in_a_m(phi, m).then_some(m)
}

pub fn in_some_block(phi: &ClopenX) -> bool {
    block_of(phi).is_some()
}

/// `dense_witness_in_Am`: `(l, φ)` with `l + 1 ∈ E` and `φ ∈ A_{l+1} ∩ V`.
pub fn dense_witness_in_am(v: &BasicOpen, e: &RepSet, budget: usize) -> Result<(u64, ClopenX)> {
    block_witness(v, |k| e.contains(k), budget)
}
