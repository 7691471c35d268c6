//! Points avoiding a selector of the blocks `A_k`, and the resulting failure
//! of the q⁺ property in `𝕏(I)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::blocks::{block_of, in_a_m};
use crate::cantor::{cylinder_subset, BitWord, ClopenX, Cylinder, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};
use crate::topology::seeded_rng;

/// `k ↦ z_k ∈ A_k` for `k ∈ E`.
#[derive(Clone)]
pub struct Selector {
    pub e: RepSet,
    pub name: String,
    choose: Arc<dyn Fn(u64) -> ClopenX + Send + Sync>,
}

impl fmt::Debug for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Selector({} on {})", self.name, self.e)
    }
}

impl Selector {
    pub fn new(e: RepSet, name: impl Into<String>, choose: impl Fn(u64) -> ClopenX + Send + Sync + 'static) -> Self {
        Selector { e, name: name.into(), choose: Arc::new(choose) }
    }

    /// `z_k = [0^{k+1}] × {0}`
    pub fn zeros(e: RepSet) -> Self {
        Self::new(e, "zeros", |k| ClopenX::single(BitWord::zeros(k as usize + 1), 0))
    }

    /// A pseudo-random member of each block, a function of `(seed, k)`:
    /// one to three cylinders at random levels `≤ k`, no two at the same
    /// level sharing their first `k` bits.
    pub fn seeded(e: RepSet, seed: u64) -> Self {
        Self::new(e, format!("seeded({seed})"), move |k| {
            let mut rng = seeded_rng(seed, &format!("selector|{k}"));
            let len = k as usize + 1;
            let count = rng.random_range(1..=3usize);
            let mut cyls: Vec<Cylinder> = Vec::new();
            for _ in 0..count {
                let level = rng.random_range(0..=k.min(3)) as u32;
                let word = BitWord::from_bits((0..len).map(|_| rng.random_bool(0.5)).collect());
                let clash = cyls
                    .iter()
                    .any(|c| c.level == level && c.word.bits()[..k as usize] == word.bits()[..k as usize]);
                if !clash {
                    cyls.push(Cylinder { level, word });
                }
            }
            ClopenX::canonicalize(cyls)
        })
    }

    pub fn choose(&self, k: u64) -> ClopenX {
        (self.choose)(k)
    }

    /// Whether `φ` is one of the selected clopens.
    pub fn selects(&self, phi: &ClopenX) -> bool {
        block_of(phi).is_some_and(|k| self.e.contains(k) && self.choose(k) == *phi)
    }
}

/// Replayable record of a diagonal construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagonalEvidence {
    pub e: RepSet,
    /// The clopen that must stay in `(α, p₁)^+`.
    pub phi: ClopenX,
    pub t1: BitWord,
    pub p1: u32,
    pub depth: u64,
    /// `α↾(max(|t₁|, depth + 1))`
    pub alpha: BitWord,
    /// `(k, z_k)` for every `k ∈ E` with `|t₁| ≤ k ≤ depth`.
    pub selections: Vec<(u64, ClopenX)>,
}

/// Outcomes of the three certified clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalClauses {
    /// `φ ∈ (α, p₁)^+`
    pub anchor: bool,
    /// `(α, p₁) ∉ z_k` for every `k ∈ E`, `|t₁| ≤ k ≤ depth`.
    pub avoid: bool,
    /// `α⁻¹(1) ∖ [0, |t₁|) ⊆ E` up to `depth`.
    pub ones_in_e: bool,
}

impl DiagonalClauses {
    pub fn all(&self) -> bool {
        self.anchor && self.avoid && self.ones_in_e
    }
}

fn diagonal_prefix(e: &RepSet, t1: &BitWord, p1: u32, depth: u64, z: impl Fn(u64) -> Option<ClopenX>) -> BitWord {
    let len = (depth as usize + 1).max(t1.len());
    let mut alpha = BitWord::empty();
    for n in 0..len as u64 {
        let bit = if (n as usize) < t1.len() {
            t1.bit(n as usize)
        } else if e.contains(n) {
            z(n).is_some_and(|zn| cylinder_subset(&Cylinder { level: p1, word: alpha.pushed(false) }, &zn))
        } else {
            false
        };
        alpha.push(bit);
    }
    alpha
}

impl DiagonalEvidence {
    pub fn clauses(&self) -> DiagonalClauses {
        let t = self.t1.len() as u64;
        let anchor = self.phi.contains_prefix(&self.alpha, self.p1) == Some(true);
        let avoid = self
            .selections
            .iter()
            .all(|(_, z)| z.contains_prefix(&self.alpha, self.p1) == Some(false));
        let ones_in_e = self.alpha.one_positions().all(|n| (n as u64) < t || self.e.contains(n as u64));
        DiagonalClauses { anchor, avoid, ones_in_e }
    }

    /// Recomputes `α` from the recorded selections and re-checks the
    /// selections and the three clauses.
    pub fn check(&self) -> bool {
        let first = self.phi.cylinders().first();
        if first.map(|c| (&c.word, c.level)) != Some((&self.t1, self.p1)) {
            return false;
        }
        let t = self.t1.len() as u64;
        let expected_ks: Vec<u64> = (t..=self.depth).filter(|&k| self.e.contains(k)).collect();
        let ks: Vec<u64> = self.selections.iter().map(|(k, _)| *k).collect();
        if ks != expected_ks || !self.selections.iter().all(|(k, z)| in_a_m(z, *k)) {
            return false;
        }
        let lookup = |n: u64| self.selections.iter().find(|(k, _)| *k == n).map(|(_, z)| z.clone());
        let alpha = diagonal_prefix(&self.e, &self.t1, self.p1, self.depth, lookup);
        alpha == self.alpha && self.clauses().all()
    }
}

/// `diagonal_avoid_selector`
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub alpha: PointB,
    pub p1: u32,
    pub evidence: DiagonalEvidence,
    pub clauses: DiagonalClauses,
}

pub fn diagonal_avoid_selector(e: &RepSet, s: &Selector, phi: &ClopenX, depth: u64) -> Result<DiagonalReport> {
    let first = phi
        .cylinders()
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("φ must be nonempty".into()))?;
    if s.selects(phi) {
        return Err(Error::Precondition(format!("{phi} is selected")));
    }
    let t = first.word.len() as u64;
    let mut selections = Vec::new();
    for k in (t..=depth).filter(|&k| e.contains(k)) {
        let z = s.choose(k);
        if !in_a_m(&z, k) {
            return Err(Error::Precondition(format!("invalid selector: {z} is not in A_{k}")));
        }
        selections.push((k, z));
    }
    let lookup = |n: u64| selections.iter().find(|(k, _)| *k == n).map(|(_, z)| z.clone());
    let alpha_prefix = diagonal_prefix(e, &first.word, first.level, depth, lookup);
    let evidence = DiagonalEvidence {
        e: e.clone(),
        phi: phi.clone(),
        t1: first.word.clone(),
        p1: first.level,
        depth,
        alpha: alpha_prefix.clone(),
        selections,
    };
    let clauses = evidence.clauses();

    // α beyond the checked prefix follows the same rule.
    let (e2, s2, t1, p1) = (e.clone(), s.clone(), first.word.clone(), first.level);
    let ones: Vec<u64> = alpha_prefix.one_positions().map(|n| n as u64).collect();
    let alpha = PointB::lazy(
        format!("diagonal({phi}, {})", s.name),
        move |n, prefix| {
            if (n as usize) < t1.len() {
                t1.bit(n as usize)
            } else if e2.contains(n) {
                cylinder_subset(&Cylinder { level: p1, word: prefix.pushed(false) }, &s2.choose(n))
            } else {
                false
            }
        },
        None,
    );
    debug_assert!(ones.iter().all(|&n| alpha.bit(n)));
    Ok(DiagonalReport { alpha, p1: first.level, evidence, clauses })
}

/// `xI_not_qplus`: `φ` is separated from the selector by a subbasic set
/// `(α, p₁)^+` whose point lies in the ideal.
pub fn xi_not_qplus(ideal: &IdealHandle, e: &RepSet, phi: &ClopenX, s: &Selector, depth: u64) -> Result<Certificate> {
    if e.is_finite() != Some(false) {
        return Err(Error::Precondition(format!("E = {e} must be infinite")));
    }
    match ideal.member(e) {
        TriState::Yes => {}
        _ => {
            return Err(Error::Precondition(format!(
                "E = {e} must be an infinite member of {}",
                ideal.name()
            )))
        }
    }
    let report = diagonal_avoid_selector(e, s, phi, depth)?;
    let t1 = &report.evidence.t1;
    let head = RepSet::finite(t1.one_positions().map(|n| n as u64));
    let cover = RepSet::union(vec![e.clone(), head]);
    let prov = Provenance::new(Some(&ideal.name()), None, None)
        .param("selector", &s.name)
        .param("depth", depth);
    let mut cert = Certificate::new(
        format!("{phi} is outside the closure of the selector, separated by (α,{})+ with α in {}", report.p1, ideal.name()),
        prov,
    );
    let ok = report.clauses.all();
    cert.push(Evidence::Diagonal(report.evidence.clone()));
    let member = ideal.member(&cover);
    if let IdealHandle::Builtin(_) = ideal {
        cert.push(Evidence::IdealMember { ideal: ideal.name(), set: cover.clone(), expected: member });
    }
    cert.note("α⁻¹(1) ⊆ E ∪ t₁⁻¹(1) up to the depth; the second set is in the ideal");
    let kind = if ok && member == TriState::Yes { Outcome::Verified } else { Outcome::Refuted };
    Ok(cert.with_kind(kind))
}
