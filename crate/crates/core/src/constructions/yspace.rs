//! Failure of q⁺ in `𝕐(I)` for tall `I`: a selector of the blocks
//! `B_{m_k} = {ψ_n : φ_n ∈ A_{m_k}}`, `m_k ∈ L′`, that stays away from
//! `ψ_q` where `φ_q = [ε] × {0}`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::blocks::{in_a_m, in_some_block};
use crate::cantor::{BitWord, ClopenX, Cylinder, IndexFilter, NamedPredicate, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Role, Scan};
use crate::enumeration::{q_index, rank, unrank};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};
use crate::topology::{density_probe, BasicOpen, ProbeFamily, Target, Theta};

/// `z_k`: the least member of `A_m` in cylinder order, `[0^{m+1}] × {0}`.
pub fn least_block_member(m: u64) -> ClopenX {
    ClopenX::single(BitWord::zeros(m as usize + 1), 0)
}

/// `α(n) = 1` iff `n = m_k` and `[α↾n ⌢ 0] × {0} ⊆ z_k`. The containment is
/// tested first, so `is_m` is only consulted while it can matter.
fn alpha_bit(n: u64, prefix: &BitWord, is_m: impl Fn(u64) -> bool) -> bool {
    let z = least_block_member(n);
    z.contains_cylinder(&Cylinder { level: 0, word: prefix.pushed(false) }) && is_m(n)
}

fn alpha_prefix(m_values: &[u64]) -> BitWord {
    let len = m_values.last().map_or(0, |m| m + 1);
    let ms: BTreeSet<u64> = m_values.iter().copied().collect();
    let mut alpha = BitWord::empty();
    for n in 0..len {
        let bit = alpha_bit(n, &alpha, |n| ms.contains(&n));
        alpha.push(bit);
    }
    alpha
}

/// Replayable record of the selector and the diagonal point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelectorEvidence {
    /// `L′`, whose first elements are the `m_k`.
    pub l_prime: RepSet,
    pub m_values: Vec<u64>,
    /// `α↾(m_K + 1)`
    pub alpha: BitWord,
}

/// Outcomes of the certified clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectorClauses {
    /// The `m_k` are the first elements of `L′` and `α` follows the rule.
    pub recomputed: bool,
    /// `α⁻¹(1) ⊆ {m_k}` and no `φ_n` with `α(n) = 1` lies in a block, so
    /// `α(n_k) = 0` for every selected `n_k`.
    pub ones: bool,
    /// `z_k ∈ A_{m_k}` and `(α, 0) ∉ z_k`.
    pub avoid: bool,
    /// `(α, 0) ∈ φ_q = [ε] × {0}`.
    pub anchor: bool,
}

impl SelectorClauses {
    pub fn all(&self) -> bool {
        self.recomputed && self.ones && self.avoid && self.anchor
    }
}

impl SelectorEvidence {
    pub fn clauses(&self) -> SelectorClauses {
        let firsts: Vec<u64> = self.l_prime.iter().take(self.m_values.len()).collect();
        let recomputed = firsts == self.m_values && alpha_prefix(&self.m_values) == self.alpha;
        let ms: BTreeSet<u64> = self.m_values.iter().copied().collect();
        let ones = self
            .alpha
            .one_positions()
            .all(|n| ms.contains(&(n as u64)) && !in_some_block(&unrank(n as u64)));
        let avoid = self.m_values.iter().all(|&m| {
            let z = least_block_member(m);
            in_a_m(&z, m) && z.contains_prefix(&self.alpha, 0) == Some(false)
        });
        let anchor = ClopenX::full_level(0).contains_prefix(&self.alpha, 0) == Some(true);
        SelectorClauses { recomputed, ones, avoid, anchor }
    }

    pub fn check(&self) -> bool {
        self.clauses().all()
    }

    /// Once `α` has a 1 every later containment `[α↾n ⌢ 0] ⊆ [0^{n+1}]`
    /// fails, so `α` is the characteristic function of its prefix ones.
    pub fn closed_form(&self) -> Option<PointB> {
        let ones: Vec<u64> = self.alpha.one_positions().map(|n| n as u64).collect();
        (!ones.is_empty()).then(|| PointB::from_ones(ones))
    }
}

#[derive(Clone, Debug)]
pub struct YReport {
    pub l_prime: RepSet,
    /// `(m_k, z_k, n_k)`, with `n_k = rank(z_k)` when it fits in 64 bits.
    pub selector: Vec<(u64, ClopenX, Option<u64>)>,
    pub alpha: PointB,
    pub evidence: SelectorEvidence,
    pub certificate: Certificate,
}

/// `y_not_qplus`: `L = {n : φ_n ∉ ⋃_m A_m}`, `L′ = thin_subset(L)`, the
/// selector `z_k = [0^{m_k+1}] × {0} ∈ A_{m_k}` and the point `α` with
/// `ψ_q ∈ (α, 0)^+` and `(α, 0) ∉ ψ_{n_k}` for `k ≤ k_bound`. The density
/// of `⋃_k B_{m_k}` is probed and recorded without affecting the outcome.
pub fn y_not_qplus(ideal: &IdealHandle, k_bound: u64, fam: Option<&ProbeFamily>) -> Result<YReport> {
    let l = RepSet::indices(IndexFilter::OutsideBlocks);
    let l_prime = ideal.thin_subset(&l)?;
    let m_values: Vec<u64> = l_prime.iter().take(k_bound as usize + 1).collect();
    if m_values.len() as u64 != k_bound + 1 {
        return Err(Error::Precondition("L′ has too few elements".into()));
    }
    let alpha_bits = alpha_prefix(&m_values);
    let evidence = SelectorEvidence { l_prime: l_prime.clone(), m_values: m_values.clone(), alpha: alpha_bits.clone() };

    let ms: Arc<BTreeSet<u64>> = Arc::new(m_values.iter().copied().collect());
    let m_top = *m_values.last().expect("k_bound + 1 elements");
    let lp = l_prime.clone();
    let view_set = l_prime.clone();
    let alpha = PointB::lazy(
        "diagonal point against the selector",
        move |n, prefix| alpha_bit(n, prefix, |n| if n <= m_top { ms.contains(&n) } else { lp.contains(n) }),
        Some(RepSet::subset_of(view_set, NamedPredicate::new("α(n) = 1", {
            let bits = alpha_bits.clone();
            move |n| bits.get(n as usize).unwrap_or(false)
        }))),
    );

    let selector: Vec<(u64, ClopenX, Option<u64>)> = m_values
        .iter()
        .map(|&m| {
            let z = least_block_member(m);
            let n = rank(&z).ok();
            (m, z, n)
        })
        .collect();

    let q = q_index();
    let prov = Provenance::new(Some(&ideal.name()), fam.map(|f| f.seed), fam.map(|f| &f.bounds))
        .param("k_bound", k_bound)
        .param("q", q);
    let mut cert = Certificate::new("ψ_q is not in the closure of the selector", prov);
    cert.push(Evidence::IndexOf { index: q, phi: ClopenX::full_level(0) });
    cert.push(Evidence::scan(Scan::Elements { set: l_prime.clone(), count: k_bound + 1 }));
    if let IdealHandle::Builtin(_) = ideal {
        cert.push(Evidence::IdealMember { ideal: ideal.name(), set: l_prime.clone(), expected: TriState::Yes });
    }
    let clauses = evidence.clauses();
    cert.push(Evidence::SelectorAvoid(evidence.clone()));

    // Second route: evaluate ψ_{n_k} directly at the closed form of α.
    let mut direct = true;
    if let Some(point) = evidence.closed_form() {
        let agree = (0..alpha_prefix_len(&evidence)).all(|n| point.bit(n) == alpha.bit(n));
        direct &= agree;
        let open = BasicOpen::full(ideal.name()).plus(point.clone(), 0);
        cert.push(Evidence::BasicMember { theta: Theta::psi(q), open: open.clone(), expected: true });
        direct &= open.contains_psi(q);
        for (m, z, n) in &selector {
            if let Some(n) = n {
                cert.push(Evidence::InBlock { phi: z.clone(), m: *m, expected: true });
                cert.push(Evidence::BasicMember { theta: Theta::psi(*n), open: open.clone(), expected: false });
                direct &= !open.contains_psi(*n);
            }
        }
    } else {
        direct = false;
    }
    cert.note(format!(
        "{} of {} selected indices fit in 64 bits and were evaluated directly",
        selector.iter().filter(|s| s.2.is_some()).count(),
        selector.len()
    ));

    if let Some(fam) = fam {
        let b = RepSet::indices(IndexFilter::InBlocks { ms: Box::new(l_prime.clone()) });
        let density = density_probe(&Target::Hat { set: b }, ideal, fam);
        cert.note(format!("density of ⋃ B_(m_k): {:?}", density.kind));
        cert.sub(Role::Informational, density);
    }

    let kind = if clauses.all() && direct { Outcome::Verified } else { Outcome::Refuted };
    Ok(YReport { l_prime, selector, alpha, evidence, certificate: cert.with_kind(kind) })
}

fn alpha_prefix_len(e: &SelectorEvidence) -> u64 {
    e.alpha.len() as u64
}
