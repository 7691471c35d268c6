//! Failure of weak selective separability: finite pieces of the dense sets
//! `D(A_n)` whose union is avoided by every `(χ_B, m)^+`.

use std::sync::Arc;

use super::dset::d_membership;
use super::sequences::closed_discrete_check;
use crate::cantor::{ClopenX, IndexFilter, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Role, Scan};
use crate::enumeration::unrank;
use crate::error::{Error, Result};
use crate::ideals::{star_member, Builtin, IdealHandle, StarIdeal, TriState};
use crate::topology::{density_probe, BasicOpen, Bounds, ProbeFamily, Target};

/// `xinoSS_certificate`: with `q_n = 1 + max |s|` over the words of `K_n`
/// and `B = ⋃_n (A_n ∩ [0, q_n])`, certifies `B ∈ I` and
/// `(χ_B, m)^+ ∩ ⋃_n K_n = ∅` for every `m < m_levels`.
pub fn xinoss_certificate(
    ideal: &IdealHandle,
    a: &[RepSet],
    k: &[Vec<u64>],
    m_levels: u32,
) -> Result<Certificate> {
    if a.len() != k.len() {
        return Err(Error::Precondition(format!("{} sets A_n but {} index lists K_n", a.len(), k.len())));
    }
    let mut parts = Vec::new();
    let mut phis = Vec::new();
    let mut ev = Vec::new();
    for (n, (an, kn)) in a.iter().zip(k).enumerate() {
        let clopens: Vec<ClopenX> = kn.iter().map(|&i| unrank(i)).collect();
        for (&i, phi) in kn.iter().zip(&clopens) {
            if !d_membership(an, phi) {
                return Err(Error::Precondition(format!("φ_{i} = {phi} is not in D(A_{n})")));
            }
        }
        let q = clopens.iter().map(ClopenX::max_word_len).max().map_or(0, |l| l as u64 + 1);
        let cut = RepSet::finite((0..=q).filter(|&j| an.contains(j)));
        for phi in &clopens {
            ev.push(Evidence::DMember { a: cut.clone(), phi: phi.clone(), expected: true });
        }
        parts.push(cut);
        phis.extend(clopens);
    }
    let b = RepSet::finite(parts.iter().flat_map(|p| p.iter()).collect::<Vec<_>>());
    let prov = Provenance::new(Some(&ideal.name()), None, None).param("m_levels", m_levels);
    let mut cert = Certificate::new("⋃ K_n is avoided by (χ_B, m)⁺ for every level m", prov);
    cert.evidence = ev;
    let member = match ideal {
        IdealHandle::Builtin(_) => {
            cert.push(Evidence::IdealMember { ideal: ideal.name(), set: b.clone(), expected: TriState::Yes });
            ideal.member(&b)
        }
        IdealHandle::Star(s) => {
            let (t, sub) = star_member(s, &b, s.family());
            cert.sub(Role::Required, sub);
            t
        }
    };
    let scan = Evidence::scan(Scan::BetaHits { beta: b, m_bound: m_levels, phis });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.hits == 0);
    cert.push(scan);
    let kind = if clean && member == TriState::Yes { cert.kind } else { Outcome::Refuted };
    Ok(cert.with_kind(kind))
}

/// Budgets for the tower pipeline.
#[derive(Clone, Debug)]
pub struct TowerBounds {
    pub star: Bounds,
    pub probe: Bounds,
    pub seed: u64,
    pub m_levels: u32,
    /// Levels and indices of the closed-discrete check.
    pub closed_m: u32,
    pub closed_n: u64,
}

impl Default for TowerBounds {
    fn default() -> Self {
        TowerBounds {
            star: Bounds { probes: 8, index_bound: 600, refinements: 2, ..Bounds::default() },
            probe: Bounds { probes: 12, index_bound: 2_000, depth: 4, levels: 2, constraints: 2, ..Bounds::default() },
            seed: 42,
            m_levels: 8,
            closed_m: 16,
            closed_n: 1_000,
        }
    }
}

/// `U_n = (χ_{n}, 0)^+ ∩ ⋂_{j<n} (χ_{j}, 0)^-`, pairwise disjoint.
pub fn disjoint_open(n: u64, ideal: &str) -> BasicOpen {
    (0..n).fold(BasicOpen::full(ideal).plus(PointB::from_ones([n]), 0), |v, j| {
        v.minus(PointB::from_ones([j]), 0)
    })
}

/// Least `m > 0` with `φ_m ∈ D(A)`.
fn first_d_index(a: &RepSet, search: u64) -> Option<u64> {
    (1..search).find(|&m| d_membership(a, &unrank(m)))
}

/// `yknoss_pipeline` over the power-set tower: `A_n = {m : φ_m ∈ U_n}`
/// is outside `I⋆`, `Ê_n` with `E_n = D(A_n)` is dense in `𝕐(I⋆⋆)`, the
/// chosen finite `K_n` are handled by `xinoss_certificate` at the `I⋆`
/// level and `⋃ K_n` is closed discrete in `𝕐(I⋆⋆)`.
pub fn yknoss_pipeline(n_max: u64, tb: &TowerBounds, k_override: Option<Vec<Vec<u64>>>) -> Result<Certificate> {
    let base = IdealHandle::Builtin(Builtin::PowerSet);
    let star = Arc::new(StarIdeal::with_bounds(base.clone(), tb.star.clone(), tb.seed));
    let star_h = IdealHandle::Star(star.clone());
    let star2 = Arc::new(StarIdeal::with_bounds(star_h.clone(), tb.star.clone(), tb.seed));
    let star2_h = IdealHandle::Star(star2);
    let prov = Provenance::new(Some(&star2_h.name()), Some(tb.seed), Some(&tb.probe)).param("n_max", n_max);
    let mut cert = Certificate::new("𝕐 over the second star of the power set is not wSS (bounded)", prov);
    if n_max == 0 {
        cert.note("no sets requested; the claim holds vacuously");
        return Ok(cert);
    }

    let a: Vec<RepSet> = (0..n_max)
        .map(|n| RepSet::indices(IndexFilter::PhiIn { open: Box::new(disjoint_open(n, &base.name())) }))
        .collect();

    let family = ProbeFamily::generate(&star2_h, tb.seed, &tb.probe);
    for (n, an) in a.iter().enumerate() {
        let (t, sub) = star_member(&star, an, star.family());
        let mut stage = Certificate::new(format!("A_{n} is not in {}", star_h.name()), cert.provenance.clone());
        stage.sub(Role::Informational, sub);
        cert.sub(Role::Required, stage.with_kind(if t == TriState::No { Outcome::Verified } else { Outcome::Exhausted }));

        let target = Target::Hat { set: RepSet::indices(IndexFilter::DSet { a: Box::new(an.clone()) }) };
        cert.sub(Role::Required, density_probe(&target, &star2_h, &family));
    }

    let k = match k_override {
        Some(k) => k,
        None => a
            .iter()
            .map(|an| first_d_index(an, tb.star.index_bound).into_iter().collect())
            .collect(),
    };
    cert.sub(Role::Required, xinoss_certificate(&star_h, &a, &k, tb.m_levels)?);
    let union = RepSet::finite(k.iter().flatten().copied().collect::<Vec<_>>());
    cert.sub(Role::Required, closed_discrete_check(&star2_h, &union, tb.closed_m, tb.closed_n)?);
    Ok(cert)
}
