use std::sync::OnceLock;

use rayon::prelude::*;

use super::{IdealHandle, TriState};
use crate::cantor::{IndexFilter, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Scan};
use crate::enumeration::{rank, unrank};
use crate::topology::{avoid_scan, find_x_member, BasicOpen, Bounds, ProbeFamily, Target, Theta};

/// `I⋆ = {F : F′ is nowhere dense in 𝕏(I)}`, decided by bounded search.
#[derive(Debug)]
pub struct StarIdeal {
    pub base: IdealHandle,
    pub bounds: Bounds,
    pub seed: u64,
    family: OnceLock<ProbeFamily>,
}

impl StarIdeal {
    pub fn default_bounds() -> Bounds {
        Bounds { probes: 24, index_bound: 2_000, refinements: 4, ..Bounds::default() }
    }

    pub fn new(base: IdealHandle) -> Self {
        Self::with_bounds(base, Self::default_bounds(), 42)
    }

    pub fn with_bounds(base: IdealHandle, bounds: Bounds, seed: u64) -> Self {
        StarIdeal { base, bounds, seed, family: OnceLock::new() }
    }

    /// Probe family over the base topology.
    pub fn family(&self) -> &ProbeFamily {
        self.family.get_or_init(|| ProbeFamily::generate(&self.base, self.seed, &self.bounds))
    }

    pub fn member(&self, set: &RepSet) -> TriState {
        star_member(self, set, self.family()).0
    }
}

enum ProbeResult {
    Avoided(Vec<Evidence>),
    Dense(Vec<Evidence>),
    Open,
}

fn probe_one(v: &BasicOpen, f: &RepSet, fam: &ProbeFamily) -> ProbeResult {
    let bound = fam.bounds.index_bound;
    let budget = fam.bounds.eq_budget;
    let target = Target::Indices { set: f.clone() };
    let refinements = fam.refinements(v, fam.bounds.refinements);
    let found = |w: &BasicOpen| -> Option<u64> {
        find_x_member(w, budget)
            .ok()
            .and_then(|phi| rank(&phi).ok())
            .filter(|&r| f.contains(r))
            .or_else(|| (0..bound).find(|&n| f.contains(n) && w.contains_phi(n)))
    };
    for w in &refinements {
        if found(w).is_some() {
            continue;
        }
        let summary = avoid_scan(w, &target, bound);
        if summary.hits == 0 {
            return ProbeResult::Avoided(vec![
                Evidence::Nonempty { open: w.clone() },
                Evidence::Scan { scan: Scan::Avoid { open: w.clone(), target: target.clone(), bound }, expected: summary },
            ]);
        }
    }
    let mut ev = Vec::new();
    for w in &refinements {
        match found(w) {
            Some(n) => {
                ev.push(Evidence::BasicMember { theta: Theta::phi(n), open: w.clone(), expected: true });
                if f.is_serializable() {
                    ev.push(Evidence::SetMember { set: f.clone(), n, expected: true });
                }
            }
            None => return ProbeResult::Open,
        }
    }
    ProbeResult::Dense(ev)
}

/// Finite `F`: a fresh level above every level of `V` and of the `φ_n`,
/// `n ∈ F`, with the all-zeros point, excludes every `φ_n`.
fn finite_certificate(f: &RepSet, fam: &ProbeFamily, cert: &mut Certificate) {
    let members: Vec<u64> = f.iter().collect();
    let phi_top = members.iter().filter_map(|&n| unrank(n).max_level()).max();
    for v in &fam.opens {
        let level = v.max_level().max(phi_top).map_or(0, |m| m + 1);
        let w = v.clone().plus(PointB::zeros(), level);
        cert.push(Evidence::Nonempty { open: w.clone() });
        for &n in &members {
            cert.push(Evidence::BasicMember { theta: Theta::phi(n), open: w.clone(), expected: false });
        }
    }
}

/// `F′ = U ∩ 𝕏` is dense in `U` when `U` is a nonempty basic open of the
/// base topology: every refinement of `U` contains a clopen.
fn phi_in_certificate(u: &BasicOpen, fam: &ProbeFamily, cert: &mut Certificate) -> bool {
    let legal = u.points().all(|p| p.ones_view().is_some_and(|s| fam_ideal_member(fam, s)));
    if !legal || !u.is_nonempty() {
        return false;
    }
    cert.push(Evidence::Nonempty { open: u.clone() });
    for w in fam.refinements(u, fam.bounds.refinements) {
        let Ok(phi) = find_x_member(&w, fam.bounds.eq_budget) else { return false };
        cert.push(Evidence::BasicMember { theta: Theta::Clopen { phi: phi.clone() }, open: w, expected: true });
        cert.push(Evidence::BasicMember { theta: Theta::Clopen { phi }, open: u.clone(), expected: true });
    }
    true
}

fn fam_ideal_member(fam: &ProbeFamily, s: &RepSet) -> bool {
    IdealHandle::parse(&fam.ideal).is_ok_and(|h| h.member(s) == TriState::Yes)
}

/// `star_member`: `Yes` when every probe has a refinement avoiding `F′`
/// (certificate Verified), `No` when `F′` meets every refinement of some
/// probe (certificate Refuted), `Unknown` otherwise (Exhausted).
pub fn star_member(s: &StarIdeal, f: &RepSet, fam: &ProbeFamily) -> (TriState, Certificate) {
    let prov = Provenance::new(Some(&format!("star({})", s.base.name())), Some(fam.seed), Some(&fam.bounds));
    let mut cert = Certificate::new(format!("F′ is nowhere dense in 𝕏({}) for F = {f}", s.base.name()), prov);
    if f.is_finite() == Some(true) {
        finite_certificate(f, fam, &mut cert);
        return (TriState::Yes, cert.with_kind(Outcome::Verified));
    }
    if let RepSet::Indices { filter: IndexFilter::PhiIn { open } } = f {
        let mut dense = Certificate::new(cert.claim.clone(), cert.provenance.clone());
        if phi_in_certificate(open, fam, &mut dense) {
            dense.note("F′ = U ∩ 𝕏 meets every listed refinement of U");
            return (TriState::No, dense.with_kind(Outcome::Refuted));
        }
    }
    let results: Vec<ProbeResult> = fam.opens.par_iter().map(|v| probe_one(v, f, fam)).collect();
    if let Some((i, ev)) = results.iter().enumerate().find_map(|(i, r)| match r {
        ProbeResult::Dense(ev) => Some((i, ev)),
        _ => None,
    }) {
        cert.evidence = ev.clone();
        cert.note(format!("probe {i}: F′ meets every refinement"));
        return (TriState::No, cert.with_kind(Outcome::Refuted));
    }
    let mut all = true;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            ProbeResult::Avoided(ev) => cert.evidence.extend(ev),
            _ => {
                all = false;
                cert.push(Evidence::Note { text: format!("probe {i}: undecided") });
            }
        }
    }
    cert.note("avoidance is checked up to the index bound");
    if all {
        (TriState::Yes, cert.with_kind(Outcome::Verified))
    } else {
        (TriState::Unknown, cert.with_kind(Outcome::Exhausted))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(base: &str) -> StarIdeal {
        StarIdeal::with_bounds(
            IdealHandle::builtin(base).unwrap(),
            Bounds { probes: 12, index_bound: 600, refinements: 3, ..Bounds::default() },
            42,
        )
    }

    #[test]
    fn finite_sets_are_in_every_star() {
        for base in ["fin", "power-set", "empty-x-fin"] {
            let s = small(base);
            let (t, cert) = star_member(&s, &RepSet::finite([0, 1, 5]), s.family());
            assert_eq!(t, TriState::Yes);
            assert!(cert.replay().unwrap());
        }
    }

    #[test]
    fn all_indices_not_in_star_of_power_set() {
        let s = small("power-set");
        let (t, cert) = star_member(&s, &RepSet::all(), s.family());
        assert_eq!(t, TriState::No);
        assert_eq!(cert.kind, Outcome::Refuted);
        assert!(cert.replay().unwrap());
    }

    #[test]
    fn phi_in_open_is_not_in_star() {
        let s = small("fin");
        let u = BasicOpen::full("fin").plus(PointB::from_ones([0]), 0);
        let f = RepSet::indices(IndexFilter::PhiIn { open: Box::new(u) });
        let (t, cert) = star_member(&s, &f, s.family());
        assert_eq!(t, TriState::No);
        assert!(cert.replay().unwrap());
    }

    #[test]
    fn tower_does_not_contradict_inclusion() {
        let sets = [RepSet::finite([2, 3]), RepSet::all()];
        let lower = small("power-set");
        let upper = StarIdeal::with_bounds(
            IdealHandle::Star(std::sync::Arc::new(small("power-set"))),
            Bounds { probes: 8, index_bound: 400, refinements: 2, ..Bounds::default() },
            42,
        );
        for f in &sets {
            let a = star_member(&lower, f, lower.family()).0;
            let b = star_member(&upper, f, upper.family()).0;
            assert!(!(a == TriState::No && b == TriState::Yes), "{f}");
        }
    }
}
