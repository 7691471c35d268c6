use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basic::{block_witness, find_x_member, BasicOpen, Theta};
use super::probe::ProbeFamily;
use crate::cantor::{ClopenX, Cylinder, IndexFilter, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Scan, ScanSummary};
use crate::constructions::dset::d_membership;
use crate::enumeration::{phi_ref, rank, unrank};
use crate::ideals::{IdealHandle, TriState};

/// A subset of the space, addressed through the enumeration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum Target {
    /// All of `𝕏`.
    AllX,
    /// `F′ = {φ_n : n ∈ F}`.
    Indices { set: RepSet },
    /// `F̂ = {ψ_n : n ∈ F}`.
    Hat { set: RepSet },
    /// `D(A)`.
    DSet { a: RepSet },
    Empty,
}

impl Target {
    /// Whether the element of index `n` belongs to the target and lies in `v`.
    pub fn hit(&self, v: &BasicOpen, n: u64) -> bool {
        match self {
            Target::AllX => v.contains_phi(n),
            Target::Indices { set } => v.contains_phi(n) && set.contains(n),
            Target::Hat { set } => v.contains_psi(n) && set.contains(n),
            Target::DSet { a } => {
                v.contains_phi(n)
                    && match phi_ref(n) {
                        Some(phi) => d_membership(a, phi),
                        None => d_membership(a, &unrank(n)),
                    }
            }
            Target::Empty => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::AllX => "𝕏".into(),
            Target::Indices { set } => format!("F′ for F = {set}"),
            Target::Hat { set } => format!("F̂ for F = {set}"),
            Target::DSet { a } => format!("D({a})"),
            Target::Empty => "∅".into(),
        }
    }
}

/// Indices `n < bound` whose target element lies in `v`.
pub fn avoid_scan(v: &BasicOpen, target: &Target, bound: u64) -> ScanSummary {
    let mut s = ScanSummary { checked: bound, ..ScanSummary::default() };
    for n in 0..bound {
        if target.hit(v, n) {
            s.hits += 1;
            if s.detail.len() < 8 {
                s.detail.push(n);
            }
        }
    }
    s
}

/// A member of `D(A) ∩ V` built as in the density half of the `D(A)`
/// trichotomy: cut every positive point at a length `k` that separates the
/// points and passes a zero of the point inside `A`.
pub fn d_density_witness(v: &BasicOpen, a: &RepSet, search: u64, budget: usize) -> Option<ClopenX> {
    if v.positives.is_empty() {
        return v.is_nonempty().then(ClopenX::empty);
    }
    let mut k = v.separation_depth(budget).ok()?;
    for atom in &v.positives {
        let z = (0..search).find(|&n| !atom.point.bit(n) && a.contains(n))?;
        k = k.max(z as usize + 1);
    }
    let phi = ClopenX::canonicalize(
        v.positives.iter().map(|at| Cylinder { level: at.level, word: at.point.prefix(k) }),
    );
    (v.contains_clopen(&phi) && d_membership(a, &phi)).then_some(phi)
}

fn density_witness(v: &BasicOpen, target: &Target, ideal: &IdealHandle, fam: &ProbeFamily) -> Option<Vec<Evidence>> {
    let budget = fam.bounds.eq_budget;
    let bound = fam.bounds.index_bound;
    let scan_indices = |pred: &dyn Fn(u64) -> bool| (0..bound).find(|&n| pred(n));
    match target {
        Target::Empty => None,
        Target::AllX => {
            let phi = find_x_member(v, budget).ok()?;
            Some(vec![Evidence::BasicMember { theta: Theta::Clopen { phi }, open: v.clone(), expected: true }])
        }
        Target::DSet { a } => {
            let phi = match ideal.member(a) {
                TriState::No => d_density_witness(v, a, bound, budget),
                _ => None,
            }
            .or_else(|| scan_indices(&|n| target.hit(v, n)).map(unrank))?;
            Some(vec![
                Evidence::BasicMember { theta: Theta::Clopen { phi: phi.clone() }, open: v.clone(), expected: true },
                Evidence::DMember { a: a.clone(), phi, expected: true },
            ])
        }
        Target::Indices { set } => {
            let direct = find_x_member(v, budget)
                .ok()
                .and_then(|phi| rank(&phi).ok())
                .filter(|&r| set.contains(r));
            let n = direct.or_else(|| scan_indices(&|n| target.hit(v, n)))?;
            Some(vec![
                Evidence::BasicMember { theta: Theta::phi(n), open: v.clone(), expected: true },
                Evidence::SetMember { set: set.clone(), n, expected: true },
            ])
        }
        Target::Hat { set } => {
            let n = hat_candidates(v, set, fam)
                .into_iter()
                .filter_map(|phi| rank(&phi).ok())
                .find(|&n| target.hit(v, n))
                .or_else(|| scan_indices(&|n| target.hit(v, n)))?;
            Some(vec![
                Evidence::BasicMember { theta: Theta::psi(n), open: v.clone(), expected: true },
                Evidence::SetMember { set: set.clone(), n, expected: true },
            ])
        }
    }
}

/// Clopens in `V` built for the index sets the constructions produce; a
/// candidate helps when its index lies in the set and `ψ_n ∈ V` as well.
fn hat_candidates(v: &BasicOpen, set: &RepSet, fam: &ProbeFamily) -> Vec<ClopenX> {
    let budget = fam.bounds.eq_budget;
    let mut out: Vec<ClopenX> = find_x_member(v, budget).into_iter().collect();
    match set {
        RepSet::Indices { filter: IndexFilter::InBlocks { ms } } => {
            out.extend(block_witness(v, |k| ms.contains(k), budget).ok().map(|(_, phi)| phi));
        }
        RepSet::Indices { filter: IndexFilter::DSet { a } } => {
            out.extend(d_density_witness(v, a, fam.bounds.index_bound, budget));
        }
        _ => {}
    }
    out
}

/// `density_probe`: Verified when every probe meets the target within the
/// index bound, Exhausted otherwise. Bounded search never refutes density.
pub fn density_probe(target: &Target, ideal: &IdealHandle, fam: &ProbeFamily) -> Certificate {
    let results: Vec<Option<Vec<Evidence>>> =
        fam.opens.par_iter().map(|v| density_witness(v, target, ideal, fam)).collect();
    let prov = Provenance::new(Some(&ideal.name()), Some(fam.seed), Some(&fam.bounds));
    let mut cert = Certificate::new(format!("{} is dense (bounded)", target.describe()), prov);
    let mut kind = Outcome::Verified;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Some(ev) => cert.evidence.extend(ev),
            None => {
                kind = Outcome::Exhausted;
                cert.push(Evidence::Note { text: format!("probe {i}: no member found below the index bound") });
            }
        }
    }
    cert.note("density is never refuted by bounded search; absence of witnesses yields exhausted");
    cert.with_kind(kind)
}

/// `W = V ∩ (β, p)^+` with `β = χ_{A ∪ [0, l)}` avoiding `D(A)` when `A` is in
/// the ideal. Level 0 is used when every negative point has a zero, with
/// `l` one past the largest first zero, so that `β` differs from each
/// negative point; otherwise a level above all constraints.
pub fn beta_refinement(v: &BasicOpen, a: &RepSet, search: u64) -> (BasicOpen, RepSet) {
    let zeros: Option<Vec<u64>> = v.negatives.iter().map(|at| at.point.first_zero_from(0, search)).collect();
    let (l, level) = match zeros {
        Some(z) => (z.iter().max().map_or(0, |m| m + 1), 0),
        None => (0, v.max_level().map_or(0, |m| m + 1)),
    };
    let beta = if (0..l).all(|n| a.contains(n)) { a.clone() } else { RepSet::union(vec![a.clone(), RepSet::finite(0..l)]) };
    (v.clone().plus(PointB::chi(beta.clone()), level), beta)
}

/// Whether a constructed element of the target is already known to lie in `w`.
fn known_member(w: &BasicOpen, target: &Target, budget: usize) -> bool {
    match target {
        Target::AllX => true,
        Target::Indices { set } => find_x_member(w, budget)
            .ok()
            .and_then(|phi| rank(&phi).ok())
            .is_some_and(|r| set.contains(r)),
        _ => false,
    }
}

fn nwd_witness(v: &BasicOpen, target: &Target, ideal: &IdealHandle, fam: &ProbeFamily) -> Option<Vec<Evidence>> {
    let bound = fam.bounds.index_bound;
    let budget = fam.bounds.eq_budget;
    match target {
        Target::Empty => Some(vec![Evidence::Nonempty { open: v.clone() }]),
        Target::DSet { a } if ideal.member(a) == TriState::Yes => {
            let (w, beta) = beta_refinement(v, a, bound);
            let psi = find_x_member(&w, budget).ok()?;
            let mut ev = vec![
                Evidence::Nonempty { open: w.clone() },
                Evidence::Covers { beta: beta.clone(), a: a.clone() },
            ];
            if let IdealHandle::Builtin(_) = ideal {
                ev.push(Evidence::IdealMember { ideal: ideal.name(), set: beta, expected: TriState::Yes });
            }
            ev.push(Evidence::BasicMember { theta: Theta::Clopen { phi: psi.clone() }, open: w.clone(), expected: true });
            ev.push(Evidence::DMember { a: a.clone(), phi: psi, expected: false });
            let scan = Evidence::scan(Scan::Avoid { open: w, target: target.clone(), bound });
            matches!(&scan, Evidence::Scan { expected, .. } if expected.hits == 0).then_some(())?;
            ev.push(scan);
            Some(ev)
        }
        _ => {
            for w in fam.refinements(v, fam.bounds.refinements) {
                if known_member(&w, target, budget) {
                    continue;
                }
                let summary = avoid_scan(&w, target, bound);
                if summary.hits == 0 {
                    return Some(vec![
                        Evidence::Nonempty { open: w.clone() },
                        Evidence::Scan { scan: Scan::Avoid { open: w, target: target.clone(), bound }, expected: summary },
                    ]);
                }
            }
            None
        }
    }
}

/// `nwd_probe`: Verified when every probe has a refinement avoiding the
/// target (structurally for `D(A)` with `A` in the ideal, otherwise up to
/// the index bound), Exhausted otherwise.
pub fn nwd_probe(target: &Target, ideal: &IdealHandle, fam: &ProbeFamily) -> Certificate {
    let results: Vec<Option<Vec<Evidence>>> =
        fam.opens.par_iter().map(|v| nwd_witness(v, target, ideal, fam)).collect();
    let prov = Provenance::new(Some(&ideal.name()), Some(fam.seed), Some(&fam.bounds));
    let mut cert = Certificate::new(format!("{} is nowhere dense (bounded)", target.describe()), prov);
    let mut kind = Outcome::Verified;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Some(ev) => cert.evidence.extend(ev),
            None => {
                kind = Outcome::Exhausted;
                cert.push(Evidence::Note { text: format!("probe {i}: no avoiding refinement found") });
            }
        }
    }
    cert.note("nowhere density is never refuted by bounded search; failure to avoid yields exhausted");
    cert.with_kind(kind)
}
