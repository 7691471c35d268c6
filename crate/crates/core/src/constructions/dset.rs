//! `D(A) = {⋃ [sᵢ] × {mᵢ} : every sᵢ has a 0 at a position in A} ∪ {∅}`.
//!
//! Evaluated on the canonical form. If some representation satisfies the
//! condition then so does every other: a canonical word `s` that is a union
//! of represented words `s⌢u` contains in particular `s⌢1…1`, whose zeros
//! are those of `s`.

use crate::cantor::{ClopenX, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Scan};
use crate::enumeration::unrank;
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};
use crate::topology::{density_probe, nwd_probe, BasicOpen, ProbeFamily, Target, Theta};

/// `φ ∈ D(A)`
pub fn d_membership(a: &RepSet, phi: &ClopenX) -> bool {
    phi.cylinders().iter().all(|c| c.word.zero_positions().any(|i| a.contains(i as u64)))
}

/// Closedness of `D(A)` at `φ ∉ D(A)`: with `[s₁] × {m₁}` a cylinder of `φ`
/// whose zeros avoid `A`, `β = χ_{A ∪ s₁⁻¹(1)}` lies in `[s₁]`, so
/// `φ ∈ (β, m₁)^+`, while every member of `D(A)` misses `(β, m₁)`.
pub fn closedness_evidence(a: &RepSet, phi: &ClopenX, ideal: &IdealHandle, bound: u64) -> Option<Vec<Evidence>> {
    let c = phi
        .cylinders()
        .iter()
        .find(|c| !c.word.zero_positions().any(|i| a.contains(i as u64)))?;
    let beta = RepSet::union(vec![a.clone(), RepSet::finite(c.word.one_positions().map(|i| i as u64))]);
    let open = BasicOpen::full(ideal.name()).plus(PointB::chi(beta.clone()), c.level);
    let mut ev = vec![
        Evidence::DMember { a: a.clone(), phi: phi.clone(), expected: false },
        Evidence::BasicMember { theta: Theta::Clopen { phi: phi.clone() }, open: open.clone(), expected: true },
        Evidence::Covers { beta: beta.clone(), a: a.clone() },
    ];
    if let IdealHandle::Builtin(_) = ideal {
        ev.push(Evidence::IdealMember { ideal: ideal.name(), set: beta, expected: TriState::Yes });
    }
    ev.push(Evidence::scan(Scan::Avoid { open, target: Target::DSet { a: a.clone() }, bound }));
    Some(ev)
}

/// The first `count` clopens of the enumeration outside `D(A)`.
fn first_outside(a: &RepSet, count: usize) -> Vec<ClopenX> {
    (0..).map(unrank).filter(|phi| !d_membership(a, phi)).take(count).collect()
}

/// `D_status`: density when `A ∉ I`; nowhere density and closedness when
/// `A ∈ I`, the latter sampled at the first few nonempty `φ_n ∉ D(A)`
/// with each avoidance scan running to `closed_bound`.
pub fn d_status(
    a: &RepSet,
    ideal: &IdealHandle,
    fam: &ProbeFamily,
    samples: usize,
    closed_bound: u64,
) -> Result<Certificate> {
    let prov = Provenance::new(Some(&ideal.name()), Some(fam.seed), Some(&fam.bounds));
    match ideal.member(a) {
        TriState::Unknown => Err(Error::Undecided(format!("{a} in {}", ideal.name()))),
        TriState::No => {
            let mut cert = Certificate::new(format!("D({a}) is dense in 𝕏({})", ideal.name()), prov);
            cert.push(Evidence::IdealMember { ideal: ideal.name(), set: a.clone(), expected: TriState::No });
            cert.sub(crate::certificate::Role::Required, density_probe(&Target::DSet { a: a.clone() }, ideal, fam));
            Ok(cert)
        }
        TriState::Yes => {
            let mut cert =
                Certificate::new(format!("D({a}) is nowhere dense and closed in 𝕏({})", ideal.name()), prov);
            if let IdealHandle::Builtin(_) = ideal {
                cert.push(Evidence::IdealMember { ideal: ideal.name(), set: a.clone(), expected: TriState::Yes });
            }
            cert.sub(crate::certificate::Role::Required, nwd_probe(&Target::DSet { a: a.clone() }, ideal, fam));
            let bound = closed_bound;
            let mut closed = Certificate::new(format!("D({a}) is closed (sampled)"), cert.provenance.clone());
            let mut ok = true;
            for phi in first_outside(a, samples) {
                match closedness_evidence(a, &phi, ideal, bound) {
                    Some(ev) => {
                        ok &= ev.iter().all(|e| match e {
                            Evidence::Scan { expected, .. } => expected.hits == 0,
                            e => e.check(),
                        });
                        closed.evidence.extend(ev);
                    }
                    None => ok = false,
                }
            }
            cert.sub(crate::certificate::Role::Required, closed.with_kind(if ok { Outcome::Verified } else { Outcome::Refuted }));
            Ok(cert)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::Cylinder;

    #[test]
    fn membership_examples() {
        let evens = RepSet::evens();
        assert!(d_membership(&evens, &ClopenX::empty()));
        assert!(d_membership(&evens, &ClopenX::single("01", 3)));
        assert!(!d_membership(&evens, &ClopenX::single("10", 5)));
    }

    /// Refines every canonical cylinder to words of length `depth`.
    fn refine(phi: &ClopenX, depth: usize) -> Vec<Cylinder> {
        let mut out = Vec::new();
        for c in phi.cylinders() {
            let extra = depth - c.word.len();
            for k in 0..1u64 << extra {
                let mut w = c.word.clone();
                for i in (0..extra).rev() {
                    w.push((k >> i) & 1 == 1);
                }
                out.push(Cylinder { level: c.level, word: w });
            }
        }
        out
    }

    #[test]
    fn representation_independent() {
        let sets = [RepSet::evens(), RepSet::odds(), RepSet::finite([1]), RepSet::finite([0, 3])];
        for n in 0..3000 {
            let phi = crate::enumeration::unrank(n);
            let depth = phi.max_word_len() + 2;
            if depth > 8 {
                continue;
            }
            let rep = refine(&phi, depth);
            for a in &sets {
                let naive = rep.iter().all(|c| c.word.zero_positions().any(|i| a.contains(i as u64)));
                assert_eq!(naive, d_membership(a, &phi), "{phi} {a}");
            }
        }
    }
}
