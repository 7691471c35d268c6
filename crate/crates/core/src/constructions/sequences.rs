//! Convergent sequences in `𝕏`, closed discrete copies `F̂` in `𝕐`, the
//! comparison map `ψ_n ↦ φ_n`, and accumulation in `𝕐`.

use crate::cantor::{BitWord, ClopenX, PointB, RepSet};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Role, Scan, ScanSummary};
use crate::enumeration::{phi_contains, phi_ref, psi_eval, unrank};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};
use crate::topology::{BasicOpen, Theta};

/// `x_n = [0ⁿ1] × {0}`
pub fn x_n(n: u64) -> ClopenX {
    ClopenX::single(BitWord::zeros(n as usize).pushed(true), 0)
}

/// For `from ≤ n ≤ to`: `failures` counts `x_n ∉ V`, `detail` lists them.
pub fn converge_scan(open: &BasicOpen, from: u64, to: u64) -> ScanSummary {
    let mut s = ScanSummary::default();
    for n in from..=to {
        s.checked += 1;
        if open.contains_clopen(&x_n(n)) {
            s.hits += 1;
        } else {
            s.failures += 1;
            s.detail.push(n);
        }
    }
    s
}

#[derive(Clone, Debug)]
pub struct Convergence {
    /// `x_n ∈ V` for all `n ≥ n`.
    pub n: u64,
    /// The least such index.
    pub n_star: u64,
    pub certificate: Certificate,
}

/// First position of a 1 in `β`, or `None` when `β` is all zeros.
fn first_one(point: &PointB, budget: usize) -> Result<Option<u64>> {
    if let Some(set) = point.ones_view() {
        if set.is_finite() == Some(true) {
            return Ok(set.iter().next());
        }
    }
    match (0..budget as u64).find(|&n| point.bit(n)) {
        Some(n) => Ok(Some(n)),
        None => Err(Error::Undecided(format!("whether {point} has a 1"))),
    }
}

/// `converging_sequence`: `x_n → ∅`. `x_n` meets `(β, m)` only when `m = 0`
/// and `β↾(n+1) = 0ⁿ1`, so the only excluded index of each negative
/// constraint is the first 1 of a level-0 point.
pub fn converging_sequence(v: &BasicOpen, budget: usize) -> Result<Convergence> {
    if !v.positives.is_empty() {
        return Err(Error::Precondition("converging_sequence needs negative constraints only".into()));
    }
    let mut n = 0;
    for atom in v.negatives.iter().filter(|a| a.level == 0) {
        if let Some(j) = first_one(&atom.point, budget)? {
            n = n.max(j + 1);
        }
    }
    let n_star = (0..n).rev().find(|&k| !v.contains_clopen(&x_n(k))).map_or(0, |k| k + 1);
    let mut cert = Certificate::new(
        "x_n = [0ⁿ1]×{0} is eventually in V",
        Provenance::default().param("N", n).param("N*", n_star),
    );
    cert.push(Evidence::Nonempty { open: v.clone() });
    cert.push(Evidence::BasicMember { theta: Theta::Clopen { phi: ClopenX::empty() }, open: v.clone(), expected: true });
    let scan = Evidence::scan(Scan::Converge { open: v.clone(), from: n_star, to: n_star + 50 });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    if n_star > 0 {
        cert.push(Evidence::BasicMember {
            theta: Theta::Clopen { phi: x_n(n_star - 1) },
            open: v.clone(),
            expected: false,
        });
    }
    let kind = if clean && n_star <= n { Outcome::Verified } else { Outcome::Refuted };
    Ok(Convergence { n, n_star, certificate: cert.with_kind(kind) })
}

fn max_level_plus_one(n: u64) -> u32 {
    let level = match phi_ref(n) {
        Some(phi) => phi.max_level(),
        None => unrank(n).max_level(),
    };
    level.map_or(0, |m| m + 1)
}

/// `F = ⋂_{m < m_bound} {n : ψ_n ∈ (χ_F, m)^+}` on `n < n_bound`.
/// `hits` counts `F`, `failures` counts disagreements, and `detail` holds
/// for each `n ∉ F` the witness level `1 + max level of φ_n`.
pub fn closed_discrete_scan(set: &RepSet, m_bound: u32, n_bound: u64) -> ScanSummary {
    let chi = PointB::chi(set.clone());
    let mut s = ScanSummary { checked: n_bound, ..ScanSummary::default() };
    for n in 0..n_bound {
        let in_f = set.contains(n);
        let in_meet = (0..m_bound).all(|m| psi_eval(n, &chi, m));
        if in_f {
            s.hits += 1;
        } else {
            let m = max_level_plus_one(n);
            s.detail.push(m as u64);
            if psi_eval(n, &chi, m) {
                s.failures += 1;
            }
        }
        if in_f != in_meet {
            s.failures += 1;
        }
    }
    s
}

/// `closed_discrete_check`: `F̂` is closed discrete in `𝕐(I)` for `F ∈ I`.
pub fn closed_discrete_check(ideal: &IdealHandle, f: &RepSet, m_bound: u32, n_bound: u64) -> Result<Certificate> {
    let member = ideal.member(f);
    if member != TriState::Yes {
        return Err(Error::Precondition(format!("{f} in {} is {member}", ideal.name())));
    }
    let prov = Provenance::new(Some(&ideal.name()), None, None).param("m_bound", m_bound).param("n_bound", n_bound);
    let mut cert = Certificate::new(format!("F̂ is closed discrete for F = {f}"), prov);
    if let IdealHandle::Builtin(_) = ideal {
        if f.is_serializable() {
            cert.push(Evidence::IdealMember { ideal: ideal.name(), set: f.clone(), expected: TriState::Yes });
        }
    }
    let scan = Evidence::scan(Scan::ClosedDiscrete { set: f.clone(), m_bound, n_bound });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    Ok(cert.with_kind(if clean { Outcome::Verified } else { Outcome::Refuted }))
}

/// `φ_n ∈ (α,p)^+ ⟺ ψ_n ∈ (α,p)^+ ∧ n ∉ A` for `n < bound`; `hits` counts
/// the left side.
pub fn gamma_scan(point: &PointB, level: u32, bound: u64, exceptional: &[u64]) -> ScanSummary {
    let mut s = ScanSummary { checked: bound, ..ScanSummary::default() };
    for n in 0..bound {
        let lhs = phi_contains(n, point, level);
        let rhs = psi_eval(n, point, level) && !exceptional.contains(&n);
        s.hits += lhs as u64;
        if lhs != rhs {
            s.failures += 1;
            if s.detail.len() < 16 {
                s.detail.push(n);
            }
        }
    }
    s
}

/// `gamma_preimage`: `A = {n ∈ α⁻¹(1) : (α, p) ∉ φ_n}`, so that
/// `{ψ_n : φ_n ∈ (α,p)^+} = ((α,p)^+ ∩ 𝕐) ∖ Â`.
pub fn gamma_preimage(alpha: &PointB, p: u32, bound: u64) -> Result<(Vec<u64>, Certificate)> {
    let ones = alpha
        .ones_view()
        .filter(|s| s.is_finite() == Some(true))
        .ok_or_else(|| Error::Precondition(format!("{alpha} must have finitely many ones")))?;
    let a: Vec<u64> = ones.iter().filter(|&n| !phi_contains(n, alpha, p)).collect();
    let prov = Provenance::default().param("level", p).param("bound", bound);
    let mut cert = Certificate::new(format!("Γ⁻¹(({alpha},{p})⁺) = (({alpha},{p})⁺ ∩ 𝕐) ∖ Â"), prov);
    for &n in &a {
        cert.push(Evidence::PointBit { point: alpha.clone(), n, expected: true });
        cert.push(Evidence::BasicMember {
            theta: Theta::phi(n),
            open: BasicOpen::full("fin").plus(alpha.clone(), p),
            expected: false,
        });
    }
    let scan = Evidence::scan(Scan::Gamma { point: alpha.clone(), level: p, bound, exceptional: a.clone() });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    Ok((a, cert.with_kind(if clean { Outcome::Verified } else { Outcome::Refuted })))
}

/// For `n ∈ A`, `n < bound`: `checked` counts `ψ_n ∈ V`, `hits` counts
/// `φ_n ∈ V`, `failures` counts `φ_n ∈ V`, `ψ_n ∉ V` with no negative
/// constraint point having bit 1 at `n`, and `detail` lists the first
/// indices with `φ_n ∈ V`.
pub fn accumulation_scan(set: &RepSet, open: &BasicOpen, bound: u64) -> ScanSummary {
    let mut s = ScanSummary::default();
    for n in (0..bound).filter(|&n| set.contains(n)) {
        let psi_in = open.contains_psi(n);
        let phi_in = open.contains_phi(n);
        s.checked += psi_in as u64;
        if phi_in {
            s.hits += 1;
            if s.detail.len() < 256 {
                s.detail.push(n);
            }
            if !psi_in && !open.negatives.iter().any(|a| a.point.bit(n)) {
                s.failures += 1;
            }
        }
    }
    s
}

/// `accumulation_check`: computes `F = {n ∈ A : φ_n ∈ V}` below the bound,
/// checks `F ⊆ {n : ψ_n ∈ V} ∪ E` with `E` explained by the negative
/// constraint points, and reports the ideal membership of `F`.
pub fn accumulation_check(
    ideal: &IdealHandle,
    a: &RepSet,
    l: u64,
    v: &BasicOpen,
    bound: u64,
) -> Result<Certificate> {
    if !v.contains_psi(l) {
        return Err(Error::Precondition(format!("ψ_{l} is not in {v}")));
    }
    let prov = Provenance::new(Some(&ideal.name()), None, None).param("l", l).param("bound", bound);
    let mut cert = Certificate::new(format!("accumulation of Â at ψ_{l} through {v}"), prov);
    cert.push(Evidence::BasicMember { theta: Theta::psi(l), open: v.clone(), expected: true });
    let summary = accumulation_scan(a, v, bound);
    let open = v.clone();
    let f = RepSet::subset_of(
        a.clone(),
        crate::cantor::NamedPredicate::new(format!("φ_n ∈ {v}"), move |n| open.contains_phi(n)),
    );
    let member = ideal.member(&f);
    cert.note(format!(
        "{} indices with φ_n ∈ V and {} with ψ_n ∈ V below {bound}; membership of F in {}: {member}",
        summary.hits,
        summary.checked,
        ideal.name()
    ));
    let clean = summary.failures == 0;
    cert.push(Evidence::Scan { scan: Scan::Accumulation { set: a.clone(), open: v.clone(), bound }, expected: summary });
    cert.provenance = cert.provenance.clone().param("member", member);
    Ok(cert.with_kind(if clean { Outcome::Verified } else { Outcome::Refuted }))
}

/// `no_convergence_witness`: an infinite `B ⊆ A` in the ideal, with `B̂`
/// closed discrete, so `Â` does not converge.
pub fn no_convergence_witness(
    ideal: &IdealHandle,
    a: &RepSet,
    m_bound: u32,
    n_bound: u64,
) -> Result<(RepSet, Certificate)> {
    let b = ideal.thin_subset(a)?;
    let prov = Provenance::new(Some(&ideal.name()), None, None);
    let mut cert = Certificate::new(format!("Â does not converge for A = {a}"), prov);
    cert.push(Evidence::scan(Scan::Elements { set: b.clone(), count: 16 }));
    cert.push(Evidence::IdealMember { ideal: ideal.name(), set: b.clone(), expected: TriState::Yes });
    for n in b.iter().take(16) {
        cert.push(Evidence::SetMember { set: a.clone(), n, expected: true });
    }
    cert.sub(Role::Required, closed_discrete_check(ideal, &b, m_bound, n_bound)?);
    Ok((b, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_examples() {
        let v = BasicOpen::full("fin").minus(PointB::from_ones([0]), 0);
        let c = converging_sequence(&v, 64).unwrap();
        assert_eq!((c.n, c.n_star), (1, 1));
        assert!(c.certificate.is_verified() && c.certificate.replay().unwrap());

        let v = BasicOpen::full("fin").minus(PointB::from_ones([4, 7]), 3);
        assert_eq!(converging_sequence(&v, 64).unwrap().n_star, 0);

        let v = BasicOpen::full("fin").minus(PointB::from_ones([1]), 0);
        assert_eq!(converging_sequence(&v, 64).unwrap().n_star, 2);

        let v = BasicOpen::full("fin").minus(PointB::zeros(), 0);
        assert_eq!(converging_sequence(&v, 64).unwrap().n_star, 0);

        let v = BasicOpen::full("fin").plus(PointB::zeros(), 0);
        assert!(converging_sequence(&v, 64).is_err());
    }

    /// Independent oracle: `N*` is one past the last `n < 64` with `x_n ∉ V`.
    #[test]
    fn n_star_matches_brute_force() {
        let pts = [vec![], vec![0], vec![2, 5], vec![3], vec![9, 10]];
        for a in &pts {
            for b in &pts {
                let v = BasicOpen::full("fin")
                    .minus(PointB::from_ones(a.clone()), 0)
                    .minus(PointB::from_ones(b.clone()), 1);
                if !v.is_nonempty() {
                    continue;
                }
                let brute = (0..64u64)
                    .filter(|&n| {
                        let x = (0..=n).map(|i| i == n).collect::<Vec<_>>();
                        // x_n ∋ (β, 0) iff β↾(n+1) = 0ⁿ1.
                        (0..=n).all(|i| a.contains(&i) == x[i as usize])
                    })
                    .map(|n| n + 1)
                    .max()
                    .unwrap_or(0);
                assert_eq!(converging_sequence(&v, 64).unwrap().n_star, brute, "{v}");
            }
        }
    }

    #[test]
    fn closed_discrete_examples() {
        let fin = IdealHandle::builtin("fin").unwrap();
        let f = RepSet::finite([1, 3]);
        let cert = closed_discrete_check(&fin, &f, 8, 300).unwrap();
        assert!(cert.is_verified() && cert.replay().unwrap());
        let s = closed_discrete_scan(&RepSet::empty(), 8, 100);
        assert_eq!(s.detail.len(), 100);
        assert!(closed_discrete_check(&fin, &RepSet::evens(), 4, 10).is_err());
        let n = crate::enumeration::rank(&ClopenX::single("1", 0)).unwrap();
        assert_eq!(max_level_plus_one(n), 1);
        assert!(!psi_eval(n, &PointB::chi(f), 1));
    }

    #[test]
    fn gamma_examples() {
        let (a, cert) = gamma_preimage(&PointB::zeros(), 0, 500).unwrap();
        assert!(a.is_empty() && cert.is_verified());
        let alpha = PointB::from_ones([2]);
        let (a, cert) = gamma_preimage(&alpha, 0, 1000).unwrap();
        let expect: Vec<u64> = if unrank(2).contains_point(&alpha, 0) { vec![] } else { vec![2] };
        assert_eq!(a, expect);
        assert!(cert.is_verified() && cert.replay().unwrap());
        assert!(gamma_preimage(&PointB::chi(RepSet::evens()), 0, 10).is_err());
    }

    #[test]
    fn accumulation_examples() {
        let fin = IdealHandle::builtin("fin").unwrap();
        let full = BasicOpen::full("fin");
        let cert = accumulation_check(&fin, &RepSet::empty(), 0, &full, 100).unwrap();
        assert!(cert.is_verified());
        let s = accumulation_scan(&RepSet::all(), &full, 100);
        assert_eq!(s.detail, (0..100).collect::<Vec<_>>());
        let v = BasicOpen::full("fin").plus(PointB::from_ones([0, 2]), 0);
        let a = RepSet::indices(crate::cantor::IndexFilter::DSet { a: Box::new(RepSet::evens()) });
        let l = (0..).find(|&n| v.contains_psi(n)).unwrap();
        let cert = accumulation_check(&fin, &a, l, &v, 2000).unwrap();
        assert!(cert.is_verified() && cert.replay().unwrap());
    }

    #[test]
    fn no_convergence() {
        let dz = IdealHandle::builtin("density-zero").unwrap();
        for a in [RepSet::all(), RepSet::evens()] {
            let (b, cert) = no_convergence_witness(&dz, &a, 8, 400).unwrap();
            assert!(b.iter().take(10).all(|n| a.contains(n)));
            assert!(cert.is_verified() && cert.replay().unwrap());
        }
        let fin = IdealHandle::builtin("fin").unwrap();
        assert!(no_convergence_witness(&fin, &RepSet::all(), 8, 10).is_err());
    }
}
