//! Acceptance run: one line per criterion, each checked against an oracle
//! written here from the definitions.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use cantor_forge::cantor::{ClopenX, Cylinder, PointB, RepSet};
use cantor_forge::certificate::{Certificate, Evidence, Outcome, Role, Scan};
use cantor_forge::constructions::{
    accumulation_check, closed_discrete_check, converging_sequence, d_status, dense_witness_in_am,
    diagonal_avoid_selector, gamma_preimage, in_a_m, no_convergence_witness, xi_not_qplus, y_not_qplus, Selector,
};
use cantor_forge::enumeration::{q_index, rank, unrank};
use cantor_forge::finite::{check_all, enumerate_topologies, FiniteSpace};
use cantor_forge::harness::closed_discrete_family;
use cantor_forge::ideals::{IdealHandle, TriState};
use cantor_forge::topology::{
    find_y_member, member_basic, seeded_rng, symdiff_bound_check, BasicOpen, Bounds, ProbeFamily, Theta,
};
use cantor_forge::{Error, LemmaRun, Provenance};

type Check = Result<(), String>;

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---- oracles -------------------------------------------------------------

/// `(α, p) ∈ φ`, from the cylinders: some level-`p` word is a prefix of `α`.
fn holds(phi: &ClopenX, alpha: &dyn Fn(u64) -> bool, p: u32) -> bool {
    phi.cylinders()
        .iter()
        .any(|c| c.level == p && (0..c.word.len()).all(|i| c.word.bit(i) == alpha(i as u64)))
}

fn psi_holds(n: u64, alpha: &dyn Fn(u64) -> bool, p: u32) -> bool {
    alpha(n) || holds(&unrank(n), alpha, p)
}

fn in_open(v: &BasicOpen, sat: impl Fn(&dyn Fn(u64) -> bool, u32) -> bool) -> bool {
    v.positives.iter().all(|a| sat(&|i| a.point.bit(i), a.level))
        && v.negatives.iter().all(|a| !sat(&|i| a.point.bit(i), a.level))
}

fn phi_in(v: &BasicOpen, phi: &ClopenX) -> bool {
    in_open(v, |alpha, p| holds(phi, alpha, p))
}

fn psi_in(v: &BasicOpen, n: u64) -> bool {
    in_open(v, |alpha, p| psi_holds(n, alpha, p))
}

fn d_oracle(a: &dyn Fn(u64) -> bool, phi: &ClopenX) -> bool {
    phi.cylinders().iter().all(|c| (0..c.word.len()).any(|i| !c.word.bit(i) && a(i as u64)))
}

fn sub_certs(cert: &Certificate) -> Vec<&Certificate> {
    let mut out = vec![cert];
    for e in &cert.evidence {
        if let Evidence::Sub { cert, .. } = e {
            out.extend(sub_certs(cert));
        }
    }
    out
}

fn all_evidence(cert: &Certificate) -> Vec<&Evidence> {
    sub_certs(cert).into_iter().flat_map(|c| c.evidence.iter()).collect()
}

fn replays(cert: &Certificate) -> Check {
    ensure!(cert.replay().map_err(|e| e.to_string())?, "replay failed for `{}`", cert.claim);
    Ok(())
}

fn verified(cert: &Certificate) -> Check {
    ensure!(cert.kind == Outcome::Verified, "`{}` is {:?}", cert.claim, cert.kind);
    replays(cert)
}

fn ideal(name: &str) -> IdealHandle {
    IdealHandle::builtin(name).expect("built-in ideal")
}

// ---- criteria ------------------------------------------------------------

/// Property `(*^m)` by search over every representation with words of
/// length `m + 1`, per level. `masks[l]` is the set of 2-bit words at level
/// `l` whose union is `φ`.
fn star_m_oracle(masks: &[u8], m: u64) -> bool {
    let w = m as usize + 1;
    let r = w.max(2);
    let mut words = 0;
    for (level, &mask) in masks.iter().enumerate() {
        if mask == 0 {
            continue;
        }
        if level as u64 > m {
            return false;
        }
        // Target: r-bit strings covered by the 2-bit atoms of the mask.
        let target: BTreeSet<u32> =
            (0..1u32 << r).filter(|x| mask >> (x >> (r - 2)) & 1 == 1).collect();
        let found = (1u32..1 << (1 << w)).any(|subset| {
            let chosen: Vec<u32> = (0..1u32 << w).filter(|s| subset >> s & 1 == 1).collect();
            let covered: BTreeSet<u32> =
                (0..1u32 << r).filter(|x| chosen.contains(&(x >> (r - w)))).collect();
            let heads: BTreeSet<u32> = chosen.iter().map(|s| s >> 1).collect();
            covered == target && heads.len() == chosen.len()
        });
        if !found {
            return false;
        }
        words += 1;
    }
    words > 0
}

fn ac1() -> Check {
    let atoms = ["00", "01", "10", "11"];
    let mut per_m = [0usize; 3];
    for code in 0u32..256 {
        let masks = [(code & 15) as u8, (code >> 4) as u8];
        let cyls = masks.iter().enumerate().flat_map(|(level, &mask)| {
            atoms.iter().enumerate().filter(move |(i, _)| mask >> i & 1 == 1).map(move |(_, w)| Cylinder::new(*w, level as u32))
        });
        let phi = ClopenX::canonicalize(cyls);
        let mut hits = 0;
        for m in 0..=2u64 {
            let got = in_a_m(&phi, m);
            ensure!(got == star_m_oracle(&masks, m), "φ = {phi}, m = {m}: in_A_m says {got}");
            hits += got as usize;
            per_m[m as usize] += got as usize;
        }
        ensure!(hits <= 1, "φ = {phi} lies in {hits} blocks");
    }
    ensure!(per_m[0] > 0 && per_m[1] > 0, "degenerate block counts {per_m:?}");
    Ok(())
}

fn ac2() -> Check {
    let fin = ideal("fin");
    let bounds = Bounds { probes: 200, depth: 8, ..Bounds::default() };
    let fam = ProbeFamily::generate(&fin, 42, &bounds);
    ensure!(fam.opens.len() >= 200, "only {} probes", fam.opens.len());
    let evens = RepSet::evens();
    for (i, v) in fam.opens.iter().enumerate() {
        let (l, phi) = dense_witness_in_am(v, &evens, bounds.eq_budget).map_err(|e| format!("probe {i}: {e}"))?;
        ensure!(member_basic(&Theta::Clopen { phi: phi.clone() }, v), "probe {i}: φ ∉ V");
        ensure!(in_a_m(&phi, l + 1), "probe {i}: φ ∉ A_(l+1)");
        ensure!((l + 1) % 2 == 0, "probe {i}: l + 1 = {} is odd", l + 1);
        ensure!(phi_in(v, &phi), "probe {i}: oracle puts φ outside V");
        let lens: BTreeSet<usize> = phi.cylinders().iter().map(|c| c.word.len()).collect();
        ensure!(lens.len() == 1 && lens.contains(&(l as usize + 2)), "probe {i}: word lengths {lens:?}");
    }
    Ok(())
}

/// `[w] × {p} ⊆ φ` by checking every extension to the longest word of `φ`.
fn covered(phi: &ClopenX, w: &[bool], p: u32) -> bool {
    let longest = phi.cylinders().iter().filter(|c| c.level == p).map(|c| c.word.len()).max().unwrap_or(0);
    let extra = longest.saturating_sub(w.len());
    assert!(extra <= 16, "oracle limit");
    (0..1u32 << extra).all(|k| {
        let x: Vec<bool> = w.iter().copied().chain((0..extra).map(|i| k >> i & 1 == 1)).collect();
        holds(phi, &|i| x.get(i as usize).copied().unwrap_or(false), p)
    })
}

fn ac3() -> Check {
    let e = RepSet::all();
    let mut rng = seeded_rng(42, "acceptance-diagonal");
    for i in 0..100u64 {
        let s = Selector::seeded(e.clone(), 1_000 + i);
        let phi = loop {
            let phi = unrank(rng.random_range(1..4_000));
            if !s.selects(&phi) {
                break phi;
            }
        };
        let r = diagonal_avoid_selector(&e, &s, &phi, 300).map_err(|e| e.to_string())?;
        ensure!(r.clauses.all(), "instance {i}: clauses {:?}", r.clauses);
        let ev = &r.evidence;
        let t1 = phi.cylinders()[0].word.bits().to_vec();
        let p1 = phi.cylinders()[0].level;
        // Recompute α from the recursion.
        let mut alpha: Vec<bool> = Vec::new();
        for n in 0..ev.alpha.len() {
            let bit = if n < t1.len() {
                t1[n]
            } else {
                let mut w = alpha.clone();
                w.push(false);
                covered(&s.choose(n as u64), &w, p1)
            };
            alpha.push(bit);
        }
        ensure!(alpha == ev.alpha.bits(), "instance {i}: α differs from the recursion");
        ensure!(alpha.len() >= 301, "instance {i}: prefix too short");
        let a = |n: u64| alpha.get(n as usize).copied().unwrap_or(false);
        ensure!(holds(&phi, &a, p1), "instance {i}: φ ∉ (α, p₁)⁺");
        for k in t1.len() as u64..=300 {
            let z = s.choose(k);
            ensure!(in_a_m(&z, k), "instance {i}: z_{k} ∉ A_{k}");
            ensure!(!holds(&z, &a, p1), "instance {i}: (α, p₁) ∈ z_{k}");
        }
    }
    Ok(())
}

fn ac4() -> Check {
    for (name, e) in [("empty-x-fin", RepSet::row(0)), ("density-zero", ideal("density-zero").thin_subset(&RepSet::all()).unwrap())] {
        let i = ideal(name);
        ensure!(i.member(&e) == TriState::Yes, "{name}: E outside the ideal");
        let s = Selector::seeded(e.clone(), 42);
        let phi = ClopenX::single("1", 2);
        ensure!(!s.selects(&phi), "{name}: φ selected");
        let cert = xi_not_qplus(&i, &e, &phi, &s, 300).map_err(|e| e.to_string())?;
        verified(&cert)?;
        let ones = all_evidence(&cert).into_iter().find_map(|ev| match ev {
            Evidence::IdealMember { ideal, set, expected: TriState::Yes } if ideal == name => Some(set.clone()),
            _ => None,
        });
        let ones = ones.ok_or(format!("{name}: no membership evidence for α⁻¹(1)"))?;
        let diag = all_evidence(&cert).into_iter().find_map(|ev| match ev {
            Evidence::Diagonal(d) => Some(d.clone()),
            _ => None,
        });
        let diag = diag.ok_or(format!("{name}: no diagonal evidence"))?;
        for n in diag.alpha.one_positions() {
            ensure!(ones.contains(n as u64), "{name}: α({n}) = 1 outside the certified set");
            ensure!(n < diag.t1.len() || e.contains(n as u64), "{name}: α({n}) = 1 outside E");
        }
    }
    let fin = ideal("fin");
    let evens = RepSet::evens();
    let r = xi_not_qplus(&fin, &evens, &ClopenX::single("1", 0), &Selector::zeros(evens.clone()), 50);
    ensure!(matches!(r, Err(Error::Precondition(_))), "Fin was not rejected");
    Ok(())
}

fn triangular(n: u64) -> bool {
    let k = (((8 * n + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    (k.saturating_sub(1)..=k + 1).any(|k| k * (k + 1) / 2 == n)
}

fn ac5() -> Check {
    let bounds = Bounds { probes: 40, index_bound: 5_000, ..Bounds::default() };
    let fin = ideal("fin");
    let fam = ProbeFamily::generate(&fin, 42, &bounds);
    let dense = d_status(&RepSet::evens(), &fin, &fam, 3, 50_000).map_err(|e| e.to_string())?;
    verified(&dense)?;
    let witnesses: Vec<ClopenX> = all_evidence(&dense)
        .into_iter()
        .filter_map(|e| match e {
            Evidence::DMember { phi, expected: true, .. } => Some(phi.clone()),
            _ => None,
        })
        .collect();
    ensure!(witnesses.len() == fam.opens.len(), "{} density witnesses for {} probes", witnesses.len(), fam.opens.len());
    for (v, phi) in fam.opens.iter().zip(&witnesses) {
        ensure!(d_oracle(&|i| i % 2 == 0, phi) && phi_in(v, phi), "bad density witness {phi}");
    }

    // Row 0 is {π(i, 0)}: the triangular numbers.
    let row0 = RepSet::row(0);
    ensure!((0..2_000).all(|n| row0.contains(n) == triangular(n)), "row 0 is not the triangular numbers");
    let exf = ideal("empty-x-fin");
    let fam = ProbeFamily::generate(&exf, 42, &bounds);
    let nwd = d_status(&row0, &exf, &fam, 3, 50_000).map_err(|e| e.to_string())?;
    verified(&nwd)?;
    let mut closed_scans = 0;
    for e in all_evidence(&nwd) {
        if let Evidence::Scan { scan: Scan::Avoid { open, bound, .. }, expected } = e {
            ensure!(expected.hits == 0, "avoidance scan has hits");
            if *bound == 50_000 {
                closed_scans += 1;
                // Independent scan of (β, m₁)⁺ ∩ D(A) below the bound.
                for n in 0..50_000 {
                    let phi = unrank(n);
                    ensure!(!(d_oracle(&triangular, &phi) && phi_in(open, &phi)), "φ_{n} ∈ D(A) ∩ (β, m₁)⁺");
                }
            }
        }
    }
    ensure!(closed_scans == 3, "{closed_scans} closedness scans at bound 50 000");
    Ok(())
}

fn ac6() -> Check {
    let fin = ideal("fin");
    let fam = ProbeFamily::generate(&fin, 42, &Bounds { probes: 50, ..Bounds::default() });
    ensure!(fam.opens.len() == 50, "{} probes", fam.opens.len());
    for (i, v) in fam.opens.iter().enumerate() {
        verified(&symdiff_bound_check(v, 2_000, Provenance::default()).map_err(|e| e.to_string())?)?;
        let marked = |n: u64| v.positives.iter().chain(&v.negatives).any(|a| a.point.bit(n));
        for n in 0..2_000 {
            if phi_in(v, &unrank(n)) != psi_in(v, n) {
                ensure!(marked(n), "probe {i}: φ_{n} and ψ_{n} differ on V at an unmarked index");
            }
        }
    }
    Ok(())
}

fn ac7() -> Check {
    let mut rng = seeded_rng(42, "acceptance-converge");
    for i in 0..100 {
        let mut v = BasicOpen::full("fin");
        for _ in 0..rng.random_range(1..=4) {
            let ones: Vec<u64> = (0..12).filter(|_| rng.random_bool(0.3)).collect();
            v = v.minus(PointB::from_ones(ones), rng.random_range(0..3));
        }
        let x_in = |n: u64| {
            v.negatives.iter().all(|a| !(a.level == 0 && (0..n).all(|k| !a.point.bit(k)) && a.point.bit(n)))
        };
        let n_star = (0..64).filter(|&n| !x_in(n)).max().map_or(0, |n| n + 1);
        let c = converging_sequence(&v, 4_096).map_err(|e| e.to_string())?;
        ensure!(c.n_star == n_star, "instance {i}: N* = {}, oracle {n_star}", c.n_star);
        ensure!(c.n >= c.n_star, "instance {i}: N < N*");
        ensure!((n_star..=n_star + 50).all(x_in), "instance {i}: some x_n ∉ V past N*");
        ensure!(n_star == 0 || !x_in(n_star - 1), "instance {i}: N* not minimal");
        ensure!((c.n..c.n + 200).all(x_in), "instance {i}: N is not a valid modulus");
        verified(&c.certificate)?;
    }
    Ok(())
}

fn ac8() -> Check {
    let dz = ideal("density-zero");
    let sets = closed_discrete_family(42);
    let finite = sets.iter().filter(|s| s.is_finite() == Some(true)).count();
    ensure!(finite == 20 && sets.len() == 25, "family has {finite} finite sets out of {}", sets.len());
    for f in &sets {
        ensure!(dz.member(f) == TriState::Yes, "{f} is not of density zero");
        let cert = closed_discrete_check(&dz, f, 16, 1_000).map_err(|e| e.to_string())?;
        verified(&cert)?;
        let detail = cert
            .evidence
            .iter()
            .find_map(|e| match e {
                Evidence::Scan { scan: Scan::ClosedDiscrete { .. }, expected } => Some(expected.detail.clone()),
                _ => None,
            })
            .ok_or("no closed-discrete scan")?;
        let chi = |n: u64| f.contains(n);
        let mut witnesses = Vec::new();
        for n in 0..1_000 {
            let meet = (0..16).all(|m| psi_holds(n, &chi, m));
            ensure!(meet == f.contains(n), "{f}: n = {n}");
            if !f.contains(n) {
                let m = unrank(n).max_level().map_or(0, |l| l + 1);
                ensure!(!psi_holds(n, &chi, m), "{f}: witness level {m} fails for n = {n}");
                witnesses.push(m as u64);
            }
        }
        ensure!(detail == witnesses, "{f}: per-n witnesses differ");
    }
    Ok(())
}

fn ac9() -> Check {
    let dz = ideal("density-zero");
    let fam = ProbeFamily::generate(&dz, 42, &Bounds { probes: 12, index_bound: 2_000, ..Bounds::default() });
    let r = y_not_qplus(&dz, 200, Some(&fam)).map_err(|e| e.to_string())?;
    verified(&r.certificate)?;
    ensure!(r.selector.len() == 201, "{} selected blocks", r.selector.len());
    let q = (0..).find(|&n| unrank(n) == ClopenX::full_level(0)).unwrap();
    ensure!(q == q_index(), "q index {q} vs {}", q_index());
    let prefix_len = r.evidence.alpha.len() as u64;
    let ones: Vec<u64> = (0..prefix_len).filter(|&n| r.alpha.bit(n)).collect();
    ensure!(ones.iter().all(|&n| r.l_prime.contains(n)), "α⁻¹(1) ⊄ L′");
    ensure!(dz.member(&RepSet::finite(ones.clone())) == TriState::Yes, "α⁻¹(1) ∉ I");
    let alpha = |n: u64| ones.contains(&n);
    ensure!(psi_holds(q, &alpha, 0), "ψ_q ∉ (α, 0)⁺");
    let firsts: Vec<u64> = r.l_prime.iter().take(201).collect();
    for (k, (m, z, n)) in r.selector.iter().enumerate() {
        ensure!(*m == firsts[k], "m_{k} is not the k-th element of L′");
        ensure!(in_a_m(z, *m), "z_{k} ∉ A_{m}");
        ensure!(!holds(z, &alpha, 0), "(α, 0) ∈ z_{k}");
        if let Some(n) = n {
            ensure!(rank(z).ok() == Some(*n), "n_{k} is not the index of z_{k}");
            ensure!(!alpha(*n) && !psi_holds(*n, &alpha, 0), "(α, 0) ∈ ψ_(n_{k})");
        }
        ensure!(unrank_outside_blocks(*m), "m_{k} = {m} is not in L");
    }
    let density = r.certificate.evidence.iter().any(|e| matches!(e, Evidence::Sub { role: Role::Informational, .. }));
    ensure!(density, "density clause not recorded");
    Ok(())
}

fn unrank_outside_blocks(n: u64) -> bool {
    (0..=unrank(n).cylinders().iter().map(|c| c.word.len() as u64).max().unwrap_or(0)).all(|m| !in_a_m(&unrank(n), m))
}

fn ac10() -> Check {
    let mut rng = seeded_rng(42, "acceptance-gamma");
    for i in 0..20 {
        let ones: Vec<u64> = (0..20).filter(|_| rng.random_bool(0.25)).collect();
        let p = rng.random_range(0..3);
        let (a, cert) = gamma_preimage(&PointB::from_ones(ones.clone()), p, 1_000).map_err(|e| e.to_string())?;
        verified(&cert)?;
        let alpha = |n: u64| ones.contains(&n);
        let expected: Vec<u64> = ones.iter().copied().filter(|&n| !holds(&unrank(n), &alpha, p)).collect();
        ensure!(a == expected, "instance {i}: A = {a:?}, oracle {expected:?}");
        for n in 0..1_000 {
            let left = holds(&unrank(n), &alpha, p);
            let right = psi_holds(n, &alpha, p) && !expected.contains(&n);
            ensure!(left == right, "instance {i}: n = {n}");
        }
    }
    let dz = ideal("density-zero");
    let fam = ProbeFamily::generate(&dz, 42, &Bounds { probes: 10, ..Bounds::default() });
    for a in [RepSet::all(), RepSet::evens()] {
        for v in &fam.opens {
            let l = find_y_member(v, 50_000).ok_or("no ψ_l in a probe")?;
            ensure!(psi_in(v, l), "ψ_{l} ∉ V");
            verified(&accumulation_check(&dz, &a, l, v, 2_000).map_err(|e| e.to_string())?)?;
        }
        let (b, cert) = no_convergence_witness(&dz, &a, 16, 1_000).map_err(|e| e.to_string())?;
        verified(&cert)?;
        ensure!(b.iter().take(30).all(|n| a.contains(n)), "B ⊄ A");
    }
    Ok(())
}

/// Topologies from preorders: the open sets are the up-sets.
fn preorder_topologies(n: usize) -> BTreeSet<Vec<u16>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let le = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1);
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(le(i, j) && le(j, k)) || le(i, k))));
        if !transitive {
            continue;
        }
        let opens: Vec<u16> = (0u16..1 << n)
            .filter(|&u| (0..n).all(|i| u >> i & 1 == 0 || (0..n).all(|j| !le(i, j) || u >> j & 1 == 1)))
            .collect();
        out.insert(opens);
    }
    out
}

fn interior(opens: &[u16], a: u16) -> u16 {
    opens.iter().filter(|&&u| u & !a == 0).fold(0, |acc, &u| acc | u)
}

fn closure(opens: &[u16], a: u16, full: u16) -> u16 {
    full & !interior(opens, full & !a)
}

fn ac11() -> Check {
    let expected = [1usize, 4, 29, 355];
    for n in 1..=4 {
        let ours = preorder_topologies(n);
        ensure!(ours.len() == expected[n - 1], "{n} points: oracle counts {}", ours.len());
        let lib: BTreeSet<Vec<u16>> = enumerate_topologies(n)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|s: FiniteSpace| {
                let mut o = s.opens.clone();
                o.sort_unstable();
                o
            })
            .collect();
        ensure!(lib == ours, "{n} points: library family differs from the preorder family");
        let full: u16 = (1 << n) - 1;
        for opens in &ours {
            let alpha: Vec<u16> = (0..=full).filter(|&v| v & !interior(opens, closure(opens, interior(opens, v), full)) == 0).collect();
            // A topology.
            for &u in &alpha {
                for &w in &alpha {
                    ensure!(alpha.contains(&(u | w)) && alpha.contains(&(u & w)), "τ^α not a topology");
                }
            }
            ensure!(opens.iter().all(|u| alpha.contains(u)), "τ ⊄ τ^α");
            for a in 0..=full {
                let cl_alpha = closure(&alpha, a, full);
                let formula = closure(opens, interior(opens, closure(opens, a, full)), full);
                for x in 0..n {
                    if a >> x & 1 == 0 {
                        ensure!((cl_alpha >> x & 1) == (formula >> x & 1), "closure identity fails");
                    }
                }
                // Nodec: nowhere dense in τ^α implies closed in τ^α.
                if interior(&alpha, cl_alpha) == 0 {
                    ensure!(cl_alpha == a, "τ^α is not nodec");
                }
                ensure!((closure(opens, a, full) == full) == (cl_alpha == full), "density differs");
            }
        }
    }
    verified(&check_all(4).map_err(|e| e.to_string())?)
}

fn ac12() -> Check {
    ensure!(unrank(0) == ClopenX::empty(), "φ_0 ≠ ∅");
    for n in 0..100_000 {
        ensure!(rank(&unrank(n)).ok() == Some(n), "roundtrip fails at {n}");
    }
    let q = q_index();
    ensure!(q == q_index() && unrank(q) == ClopenX::full_level(0), "q unstable");
    ensure!((0..q).all(|n| unrank(n) != ClopenX::full_level(0)), "q is not the first index");
    Ok(())
}

fn verify_all(out: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_cantor-forge"))
        .args(["verify-lemma", "all", "--seed", "42", "--out"])
        .arg(out)
        .env("CANTOR_FORGE_THREADS", "4")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(status.status.code() == Some(0), "exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stdout));
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(out).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        files.insert(path.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

fn ac13() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = verify_all(&dir.path().join("a"))?;
    let second = verify_all(&dir.path().join("b"))?;
    ensure!(first.len() == cantor_forge::LEMMAS.len(), "{} certificate files", first.len());
    for (name, bytes) in &first {
        let run: LemmaRun = serde_json::from_slice(bytes).map_err(|e| format!("{name}: {e}"))?;
        replays(&run.certificate)?;
        ensure!(second.get(name) == Some(bytes), "{name} differs between runs");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("A_m characterization vs brute force", ac1, 1),
        ("density of ⋃_(k∈E) A_k, E = evens, I = Fin", ac2, 5),
        ("diagonal point, 100 seeded selectors, depth 300", ac3, 10),
        ("𝕏(I) not q⁺ for {∅}×Fin and density-zero; Fin rejected", ac4, 5),
        ("D(A) trichotomy", ac5, 30),
        ("symmetric difference of φ_n and ψ_n, n < 2000", ac6, 10),
        ("convergent sequence to ∅", ac7, 5),
        ("closed discrete F̂", ac8, 20),
        ("ψ_q outside the selector closure in 𝕐(density-zero)", ac9, 20),
        ("Γ decomposition and accumulation", ac10, 10),
        ("α-topology on labeled topologies with ≤ 4 points", ac11, 10),
        ("enumeration bijection and q index", ac12, 5),
        ("determinism and replay of verify-lemma all", ac13, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let took = start.elapsed();
        let slow = took > Duration::from_secs(*budget);
        match (&result, slow) {
            (Ok(()), false) => println!("AC{:<2} PASS  {name} ({:.2}s)", i + 1, took.as_secs_f64()),
            (Ok(()), true) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {:.2}s exceeds {budget}s", i + 1, took.as_secs_f64());
            }
            (Err(e), _) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
