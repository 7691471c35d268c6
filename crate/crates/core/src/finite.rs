//! Exact computations on finite topological spaces, subsets as bitmasks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Scan, ScanSummary};
use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 12;
pub const MAX_ENUMERATED: usize = 4;

/// A topology on `{0, …, points-1}`; `opens` is sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSpace {
    pub points: usize,
    pub opens: Vec<u16>,
}

fn full(points: usize) -> u16 {
    ((1u32 << points) - 1) as u16
}

impl FiniteSpace {
    /// Validates that `opens` contains `∅` and the ground set and is closed
    /// under pairwise unions and intersections.
    pub fn new(points: usize, opens: impl IntoIterator<Item = u16>) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::Precondition(format!("{points} points; at most {MAX_POINTS} are supported")));
        }
        let mut opens: Vec<u16> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        let x = full(points);
        if opens.iter().any(|&o| o & !x != 0) {
            return Err(Error::Precondition("open set outside the ground set".into()));
        }
        let space = FiniteSpace { points, opens };
        if !space.is_topology() {
            return Err(Error::Precondition(format!("not a topology: {space}")));
        }
        Ok(space)
    }

    pub fn discrete(points: usize) -> Self {
        FiniteSpace { points, opens: (0..=full(points)).collect() }
    }

    pub fn indiscrete(points: usize) -> Self {
        let mut opens = vec![0, full(points)];
        opens.dedup();
        FiniteSpace { points, opens }
    }

    pub fn ground(&self) -> u16 {
        full(self.points)
    }

    fn is_topology(&self) -> bool {
        let has = |s: u16| self.opens.binary_search(&s).is_ok();
        has(0)
            && has(self.ground())
            && self.opens.iter().all(|&a| self.opens.iter().all(|&b| has(a | b) && has(a & b)))
    }

    pub fn is_open(&self, a: u16) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    pub fn interior(&self, a: u16) -> u16 {
        self.opens.iter().filter(|&&o| o & !a == 0).fold(0, |acc, &o| acc | o)
    }

    pub fn closure(&self, a: u16) -> u16 {
        let x = self.ground();
        x & !self.interior(x & !a)
    }

    pub fn is_dense(&self, a: u16) -> bool {
        self.closure(a) == self.ground()
    }

    pub fn is_nwd(&self, a: u16) -> bool {
        self.interior(self.closure(a)) == 0
    }

    pub fn nwd_sets(&self) -> Vec<u16> {
        (0..=self.ground()).filter(|&a| self.is_nwd(a)).collect()
    }

    /// All subsets of the ground set.
    pub fn subsets(&self) -> impl Iterator<Item = u16> {
        0..=self.ground()
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .opens
            .iter()
            .map(|&o| {
                let pts: Vec<String> = (0..self.points).filter(|i| o >> i & 1 == 1).map(|i| i.to_string()).collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        write!(f, "{} points: {}", self.points, sets.join(" "))
    }
}

/// `τ^α = {V ∖ N : V ∈ τ, N nowhere dense}`. The result must be a topology.
pub fn tau_alpha(x: &FiniteSpace) -> Result<FiniteSpace> {
    let nwd = x.nwd_sets();
    let opens: Vec<u16> = x.opens.iter().flat_map(|&v| nwd.iter().map(move |&n| v & !n)).collect();
    FiniteSpace::new(x.points, opens)
        .map_err(|e| Error::Precondition(format!("τ^α of {x} is not a topology: {e}")))
}

/// Outcomes of the checks on one space; every field counts violations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub open_characterization: u64,
    pub closure_characterization: u64,
    pub nodec: u64,
    pub density: u64,
    pub finer: u64,
    pub duality: u64,
}

impl IdentityReport {
    pub fn total(&self) -> u64 {
        self.open_characterization + self.closure_characterization + self.nodec + self.density + self.finer + self.duality
    }
}

/// Exhaustive checks: opens of `τ^α` are the `V ⊆ int cl int V`; for
/// `x ∉ A`, `x ∈ cl_α A` iff `x ∈ cl int cl A`; every `τ^α`-nowhere dense
/// set is `τ^α`-closed; `τ`- and `τ^α`-density agree; `τ ⊆ τ^α`; and
/// closure is dual to interior in both topologies.
pub fn identity_report(x: &FiniteSpace) -> Result<IdentityReport> {
    let a = tau_alpha(x)?;
    let g = x.ground();
    let mut r = IdentityReport::default();
    for v in x.subsets() {
        if a.is_open(v) != (v & !x.interior(x.closure(x.interior(v))) == 0) {
            r.open_characterization += 1;
        }
        let target = x.closure(x.interior(x.closure(v)));
        let cl_a = a.closure(v);
        for p in (0..x.points).map(|i| 1u16 << i).filter(|p| v & p == 0) {
            if (cl_a & p != 0) != (target & p != 0) {
                r.closure_characterization += 1;
            }
        }
        if a.is_nwd(v) && a.closure(v) != v {
            r.nodec += 1;
        }
        if x.is_dense(v) != a.is_dense(v) {
            r.density += 1;
        }
        for s in [x, &a] {
            if s.closure(v) != g & !s.interior(g & !v) || s.interior(v) & !v != 0 || v & !s.closure(v) != 0 {
                r.duality += 1;
            }
        }
    }
    r.finer = x.opens.iter().filter(|&&o| !a.is_open(o)).count() as u64;
    Ok(r)
}

/// `checked` is the number of spaces, `failures` the number of violations,
/// `detail` the per-size count of spaces.
pub fn tau_alpha_scan(points: usize) -> ScanSummary {
    let mut s = ScanSummary::default();
    for n in 1..=points.min(MAX_ENUMERATED) {
        let spaces = enumerate_topologies(n).unwrap_or_default();
        s.detail.push(spaces.len() as u64);
        for x in &spaces {
            s.checked += 1;
            match identity_report(x) {
                Ok(r) if r.total() == 0 => s.hits += 1,
                Ok(r) => s.failures += r.total(),
                Err(_) => s.failures += 1,
            }
        }
    }
    s
}

/// One space: `hits` is 1 when every identity holds.
pub fn tau_alpha_space_scan(x: &FiniteSpace) -> ScanSummary {
    let mut s = ScanSummary { checked: 1, ..ScanSummary::default() };
    match identity_report(x) {
        Ok(r) if r.total() == 0 => s.hits = 1,
        Ok(r) => s.failures = r.total(),
        Err(_) => s.failures = 1,
    }
    s
}

/// `check_tau_alpha_identities`
pub fn check_tau_alpha_identities(x: &FiniteSpace) -> Certificate {
    let mut cert = Certificate::new(format!("τ^α identities on {x}"), Provenance::default());
    let scan = Evidence::scan(Scan::TauAlphaSpace { points: x.points, opens: x.opens.clone() });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    cert.with_kind(if clean { Outcome::Verified } else { Outcome::Refuted })
}

/// Every check over every labeled topology on at most `points` points.
pub fn check_all(points: usize) -> Result<Certificate> {
    if points > MAX_ENUMERATED {
        return Err(Error::Precondition(format!("enumeration is limited to {MAX_ENUMERATED} points")));
    }
    let mut cert = Certificate::new(
        format!("τ^α identities on every topology with at most {points} points"),
        Provenance::default().param("points", points),
    );
    let scan = Evidence::scan(Scan::TauAlpha { points });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    Ok(cert.with_kind(if clean { Outcome::Verified } else { Outcome::Refuted }))
}

/// `enumerate_topologies`: every family of subsets containing `∅` and the
/// ground set, filtered by closure under `∪` and `∩`.
pub fn enumerate_topologies(points: usize) -> Result<Vec<FiniteSpace>> {
    if points > MAX_ENUMERATED {
        return Err(Error::Precondition(format!("enumeration is limited to {MAX_ENUMERATED} points")));
    }
    let g = full(points);
    let inner: Vec<u16> = (1..g).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << inner.len()) {
        let mut opens = vec![0u16, g];
        opens.extend(inner.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s));
        opens.sort_unstable();
        opens.dedup();
        let space = FiniteSpace { points, opens };
        if space.is_topology() {
            out.push(space);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent count: topologies on a finite set correspond to preorders.
    fn preorder_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let mut count = 0;
        for mask in 0u32..(1 << pairs.len()) {
            let rel = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1);
            let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))));
            count += transitive as usize;
        }
        count
    }

    #[test]
    fn counts_match_preorders() {
        let expected = [1, 4, 29, 355];
        for n in 1..=4 {
            let got = enumerate_topologies(n).unwrap().len();
            assert_eq!(got, expected[n - 1]);
            assert_eq!(got, preorder_count(n));
        }
        assert!(enumerate_topologies(5).is_err());
    }

    #[test]
    fn example_three_points() {
        let x = FiniteSpace::new(3, [0, 0b001, 0b111]).unwrap();
        assert_eq!(x.nwd_sets(), vec![0, 0b010, 0b100, 0b110]);
        let a = tau_alpha(&x).unwrap();
        assert_eq!(a.opens, vec![0, 0b001, 0b011, 0b101, 0b111]);
        assert!(check_tau_alpha_identities(&x).is_verified());
    }

    #[test]
    fn discrete_and_indiscrete_are_fixed() {
        for n in 1..=4 {
            let d = FiniteSpace::discrete(n);
            assert_eq!(tau_alpha(&d).unwrap(), d);
            let i = FiniteSpace::indiscrete(n);
            assert_eq!(i.nwd_sets(), vec![0]);
            assert_eq!(tau_alpha(&i).unwrap(), i);
        }
    }

    #[test]
    fn rejects_non_topologies() {
        assert!(FiniteSpace::new(2, [0, 0b01, 0b10]).is_err());
        assert!(FiniteSpace::new(13, [0]).is_err());
    }

    #[test]
    fn every_small_space_passes() {
        let s = tau_alpha_scan(4);
        assert_eq!(s.detail, vec![1, 4, 29, 355]);
        assert_eq!(s.failures, 0);
        assert_eq!(s.hits, 389);
    }

    fn arb_space() -> impl Strategy<Value = FiniteSpace> {
        (1usize..=4).prop_flat_map(|n| {
            let spaces = enumerate_topologies(n).unwrap();
            (0..spaces.len()).prop_map(move |i| spaces[i].clone())
        })
    }

    proptest! {
        #[test]
        fn nwd_closed_under_closure_and_subsets(x in arb_space(), a in 0u16..16, b in 0u16..16) {
            let a = a & x.ground();
            let b = b & a;
            if x.is_nwd(a) {
                prop_assert!(x.is_nwd(x.closure(a)));
                prop_assert!(x.is_nwd(b));
            }
        }

        #[test]
        fn alpha_is_finer(x in arb_space()) {
            let a = tau_alpha(&x).unwrap();
            prop_assert!(x.opens.iter().all(|&o| a.is_open(o)));
        }
    }
}
