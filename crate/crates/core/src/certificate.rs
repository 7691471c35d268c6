//! Replayable verification outcomes.
//!
//! A certificate lists evidence items. Each item records an expected value
//! and re-derives it from the data it carries, so replay needs neither
//! search nor any state beyond the certificate itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cantor::{pairing::PAIRING_VERSION, ClopenX, Cylinder, PointB, RepSet};
use crate::constructions::blocks::in_a_m;
use crate::constructions::diagonal::DiagonalEvidence;
use crate::constructions::dset::d_membership;
use crate::constructions::yspace::SelectorEvidence;
use crate::enumeration::{rank, ENUMERATION_VERSION};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};
use crate::topology::{BasicOpen, Bounds, Target, Theta};

pub const SCHEMA: &str = "cert/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Verified,
    Refuted,
    Exhausted,
}

impl Outcome {
    /// Process exit code: 0 verified, 1 refuted, 2 exhausted.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted => 1,
            Outcome::Exhausted => 2,
        }
    }

    /// Conjunction: refuted dominates, then exhausted.
    pub fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Refuted, _) | (_, Outcome::Refuted) => Outcome::Refuted,
            (Outcome::Exhausted, _) | (_, Outcome::Exhausted) => Outcome::Exhausted,
            _ => Outcome::Verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub library: String,
    pub pairing: String,
    pub enumeration: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            library: format!("cantor-forge {}", env!("CARGO_PKG_VERSION")),
            pairing: PAIRING_VERSION.into(),
            enumeration: ENUMERATION_VERSION.into(),
            ideal: None,
            seed: None,
            bounds: None,
            params: BTreeMap::new(),
        }
    }
}

impl Provenance {
    pub fn new(ideal: Option<&str>, seed: Option<u64>, bounds: Option<&Bounds>) -> Self {
        Provenance {
            ideal: ideal.map(str::to_string),
            seed,
            bounds: bounds.cloned(),
            ..Provenance::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.into(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }
}

/// Counts produced by an exhaustive scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub checked: u64,
    pub hits: u64,
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<u64>,
}

/// Deterministic exhaustive computations re-executed on replay.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "scan", rename_all = "kebab-case")]
pub enum Scan {
    /// Discrepancies between `φ_n ∈ V` and `ψ_n ∈ V` for `n < bound`, and
    /// whether each is explained by a constraint point with bit 1 at `n`.
    SymDiff { open: BasicOpen, bound: u64 },
    /// Indices `n < bound` with the target member of index `n` in `open`.
    Avoid { open: BasicOpen, target: Target, bound: u64 },
    /// `F = ⋂_{m < m_bound} {n : ψ_n ∈ (χ_F, m)^+}` on `n < n_bound`.
    ClosedDiscrete { set: RepSet, m_bound: u32, n_bound: u64 },
    /// `φ_n ∈ (α,p)^+ ⟺ ψ_n ∈ (α,p)^+ ∧ n ∉ A` for `n < bound`.
    Gamma { point: PointB, level: u32, bound: u64, exceptional: Vec<u64> },
    /// `x_n ∈ V` for every `n` in `from..=to`.
    Converge { open: BasicOpen, from: u64, to: u64 },
    /// First `count` elements of a set.
    Elements { set: RepSet, count: u64 },
    /// `{n ∈ A : φ_n ∈ V}` and `{n ∈ A : ψ_n ∈ V}` below `bound`.
    Accumulation { set: RepSet, open: BasicOpen, bound: u64 },
    /// Pairs `(m, φ)` with `φ ∈ (β, m)^+`, `m < m_bound`.
    BetaHits { beta: RepSet, m_bound: u32, phis: Vec<ClopenX> },
    /// Identities of the α-topology on every labeled topology with at most
    /// `points` points.
    TauAlpha { points: usize },
    /// The same identities on one space.
    TauAlphaSpace { points: usize, opens: Vec<u16> },
    /// `rank(unrank(n)) = n` for `n < bound`.
    Roundtrip { bound: u64 },
}

impl Scan {
    pub fn run(&self) -> ScanSummary {
        use crate::constructions::sequences as seq;
        match self {
            Scan::SymDiff { open, bound } => crate::topology::symdiff::symdiff_scan(open, *bound),
            Scan::Avoid { open, target, bound } => crate::topology::density::avoid_scan(open, target, *bound),
            Scan::ClosedDiscrete { set, m_bound, n_bound } => seq::closed_discrete_scan(set, *m_bound, *n_bound),
            Scan::Gamma { point, level, bound, exceptional } => {
                seq::gamma_scan(point, *level, *bound, exceptional)
            }
            Scan::Converge { open, from, to } => seq::converge_scan(open, *from, *to),
            Scan::Elements { set, count } => {
                let detail: Vec<u64> = set.iter().take(*count as usize).collect();
                ScanSummary { checked: *count, hits: detail.len() as u64, failures: 0, detail }
            }
            Scan::Accumulation { set, open, bound } => seq::accumulation_scan(set, open, *bound),
            Scan::BetaHits { beta, m_bound, phis } => {
                let point = PointB::chi(beta.clone());
                let mut s = ScanSummary::default();
                for (k, phi) in phis.iter().enumerate() {
                    for m in 0..*m_bound {
                        s.checked += 1;
                        if phi.contains_point(&point, m) {
                            s.hits += 1;
                            s.detail.push(k as u64);
                        }
                    }
                }
                s
            }
            Scan::TauAlpha { points } => crate::finite::tau_alpha_scan(*points),
            Scan::TauAlphaSpace { points, opens } => match crate::finite::FiniteSpace::new(*points, opens.clone()) {
                Ok(x) => crate::finite::tau_alpha_space_scan(&x),
                Err(_) => ScanSummary { checked: 1, hits: 0, failures: 1, detail: Vec::new() },
            },
            Scan::Roundtrip { bound } => {
                let failures = (0..*bound)
                    .filter(|&n| rank(&crate::enumeration::unrank(n)).ok() != Some(n))
                    .count() as u64;
                ScanSummary { checked: *bound, hits: 0, failures, detail: Vec::new() }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The parent outcome depends on this certificate.
    Required,
    /// Recorded for information; does not affect the parent outcome.
    Informational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Evidence {
    BasicMember { theta: Theta, open: BasicOpen, expected: bool },
    /// The open set has no positive constraint equal to a negative one.
    Nonempty { open: BasicOpen },
    IndexOf { index: u64, phi: ClopenX },
    SetMember { set: RepSet, n: u64, expected: bool },
    InBlock { phi: ClopenX, m: u64, expected: bool },
    DMember { a: RepSet, phi: ClopenX, expected: bool },
    /// Membership in a built-in ideal.
    IdealMember { ideal: String, set: RepSet, expected: TriState },
    CylinderSubset { cylinder: Cylinder, phi: ClopenX, expected: bool },
    PointBit { point: PointB, n: u64, expected: bool },
    /// `beta` is `a` itself or a union with `a` as one of its parts, so `a ⊆ beta`.
    Covers { beta: RepSet, a: RepSet },
    Scan { scan: Scan, expected: ScanSummary },
    Diagonal(DiagonalEvidence),
    SelectorAvoid(SelectorEvidence),
    Sub { role: Role, cert: Box<Certificate> },
    Note { text: String },
}

impl Evidence {
    pub fn scan(scan: Scan) -> Evidence {
        let expected = scan.run();
        Evidence::Scan { scan, expected }
    }

    /// Re-derives the recorded value.
    pub fn check(&self) -> bool {
        match self {
            Evidence::BasicMember { theta, open, expected } => {
                let index_ok = match theta {
                    Theta::Phi { index, phi } | Theta::Psi { index, phi } => match rank(phi) {
                        Ok(r) => r == *index,
                        Err(_) => false,
                    },
                    Theta::Clopen { .. } => true,
                };
                index_ok && open.contains(theta) == *expected
            }
            Evidence::Nonempty { open } => matches!(open.clash(crate::cantor::EQ_BUDGET), Ok(None)),
            Evidence::IndexOf { index, phi } => rank(phi).ok() == Some(*index),
            Evidence::SetMember { set, n, expected } => set.contains(*n) == *expected,
            Evidence::InBlock { phi, m, expected } => in_a_m(phi, *m) == *expected,
            Evidence::DMember { a, phi, expected } => d_membership(a, phi) == *expected,
            Evidence::IdealMember { ideal, set, expected } => match IdealHandle::builtin(ideal) {
                Ok(h) => h.member(set) == *expected,
                Err(_) => false,
            },
            Evidence::CylinderSubset { cylinder, phi, expected } => phi.contains_cylinder(cylinder) == *expected,
            Evidence::PointBit { point, n, expected } => point.bit(*n) == *expected,
            Evidence::Covers { beta, a } => {
                let a_json = serde_json::to_string(a).ok();
                let same = |p: &RepSet| a_json.is_some() && serde_json::to_string(p).ok() == a_json;
                match beta {
                    RepSet::Union { parts } => parts.iter().any(same),
                    other => same(other),
                }
            }
            Evidence::Scan { scan, expected } => scan.run() == *expected,
            Evidence::Diagonal(d) => d.check(),
            Evidence::SelectorAvoid(s) => s.check(),
            Evidence::Sub { cert, .. } => cert.replay_items(),
            Evidence::Note { .. } => true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub kind: Outcome,
    pub claim: String,
    pub evidence: Vec<Evidence>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, provenance: Provenance) -> Self {
        Certificate {
            schema: SCHEMA.into(),
            kind: Outcome::Verified,
            claim: claim.into(),
            evidence: Vec::new(),
            provenance,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Evidence) {
        self.evidence.push(e);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Adds a sub-certificate; a required one folds its outcome into ours.
    pub fn sub(&mut self, role: Role, cert: Certificate) {
        if role == Role::Required {
            self.kind = self.kind.and(cert.kind);
        }
        self.evidence.push(Evidence::Sub { role, cert: Box::new(cert) });
    }

    pub fn with_kind(mut self, kind: Outcome) -> Self {
        self.kind = kind;
        self
    }

    pub fn is_verified(&self) -> bool {
        self.kind == Outcome::Verified
    }

    fn replay_items(&self) -> bool {
        self.schema == SCHEMA && self.evidence.iter().all(Evidence::check)
    }

    /// Re-checks every evidence item. Fails on a schema mismatch.
    pub fn replay(&self) -> Result<bool> {
        if self.schema != SCHEMA {
            return Err(Error::Schema(format!("expected {SCHEMA}, found {}", self.schema)));
        }
        Ok(self.replay_items())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `replay`: re-check a certificate without search.
pub fn replay(cert: &Certificate) -> Result<bool> {
    cert.replay()
}
