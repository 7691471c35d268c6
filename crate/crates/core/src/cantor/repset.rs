use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::pairing::unpair;
use super::word::BitWord;
use super::clopen::ClopenX;
use crate::constructions::blocks::{block_of, in_some_block};
use crate::constructions::dset::d_membership;
use crate::enumeration::{phi_ref, unrank};
use crate::topology::BasicOpen;

/// A membership predicate carried by name. Sets built from predicates are
/// not serializable.
#[derive(Clone)]
pub struct NamedPredicate {
    pub name: String,
    f: Arc<dyn Fn(u64) -> bool + Send + Sync>,
}

impl NamedPredicate {
    pub fn new(name: impl Into<String>, f: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        NamedPredicate { name: name.into(), f: Arc::new(f) }
    }

    pub fn test(&self, n: u64) -> bool {
        (self.f)(n)
    }
}

impl fmt::Debug for NamedPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.name)
    }
}

/// Sparse position sequences `k ↦ p(k)`, strictly increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "seq", rename_all = "kebab-case")]
pub enum SparseSeq {
    /// `k²`
    Squares,
    /// `k³`
    Cubes,
    /// `base^k`
    Powers { base: u64 },
}

impl SparseSeq {
    pub fn at(&self, k: u64) -> Option<u64> {
        match *self {
            SparseSeq::Squares => k.checked_mul(k),
            SparseSeq::Cubes => k.checked_mul(k)?.checked_mul(k),
            SparseSeq::Powers { base } => base.max(2).checked_pow(u32::try_from(k).ok()?),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match *self {
            SparseSeq::Squares => {
                let r = p.isqrt();
                r * r == p
            }
            SparseSeq::Cubes => {
                let r = (p as f64).cbrt().round() as u64;
                (r.saturating_sub(1)..=r + 1).any(|c| c.checked_pow(3) == Some(p))
            }
            SparseSeq::Powers { base } => {
                let b = base.max(2);
                let mut x = 1u64;
                while x < p {
                    match x.checked_mul(b) {
                        Some(y) => x = y,
                        None => return false,
                    }
                }
                x == p
            }
        }
    }
}

/// Index sets defined through the enumeration of clopens.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "filter", rename_all = "kebab-case")]
pub enum IndexFilter {
    /// `{n : φ_n ∉ ⋃_m A_m}`
    OutsideBlocks,
    /// `{n : φ_n ∈ A_m` for some `m ∈ ms}`
    InBlocks { ms: Box<RepSet> },
    /// `{n : φ_n ∈ V}`
    PhiIn { open: Box<BasicOpen> },
    /// `{n : φ_n ∈ D(A)}`
    DSet { a: Box<RepSet> },
}

impl IndexFilter {
    pub fn contains(&self, n: u64) -> bool {
        match phi_ref(n) {
            Some(phi) => self.test(phi),
            None => self.test(&unrank(n)),
        }
    }

    fn test(&self, phi: &ClopenX) -> bool {
        match self {
            IndexFilter::OutsideBlocks => !in_some_block(phi),
            IndexFilter::InBlocks { ms } => block_of(phi).is_some_and(|m| ms.contains(m)),
            IndexFilter::PhiIn { open } => open.contains_clopen(phi),
            IndexFilter::DSet { a } => d_membership(a, phi),
        }
    }
}

/// A representable subset of ℕ.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RepSet {
    Finite { ones: BTreeSet<u64> },
    Cofinite { zeros: BTreeSet<u64> },
    /// `prefix` followed by `period` repeated forever.
    Periodic { prefix: BitWord, period: BitWord },
    /// The elements of `parent` whose position in the increasing
    /// enumeration of `parent` lies in `positions`.
    Thinned { parent: Box<RepSet>, positions: SparseSeq },
    /// Through the pairing: `columns[i] = S` contributes `{π(i, j) : j ∈ S}`
    /// and `rows[j] = S` contributes `{π(i, j) : i ∈ S}`.
    Pairs {
        #[serde(default, with = "index_map")]
        columns: BTreeMap<u64, RepSet>,
        #[serde(default, with = "index_map")]
        rows: BTreeMap<u64, RepSet>,
    },
    Union { parts: Vec<RepSet> },
    Indices { filter: IndexFilter },
    #[serde(skip)]
    SubsetOf { parent: Box<RepSet>, pred: NamedPredicate },
    #[serde(skip)]
    Opaque { pred: NamedPredicate },
}

impl RepSet {
    pub fn empty() -> Self {
        RepSet::Finite { ones: BTreeSet::new() }
    }

    pub fn all() -> Self {
        RepSet::Cofinite { zeros: BTreeSet::new() }
    }

    pub fn finite<I: IntoIterator<Item = u64>>(ones: I) -> Self {
        RepSet::Finite { ones: ones.into_iter().collect() }
    }

    pub fn cofinite<I: IntoIterator<Item = u64>>(zeros: I) -> Self {
        RepSet::Cofinite { zeros: zeros.into_iter().collect() }
    }

    /// `prefix` then `period` forever. Panics on an empty period.
    pub fn periodic(prefix: &str, period: &str) -> Self {
        assert!(!period.is_empty(), "period must be non-empty");
        RepSet::Periodic { prefix: BitWord::from(prefix), period: BitWord::from(period) }
    }

    pub fn evens() -> Self {
        Self::periodic("", "10")
    }

    pub fn odds() -> Self {
        Self::periodic("", "01")
    }

    /// `{π(i, j) : j ∈ ℕ}`
    pub fn column(i: u64) -> Self {
        RepSet::Pairs { columns: BTreeMap::from([(i, RepSet::all())]), rows: BTreeMap::new() }
    }

    /// `{π(i, j) : i ∈ ℕ}`
    pub fn row(j: u64) -> Self {
        RepSet::Pairs { columns: BTreeMap::new(), rows: BTreeMap::from([(j, RepSet::all())]) }
    }

    pub fn thinned(parent: RepSet, positions: SparseSeq) -> Self {
        RepSet::Thinned { parent: Box::new(parent), positions }
    }

    pub fn union(parts: Vec<RepSet>) -> Self {
        RepSet::Union { parts }
    }

    pub fn subset_of(parent: RepSet, pred: NamedPredicate) -> Self {
        RepSet::SubsetOf { parent: Box::new(parent), pred }
    }

    pub fn opaque(pred: NamedPredicate) -> Self {
        RepSet::Opaque { pred }
    }

    pub fn indices(filter: IndexFilter) -> Self {
        RepSet::Indices { filter }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            RepSet::Finite { ones } => ones.contains(&n),
            RepSet::Cofinite { zeros } => !zeros.contains(&n),
            RepSet::Periodic { prefix, period } => periodic_bit(prefix, period, n),
            RepSet::Thinned { parent, positions } => {
                parent.contains(n) && positions.contains(parent.count_below(n))
            }
            RepSet::Pairs { columns, rows } => {
                let (i, j) = unpair(n);
                columns.get(&i).is_some_and(|s| s.contains(j))
                    || rows.get(&j).is_some_and(|s| s.contains(i))
            }
            RepSet::Union { parts } => parts.iter().any(|p| p.contains(n)),
            RepSet::Indices { filter } => filter.contains(n),
            RepSet::SubsetOf { parent, pred } => parent.contains(n) && pred.test(n),
            RepSet::Opaque { pred } => pred.test(n),
        }
    }

    /// `|self ∩ [0, n)|`
    pub fn count_below(&self, n: u64) -> u64 {
        match self {
            RepSet::Finite { ones } => ones.range(..n).count() as u64,
            RepSet::Cofinite { zeros } => n - zeros.range(..n).count() as u64,
            RepSet::Periodic { prefix, period } => {
                let plen = prefix.len() as u64;
                if n <= plen {
                    return prefix.bits()[..n as usize].iter().filter(|b| **b).count() as u64;
                }
                let head = prefix.one_positions().count() as u64;
                let per = period.len().max(1) as u64;
                let ones_per = period.one_positions().count() as u64;
                let rest = n - plen;
                let tail = (0..rest % per).filter(|&r| period.get(r as usize).unwrap_or(false)).count() as u64;
                head + (rest / per) * ones_per + tail
            }
            _ => (0..n).filter(|&k| self.contains(k)).count() as u64,
        }
    }

    /// Increasing enumeration of the elements.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            RepSet::Finite { ones } => Box::new(ones.iter().copied()),
            RepSet::Thinned { parent, positions } => {
                let positions = *positions;
                Box::new(
                    parent
                        .iter()
                        .enumerate()
                        .filter(move |(pos, _)| positions.contains(*pos as u64))
                        .map(|(_, n)| n),
                )
            }
            _ => {
                let finite_bound = self.finite_upper_bound();
                Box::new((0..finite_bound.unwrap_or(u64::MAX)).filter(move |&n| self.contains(n)))
            }
        }
    }

    /// The `k`-th element, counting from 0.
    pub fn nth(&self, k: u64) -> Option<u64> {
        self.iter().nth(k as usize)
    }

    /// An exclusive upper bound on the elements when one is known.
    fn finite_upper_bound(&self) -> Option<u64> {
        match self {
            RepSet::Finite { ones } => Some(ones.last().map_or(0, |m| m + 1)),
            RepSet::Periodic { prefix, period } if !period.bits().contains(&true) => {
                Some(prefix.len() as u64)
            }
            _ => None,
        }
    }

    /// `Some(true)` if finite, `Some(false)` if infinite, `None` if unknown.
    pub fn is_finite(&self) -> Option<bool> {
        match self {
            RepSet::Finite { .. } => Some(true),
            RepSet::Cofinite { .. } => Some(false),
            RepSet::Periodic { period, .. } => Some(!period.bits().contains(&true)),
            RepSet::Thinned { parent, .. } => parent.is_finite(),
            RepSet::Pairs { columns, rows } => {
                combine_all(columns.values().chain(rows.values()).map(|s| s.is_finite()))
            }
            RepSet::Union { parts } => combine_all(parts.iter().map(|s| s.is_finite())),
            RepSet::Indices { filter } => match filter {
                IndexFilter::OutsideBlocks => Some(false),
                IndexFilter::InBlocks { ms } => ms.is_finite().map(|f| f && ms.iter().next().is_none()),
                IndexFilter::PhiIn { open } => open.is_nonempty().then_some(false),
                IndexFilter::DSet { a } => match a.is_finite() {
                    Some(_) if a.iter().next().is_some() => Some(false),
                    _ => None,
                },
            },
            RepSet::SubsetOf { parent, .. } => match parent.is_finite() {
                Some(true) => Some(true),
                _ => None,
            },
            RepSet::Opaque { .. } => None,
        }
    }

    /// `(prefix, period)` describing the set when it is finite, cofinite or
    /// eventually periodic, normalized so that equal sets give equal pairs.
    pub fn periodic_form(&self) -> Option<(BitWord, BitWord)> {
        let (prefix, period) = match self {
            RepSet::Finite { ones } => {
                let len = ones.last().map_or(0, |m| m + 1) as usize;
                let bits = (0..len as u64).map(|n| ones.contains(&n)).collect();
                (BitWord::from_bits(bits), BitWord::from("0"))
            }
            RepSet::Cofinite { zeros } => {
                let len = zeros.last().map_or(0, |m| m + 1) as usize;
                let bits = (0..len as u64).map(|n| !zeros.contains(&n)).collect();
                (BitWord::from_bits(bits), BitWord::from("1"))
            }
            RepSet::Periodic { prefix, period } => {
                let period = if period.is_empty() { BitWord::from("0") } else { period.clone() };
                (prefix.clone(), period)
            }
            _ => return None,
        };
        Some(normalize_periodic(prefix, period))
    }

    /// Extensional equality when it can be decided from the representation.
    pub fn same_set(&self, other: &RepSet) -> Option<bool> {
        if let (Some(a), Some(b)) = (self.periodic_form(), other.periodic_form()) {
            return Some(a == b);
        }
        match (serde_json::to_string(self), serde_json::to_string(other)) {
            (Ok(a), Ok(b)) if a == b => Some(true),
            _ => None,
        }
    }

    /// Asymptotic density for eventually periodic sets, as `(ones, period)`.
    pub fn periodic_density(&self) -> Option<(u64, u64)> {
        let (_, period) = self.periodic_form()?;
        Some((period.one_positions().count() as u64, period.len() as u64))
    }

    pub fn is_serializable(&self) -> bool {
        match self {
            RepSet::SubsetOf { .. } | RepSet::Opaque { .. } => false,
            RepSet::Thinned { parent, .. } => parent.is_serializable(),
            RepSet::Pairs { columns, rows } => {
                columns.values().chain(rows.values()).all(|s| s.is_serializable())
            }
            RepSet::Union { parts } => parts.iter().all(|s| s.is_serializable()),
            RepSet::Indices { filter: IndexFilter::DSet { a } } => a.is_serializable(),
            RepSet::Indices { filter: IndexFilter::InBlocks { ms } } => ms.is_serializable(),
            RepSet::Indices { filter: IndexFilter::PhiIn { open } } => open.is_serializable(),
            _ => true,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            RepSet::SubsetOf { parent, pred } => format!("{} ∩ {}", parent.describe(), pred.name),
            RepSet::Opaque { pred } => pred.name.clone(),
            other => serde_json::to_string(other).unwrap_or_else(|_| "<set>".into()),
        }
    }
}

impl fmt::Display for RepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn periodic_bit(prefix: &BitWord, period: &BitWord, n: u64) -> bool {
    let plen = prefix.len() as u64;
    if n < plen {
        return prefix.bit(n as usize);
    }
    if period.is_empty() {
        return false;
    }
    period.bit(((n - plen) % period.len() as u64) as usize)
}

fn combine_all(it: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    let mut all_true = true;
    for v in it {
        match v {
            Some(false) => return Some(false),
            Some(true) => {}
            None => all_true = false,
        }
    }
    all_true.then_some(true)
}

fn normalize_periodic(mut prefix: BitWord, period: BitWord) -> (BitWord, BitWord) {
    let bits = period.bits();
    let len = bits.len();
    let d = (1..=len)
        .find(|&d| len.is_multiple_of(d) && (0..len).all(|i| bits[i] == bits[i % d]))
        .unwrap_or(len);
    let mut period: Vec<bool> = bits[..d].to_vec();
    while let Some(&last) = prefix.bits().last() {
        if last != *period.last().expect("non-empty period") {
            break;
        }
        prefix = prefix.parent().expect("non-empty prefix");
        period.rotate_right(1);
    }
    (prefix, BitWord::from_bits(period))
}


/// Integer-keyed maps as JSON objects. Keys are read back from strings so
/// that the maps also survive buffering inside tagged enums.
mod index_map {
    use std::collections::BTreeMap;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::RepSet;

    pub fn serialize<S: Serializer>(map: &BTreeMap<u64, RepSet>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, RepSet>, D::Error> {
        let named = BTreeMap::<String, RepSet>::deserialize(d)?;
        named
            .into_iter()
            .map(|(k, v)| k.parse::<u64>().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }
}
