use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::repset::RepSet;
use super::word::BitWord;

/// Default number of leading bits compared when looking for a difference
/// between two points whose equality is not decidable structurally.
pub const EQ_BUDGET: usize = 512;

static NEXT_TOKEN: AtomicU64 = AtomicU64::new(1);

type Rule = dyn Fn(u64, &BitWord) -> bool + Send + Sync;

/// A point of `2^ℕ` defined by a rule that sees the prefix computed so far.
struct LazyPoint {
    name: String,
    token: u64,
    rule: Arc<Rule>,
    memo: RwLock<BitWord>,
    ones_view: Option<RepSet>,
}

impl LazyPoint {
    fn bit(&self, n: u64) -> bool {
        if let Some(b) = self.memo.read().get(n as usize) {
            return b;
        }
        let mut memo = self.memo.write();
        while memo.len() as u64 <= n {
            let next = (self.rule)(memo.len() as u64, &memo);
            memo.push(next);
        }
        memo.bit(n as usize)
    }
}

#[derive(Clone)]
enum Inner {
    Set(Arc<RepSet>),
    Lazy(Arc<LazyPoint>),
}

/// A point `α ∈ 2^ℕ`, identified with the set `α⁻¹(1)`.
#[derive(Clone)]
pub struct PointB {
    inner: Inner,
}

/// Result of comparing two points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointEq {
    Equal,
    /// First position where the points differ.
    Differ(u64),
    /// No difference within the budget and no structural decision.
    Undecided,
}

impl PointB {
    /// The characteristic function of `ones`.
    pub fn chi(ones: RepSet) -> Self {
        PointB { inner: Inner::Set(Arc::new(ones)) }
    }

    pub fn from_ones<I: IntoIterator<Item = u64>>(ones: I) -> Self {
        Self::chi(RepSet::finite(ones))
    }

    pub fn zeros() -> Self {
        Self::chi(RepSet::empty())
    }

    /// A point computed bit by bit: `rule(n, α↾n)` gives `α(n)`. Answers
    /// are memoized. `ones_view`, if given, describes `α⁻¹(1)` (or a
    /// superset-free description of it) for ideal queries.
    pub fn lazy(
        name: impl Into<String>,
        rule: impl Fn(u64, &BitWord) -> bool + Send + Sync + 'static,
        ones_view: Option<RepSet>,
    ) -> Self {
        PointB {
            inner: Inner::Lazy(Arc::new(LazyPoint {
                name: name.into(),
                token: NEXT_TOKEN.fetch_add(1, Ordering::Relaxed),
                rule: Arc::new(rule),
                memo: RwLock::new(BitWord::empty()),
                ones_view,
            })),
        }
    }

    pub fn bit(&self, n: u64) -> bool {
        match &self.inner {
            Inner::Set(s) => s.contains(n),
            Inner::Lazy(l) => l.bit(n),
        }
    }

    /// `α↾len`
    pub fn prefix(&self, len: usize) -> BitWord {
        if let Inner::Lazy(l) = &self.inner {
            if len > 0 {
                l.bit(len as u64 - 1);
            }
            return l.memo.read().truncated(len);
        }
        BitWord::from_bits((0..len as u64).map(|n| self.bit(n)).collect())
    }

    /// `α⁻¹(1)` when known.
    pub fn ones_view(&self) -> Option<&RepSet> {
        match &self.inner {
            Inner::Set(s) => Some(s),
            Inner::Lazy(l) => l.ones_view.as_ref(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.inner, Inner::Lazy(_))
    }

    /// Least `n ≥ from` with `α(n) = 0`, looking at most `limit` positions.
    pub fn first_zero_from(&self, from: u64, limit: u64) -> Option<u64> {
        (from..from.saturating_add(limit)).find(|&n| !self.bit(n))
    }

    /// Equality: structural where possible, otherwise a scan for a first
    /// difference within `budget` bits.
    pub fn compare(&self, other: &PointB, budget: usize) -> PointEq {
        match (&self.inner, &other.inner) {
            (Inner::Lazy(a), Inner::Lazy(b)) if a.token == b.token => return PointEq::Equal,
            (Inner::Set(a), Inner::Set(b)) => {
                if Arc::ptr_eq(a, b) {
                    return PointEq::Equal;
                }
                if let (Some(x), Some(y)) = (a.periodic_form(), b.periodic_form()) {
                    if x == y {
                        return PointEq::Equal;
                    }
                    let n = (0..).find(|&n| self.bit(n) != other.bit(n)).expect("distinct periodic sets differ");
                    return PointEq::Differ(n);
                }
                if a.same_set(b) == Some(true) {
                    return PointEq::Equal;
                }
            }
            _ => {}
        }
        match (0..budget as u64).find(|&n| self.bit(n) != other.bit(n)) {
            Some(n) => PointEq::Differ(n),
            None => PointEq::Undecided,
        }
    }

    pub fn describe(&self) -> String {
        match &self.inner {
            Inner::Set(s) => s.describe(),
            Inner::Lazy(l) => l.name.clone(),
        }
    }
}

impl fmt::Debug for PointB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointB({})", self.describe())
    }
}

impl fmt::Display for PointB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Serialize for PointB {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.inner {
            Inner::Set(s) => s.serialize(serializer),
            Inner::Lazy(l) => Err(serde::ser::Error::custom(format!(
                "point {} is defined by a rule and cannot be serialized",
                l.name
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for PointB {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        RepSet::deserialize(deserializer).map(PointB::chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_rule_sees_prefix() {
        // α(n) = 1 iff the previous bit is not 1.
        let a = PointB::lazy("alternate", |n, w| n == 0 || w.get(n as usize - 1) != Some(true), None);
        assert_eq!(a.prefix(5).to_bit_string(), "10101");
        assert!(a.bit(6));
        assert_eq!(a.prefix(7).to_bit_string(), "1010101");
    }

    #[test]
    fn compare_structural_and_scanned() {
        let a = PointB::chi(RepSet::evens());
        let b = PointB::chi(RepSet::periodic("10", "10"));
        assert_eq!(a.compare(&b, 8), PointEq::Equal);
        let c = PointB::from_ones([0, 2, 4]);
        assert_eq!(a.compare(&c, 8), PointEq::Differ(6));
        let l1 = PointB::lazy("zero", |_, _| false, None);
        let l2 = PointB::lazy("zero", |_, _| false, None);
        assert_eq!(l1.compare(&l1.clone(), 8), PointEq::Equal);
        assert_eq!(l1.compare(&l2, 64), PointEq::Undecided);
        assert_eq!(l1.compare(&PointB::zeros(), 64), PointEq::Undecided);
        assert_eq!(l1.compare(&PointB::from_ones([70]), 64), PointEq::Undecided);
        assert_eq!(l1.compare(&PointB::from_ones([70]), 128), PointEq::Differ(70));
    }

    #[test]
    fn lazy_points_refuse_serialization() {
        let l = PointB::lazy("zero", |_, _| false, None);
        assert!(serde_json::to_string(&l).is_err());
        let p: PointB = serde_json::from_str(r#"{"kind":"finite","ones":[2]}"#).unwrap();
        assert!(p.bit(2) && !p.bit(1));
    }

    #[test]
    fn concurrent_reads_agree() {
        let a = PointB::lazy("alt", |n, _| n % 3 == 0, None);
        let bits: Vec<Vec<bool>> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4)
                .map(|_| s.spawn(|| (0..500).rev().map(|n| a.bit(n)).collect::<Vec<_>>()))
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(bits.windows(2).all(|w| w[0] == w[1]));
    }
}
