use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::point::PointB;
use super::word::BitWord;

/// The clopen box `[word] × {level}` in `2^ℕ × ℕ`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    pub level: u32,
    pub word: BitWord,
}

impl Cylinder {
    pub fn new(word: impl Into<BitWord>, level: u32) -> Self {
        Cylinder { level, word: word.into() }
    }
}

impl Ord for Cylinder {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.word.cmp_shortlex(&other.word))
    }
}

impl PartialOrd for Cylinder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]×{{{}}}", self.word, self.level)
    }
}

impl fmt::Debug for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite union of cylinders, kept in canonical form: per level the words
/// are exactly the maximal cylinders contained in the set (no word is a
/// prefix of another, no sibling pair `w0`, `w1` survives), sorted by
/// `(level, word length, word)`. Equal sets have equal representations.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenX {
    cylinders: Vec<Cylinder>,
}

/// Canonical words of one level.
fn canonical_words(mut words: Vec<BitWord>) -> Vec<BitWord> {
    words.sort();
    words.dedup();
    // In prefix-first lexicographic order every extension of a word follows
    // it contiguously, so absorption only needs the last kept word.
    let mut kept: Vec<BitWord> = Vec::with_capacity(words.len());
    for w in words {
        if kept.last().is_some_and(|last| last.is_prefix_of(&w)) {
            continue;
        }
        kept.push(w);
    }

    let mut set: BTreeSet<BitWord> = kept.iter().cloned().collect();
    let mut queue: BinaryHeap<(usize, BitWord)> = kept.into_iter().map(|w| (w.len(), w)).collect();
    while let Some((_, w)) = queue.pop() {
        if !set.contains(&w) {
            continue;
        }
        let Some(sib) = w.sibling() else { continue };
        if set.contains(&sib) {
            set.remove(&w);
            set.remove(&sib);
            let parent = w.parent().expect("non-empty word has a parent");
            queue.push((parent.len(), parent.clone()));
            set.insert(parent);
        }
    }
    let mut out: Vec<BitWord> = set.into_iter().collect();
    out.sort_by(|a, b| a.cmp_shortlex(b));
    out
}

/// `a ∖ b` for word families of a single level (not canonicalized).
fn subtract_words(a: &[BitWord], b: &[BitWord]) -> Vec<BitWord> {
    let mut pieces: Vec<BitWord> = a.to_vec();
    for d in b {
        let mut next = Vec::with_capacity(pieces.len());
        for c in pieces {
            if d.is_prefix_of(&c) {
                continue;
            }
            if c.is_prefix_of(d) {
                // [c] minus [d] splits along the path from c down to d.
                for i in c.len()..d.len() {
                    next.push(d.truncated(i).pushed(!d.bit(i)));
                }
            } else {
                next.push(c);
            }
        }
        pieces = next;
    }
    pieces
}

impl ClopenX {
    pub fn empty() -> Self {
        ClopenX::default()
    }

    /// `[ε] × {level}`.
    pub fn full_level(level: u32) -> Self {
        ClopenX { cylinders: vec![Cylinder::new(BitWord::empty(), level)] }
    }

    /// Canonical form of the union of `cylinders`.
    pub fn canonicalize<I: IntoIterator<Item = Cylinder>>(cylinders: I) -> Self {
        let mut by_level: BTreeMap<u32, Vec<BitWord>> = BTreeMap::new();
        for c in cylinders {
            by_level.entry(c.level).or_default().push(c.word);
        }
        Self::from_levels(by_level)
    }

    fn from_levels(by_level: BTreeMap<u32, Vec<BitWord>>) -> Self {
        let mut cylinders = Vec::new();
        for (level, words) in by_level {
            for word in canonical_words(words) {
                cylinders.push(Cylinder { level, word });
            }
        }
        ClopenX { cylinders }
    }

    pub fn single(word: impl Into<BitWord>, level: u32) -> Self {
        ClopenX { cylinders: vec![Cylinder::new(word, level)] }
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    /// Cylinders at `level`, in canonical order.
    pub fn at_level(&self, level: u32) -> &[Cylinder] {
        let start = self.cylinders.partition_point(|c| c.level < level);
        let end = self.cylinders.partition_point(|c| c.level <= level);
        &self.cylinders[start..end]
    }

    pub fn levels(&self) -> BTreeSet<u32> {
        self.cylinders.iter().map(|c| c.level).collect()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.cylinders.last().map(|c| c.level)
    }

    /// Longest word over all levels (0 for the empty set).
    pub fn max_word_len(&self) -> usize {
        self.cylinders.iter().map(|c| c.word.len()).max().unwrap_or(0)
    }

    /// Longest word at `level`; this many bits of a point decide membership.
    pub fn depth_at(&self, level: u32) -> usize {
        self.at_level(level).iter().map(|c| c.word.len()).max().unwrap_or(0)
    }

    fn words_by_level(&self) -> BTreeMap<u32, Vec<BitWord>> {
        let mut m: BTreeMap<u32, Vec<BitWord>> = BTreeMap::new();
        for c in &self.cylinders {
            m.entry(c.level).or_default().push(c.word.clone());
        }
        m
    }

    /// `θ(α, p) = 1` for this set read as a function on `2^ℕ × ℕ`.
    pub fn contains_point(&self, alpha: &PointB, level: u32) -> bool {
        self.at_level(level)
            .iter()
            .any(|c| (0..c.word.len()).all(|i| alpha.bit(i as u64) == c.word.bit(i)))
    }

    /// Membership decided from a finite prefix of the point; `None` when the
    /// prefix is too short to decide.
    pub fn contains_prefix(&self, prefix: &BitWord, level: u32) -> Option<bool> {
        let cyl = self.at_level(level);
        if cyl.iter().any(|c| c.word.is_prefix_of(prefix)) {
            return Some(true);
        }
        if cyl.iter().all(|c| c.word.len() <= prefix.len()) {
            Some(false)
        } else {
            None
        }
    }

    /// `[c.word] × {c.level} ⊆ self`.
    pub fn contains_cylinder(&self, c: &Cylinder) -> bool {
        self.at_level(c.level).iter().any(|d| d.word.is_prefix_of(&c.word))
    }

    pub fn union(&self, other: &ClopenX) -> ClopenX {
        ClopenX::canonicalize(self.cylinders.iter().chain(other.cylinders.iter()).cloned())
    }

    pub fn difference(&self, other: &ClopenX) -> ClopenX {
        let a = self.words_by_level();
        let b = other.words_by_level();
        let mut out: BTreeMap<u32, Vec<BitWord>> = BTreeMap::new();
        for (level, words) in a {
            let rest = match b.get(&level) {
                Some(bw) => subtract_words(&words, bw),
                None => words,
            };
            if !rest.is_empty() {
                out.insert(level, rest);
            }
        }
        Self::from_levels(out)
    }

    /// Group operation of the clopen space.
    pub fn sym_diff(&self, other: &ClopenX) -> ClopenX {
        self.difference(other).union(&other.difference(self))
    }

    /// The cylinders at level `p`, moved to level 0.
    pub fn level_slice(&self, level: u32) -> ClopenX {
        ClopenX {
            cylinders: self
                .at_level(level)
                .iter()
                .map(|c| Cylinder { level: 0, word: c.word.clone() })
                .collect(),
        }
    }
}

/// `[c] ⊆ φ`.
pub fn cylinder_subset(c: &Cylinder, phi: &ClopenX) -> bool {
    phi.contains_cylinder(c)
}

impl fmt::Display for ClopenX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cylinders.is_empty() {
            return f.write_str("∅");
        }
        for (i, c) in self.cylinders.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClopenX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClopenX({self})")
    }
}

impl Serialize for ClopenX {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.cylinders.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClopenX {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let cylinders = Vec::<Cylinder>::deserialize(deserializer)?;
        Ok(ClopenX::canonicalize(cylinders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(cyls: &[(&str, u32)]) -> ClopenX {
        ClopenX::canonicalize(cyls.iter().map(|&(w, l)| Cylinder::new(w, l)))
    }

    #[test]
    fn sibling_merge_covers_slice() {
        assert_eq!(x(&[("0", 1), ("1", 1)]), ClopenX::full_level(1));
    }

    #[test]
    fn absorption() {
        assert_eq!(x(&[("00", 0), ("0", 0)]), ClopenX::single("0", 0));
    }

    #[test]
    fn empty_union() {
        assert!(x(&[]).is_empty());
    }

    #[test]
    fn cascading_merge() {
        // 000 ∪ 001 ∪ 01 ∪ 1 = everything
        assert_eq!(x(&[("000", 2), ("001", 2), ("01", 2), ("1", 2)]), ClopenX::full_level(2));
        assert_eq!(x(&[("000", 0), ("001", 0), ("01", 0)]), ClopenX::single("0", 0));
    }

    #[test]
    fn canonical_order() {
        let phi = x(&[("1", 3), ("01", 0), ("1", 0)]);
        let got: Vec<String> = phi.cylinders().iter().map(|c| c.to_string()).collect();
        assert_eq!(got, vec!["[1]×{0}", "[01]×{0}", "[1]×{3}"]);
    }

    #[test]
    fn sym_diff_examples() {
        let a = x(&[("0", 0)]);
        let b = x(&[("00", 0)]);
        assert_eq!(a.sym_diff(&b), x(&[("01", 0)]));
        assert!(a.sym_diff(&a).is_empty());
        assert_eq!(a.sym_diff(&ClopenX::empty()), a);
    }

    #[test]
    fn cylinder_subset_examples() {
        assert!(cylinder_subset(&Cylinder::new("00", 0), &x(&[("0", 0)])));
        assert!(!cylinder_subset(&Cylinder::new("0", 0), &x(&[("00", 0)])));
        assert!(!cylinder_subset(&Cylinder::new("01", 1), &x(&[("01", 0)])));
    }

    #[test]
    fn level_slice_examples() {
        let phi = x(&[("0", 0), ("1", 3)]);
        assert_eq!(phi.level_slice(3), x(&[("1", 0)]));
        assert!(ClopenX::empty().level_slice(5).is_empty());
        assert!(x(&[("01", 2)]).level_slice(0).is_empty());
    }

    #[test]
    fn prefix_membership() {
        let phi = x(&[("01", 2)]);
        assert_eq!(phi.contains_prefix(&BitWord::from("011"), 2), Some(true));
        assert_eq!(phi.contains_prefix(&BitWord::from("00"), 2), Some(false));
        assert_eq!(phi.contains_prefix(&BitWord::from("0"), 2), None);
        assert_eq!(phi.contains_prefix(&BitWord::empty(), 1), Some(false));
    }

    #[test]
    fn json_shape() {
        let phi = x(&[("0110", 1), ("", 0)]);
        assert_eq!(
            serde_json::to_string(&phi).unwrap(),
            r#"[{"level":0,"word":""},{"level":1,"word":"0110"}]"#
        );
        let back: ClopenX = serde_json::from_str(r#"[{"level":1,"word":"1"},{"level":1,"word":"0"}]"#).unwrap();
        assert_eq!(back, ClopenX::full_level(1));
    }
}
