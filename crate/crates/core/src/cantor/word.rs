use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finite binary word `s`, denoting the cylinder `[s]` of all infinite
/// sequences extending it. The empty word denotes the whole Cantor space.
///
/// The derived ordering is lexicographic with a proper prefix sorting before
/// its extensions.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn empty() -> Self {
        BitWord(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitWord(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        BitWord(vec![true; len])
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn pushed(&self, bit: bool) -> Self {
        let mut w = self.clone();
        w.0.push(bit);
        w
    }

    pub fn concat(&self, other: &BitWord) -> Self {
        let mut w = self.clone();
        w.0.extend_from_slice(&other.0);
        w
    }

    pub fn truncated(&self, len: usize) -> Self {
        BitWord(self.0[..len.min(self.0.len())].to_vec())
    }

    /// `self ⪯ other`: every bit of `self` agrees with `other`.
    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// The word obtained by flipping the last bit. `None` for the empty word.
    pub fn sibling(&self) -> Option<Self> {
        let mut w = self.0.clone();
        let last = w.last_mut()?;
        *last = !*last;
        Some(BitWord(w))
    }

    /// The word with its last bit removed. `None` for the empty word.
    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(BitWord(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// Positions holding a zero.
    pub fn zero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| !**b).map(|(i, _)| i)
    }

    /// Positions holding a one.
    pub fn one_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    /// Ordering by length first, then lexicographic.
    pub fn cmp_shortlex(&self, other: &BitWord) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl BitWord {
    /// Plain `0`/`1` rendering; the empty word renders as the empty string.
    pub fn to_bit_string(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitWord::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid bit word {s:?}")))
    }
}

impl From<&str> for BitWord {
    /// Panics on characters other than `0`/`1`; meant for literals.
    fn from(s: &str) -> Self {
        BitWord::parse(s).expect("bit word literal")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_and_sibling() {
        let w = BitWord::from("010");
        assert!(BitWord::from("01").is_prefix_of(&w));
        assert!(BitWord::empty().is_prefix_of(&w));
        assert!(!BitWord::from("011").is_prefix_of(&w));
        assert_eq!(w.sibling().unwrap(), BitWord::from("011"));
        assert_eq!(w.parent().unwrap(), BitWord::from("01"));
        assert!(BitWord::empty().sibling().is_none());
    }

    #[test]
    fn ordering_puts_prefix_first() {
        let mut v = vec![BitWord::from("1"), BitWord::from("01"), BitWord::from("0")];
        v.sort();
        assert_eq!(v, vec![BitWord::from("0"), BitWord::from("01"), BitWord::from("1")]);
        v.sort_by(|a, b| a.cmp_shortlex(b));
        assert_eq!(v, vec![BitWord::from("0"), BitWord::from("1"), BitWord::from("01")]);
    }

    #[test]
    fn serde_roundtrip_as_string() {
        let w = BitWord::from("0110");
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "\"0110\"");
        assert_eq!(serde_json::from_str::<BitWord>(&json).unwrap(), w);
        assert!(serde_json::from_str::<BitWord>("\"012\"").is_err());
    }
}
