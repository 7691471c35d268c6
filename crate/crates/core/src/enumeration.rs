//! The fixed enumeration `n ↦ φ_n` of the clopen space, with `φ_0 = ∅`.
//!
//! Each level of a canonical clopen is written as a preorder code of its
//! binary tree over the alphabet `e < f < s` (`e`: empty, `f`: full,
//! `s`: split into the `0` and `1` halves). Canonical form rules out the
//! codes `see` and `sff`. The code of `φ` is the concatenation of the level
//! codes for levels `0..=max`, so it never ends in a lone `e`; `∅` has the
//! empty code. Clopens are ordered by code length, then lexicographically.
//! Ranks come from exact completion counts, so `rank` and `unrank` cost
//! `O(length of the code)`.

use std::sync::OnceLock;

use crate::cantor::{BitWord, ClopenX, Cylinder, PointB};
use crate::error::{Error, Result};

pub const ENUMERATION_VERSION: &str = "tree-code/1";

/// Longest code handled; longer codes have ranks far beyond `u64`.
const MAX_CODE: usize = 200;
const CACHE_SIZE: usize = 1 << 17;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sym {
    E,
    F,
    S,
}

const SYMS: [Sym; 3] = [Sym::E, Sym::F, Sym::S];

impl Sym {
    fn as_char(self) -> char {
        match self {
            Sym::E => 'e',
            Sym::F => 'f',
            Sym::S => 's',
        }
    }
}

/// What the next tree slot must not be.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    First,
    /// Second child after a first child that was a split.
    AfterSplit,
    AfterE,
    AfterF,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum State {
    Top { last_e: bool },
    Tree { pending: usize, slot: Slot },
}

fn step(st: State, c: Sym) -> Option<State> {
    match st {
        State::Top { .. } => Some(match c {
            Sym::E => State::Top { last_e: true },
            Sym::F => State::Top { last_e: false },
            Sym::S => State::Tree { pending: 2, slot: Slot::First },
        }),
        State::Tree { pending, slot } => match (slot, c) {
            (_, Sym::S) => Some(State::Tree { pending: pending + 1, slot: Slot::First }),
            (Slot::First, _) if pending < 2 => None,
            (Slot::First, Sym::E) => Some(State::Tree { pending: pending - 1, slot: Slot::AfterE }),
            (Slot::First, Sym::F) => Some(State::Tree { pending: pending - 1, slot: Slot::AfterF }),
            (Slot::AfterE, Sym::E) | (Slot::AfterF, Sym::F) => None,
            (_, _) => Some(if pending == 1 {
                State::Top { last_e: false }
            } else {
                State::Tree { pending: pending - 1, slot: Slot::AfterSplit }
            }),
        },
    }
}

struct Counts {
    /// `table[r][state]`: completions of exactly `r` symbols ending accepted.
    table: Vec<Vec<u128>>,
    /// `before[l]`: number of codes shorter than `l`.
    before: Vec<u128>,
}

fn state_index(st: State) -> usize {
    match st {
        State::Top { last_e } => last_e as usize,
        State::Tree { pending, slot } => {
            let s = match slot {
                Slot::First => 0,
                Slot::AfterSplit => 1,
                Slot::AfterE => 2,
                Slot::AfterF => 3,
            };
            2 + (pending - 1) * 4 + s
        }
    }
}

fn all_states() -> Vec<State> {
    let mut v = vec![State::Top { last_e: false }, State::Top { last_e: true }];
    for pending in 1..=MAX_CODE + 2 {
        for slot in [Slot::First, Slot::AfterSplit, Slot::AfterE, Slot::AfterF] {
            v.push(State::Tree { pending, slot });
        }
    }
    v
}

fn counts() -> &'static Counts {
    static COUNTS: OnceLock<Counts> = OnceLock::new();
    COUNTS.get_or_init(|| {
        let states = all_states();
        let width = states.len();
        let mut table = vec![vec![0u128; width]; MAX_CODE + 1];
        table[0][state_index(State::Top { last_e: false })] = 1;
        for r in 1..=MAX_CODE {
            for &st in &states {
                if let State::Tree { pending, .. } = st {
                    if pending > r {
                        continue;
                    }
                }
                let mut total = 0u128;
                for c in SYMS {
                    if let Some(next) = step(st, c) {
                        let idx = state_index(next);
                        if idx < width {
                            total = total.saturating_add(table[r - 1][idx]);
                        }
                    }
                }
                table[r][state_index(st)] = total;
            }
        }
        let top = state_index(State::Top { last_e: false });
        let mut before = vec![0u128; MAX_CODE + 2];
        for l in 0..=MAX_CODE {
            before[l + 1] = before[l].saturating_add(table[l][top]);
        }
        Counts { table, before }
    })
}

fn completions(st: State, r: usize) -> u128 {
    let c = counts();
    c.table[r].get(state_index(st)).copied().unwrap_or(0)
}

/// Number of clopens whose code has exactly `len` symbols.
pub fn count_with_code_len(len: usize) -> u128 {
    completions(State::Top { last_e: false }, len)
}

fn level_code(words: &[&BitWord], out: &mut Vec<Sym>) {
    // Preorder over (slice, depth); words are sorted with prefixes first.
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, words.len(), 0)];
    while let Some((lo, hi, depth)) = stack.pop() {
        if lo == hi {
            out.push(Sym::E);
        } else if words[lo].len() == depth {
            out.push(Sym::F);
        } else {
            out.push(Sym::S);
            let mid = lo + words[lo..hi].partition_point(|w| !w.bit(depth));
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
}

fn code_of(phi: &ClopenX) -> Vec<Sym> {
    let mut out = Vec::new();
    let Some(max) = phi.max_level() else { return out };
    for level in 0..=max {
        let mut words: Vec<&BitWord> = phi.at_level(level).iter().map(|c| &c.word).collect();
        words.sort();
        level_code(&words, &mut out);
    }
    out
}

/// The code of `φ` as a string over `e`, `f`, `s`.
pub fn code_string(phi: &ClopenX) -> String {
    code_of(phi).into_iter().map(Sym::as_char).collect()
}

fn decode(code: &[Sym]) -> ClopenX {
    let mut cylinders = Vec::new();
    let mut level = 0u32;
    let mut i = 0;
    while i < code.len() {
        let mut stack = vec![BitWord::empty()];
        while let Some(w) = stack.pop() {
            match code[i] {
                Sym::E => {}
                Sym::F => cylinders.push(Cylinder { level, word: w }),
                Sym::S => {
                    stack.push(w.pushed(true));
                    stack.push(w.pushed(false));
                }
            }
            i += 1;
        }
        level += 1;
    }
    ClopenX::canonicalize(cylinders)
}

/// Position of `φ` in the enumeration.
pub fn rank(phi: &ClopenX) -> Result<u64> {
    if phi.max_word_len() > MAX_CODE || phi.max_level().is_some_and(|l| l as usize > MAX_CODE) {
        return Err(Error::IndexOverflow(phi.to_string()));
    }
    let code = code_of(phi);
    let len = code.len();
    if len > MAX_CODE {
        return Err(Error::IndexOverflow(phi.to_string()));
    }
    let mut r = counts().before[len];
    let mut st = State::Top { last_e: false };
    for (i, &c) in code.iter().enumerate() {
        for smaller in SYMS.iter().take_while(|&&x| x != c) {
            if let Some(next) = step(st, *smaller) {
                r = r.saturating_add(completions(next, len - i - 1));
            }
        }
        st = step(st, c).expect("canonical code is well formed");
    }
    u64::try_from(r).map_err(|_| Error::IndexOverflow(phi.to_string()))
}

fn unrank_uncached(n: u64) -> ClopenX {
    let c = counts();
    let n = n as u128;
    let len = (0..=MAX_CODE).find(|&l| c.before[l + 1] > n).expect("u64 ranks fit the table");
    let mut rest = n - c.before[len];
    let mut st = State::Top { last_e: false };
    let mut code = Vec::with_capacity(len);
    for i in 0..len {
        for sym in SYMS {
            let Some(next) = step(st, sym) else { continue };
            let k = completions(next, len - i - 1);
            if rest < k {
                code.push(sym);
                st = next;
                break;
            }
            rest -= k;
        }
    }
    decode(&code)
}

fn cache() -> &'static [OnceLock<ClopenX>] {
    static CACHE: OnceLock<Vec<OnceLock<ClopenX>>> = OnceLock::new();
    CACHE.get_or_init(|| (0..CACHE_SIZE).map(|_| OnceLock::new()).collect())
}

/// `φ_n`
pub fn unrank(n: u64) -> ClopenX {
    match cache().get(n as usize) {
        Some(slot) => slot.get_or_init(|| unrank_uncached(n)).clone(),
        None => unrank_uncached(n),
    }
}

/// Calls `f(n, φ_n)` for every `n` in `range`, reusing cached entries.
pub fn for_each_phi(range: std::ops::Range<u64>, mut f: impl FnMut(u64, &ClopenX)) {
    for n in range {
        match cache().get(n as usize) {
            Some(slot) => f(n, slot.get_or_init(|| unrank_uncached(n))),
            None => f(n, &unrank_uncached(n)),
        }
    }
}

/// `φ_n` borrowed from the cache when `n` is small.
pub fn phi_ref(n: u64) -> Option<&'static ClopenX> {
    cache().get(n as usize).map(|slot| slot.get_or_init(|| unrank_uncached(n)))
}

/// `ψ_n(α, p)`: 1 if `α(n) = 1`, otherwise `φ_n(α, p)`.
pub fn psi_eval(n: u64, alpha: &PointB, p: u32) -> bool {
    alpha.bit(n) || phi_contains(n, alpha, p)
}

/// `φ_n(α, p)`
pub fn phi_contains(n: u64, alpha: &PointB, p: u32) -> bool {
    match phi_ref(n) {
        Some(phi) => phi.contains_point(alpha, p),
        None => unrank(n).contains_point(alpha, p),
    }
}

/// First `n` with `φ_n = [ε] × {0}`.
pub fn q_index() -> u64 {
    let target = ClopenX::full_level(0);
    (0..).find(|&n| unrank(n) == target).expect("every clopen is enumerated")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(cyls: &[(&str, u32)]) -> ClopenX {
        ClopenX::canonicalize(cyls.iter().map(|&(w, l)| Cylinder::new(w, l)))
    }

    #[test]
    fn first_entries() {
        assert!(unrank(0).is_empty());
        assert_eq!(unrank(1), ClopenX::full_level(0));
        assert_eq!(unrank(2), ClopenX::full_level(1));
        assert_eq!(q_index(), 1);
        assert_eq!(rank(&ClopenX::empty()).unwrap(), 0);
    }

    #[test]
    fn codes_of_small_sets() {
        assert_eq!(code_string(&x(&[("1", 0)])), "sef");
        assert_eq!(code_string(&x(&[("0", 0)])), "sfe");
        assert_eq!(code_string(&x(&[("", 2)])), "eef");
        assert_eq!(code_string(&x(&[("01", 1), ("", 0)])), "fssefe");
    }

    #[test]
    fn roundtrip_prefix() {
        for n in 0..5000 {
            assert_eq!(rank(&unrank(n)).unwrap(), n);
        }
    }

    #[test]
    fn overflow_is_reported() {
        let long = ClopenX::single(BitWord::zeros(300), 0);
        assert!(matches!(rank(&long), Err(Error::IndexOverflow(_))));
    }
}
