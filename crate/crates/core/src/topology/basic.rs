use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cantor::{ClopenX, Cylinder, PointB, PointEq, EQ_BUDGET};
use crate::enumeration::{phi_ref, unrank};
use crate::error::{Error, Result};
use crate::ideals::{IdealHandle, TriState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// `(α, p)`, a point of `2^ℕ × ℕ` used as a subbasic constraint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Atom {
    pub point: PointB,
    pub level: u32,
}

impl Atom {
    pub fn new(point: PointB, level: u32) -> Self {
        Atom { point, level }
    }
}

/// `(α, p)^+` or `(α, p)^-`.
#[derive(Clone, Debug)]
pub struct SubbasicConstraint {
    pub sign: Sign,
    pub atom: Atom,
}

/// A basic open set `⋂ (αᵢ, pᵢ)^+ ∩ ⋂ (βⱼ, qⱼ)^-` of the topology generated
/// by points of the tagged ideal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasicOpen {
    pub ideal: String,
    #[serde(default)]
    pub positives: Vec<Atom>,
    #[serde(default)]
    pub negatives: Vec<Atom>,
}

/// Something that can be tested against a basic open set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Theta {
    Clopen { phi: ClopenX },
    /// `φ_index`, carried explicitly.
    Phi { index: u64, phi: ClopenX },
    /// `ψ_index`, with `φ_index` carried explicitly.
    Psi { index: u64, phi: ClopenX },
}

impl Theta {
    pub fn phi(index: u64) -> Self {
        Theta::Phi { index, phi: unrank(index) }
    }

    pub fn psi(index: u64) -> Self {
        Theta::Psi { index, phi: unrank(index) }
    }

    /// `θ(α, p)`
    pub fn eval(&self, alpha: &PointB, p: u32) -> bool {
        match self {
            Theta::Clopen { phi } | Theta::Phi { phi, .. } => phi.contains_point(alpha, p),
            Theta::Psi { index, phi } => alpha.bit(*index) || phi.contains_point(alpha, p),
        }
    }
}

impl BasicOpen {
    /// The whole space (empty conjunction).
    pub fn full(ideal: impl Into<String>) -> Self {
        BasicOpen { ideal: ideal.into(), positives: Vec::new(), negatives: Vec::new() }
    }

    pub fn plus(mut self, point: PointB, level: u32) -> Self {
        self.positives.push(Atom::new(point, level));
        self
    }

    pub fn minus(mut self, point: PointB, level: u32) -> Self {
        self.negatives.push(Atom::new(point, level));
        self
    }

    pub fn with(self, c: SubbasicConstraint) -> Self {
        match c.sign {
            Sign::Plus => self.plus(c.atom.point, c.atom.level),
            Sign::Minus => self.minus(c.atom.point, c.atom.level),
        }
    }

    pub fn constraints(&self) -> impl Iterator<Item = (Sign, &Atom)> {
        self.positives
            .iter()
            .map(|a| (Sign::Plus, a))
            .chain(self.negatives.iter().map(|a| (Sign::Minus, a)))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty_conjunction(&self) -> bool {
        self.len() == 0
    }

    pub fn max_level(&self) -> Option<u32> {
        self.constraints().map(|(_, a)| a.level).max()
    }

    pub fn points(&self) -> impl Iterator<Item = &PointB> {
        self.constraints().map(|(_, a)| &a.point)
    }

    pub fn is_serializable(&self) -> bool {
        self.points().all(|p| !p.is_lazy() && p.ones_view().is_some_and(|s| s.is_serializable()))
    }

    /// Nonemptiness: `Ok(None)` when no positive pair equals a negative pair,
    /// `Ok(Some(atom))` with the clash otherwise.
    pub fn clash(&self, budget: usize) -> Result<Option<Atom>> {
        for a in &self.positives {
            for b in &self.negatives {
                if a.level != b.level {
                    continue;
                }
                match a.point.compare(&b.point, budget) {
                    PointEq::Equal => return Ok(Some(a.clone())),
                    PointEq::Differ(_) => {}
                    PointEq::Undecided => {
                        return Err(Error::Undecided(format!(
                            "equality of {} and {}",
                            a.point, b.point
                        )))
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_nonempty(&self) -> bool {
        matches!(self.clash(EQ_BUDGET), Ok(None))
    }

    pub fn contains(&self, theta: &Theta) -> bool {
        self.positives.iter().all(|a| theta.eval(&a.point, a.level))
            && self.negatives.iter().all(|a| !theta.eval(&a.point, a.level))
    }

    pub fn contains_clopen(&self, phi: &ClopenX) -> bool {
        self.positives.iter().all(|a| phi.contains_point(&a.point, a.level))
            && self.negatives.iter().all(|a| !phi.contains_point(&a.point, a.level))
    }

    /// `φ_n ∈ V`
    pub fn contains_phi(&self, n: u64) -> bool {
        match phi_ref(n) {
            Some(phi) => self.contains_clopen(phi),
            None => self.contains_clopen(&unrank(n)),
        }
    }

    /// `ψ_n ∈ V`
    pub fn contains_psi(&self, n: u64) -> bool {
        let eval = |a: &Atom| {
            a.point.bit(n)
                || match phi_ref(n) {
                    Some(phi) => phi.contains_point(&a.point, a.level),
                    None => unrank(n).contains_point(&a.point, a.level),
                }
        };
        self.positives.iter().all(eval) && self.negatives.iter().all(|a| !eval(a))
    }

    /// Least `l` such that any two distinct constraint points at the same
    /// level already differ below position `l`. Levels are independent, so
    /// points at different levels are never compared.
    pub fn separation_depth(&self, budget: usize) -> Result<usize> {
        let atoms: Vec<&Atom> = self.positives.iter().chain(&self.negatives).collect();
        let mut l = 0usize;
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i].level != atoms[j].level {
                    continue;
                }
                let (a, b) = (&atoms[i].point, &atoms[j].point);
                match a.compare(b, budget) {
                    PointEq::Equal => {}
                    PointEq::Differ(d) => l = l.max(d as usize + 1),
                    PointEq::Undecided => {
                        return Err(Error::Inseparable(format!("{a} and {b}")))
                    }
                }
            }
        }
        Ok(l)
    }

    /// `W ∩ U` as a constraint list.
    pub fn conjoin(&self, other: &BasicOpen) -> BasicOpen {
        BasicOpen {
            ideal: self.ideal.clone(),
            positives: self.positives.iter().chain(&other.positives).cloned().collect(),
            negatives: self.negatives.iter().chain(&other.negatives).cloned().collect(),
        }
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty_conjunction() {
            return f.write_str("full space");
        }
        let parts: Vec<String> = self
            .constraints()
            .map(|(s, a)| {
                let sign = if s == Sign::Plus { "+" } else { "-" };
                format!("({},{}){}", a.point, a.level, sign)
            })
            .collect();
        f.write_str(&parts.join(" ∩ "))
    }
}

/// `member_basic`: `θ ∈ V`.
pub fn member_basic(theta: &Theta, v: &BasicOpen) -> bool {
    v.contains(theta)
}

/// `basic_nonempty`: `Ok(None)` when `V ≠ ∅`, or the clashing pair.
pub fn basic_nonempty(v: &BasicOpen, budget: usize) -> Result<Option<Atom>> {
    v.clash(budget)
}

/// `φ = ⋃ᵢ [αᵢ↾(l+2)] × {pᵢ} ∈ V` for the least `l` with `l + 1 ∈ E`,
/// `l + 1` above every level of `V` and all distinct points separated below
/// `l`. Without positive constraints a single fresh cylinder at level 0 is
/// used. Both `φ ∈ V` and `φ ∈ A_{l+1}` are re-checked.
pub fn block_witness(
    v: &BasicOpen,
    admissible: impl Fn(u64) -> bool,
    budget: usize,
) -> Result<(u64, ClopenX)> {
    if let Some(c) = v.clash(budget)? {
        return Err(Error::EmptyOpen(format!("({}, {}) is both required and excluded", c.point, c.level)));
    }
    let sep = v.separation_depth(budget)?;
    let floor = v.max_level().map_or(0, |m| m as u64);
    let mut l = sep as u64;
    loop {
        if admissible(l + 1) && l + 1 > floor {
            if let Some(phi) = block_candidate(v, l) {
                debug_assert!(v.contains_clopen(&phi));
                if v.contains_clopen(&phi) && crate::constructions::blocks::in_a_m(&phi, l + 1) {
                    return Ok((l, phi));
                }
            }
        }
        l += 1;
        if l > sep as u64 + floor + 4096 {
            return Err(Error::Precondition("no admissible block index found".into()));
        }
    }
}

fn block_candidate(v: &BasicOpen, l: u64) -> Option<ClopenX> {
    let len = l as usize + 2;
    if !v.positives.is_empty() {
        return Some(ClopenX::canonicalize(
            v.positives.iter().map(|a| Cylinder { level: a.level, word: a.point.prefix(len) }),
        ));
    }
    // A word of length l+2 at level 0 that no negative level-0 point extends.
    let blocked: Vec<_> = v.negatives.iter().filter(|a| a.level == 0).map(|a| a.point.prefix(len)).collect();
    let word_k = |k: u64| {
        crate::cantor::BitWord::from_bits(
            (0..len).map(|i| len - 1 - i < 64 && (k >> (len - 1 - i)) & 1 == 1).collect(),
        )
    };
    let words = if len < 64 { 1u64 << len } else { u64::MAX };
    (0..=blocked.len() as u64)
        .take_while(|&k| k < words)
        .map(word_k)
        .find(|w| !blocked.contains(w))
        .map(|w| ClopenX::single(w, 0))
}

/// `find_X_member`: a clopen in `V` built from the separation depth.
pub fn find_x_member(v: &BasicOpen, budget: usize) -> Result<ClopenX> {
    if v.positives.is_empty() {
        if let Some(c) = v.clash(budget)? {
            return Err(Error::EmptyOpen(format!("({}, {})", c.point, c.level)));
        }
        return Ok(ClopenX::empty());
    }
    let (_, phi) = block_witness(v, |_| true, budget)?;
    Ok(phi)
}

/// `find_Y_member`: least `n < bound` with `ψ_n ∈ V`.
pub fn find_y_member(v: &BasicOpen, bound: u64) -> Option<u64> {
    (0..bound).find(|&n| v.contains_psi(n))
}

/// `split_basic`: constraints whose points lie in `j` go to `W`, the rest
/// to `U`. Fails when membership of some point in `j` is undecided.
pub fn split_basic(v: &BasicOpen, j: &IdealHandle) -> Result<(BasicOpen, BasicOpen)> {
    let mut w = BasicOpen::full(j.name());
    let mut u = BasicOpen::full(v.ideal.clone());
    for (sign, atom) in v.constraints() {
        let set = atom
            .point
            .ones_view()
            .ok_or_else(|| Error::Undecided(format!("{} has no set view", atom.point)))?;
        let c = SubbasicConstraint { sign, atom: atom.clone() };
        match j.member(set) {
            TriState::Yes => w = w.with(c),
            TriState::No => u = u.with(c),
            TriState::Unknown => return Err(Error::Undecided(format!("{} in {}", set, j.name()))),
        }
    }
    Ok((w, u))
}
