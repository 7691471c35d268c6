//! Ideals on ℕ with tri-state membership over representable sets.

mod builtin;
mod star;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cantor::{RepSet, SparseSeq};
use crate::error::{Error, Result};

pub use builtin::Builtin;
pub use star::{star_member, StarIdeal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        })
    }
}

/// A named ideal: a built-in one or the ⋆ of another.
#[derive(Clone, Debug)]
pub enum IdealHandle {
    Builtin(Builtin),
    Star(Arc<StarIdeal>),
}

impl IdealHandle {
    /// `builtin`: one of `fin`, `empty-x-fin`, `fin-x-empty`, `density-zero`,
    /// `power-set`.
    pub fn builtin(name: &str) -> Result<Self> {
        Builtin::from_name(name).map(IdealHandle::Builtin)
    }

    /// Built-in names plus `star(NAME)` and `tower(k)`, the `k`-th ⋆ of the
    /// power set (`nd` is `tower(1)`). Star ideals use default budgets.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix("star(").and_then(|s| s.strip_suffix(')')) {
            return Ok(IdealHandle::star(IdealHandle::parse(inner)?));
        }
        if let Some(k) = name.strip_prefix("tower(").and_then(|s| s.strip_suffix(')')) {
            let k: usize = k.parse().map_err(|_| Error::UnknownIdeal(name.into()))?;
            return Ok(IdealTower::new(k).top());
        }
        if name == "nd" {
            return Ok(IdealTower::new(1).top());
        }
        Self::builtin(name)
    }

    pub fn star(base: IdealHandle) -> Self {
        IdealHandle::Star(Arc::new(StarIdeal::new(base)))
    }

    pub fn name(&self) -> String {
        match self {
            IdealHandle::Builtin(b) => b.name().into(),
            IdealHandle::Star(s) => format!("star({})", s.base.name()),
        }
    }

    pub fn member(&self, set: &RepSet) -> TriState {
        match self {
            IdealHandle::Builtin(b) => b.member(set),
            IdealHandle::Star(s) => s.member(set),
        }
    }

    pub fn is_tall(&self) -> bool {
        matches!(self, IdealHandle::Builtin(Builtin::DensityZero | Builtin::PowerSet))
    }

    /// `thin_subset`: an infinite `B ⊆ E` in the ideal. For density zero the
    /// elements of `E` at square positions; for the power set `E` itself.
    pub fn thin_subset(&self, e: &RepSet) -> Result<RepSet> {
        if !self.is_tall() {
            return Err(Error::NotTall(self.name()));
        }
        match e.is_finite() {
            Some(false) => {}
            Some(true) => return Err(Error::Precondition(format!("{e} is finite"))),
            None => return Err(Error::Undecided(format!("whether {e} is infinite"))),
        }
        let b = match self {
            IdealHandle::Builtin(Builtin::PowerSet) => e.clone(),
            _ => RepSet::thinned(e.clone(), SparseSeq::Squares),
        };
        debug_assert_eq!(self.member(&b), TriState::Yes);
        Ok(b)
    }

    /// `non_pplus_witness`: `n ↦ A_n` with every `A_n` outside the ideal and
    /// every union of finite `F_n ⊆ A_n` inside it.
    pub fn non_pplus_witness(&self) -> Result<fn(u64) -> RepSet> {
        match self {
            IdealHandle::Builtin(Builtin::EmptyXFin) => Ok(RepSet::column),
            _ => Err(Error::Precondition(format!("no non-p+ witness is available for {}", self.name()))),
        }
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `I⁰ = P(ℕ)`, `I^k = (I^{k-1})⋆`.
#[derive(Clone, Debug)]
pub struct IdealTower {
    pub levels: Vec<IdealHandle>,
}

impl IdealTower {
    pub fn new(k: usize) -> Self {
        let mut levels = vec![IdealHandle::Builtin(Builtin::PowerSet)];
        for _ in 0..k {
            let prev = levels.last().expect("non-empty").clone();
            levels.push(IdealHandle::star(prev));
        }
        IdealTower { levels }
    }

    pub fn level(&self, k: usize) -> Option<&IdealHandle> {
        self.levels.get(k)
    }

    pub fn top(&self) -> IdealHandle {
        self.levels.last().expect("non-empty").clone()
    }
}
