use serde::{Deserialize, Serialize};

use super::TriState;
use crate::cantor::RepSet;
use crate::error::{Error, Result};

/// Built-in ideals. Fubini ideals read `A ⊆ ℕ` through the pairing, with
/// column `i` of `A` being `{j : π(i, j) ∈ A}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Fin,
    /// Every column finite.
    EmptyXFin,
    /// Only finitely many non-empty columns.
    FinXEmpty,
    DensityZero,
    PowerSet,
}

impl Builtin {
    pub const ALL: [Builtin; 5] =
        [Builtin::Fin, Builtin::EmptyXFin, Builtin::FinXEmpty, Builtin::DensityZero, Builtin::PowerSet];

    pub fn from_name(name: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::UnknownIdeal(name.into()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Fin => "fin",
            Builtin::EmptyXFin => "empty-x-fin",
            Builtin::FinXEmpty => "fin-x-empty",
            Builtin::DensityZero => "density-zero",
            Builtin::PowerSet => "power-set",
        }
    }

    pub fn member(self, set: &RepSet) -> TriState {
        if self == Builtin::PowerSet || set.is_finite() == Some(true) {
            return TriState::Yes;
        }
        match set {
            // Infinite and eventually periodic: some residue class mod the
            // period is eventually contained in the set. Such a class meets
            // one column and one row of the pairing infinitely often and has
            // positive density, so it lies in none of the proper ideals here.
            RepSet::Cofinite { .. } | RepSet::Periodic { .. } => TriState::No,
            RepSet::Thinned { parent, .. } => match (self, self.member(parent)) {
                (_, TriState::Yes) => TriState::Yes,
                (Builtin::DensityZero, _) => TriState::Yes,
                (Builtin::Fin, _) => fin_by_size(set),
                _ => TriState::Unknown,
            },
            RepSet::Pairs { columns, rows } => {
                let all_finite = |m: &std::collections::BTreeMap<u64, RepSet>| {
                    let mut state = TriState::Yes;
                    for s in m.values() {
                        match s.is_finite() {
                            Some(true) => {}
                            Some(false) => return TriState::No,
                            None => state = TriState::Unknown,
                        }
                    }
                    state
                };
                match self {
                    Builtin::EmptyXFin => all_finite(columns),
                    Builtin::FinXEmpty => all_finite(rows),
                    Builtin::DensityZero => TriState::Yes,
                    _ => fin_by_size(set),
                }
            }
            RepSet::Union { parts } => {
                let mut state = TriState::Yes;
                for p in parts {
                    match self.member(p) {
                        TriState::Yes => {}
                        TriState::No => return TriState::No,
                        TriState::Unknown => state = TriState::Unknown,
                    }
                }
                state
            }
            RepSet::SubsetOf { parent, .. } => match self.member(parent) {
                TriState::Yes => TriState::Yes,
                _ => TriState::Unknown,
            },
            _ if self == Builtin::Fin => fin_by_size(set),
            _ => TriState::Unknown,
        }
    }
}

fn fin_by_size(set: &RepSet) -> TriState {
    match set.is_finite() {
        Some(b) => TriState::from_bool(b),
        None => TriState::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{pair, SparseSeq};
    use proptest::prelude::*;

    /// Density of an eventually periodic set as an exact rational.
    fn oracle_density(period: &str) -> (usize, usize) {
        (period.chars().filter(|&c| c == '1').count(), period.len())
    }

    #[test]
    fn density_zero_on_periodic_matches_period_average() {
        for period in ["0", "1", "10", "01", "001", "000", "0000001"] {
            for prefix in ["", "1", "0110"] {
                let s = RepSet::periodic(prefix, period);
                let (ones, _) = oracle_density(period);
                let expect = if ones == 0 { TriState::Yes } else { TriState::No };
                assert_eq!(Builtin::DensityZero.member(&s), expect, "{prefix}({period})");
            }
        }
    }

    #[test]
    fn fubini_columns_and_rows() {
        assert_eq!(Builtin::EmptyXFin.member(&RepSet::column(0)), TriState::No);
        assert_eq!(Builtin::EmptyXFin.member(&RepSet::row(0)), TriState::Yes);
        assert_eq!(Builtin::FinXEmpty.member(&RepSet::column(3)), TriState::Yes);
        assert_eq!(Builtin::FinXEmpty.member(&RepSet::row(3)), TriState::No);
        assert_eq!(Builtin::DensityZero.member(&RepSet::column(1)), TriState::Yes);
        assert_eq!(Builtin::Fin.member(&RepSet::row(0)), TriState::No);
    }

    #[test]
    fn periodic_sets_have_an_infinite_column() {
        // Oracle for the comment in `member`: for every residue r mod p there
        // is a column i whose elements hit r infinitely often.
        for p in 1..7u64 {
            for r in 0..p {
                let hit = (0..8u64).any(|i| (0..4 * p).filter(|&j| pair(i, j) % p == r).count() >= 2);
                assert!(hit, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn thinned_sets() {
        let t = RepSet::thinned(RepSet::all(), SparseSeq::Squares);
        assert_eq!(Builtin::DensityZero.member(&t), TriState::Yes);
        assert_eq!(Builtin::Fin.member(&t), TriState::No);
        let t = RepSet::thinned(RepSet::row(2), SparseSeq::Cubes);
        assert_eq!(Builtin::EmptyXFin.member(&t), TriState::Yes);
    }

    fn arb_set() -> impl Strategy<Value = RepSet> {
        prop_oneof![
            proptest::collection::btree_set(0u64..40, 0..6).prop_map(RepSet::finite),
            ("[01]{0,4}", "[01]{1,4}").prop_map(|(a, b)| RepSet::periodic(&a, &b)),
            (0u64..4).prop_map(RepSet::column),
            (0u64..4).prop_map(RepSet::row),
        ]
    }

    proptest! {
        #[test]
        fn finite_union_closure(a in arb_set(), b in arb_set()) {
            for ideal in Builtin::ALL {
                if ideal.member(&a) == TriState::Yes && ideal.member(&b) == TriState::Yes {
                    let u = RepSet::union(vec![a.clone(), b.clone()]);
                    prop_assert_eq!(ideal.member(&u), TriState::Yes);
                }
            }
        }

        #[test]
        fn downward_closure(a in arb_set(), cut in 0u64..5) {
            let sub = RepSet::subset_of(a.clone(), crate::cantor::NamedPredicate::new("mod", move |n| n % 5 == cut));
            for ideal in Builtin::ALL {
                if ideal.member(&a) == TriState::Yes {
                    prop_assert_eq!(ideal.member(&sub), TriState::Yes);
                }
            }
        }

        #[test]
        fn finite_sets_are_members(s in proptest::collection::btree_set(0u64..1000, 0..20)) {
            for ideal in Builtin::ALL {
                prop_assert_eq!(ideal.member(&RepSet::finite(s.clone())), TriState::Yes);
            }
        }
    }
}
