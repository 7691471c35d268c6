use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basic::{BasicOpen, Sign};
use crate::cantor::{pair, BitWord, PointB, RepSet, SparseSeq};
use crate::ideals::{Builtin, IdealHandle};

/// Search and probe budgets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    /// Support size of finite probe points and prefix length of periodic ones.
    pub depth: usize,
    /// Probe constraint levels are `< levels`.
    pub levels: u32,
    /// Maximum number of constraints per probe.
    pub constraints: usize,
    /// Index scans run over `n < index_bound`.
    pub index_bound: u64,
    /// Bits compared when point equality is not structural.
    pub eq_budget: usize,
    /// Number of probe basic opens.
    pub probes: usize,
    /// Refinements tried per probe.
    pub refinements: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            depth: 8,
            levels: 4,
            constraints: 4,
            index_bound: 50_000,
            eq_budget: crate::cantor::EQ_BUDGET,
            probes: 200,
            refinements: 6,
        }
    }
}

/// 64-bit FNV-1a, used to mix names into seeds reproducibly.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn seeded_rng(seed: u64, salt: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(salt.as_bytes()))
}

/// A reproducible family of basic open sets of `ρ_I`, with the point pool it
/// draws from.
#[derive(Clone, Debug)]
pub struct ProbeFamily {
    pub seed: u64,
    pub bounds: Bounds,
    pub ideal: String,
    pub pool: Vec<PointB>,
    pub opens: Vec<BasicOpen>,
}

fn finite_points(rng: &mut ChaCha8Rng, depth: usize, count: usize) -> Vec<RepSet> {
    let mut out = vec![RepSet::empty(), RepSet::finite([0]), RepSet::finite([1])];
    for _ in 0..count {
        let s: Vec<u64> = (0..depth as u64).filter(|_| rng.random_bool(0.4)).collect();
        out.push(RepSet::finite(s));
    }
    out
}

fn pool_sets(ideal: &IdealHandle, rng: &mut ChaCha8Rng, depth: usize) -> Vec<RepSet> {
    let mut sets = finite_points(rng, depth, 12);
    match ideal {
        IdealHandle::Builtin(Builtin::Fin) | IdealHandle::Star(_) => {}
        IdealHandle::Builtin(Builtin::EmptyXFin) => {
            for j in 0..3 {
                sets.push(RepSet::row(j));
            }
            for _ in 0..4 {
                let j = rng.random_range(0..4);
                let extra: Vec<u64> = (0..3).map(|_| pair(rng.random_range(0..4), rng.random_range(0..4))).collect();
                sets.push(RepSet::union(vec![RepSet::row(j), RepSet::finite(extra)]));
            }
        }
        IdealHandle::Builtin(Builtin::FinXEmpty) => {
            for i in 0..3 {
                sets.push(RepSet::column(i));
            }
            for _ in 0..4 {
                let i = rng.random_range(0..4);
                let extra: Vec<u64> = (0..3).map(|_| pair(rng.random_range(0..4), rng.random_range(0..4))).collect();
                sets.push(RepSet::union(vec![RepSet::column(i), RepSet::finite(extra)]));
            }
        }
        IdealHandle::Builtin(Builtin::DensityZero) => {
            for parent in [RepSet::all(), RepSet::evens(), RepSet::odds()] {
                for seq in [SparseSeq::Squares, SparseSeq::Powers { base: 2 }, SparseSeq::Cubes] {
                    sets.push(RepSet::thinned(parent.clone(), seq));
                }
            }
        }
        IdealHandle::Builtin(Builtin::PowerSet) => {
            for _ in 0..12 {
                let plen = rng.random_range(0..=depth);
                let per = rng.random_range(1..=4);
                let prefix: Vec<bool> = (0..plen).map(|_| rng.random_bool(0.5)).collect();
                let period: Vec<bool> = (0..per).map(|_| rng.random_bool(0.5)).collect();
                sets.push(RepSet::Periodic {
                    prefix: BitWord::from_bits(prefix),
                    period: BitWord::from_bits(period),
                });
            }
        }
    }
    // Distinct sets only, so that pool indices decide point equality.
    let mut out: Vec<RepSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|t| t.same_set(&s) == Some(true)) {
            out.push(s);
        }
    }
    out
}

impl ProbeFamily {
    pub fn generate(ideal: &IdealHandle, seed: u64, bounds: &Bounds) -> Self {
        let name = ideal.name();
        let salt = format!(
            "{name}|{}|{}|{}|{}|{}",
            bounds.depth, bounds.levels, bounds.constraints, bounds.probes, bounds.refinements
        );
        let mut rng = seeded_rng(seed, &salt);
        let sets = pool_sets(ideal, &mut rng, bounds.depth);
        let pool: Vec<PointB> = sets.into_iter().map(PointB::chi).collect();

        let mut keys: Vec<Vec<(Sign, usize, u32)>> = vec![Vec::new()];
        // Enumerated part: single constraints over the first pool points.
        'outer: for idx in 0..pool.len().min(4) {
            for level in 0..bounds.levels.min(2) {
                for sign in [Sign::Plus, Sign::Minus] {
                    if keys.len() >= bounds.probes {
                        break 'outer;
                    }
                    keys.push(vec![(sign, idx, level)]);
                }
            }
        }
        // Sampled part.
        let mut attempts = 0;
        while keys.len() < bounds.probes && attempts < bounds.probes * 50 {
            attempts += 1;
            let k = rng.random_range(1..=bounds.constraints.max(1));
            let mut key: Vec<(Sign, usize, u32)> = Vec::new();
            for _ in 0..k {
                let sign = if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
                let idx = rng.random_range(0..pool.len());
                let level = rng.random_range(0..bounds.levels.max(1));
                if key.iter().any(|&(_, i, l)| i == idx && l == level) {
                    continue;
                }
                key.push((sign, idx, level));
            }
            key.sort_by_key(|&(s, i, l)| (s == Sign::Minus, i, l));
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        let opens = keys
            .into_iter()
            .map(|key| {
                key.into_iter().fold(BasicOpen::full(name.clone()), |v, (sign, idx, level)| match sign {
                    Sign::Plus => v.plus(pool[idx].clone(), level),
                    Sign::Minus => v.minus(pool[idx].clone(), level),
                })
            })
            .collect();
        ProbeFamily { seed, bounds: bounds.clone(), ideal: name, pool, opens }
    }

    /// `V` itself followed by up to `count` one-constraint extensions of `V`
    /// by pool points, in a fixed order determined by the seed and `V`.
    pub fn refinements(&self, v: &BasicOpen, count: usize) -> Vec<BasicOpen> {
        let mut out = vec![v.clone()];
        let mut candidates: Vec<(Sign, usize, u32)> = Vec::new();
        for idx in 0..self.pool.len() {
            for level in 0..=self.bounds.levels {
                for sign in [Sign::Plus, Sign::Minus] {
                    candidates.push((sign, idx, level));
                }
            }
        }
        let mut rng = seeded_rng(self.seed, &format!("refine|{v}"));
        candidates.shuffle(&mut rng);
        for (sign, idx, level) in candidates {
            if out.len() > count {
                break;
            }
            let point = &self.pool[idx];
            let w = match sign {
                Sign::Plus => v.clone().plus(point.clone(), level),
                Sign::Minus => v.clone().minus(point.clone(), level),
            };
            if w.is_nonempty() {
                out.push(w);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let fin = IdealHandle::builtin("fin").unwrap();
        let b = Bounds::default();
        let a = ProbeFamily::generate(&fin, 42, &b);
        let c = ProbeFamily::generate(&fin, 42, &b);
        let ja = serde_json::to_string(&a.opens).unwrap();
        let jc = serde_json::to_string(&c.opens).unwrap();
        assert_eq!(ja, jc);
        assert_eq!(a.opens.len(), 200);
        let d = ProbeFamily::generate(&fin, 43, &b);
        assert_ne!(ja, serde_json::to_string(&d.opens).unwrap());
    }

    #[test]
    fn probes_are_nonempty_and_legal() {
        for name in ["fin", "empty-x-fin", "fin-x-empty", "density-zero", "power-set"] {
            let ideal = IdealHandle::builtin(name).unwrap();
            let fam = ProbeFamily::generate(&ideal, 7, &Bounds::default());
            for v in &fam.opens {
                assert!(v.is_nonempty(), "{name}: {v}");
                for p in v.points() {
                    assert_eq!(ideal.member(p.ones_view().unwrap()), crate::ideals::TriState::Yes, "{name}: {p}");
                }
            }
        }
    }
}
