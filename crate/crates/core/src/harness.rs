//! Lemma registry: binds each construction to its probe family and budgets,
//! and runs the whole suite.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cantor::{BitWord, ClopenX, Cylinder, PointB, RepSet, SparseSeq};
use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Role, Scan};
use crate::config::Config;
use crate::constructions::{
    accumulation_check, closed_discrete_check, converging_sequence, d_membership, d_status, dense_witness_in_am, diagonal_avoid_selector,
    gamma_preimage, in_a_m, no_convergence_witness, xi_not_qplus, xinoss_certificate, y_not_qplus, yknoss_pipeline,
    Selector, TowerBounds,
};
use crate::enumeration::{q_index, unrank};
use crate::error::{Error, Result};
use crate::finite::check_all;
use crate::ideals::{Builtin, IdealHandle, TriState};
use crate::topology::{find_y_member, seeded_rng, symdiff_bound_check, BasicOpen, Bounds, ProbeFamily, Theta};

/// Registered lemma ids, in suite order.
pub const LEMMAS: &[&str] = &[
    "xnoq.blocks",
    "xnoq.density",
    "xnoq.diagonal",
    "eqclq",
    "DA.trichotomy",
    "xinoSS",
    "converseque",
    "crowded",
    "simetricdif",
    "Lemanodec.1",
    "gamma",
    "accumulation",
    "no-convergence",
    "xnoq2",
    "Yknoss",
    "finite.tau-alpha",
    "enumeration",
];

const ALIASES: &[(&str, &str)] = &[
    ("blocks", "xnoq.blocks"),
    ("am", "xnoq.blocks"),
    ("da", "DA.trichotomy"),
    ("d-set", "DA.trichotomy"),
    ("lemanodec", "Lemanodec.1"),
    ("closed-discrete", "Lemanodec.1"),
    ("converge", "converseque"),
    ("tau-alpha", "finite.tau-alpha"),
    ("y-not-q", "xnoq2"),
];

/// Canonical id for a name, case-insensitively, including aliases.
pub fn resolve_id(name: &str) -> Result<&'static str> {
    let lower = name.trim().to_lowercase();
    LEMMAS
        .iter()
        .find(|id| id.to_lowercase() == lower)
        .or_else(|| ALIASES.iter().find(|(a, _)| *a == lower).map(|(_, id)| id))
        .copied()
        .ok_or_else(|| Error::UnknownLemma(name.into()))
}

/// One executed lemma with the configuration that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaRun {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub certificate: Certificate,
}

impl LemmaRun {
    pub fn outcome(&self) -> Outcome {
        self.certificate.kind
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Runs the lemma again from the recorded configuration.
    pub fn rerun(&self) -> Result<LemmaRun> {
        let cfg = Config {
            ideal: self.ideal.clone().map(crate::config::IdealRef::Name),
            bounds: self.bounds.clone(),
            seed: self.seed,
            out: None,
        };
        run_lemma(&self.id, &cfg)
    }
}

struct Ctx {
    ideal: Option<IdealHandle>,
    seed: u64,
    bounds: Option<Bounds>,
}

impl Ctx {
    fn ideal_or(&self, name: &str) -> IdealHandle {
        self.ideal.clone().unwrap_or_else(|| IdealHandle::builtin(name).expect("built-in ideal"))
    }

    fn bounds_or(&self, b: Bounds) -> Bounds {
        self.bounds.clone().unwrap_or(b)
    }
}

/// `run_lemma`: executes the operations mapped to `id` and aggregates them
/// into one certificate whose provenance records the resolved config.
pub fn run_lemma(id: &str, config: &Config) -> Result<LemmaRun> {
    config.validate()?;
    let id = resolve_id(id)?;
    let ctx = Ctx { ideal: config.ideal_handle()?, seed: config.seed, bounds: config.bounds.clone() };
    let body = match id {
        "xnoq.blocks" => blocks(&ctx),
        "xnoq.density" => xnoq_density(&ctx),
        "xnoq.diagonal" => xnoq_diagonal(&ctx),
        "eqclq" => eqclq(&ctx),
        "DA.trichotomy" => da_trichotomy(&ctx),
        "xinoSS" => xinoss(&ctx),
        "converseque" => converseque(&ctx),
        "crowded" => crowded(&ctx),
        "simetricdif" => simetricdif(&ctx),
        "Lemanodec.1" => lemanodec(&ctx),
        "gamma" => gamma(&ctx),
        "accumulation" => accumulation(&ctx),
        "no-convergence" => no_convergence(&ctx),
        "xnoq2" => xnoq2(&ctx),
        "Yknoss" => yknoss(&ctx),
        "finite.tau-alpha" => tau_alpha(&ctx),
        "enumeration" => enumeration(&ctx),
        _ => unreachable!("registered id"),
    }?;
    let prov = Provenance::new(config.ideal.as_ref().map(|s| s.name()), Some(config.seed), config.bounds.as_ref())
        .param("lemma", id);
    let mut cert = Certificate::new(body.claim.clone(), prov);
    cert.sub(Role::Required, body);
    Ok(LemmaRun {
        id: id.into(),
        ideal: config.ideal.as_ref().map(|s| s.name().to_string()),
        seed: config.seed,
        bounds: config.bounds.clone(),
        certificate: cert,
    })
}

/// Lemmas whose bounded evidence cannot settle every stage at desk scale:
/// for these an exhausted outcome is the expected result of a clean run.
pub const BOUNDED_ONLY: &[&str] = &["Yknoss"];

/// Whether a run's outcome is the expected one: verified, or exhausted for
/// a bounded-only lemma.
pub fn accepted(run: &LemmaRun) -> bool {
    match run.outcome() {
        Outcome::Verified => true,
        Outcome::Exhausted => BOUNDED_ONLY.contains(&run.id.as_str()),
        Outcome::Refuted => false,
    }
}

/// Suite outcome: refuted if any run is, exhausted if some run is exhausted
/// beyond what its lemma allows, verified otherwise.
pub fn suite_outcome(runs: &[LemmaRun]) -> Outcome {
    runs.iter().fold(Outcome::Verified, |acc, r| {
        let k = if accepted(r) { Outcome::Verified } else { r.outcome() };
        acc.and(k)
    })
}

/// Every registered lemma, executed on a pool capped by
/// `CANTOR_FORGE_THREADS`, collated in registry order.
pub fn run_suite(config: &Config) -> Result<Vec<LemmaRun>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("CANTOR_FORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| LEMMAS.par_iter().map(|id| run_lemma(id, config)).collect())
}

fn verdict(cert: Certificate, ok: bool) -> Certificate {
    let kind = if ok { cert.kind } else { Outcome::Refuted };
    cert.with_kind(kind)
}

/// Every canonical clopen with words of length at most `depth` and levels
/// at most `max_level`.
pub fn clopen_universe(depth: usize, max_level: u32) -> Vec<ClopenX> {
    let words: Vec<BitWord> = (0..1u64 << depth)
        .map(|k| BitWord::from_bits((0..depth).rev().map(|i| (k >> i) & 1 == 1).collect()))
        .collect();
    let per_level = 1u64 << words.len();
    let levels = max_level as usize + 1;
    let total = per_level.pow(levels as u32);
    (0..total)
        .map(|mut code| {
            let mut cyls = Vec::new();
            for level in 0..levels {
                let mask = code % per_level;
                code /= per_level;
                for (i, w) in words.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        cyls.push(Cylinder { level: level as u32, word: w.clone() });
                    }
                }
            }
            ClopenX::canonicalize(cyls)
        })
        .collect()
}

fn blocks(_ctx: &Ctx) -> Result<Certificate> {
    let mut cert = Certificate::new(
        "A_m membership on clopens of depth ≤ 2 and levels ≤ 1, m ≤ 2; blocks are disjoint",
        Provenance::default(),
    );
    let mut ok = true;
    for phi in clopen_universe(2, 1) {
        let mut hits = 0;
        for m in 0..=2 {
            let expected = in_a_m(&phi, m);
            hits += expected as u32;
            cert.push(Evidence::InBlock { phi: phi.clone(), m, expected });
        }
        ok &= hits <= 1;
    }
    Ok(verdict(cert, ok))
}

fn xnoq_density(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("fin");
    let bounds = ctx.bounds_or(Bounds { probes: 200, depth: 8, ..Bounds::default() });
    let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
    let e = RepSet::evens();
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), Some(&bounds));
    let mut cert = Certificate::new("⋃_(k ∈ E) A_k meets every probe, E = evens", prov);
    let mut kind = Outcome::Verified;
    for (i, v) in fam.opens.iter().enumerate() {
        match dense_witness_in_am(v, &e, bounds.eq_budget) {
            Ok((l, phi)) => {
                let items = [
                    Evidence::BasicMember { theta: Theta::Clopen { phi: phi.clone() }, open: v.clone(), expected: true },
                    Evidence::InBlock { phi, m: l + 1, expected: true },
                    Evidence::SetMember { set: e.clone(), n: l + 1, expected: true },
                ];
                if !items.iter().all(Evidence::check) {
                    kind = Outcome::Refuted;
                }
                cert.evidence.extend(items);
            }
            Err(err) => {
                kind = kind.and(Outcome::Exhausted);
                cert.push(Evidence::Note { text: format!("probe {i}: {err}") });
            }
        }
    }
    Ok(cert.with_kind(kind))
}

/// A nonempty clopen outside the selector, drawn from the first indices.
fn unselected(s: &Selector, rng: &mut impl Rng) -> ClopenX {
    loop {
        let phi = unrank(rng.random_range(1..4_000));
        if !s.selects(&phi) {
            return phi;
        }
    }
}

fn xnoq_diagonal(ctx: &Ctx) -> Result<Certificate> {
    let depth = 300;
    let e = RepSet::all();
    let prov = Provenance::new(None, Some(ctx.seed), None).param("instances", 100).param("depth", depth);
    let mut cert = Certificate::new("the diagonal point separates φ from the selector", prov);
    let mut rng = seeded_rng(ctx.seed, "diagonal-instances");
    let mut ok = true;
    for i in 0..100u64 {
        let s = Selector::seeded(e.clone(), ctx.seed.wrapping_add(i));
        let phi = unselected(&s, &mut rng);
        let report = diagonal_avoid_selector(&e, &s, &phi, depth)?;
        ok &= report.clauses.all();
        cert.push(Evidence::Diagonal(report.evidence));
    }
    Ok(verdict(cert, ok))
}

/// An infinite member of the ideal: row 0 for `{∅} × Fin`, column 0 for
/// `Fin × {∅}`, the thinned naturals for tall ideals.
fn infinite_member(ideal: &IdealHandle) -> Option<RepSet> {
    match ideal {
        IdealHandle::Builtin(Builtin::Fin) => None,
        IdealHandle::Builtin(Builtin::EmptyXFin) => Some(RepSet::row(0)),
        IdealHandle::Builtin(Builtin::FinXEmpty) => Some(RepSet::column(0)),
        _ => ideal.thin_subset(&RepSet::all()).ok(),
    }
}

fn eqclq_for(ideal: &IdealHandle, seed: u64) -> Result<Certificate> {
    let prov = Provenance::new(Some(&ideal.name()), Some(seed), None);
    match infinite_member(ideal) {
        Some(e) => {
            let s = Selector::seeded(e.clone(), seed);
            let phi = unselected(&s, &mut seeded_rng(seed, "eqclq"));
            xi_not_qplus(ideal, &e, &phi, &s, 300)
        }
        None => {
            let mut cert = Certificate::new(format!("{} has no infinite member: the construction does not apply", ideal.name()), prov);
            let e = RepSet::evens();
            cert.push(Evidence::IdealMember { ideal: ideal.name(), set: e.clone(), expected: TriState::No });
            let s = Selector::zeros(e.clone());
            let rejected =
                matches!(xi_not_qplus(ideal, &e, &ClopenX::single("1", 0), &s, 10), Err(Error::Precondition(_)));
            cert.note(format!("precondition rejected: {rejected}"));
            Ok(verdict(cert, rejected && ideal.member(&e) == TriState::No))
        }
    }
}

fn eqclq(ctx: &Ctx) -> Result<Certificate> {
    if let Some(ideal) = &ctx.ideal {
        return eqclq_for(ideal, ctx.seed);
    }
    let mut cert = Certificate::new("𝕏(I) fails q⁺ for I ≠ Fin", Provenance::new(None, Some(ctx.seed), None));
    for name in ["empty-x-fin", "density-zero", "fin"] {
        cert.sub(Role::Required, eqclq_for(&IdealHandle::builtin(name)?, ctx.seed)?);
    }
    Ok(cert)
}

fn da_trichotomy(ctx: &Ctx) -> Result<Certificate> {
    let bounds = ctx.bounds_or(Bounds { probes: 40, index_bound: 5_000, ..Bounds::default() });
    let mut cert = Certificate::new("D(A) is dense or nowhere dense and closed", Provenance::new(None, Some(ctx.seed), Some(&bounds)));
    let cases: Vec<(IdealHandle, RepSet)> = match &ctx.ideal {
        Some(i) => vec![(i.clone(), RepSet::evens()), (i.clone(), RepSet::finite([0, 3]))],
        None => vec![
            (IdealHandle::builtin("fin")?, RepSet::evens()),
            (IdealHandle::builtin("empty-x-fin")?, RepSet::row(0)),
            (IdealHandle::builtin("fin")?, RepSet::finite([0, 3])),
        ],
    };
    for (ideal, a) in cases {
        let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
        cert.sub(Role::Required, d_status(&a, &ideal, &fam, 3, 50_000)?);
    }
    Ok(cert)
}

/// Least `m ≥ 1` below `search` with `φ_m ∈ D(A)`.
pub fn first_d_index(a: &RepSet, search: u64) -> Option<u64> {
    (1..search).find(|&m| d_membership(a, &unrank(m)))
}

fn xinoss(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("empty-x-fin");
    let witness = ideal.non_pplus_witness()?;
    let a: Vec<RepSet> = (0..3).map(witness).collect();
    let mut k = Vec::new();
    for an in &a {
        let m = first_d_index(an, 200_000).ok_or_else(|| Error::Precondition(format!("no φ in D({an}) found")))?;
        k.push(vec![m]);
    }
    xinoss_certificate(&ideal, &a, &k, 8)
}

fn converseque(ctx: &Ctx) -> Result<Certificate> {
    let mut rng = seeded_rng(ctx.seed, "converge");
    let prov = Provenance::new(Some("fin"), Some(ctx.seed), None).param("instances", 100);
    let mut cert = Certificate::new("x_n → ∅ inside negative neighbourhoods of ∅", prov);
    let mut ok = true;
    for _ in 0..100 {
        let count = rng.random_range(1..=4);
        let mut v = BasicOpen::full("fin");
        for _ in 0..count {
            let ones: Vec<u64> = (0..10).filter(|_| rng.random_bool(0.3)).collect();
            v = v.minus(PointB::from_ones(ones), rng.random_range(0..3));
        }
        let c = converging_sequence(&v, crate::cantor::EQ_BUDGET)?;
        ok &= c.n_star <= c.n && c.certificate.is_verified();
        cert.sub(Role::Required, c.certificate);
    }
    Ok(verdict(cert, ok))
}

fn crowded(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("density-zero");
    let bounds = ctx.bounds_or(Bounds { probes: 50, index_bound: 50_000, ..Bounds::default() });
    let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), Some(&bounds));
    let mut cert = Certificate::new("𝕐 meets every probe", prov);
    let mut kind = Outcome::Verified;
    for (i, v) in fam.opens.iter().enumerate() {
        match find_y_member(v, bounds.index_bound) {
            Some(n) => cert.push(Evidence::BasicMember { theta: Theta::psi(n), open: v.clone(), expected: true }),
            None => {
                kind = Outcome::Exhausted;
                cert.push(Evidence::Note { text: format!("probe {i}: no ψ_n found below the index bound") });
            }
        }
    }
    Ok(cert.with_kind(kind))
}

fn simetricdif(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("fin");
    let bounds = ctx.bounds_or(Bounds { probes: 50, index_bound: 2_000, ..Bounds::default() });
    let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), Some(&bounds));
    let mut cert = Certificate::new("φ_n and ψ_n differ on V only where a constraint point has a 1", prov.clone());
    let subs: Vec<Result<Certificate>> =
        fam.opens.par_iter().map(|v| symdiff_bound_check(v, bounds.index_bound, prov.clone())).collect();
    for s in subs {
        cert.sub(Role::Required, s?);
    }
    Ok(cert)
}

/// Seeded finite sets and sparse sets of density zero.
pub fn closed_discrete_family(seed: u64) -> Vec<RepSet> {
    let mut rng = seeded_rng(seed, "closed-discrete");
    let mut sets = vec![RepSet::empty(), RepSet::finite([1, 3])];
    while sets.len() < 20 {
        let size = rng.random_range(1..=8);
        sets.push(RepSet::finite((0..size).map(|_| rng.random_range(0..200u64))));
    }
    sets.extend([
        RepSet::thinned(RepSet::all(), SparseSeq::Squares),
        RepSet::thinned(RepSet::evens(), SparseSeq::Squares),
        RepSet::thinned(RepSet::odds(), SparseSeq::Cubes),
        RepSet::thinned(RepSet::all(), SparseSeq::Powers { base: 2 }),
        RepSet::thinned(RepSet::evens(), SparseSeq::Powers { base: 3 }),
    ]);
    sets
}

fn lemanodec(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("density-zero");
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), None).param("m_bound", 16).param("n_bound", 1000);
    let mut cert = Certificate::new("F̂ is closed discrete: F = ⋂_m {n : ψ_n ∈ (χ_F, m)⁺}", prov);
    let subs: Vec<Result<Certificate>> = closed_discrete_family(ctx.seed)
        .par_iter()
        .filter(|f| ideal.member(f) == TriState::Yes)
        .map(|f| closed_discrete_check(&ideal, f, 16, 1_000))
        .collect();
    for s in subs {
        cert.sub(Role::Required, s?);
    }
    Ok(cert)
}

fn gamma(ctx: &Ctx) -> Result<Certificate> {
    let mut rng = seeded_rng(ctx.seed, "gamma");
    let prov = Provenance::new(None, Some(ctx.seed), None).param("instances", 20).param("bound", 1000);
    let mut cert = Certificate::new("(α,p)⁺ ∩ 𝕐 minus finitely many ψ_n is the trace of (α,p)⁺ on 𝕏", prov);
    for _ in 0..20 {
        let ones: Vec<u64> = (0..16).filter(|_| rng.random_bool(0.25)).collect();
        let p = rng.random_range(0..3);
        let (_, sub) = gamma_preimage(&PointB::from_ones(ones), p, 1_000)?;
        cert.sub(Role::Required, sub);
    }
    Ok(cert)
}

fn accumulation(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("density-zero");
    let bounds = ctx.bounds_or(Bounds { probes: 10, ..Bounds::default() });
    let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), Some(&bounds));
    let mut cert = Certificate::new("accumulation of Â at points of 𝕐", prov);
    for a in [RepSet::all(), RepSet::evens()] {
        for v in &fam.opens {
            match find_y_member(v, bounds.index_bound) {
                Some(l) => cert.sub(Role::Required, accumulation_check(&ideal, &a, l, v, 2_000)?),
                None => cert.sub(Role::Required, Certificate::new(format!("no ψ_l in {v}"), Provenance::default()).with_kind(Outcome::Exhausted)),
            }
        }
    }
    Ok(cert)
}

fn no_convergence(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("density-zero");
    let prov = Provenance::new(Some(&ideal.name()), Some(ctx.seed), None);
    let mut cert = Certificate::new("Â does not converge for infinite A", prov);
    for a in [RepSet::all(), RepSet::evens()] {
        let (_, sub) = no_convergence_witness(&ideal, &a, 16, 1_000)?;
        cert.sub(Role::Required, sub);
    }
    Ok(cert)
}

fn xnoq2(ctx: &Ctx) -> Result<Certificate> {
    let ideal = ctx.ideal_or("density-zero");
    let bounds = ctx.bounds_or(Bounds { probes: 12, index_bound: 2_000, ..Bounds::default() });
    let fam = ProbeFamily::generate(&ideal, ctx.seed, &bounds);
    Ok(y_not_qplus(&ideal, 200, Some(&fam))?.certificate)
}

fn yknoss(ctx: &Ctx) -> Result<Certificate> {
    let mut tb = TowerBounds { seed: ctx.seed, ..TowerBounds::default() };
    if let Some(b) = &ctx.bounds {
        tb.probe = b.clone();
    }
    yknoss_pipeline(3, &tb, None)
}

fn tau_alpha(_ctx: &Ctx) -> Result<Certificate> {
    check_all(4)
}

fn enumeration(_ctx: &Ctx) -> Result<Certificate> {
    let mut cert = Certificate::new("the enumeration is a bijection with φ_0 = ∅", Provenance::default().param("bound", 100_000));
    let scan = Evidence::scan(Scan::Roundtrip { bound: 100_000 });
    let clean = matches!(&scan, Evidence::Scan { expected, .. } if expected.failures == 0);
    cert.push(scan);
    cert.push(Evidence::IndexOf { index: 0, phi: ClopenX::empty() });
    cert.push(Evidence::IndexOf { index: q_index(), phi: ClopenX::full_level(0) });
    Ok(verdict(cert, clean))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_resolve_case_insensitively() {
        assert_eq!(resolve_id("da.TRICHOTOMY").unwrap(), "DA.trichotomy");
        assert_eq!(resolve_id("tau-alpha").unwrap(), "finite.tau-alpha");
        assert!(matches!(resolve_id("nope"), Err(Error::UnknownLemma(_))));
    }

    #[test]
    fn universe_has_256_sets() {
        let u = clopen_universe(2, 1);
        assert_eq!(u.len(), 256);
        let distinct: std::collections::BTreeSet<String> = u.iter().map(|p| p.to_string()).collect();
        assert_eq!(distinct.len(), 256);
    }

    #[test]
    fn small_lemmas_verify_and_replay() {
        for id in ["xnoq.blocks", "enumeration", "finite.tau-alpha", "gamma"] {
            let run = run_lemma(id, &Config::default()).unwrap();
            assert!(run.certificate.is_verified(), "{id}");
            assert!(run.certificate.replay().unwrap(), "{id}");
        }
    }
}
