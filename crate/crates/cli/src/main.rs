mod notation;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cantor_forge::cantor::PointB;
use cantor_forge::certificate::{Certificate, Evidence, Outcome, Provenance};
use cantor_forge::config::{Config, IdealRef};
use cantor_forge::constructions::{
    block_of, closed_discrete_check, converging_sequence, d_status, diagonal_avoid_selector, gamma_preimage,
    y_not_qplus, Selector,
};
use cantor_forge::enumeration::{for_each_phi, q_index};
use cantor_forge::finite::{check_tau_alpha_identities, enumerate_topologies};
use cantor_forge::harness::{accepted, run_lemma, run_suite, suite_outcome, LemmaRun, LEMMAS};
use cantor_forge::ideals::IdealHandle;
use cantor_forge::topology::{density_probe, nwd_probe, seeded_rng, BasicOpen, Bounds, ProbeFamily};

const ERROR_EXIT: u8 = 3;

#[derive(Parser)]
#[command(name = "cantor-forge", version, about = "Clopen algebra, ideal topologies and replayable certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print φ_n for n in a range, then the index q of [ε]×{0}.
    Enumerate {
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long, default_value_t = 9)]
        to: u64,
    },
    /// Bounded density or nowhere-density probe of a target set.
    Probe {
        mode: ProbeMode,
        #[arg(long, default_value = "all")]
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run one construction and emit its certificate.
    Construct {
        what: Construction,
        /// Set argument (A, F or the ones of α), e.g. `evens`, `finite:1,3`, `row:0`.
        #[arg(long)]
        set: Option<String>,
        /// Level p.
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-space oracle.
    Finite {
        #[command(subcommand)]
        cmd: FiniteCmd,
    },
    /// Run a registered lemma, or `all` of them.
    VerifyLemma {
        id: String,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory receiving one JSON file per lemma.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Replay every certificate in a directory and print a markdown table.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeMode {
    Density,
    Nwd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Am,
    DenseWitness,
    Diagonal,
    DSet,
    Converge,
    ClosedDiscrete,
    Gamma,
    YNotQ,
    Xinoss,
    Yknoss,
}

#[derive(Subcommand)]
enum FiniteCmd {
    /// Check the α-topology identities on every topology with `points` points.
    TauAlpha {
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// Stream one verdict per space.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long, default_value_t = cantor_forge::config::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn ideal(&self, default: &str) -> Result<IdealHandle> {
        Ok(IdealHandle::parse(self.ideal.as_deref().unwrap_or(default))?)
    }

    fn bounds(&self, base: Bounds) -> Bounds {
        Bounds {
            depth: self.depth.unwrap_or(base.depth),
            index_bound: self.bound.unwrap_or(base.index_bound),
            probes: self.probes.unwrap_or(base.probes),
            ..base
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ERROR_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Cmd::Enumerate { from, to } => {
            if from > to {
                bail!("--from must not exceed --to");
            }
            let mut out = String::new();
            for_each_phi(from..to + 1, |n, phi| out.push_str(&format!("{n}: {phi}\n")));
            out.push_str(&format!("q: {}\n", q_index()));
            print!("{out}");
            Ok(Outcome::Verified)
        }
        Cmd::Probe { mode, target, common } => {
            let ideal = common.ideal("fin")?;
            let bounds = common.bounds(Bounds { probes: 50, index_bound: 5_000, ..Bounds::default() });
            let fam = ProbeFamily::generate(&ideal, common.seed, &bounds);
            let target = notation::parse_target(&target)?;
            let cert = match mode {
                ProbeMode::Density => density_probe(&target, &ideal, &fam),
                ProbeMode::Nwd => nwd_probe(&target, &ideal, &fam),
            };
            emit(&cert, common.out.as_deref())
        }
        Cmd::Construct { what, set, level, common } => {
            let cert = construct(what, set.as_deref(), level, &common)?;
            emit(&cert, common.out.as_deref())
        }
        Cmd::Finite { cmd: FiniteCmd::TauAlpha { points, check } } => tau_alpha(points, check),
        Cmd::VerifyLemma { id, ideal, seed, out, config } => {
            let mut cfg = match &config {
                Some(path) => Config::load(path)?,
                None => Config::default(),
            };
            if let Some(i) = ideal {
                cfg.ideal = Some(IdealRef::Name(i));
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if out.is_some() {
                cfg.out = out;
            }
            cfg.validate()?;
            verify(&id, &cfg)
        }
        Cmd::Report { dir } => report(&dir),
    }
}

/// Prints the outcome, and writes the certificate when asked.
fn emit(cert: &Certificate, out: Option<&Path>) -> Result<Outcome> {
    if let Some(path) = out {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, cert.to_json()?).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{}: {}", outcome_name(cert.kind), cert.claim);
    Ok(cert.kind)
}

fn outcome_name(k: Outcome) -> &'static str {
    match k {
        Outcome::Verified => "verified",
        Outcome::Refuted => "refuted",
        Outcome::Exhausted => "exhausted",
    }
}

fn construct(what: Construction, set: Option<&str>, level: u32, common: &Common) -> Result<Certificate> {
    let set_or = |default: &str| notation::parse_set(set.unwrap_or(default));
    let lemma = |id: &str| -> Result<Certificate> {
        let cfg = Config {
            ideal: common.ideal.clone().map(IdealRef::Name),
            bounds: (common.depth.is_some() || common.bound.is_some() || common.probes.is_some())
                .then(|| common.bounds(Bounds::default())),
            seed: common.seed,
            out: None,
        };
        Ok(run_lemma(id, &cfg)?.certificate)
    };
    Ok(match what {
        Construction::Am => {
            let bound = common.bound.unwrap_or(1_000);
            let mut cert = Certificate::new(
                format!("block membership of φ_n for n < {bound}"),
                Provenance::default().param("bound", bound),
            );
            for_each_phi(0..bound, |_, phi| {
                if let Some(m) = block_of(phi) {
                    cert.push(Evidence::InBlock { phi: phi.clone(), m, expected: true });
                }
            });
            cert
        }
        Construction::DenseWitness => lemma("xnoq.density")?,
        Construction::Diagonal => {
            let e = set_or("all")?;
            let s = Selector::seeded(e.clone(), common.seed);
            let depth = common.depth.map_or(300, |d| d as u64);
            let mut rng = seeded_rng(common.seed, "construct-diagonal");
            let phi = loop {
                let phi = cantor_forge::enumeration::unrank(rand::Rng::random_range(&mut rng, 1..4_000));
                if !s.selects(&phi) {
                    break phi;
                }
            };
            let report = diagonal_avoid_selector(&e, &s, &phi, depth)?;
            let ok = report.clauses.all();
            let mut cert = Certificate::new(
                format!("(α, {}) separates {phi} from {}", report.p1, s.name),
                Provenance::new(None, Some(common.seed), None).param("depth", depth),
            );
            cert.push(Evidence::Diagonal(report.evidence));
            cert.with_kind(if ok { Outcome::Verified } else { Outcome::Refuted })
        }
        Construction::DSet => {
            let ideal = common.ideal("fin")?;
            let bounds = common.bounds(Bounds { probes: 40, index_bound: 5_000, ..Bounds::default() });
            let fam = ProbeFamily::generate(&ideal, common.seed, &bounds);
            d_status(&set_or("evens")?, &ideal, &fam, 3, 50_000)?
        }
        Construction::Converge => {
            let f = set_or("finite:0")?;
            let v = BasicOpen::full(common.ideal.clone().unwrap_or_else(|| "fin".into())).minus(PointB::chi(f), level);
            converging_sequence(&v, cantor_forge::cantor::EQ_BUDGET)?.certificate
        }
        Construction::ClosedDiscrete => {
            let ideal = common.ideal("density-zero")?;
            closed_discrete_check(&ideal, &set_or("finite:1,3")?, 16, common.bound.unwrap_or(1_000))?
        }
        Construction::Gamma => {
            let alpha = PointB::chi(set_or("finite:2")?);
            gamma_preimage(&alpha, level, common.bound.unwrap_or(1_000))?.1
        }
        Construction::YNotQ => {
            let ideal = common.ideal("density-zero")?;
            let bounds = common.bounds(Bounds { probes: 12, index_bound: 2_000, ..Bounds::default() });
            let fam = ProbeFamily::generate(&ideal, common.seed, &bounds);
            let k = common.depth.map_or(200, |d| d as u64);
            y_not_qplus(&ideal, k, Some(&fam))?.certificate
        }
        Construction::Xinoss => lemma("xinoSS")?,
        Construction::Yknoss => lemma("Yknoss")?,
    })
}

fn tau_alpha(points: usize, check: bool) -> Result<Outcome> {
    let spaces = enumerate_topologies(points)?;
    let mut kind = Outcome::Verified;
    let mut failed = 0usize;
    for x in &spaces {
        let cert = check_tau_alpha_identities(x);
        if check {
            println!("{x}: {}", outcome_name(cert.kind));
        }
        if cert.kind != Outcome::Verified {
            failed += 1;
        }
        kind = kind.and(cert.kind);
    }
    let summary = serde_json::json!({ "points": points, "spaces": spaces.len(), "failed": failed, "outcome": outcome_name(kind) });
    println!("{summary}");
    Ok(kind)
}

fn write_run(dir: &Path, run: &LemmaRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", run.id));
    fs::write(&path, run.to_json()?).with_context(|| format!("writing {}", path.display()))
}

fn verify(id: &str, cfg: &Config) -> Result<Outcome> {
    let runs = if id.eq_ignore_ascii_case("all") { run_suite(cfg)? } else { vec![run_lemma(id, cfg)?] };
    for run in &runs {
        if let Some(dir) = &cfg.out {
            write_run(dir, run)?;
        }
        let note = if run.outcome() != Outcome::Verified && accepted(run) { " (bounded)" } else { "" };
        println!("{}: {}{note}", run.id, outcome_name(run.outcome()));
    }
    Ok(if runs.len() == 1 && !id.eq_ignore_ascii_case("all") { runs[0].outcome() } else { suite_outcome(&runs) })
}

fn report(dir: &Path) -> Result<Outcome> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort_by_key(|p| {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        (LEMMAS.iter().position(|id| *id == stem).unwrap_or(usize::MAX), stem)
    });
    let mut md = String::from("| lemma | outcome | replay | evidence |\n|---|---|---|---|\n");
    let mut all_replay = true;
    let mut kind = Outcome::Verified;
    for path in &entries {
        let text = fs::read_to_string(path)?;
        let (name, cert) = match serde_json::from_str::<LemmaRun>(&text) {
            Ok(run) => {
                if !accepted(&run) {
                    kind = kind.and(run.outcome());
                }
                (run.id, run.certificate)
            }
            Err(_) => {
                let cert = Certificate::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
                kind = kind.and(cert.kind);
                (path.file_stem().unwrap_or_default().to_string_lossy().into_owned(), cert)
            }
        };
        let replay = cert.replay().unwrap_or(false);
        all_replay &= replay;
        md.push_str(&format!(
            "| {name} | {} | {} | {} |\n",
            outcome_name(cert.kind),
            if replay { "pass" } else { "fail" },
            count_evidence(&cert)
        ));
    }
    print!("{md}");
    fs::write(dir.join("report.md"), &md)?;
    Ok(if all_replay { kind } else { Outcome::Refuted })
}

fn count_evidence(cert: &Certificate) -> usize {
    cert.evidence
        .iter()
        .map(|e| match e {
            Evidence::Sub { cert, .. } => count_evidence(cert),
            _ => 1,
        })
        .sum()
}
