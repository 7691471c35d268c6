//! Command-line notation for sets and targets.

use anyhow::{anyhow, bail, Context, Result};
use cantor_forge::cantor::{RepSet, SparseSeq};
use cantor_forge::topology::Target;

/// `all`, `empty`, `evens`, `odds`, `finite:1,2,3`, `cofinite:0,4`,
/// `row:J`, `column:I`, `squares`, `periodic:PREFIX/PERIOD`, or a JSON set.
pub fn parse_set(s: &str) -> Result<RepSet> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).context("set JSON");
    }
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let nums = |a: &str| -> Result<Vec<u64>> {
        a.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().context("index list")).collect()
    };
    let one = |a: &str| -> Result<u64> { a.trim().parse().with_context(|| format!("index in `{s}`")) };
    Ok(match head {
        "all" => RepSet::all(),
        "empty" => RepSet::empty(),
        "evens" => RepSet::evens(),
        "odds" => RepSet::odds(),
        "squares" => RepSet::thinned(RepSet::all(), SparseSeq::Squares),
        "finite" => RepSet::finite(nums(arg)?),
        "cofinite" => RepSet::cofinite(nums(arg)?),
        "row" => RepSet::row(one(arg)?),
        "column" => RepSet::column(one(arg)?),
        "periodic" => {
            let (prefix, period) = arg.split_once('/').ok_or_else(|| anyhow!("periodic:PREFIX/PERIOD"))?;
            if period.is_empty() || !(prefix.chars().chain(period.chars())).all(|c| c == '0' || c == '1') {
                bail!("periodic sets need a binary prefix and a nonempty binary period");
            }
            RepSet::periodic(prefix, period)
        }
        _ => bail!("unknown set `{s}`"),
    })
}

/// `all`, `empty`, `d:SET`, `indices:SET`, `hat:SET`.
pub fn parse_target(s: &str) -> Result<Target> {
    let s = s.trim();
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match head {
        "all" => Target::AllX,
        "empty" => Target::Empty,
        "d" => Target::DSet { a: parse_set(arg)? },
        "indices" => Target::Indices { set: parse_set(arg)? },
        "hat" => Target::Hat { set: parse_set(arg)? },
        _ => bail!("unknown target `{s}`"),
    })
}
