use crate::certificate::{Certificate, Evidence, Outcome, Provenance, Scan, ScanSummary};
use crate::error::{Error, Result};

use super::basic::BasicOpen;

/// For `n < bound`: `hits` counts the `n` where `φ_n ∈ V` and `ψ_n ∈ V`
/// disagree; `failures` counts disagreements not explained by a constraint
/// point with bit 1 at `n` (a negative one when `φ_n ∈ V`, a positive one
/// when `ψ_n ∈ V`). `detail` lists the first failing indices.
pub fn symdiff_scan(v: &BasicOpen, bound: u64) -> ScanSummary {
    let mut s = ScanSummary { checked: bound, ..ScanSummary::default() };
    for n in 0..bound {
        let phi_in = v.contains_phi(n);
        let psi_in = v.contains_psi(n);
        if phi_in == psi_in {
            continue;
        }
        s.hits += 1;
        let explained = if phi_in {
            v.negatives.iter().any(|a| a.point.bit(n))
        } else {
            v.positives.iter().any(|a| a.point.bit(n))
        };
        if !explained {
            s.failures += 1;
            if s.detail.len() < 16 {
                s.detail.push(n);
            }
        }
    }
    s
}

/// `symdiff_bound_check`: exhaustive over `n < bound`.
pub fn symdiff_bound_check(v: &BasicOpen, bound: u64, provenance: Provenance) -> Result<Certificate> {
    if let Some(c) = v.clash(crate::cantor::EQ_BUDGET)? {
        return Err(Error::EmptyOpen(format!("({}, {})", c.point, c.level)));
    }
    let mut cert = Certificate::new(
        format!("{{n : φ_n ∈ V}} △ {{n : ψ_n ∈ V}} ⊆ ⋃ constraint supports, n < {bound}"),
        provenance,
    );
    let ev = Evidence::scan(Scan::SymDiff { open: v.clone(), bound });
    let failed = matches!(&ev, Evidence::Scan { expected, .. } if expected.failures > 0);
    cert.push(ev);
    Ok(cert.with_kind(if failed { Outcome::Refuted } else { Outcome::Verified }))
}
