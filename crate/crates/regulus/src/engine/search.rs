//! Prime sweep driving vanishing checks of F | T(l) over a range of l.
//!
//! The expensive inputs are shared: one partition series and one form F,
//! sized for the largest prime in the range, back every check; the per-l
//! work (the T(l) image and its prefix scan) is embarrassingly parallel
//! and runs on the rayon pool.

use super::{EngineError, FamilyConstruction};
use crate::arith::primes_in_range;
use crate::hecke::{verify_vanishing, CertStatus, HeckeCertificate};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SkippedPrime {
    pub l: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub reg_k: u64,
    pub m: u64,
    pub l_min: u64,
    pub l_max: u64,
    pub bound: u64,
    pub verified: Vec<u64>,
    pub refuted: Vec<u64>,
    pub partial: Vec<u64>,
    pub skipped: Vec<SkippedPrime>,
    pub certificates: Vec<HeckeCertificate>,
}

/// Check every prime l in [l_min, l_max) against the family construction,
/// certifying T(l)-vanishing through `bound`. Primes dividing the level or
/// equal to the congruence modulus are recorded as skipped, not checked.
pub fn search_hecke_primes(
    fc: &FamilyConstruction,
    l_min: u64,
    l_max: u64,
    bound: u64,
) -> Result<SearchReport, EngineError> {
    let mut skipped = Vec::new();
    let mut usable = Vec::new();
    for l in primes_in_range(l_min, l_max) {
        if fc.space.level % l == 0 {
            skipped.push(SkippedPrime {
                l,
                reason: format!("divides the level {}", fc.space.level),
            });
        } else if l == fc.m {
            skipped.push(SkippedPrime {
                l,
                reason: "equals the congruence modulus".to_string(),
            });
        } else {
            usable.push(l);
        }
    }
    let mut report = SearchReport {
        reg_k: fc.reg_k,
        m: fc.m,
        l_min,
        l_max,
        bound,
        verified: Vec::new(),
        refuted: Vec::new(),
        partial: Vec::new(),
        skipped,
        certificates: Vec::new(),
    };
    let Some(&l_top) = usable.last() else {
        return Ok(report);
    };
    let form_len = (l_top as u128 * bound as u128 + 1)
        .try_into()
        .map_err(|_| EngineError::Overflow("sizing the search form"))?;
    let form = fc.build_form(form_len)?;
    let mut certificates = usable
        .par_iter()
        .map(|&l| verify_vanishing(&form, l, bound))
        .collect::<Result<Vec<_>, _>>()?;
    certificates.sort_by_key(|c| c.family.l);
    for cert in &certificates {
        match cert.status {
            CertStatus::Verified => report.verified.push(cert.family.l),
            CertStatus::Refuted => report.refuted.push(cert.family.l),
            CertStatus::Partial => report.partial.push(cert.family.l),
        }
    }
    report.certificates = certificates;
    Ok(report)
}
