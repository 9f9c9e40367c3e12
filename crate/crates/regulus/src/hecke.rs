//! Hecke operators T(l) on q-expansions and vanishing certificates.
//!
//! A form is carried as its coefficient series mod m together with the
//! ambient space data (weight k, level N, character discriminant D). On
//! such a form the Hecke operator acts by
//!
//! ```text
//!   (f | T(l))(n) = a(ln) + chi(l) l^{k-1} a(n/l),   a(n/l) := 0 when l niet| n,
//! ```
//!
//! with chi(l) = kronecker(D, l). Everything here happens mod m, which is
//! exactly the setting of the congruence arguments: if f is congruent mod m
//! to a genuine form of the given space, then T(l) of the series is
//! congruent to the genuine Hecke image.
//!
//! The point of the module is the Sturm certificate: a weight-k form on
//! Gamma_0(N) whose first sturm_bound(k, N) coefficients vanish mod m
//! vanishes identically mod m. [`verify_vanishing`] checks that prefix of
//! f | T(l) and issues a machine-checkable record of what was checked,
//! refusing to claim "verified" for anything short of the bound.

use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::etaq::{kronecker, sturm_bound, FormSpace};
use crate::fpseries::{FpSeries, SeriesError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("Hecke index {0} must be prime")]
    NotPrime(u64),
    #[error("T({l}) is rejected because {l} divides the level {level}")]
    DividesLevel { l: u64, level: u64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Identifies which congruence family a form encodes, for certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyId {
    pub reg_k: u64,
    pub m: u64,
}

/// A q-expansion mod m with its ambient space and provenance.
#[derive(Debug, Clone)]
pub struct HeckeForm {
    pub expansion: FpSeries,
    pub space: FormSpace,
    pub family: FamilyId,
    /// Free-form provenance note, e.g. which construction produced this.
    pub family_tag: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    /// Vanishing checked through at least the Sturm bound.
    Verified,
    /// A nonzero coefficient was found; see `first_nonzero`.
    Refuted,
    /// Clean prefix, but short of the requested bound or the Sturm bound.
    Partial,
}

/// Machine-checkable record of one vanishing check of f | T(l) mod m.
#[derive(Debug, Clone, Serialize)]
pub struct HeckeCertificate {
    pub kind: &'static str,
    pub family: CertFamily,
    pub space: FormSpace,
    pub sturm_bound: u64,
    pub checked_to: u64,
    pub status: CertStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<u64>,
    pub base_series_hash: String,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertFamily {
    pub reg_k: u64,
    pub m: u64,
    pub l: u64,
}

impl HeckeCertificate {
    pub fn is_verified(&self) -> bool {
        self.status == CertStatus::Verified
    }
}

/// Apply T(l) to the form's coefficient series. The output keeps every
/// coefficient the input truncation fully determines: length
/// floor((len-1)/l) + 1.
pub fn t_operator(f: &HeckeForm, l: u64) -> Result<FpSeries, HeckeError> {
    if !is_prime(l) {
        return Err(HeckeError::NotPrime(l));
    }
    if f.space.level % l == 0 {
        return Err(HeckeError::DividesLevel {
            l,
            level: f.space.level,
        });
    }
    let m = f.expansion.modulus();
    let chi = kronecker(f.space.character_disc, l as i64).rem_euclid(m as i64) as u64;
    debug_assert!(f.space.weight >= 1);
    let scale = mul_mod(chi, pow_mod(l % m, f.space.weight - 1, m), m);
    let l = l as usize;
    let out_len = (f.expansion.len() - 1) / l + 1;
    let series = &f.expansion;
    FpSeries::from_fn(m, out_len, |n| {
        let mut c = series.coeff(n * l);
        if n % l == 0 {
            c = (c + mul_mod(scale, series.coeff(n / l), m)) % m;
        }
        c
    })
    .map_err(HeckeError::from)
}

/// Check that (f | T(l))(n) == 0 mod m for 0 <= n <= bound and certify the
/// outcome. The verdict is conservative on two axes: a clean prefix shorter
/// than the requested bound (insufficient truncation upstream) and a
/// requested bound below the Sturm bound both yield `Partial`, never
/// `Verified`.
pub fn verify_vanishing(f: &HeckeForm, l: u64, bound: u64) -> Result<HeckeCertificate, HeckeError> {
    let image = t_operator(f, l)?;
    let sturm = sturm_bound(f.space.weight, f.space.level);
    let available = (image.len() - 1) as u64;
    let checked_to = bound.min(available);
    let first_nonzero = (0..=checked_to as usize).find(|&n| image.coeff(n) != 0);
    let status = match first_nonzero {
        Some(_) => CertStatus::Refuted,
        None if checked_to == bound && bound >= sturm => CertStatus::Verified,
        None => CertStatus::Partial,
    };
    Ok(HeckeCertificate {
        kind: "hecke_vanishing",
        family: CertFamily {
            reg_k: f.family.reg_k,
            m: f.family.m,
            l,
        },
        space: f.space,
        sturm_bound: sturm,
        checked_to,
        status,
        first_nonzero: first_nonzero.map(|n| n as u64),
        base_series_hash: f.expansion.digest_hex(),
        tool_version: env!("CARGO_PKG_VERSION"),
    })
}

/// Partition-series truncation needed to drive a vanishing check: the form
/// coefficient at index l*bound reads the partition value at
/// (multiplier*l*bound - c)/d rounded down, so that many terms plus one.
/// `multiplier`, `c`, `d` describe the argument map n -> (multiplier*n - c)/d
/// of the form being checked.
pub fn required_truncation(multiplier: u64, c: u64, d: u64, l: u64, bound: u64) -> u64 {
    let top = multiplier as i128 * l as i128 * bound as i128 - c as i128;
    let len = top.div_euclid(d as i128) + 1;
    len.max(1) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpseries::eta_power_series;

    fn space(weight: u64, level: u64, character_disc: i64) -> FormSpace {
        FormSpace {
            weight,
            level,
            character_disc,
        }
    }

    fn form(series: FpSeries, sp: FormSpace) -> HeckeForm {
        HeckeForm {
            expansion: series,
            space: sp,
            family: FamilyId { reg_k: 0, m: 0 },
            family_tag: "test".into(),
        }
    }

    /// The discriminant cusp form is a T(2)-eigenform with eigenvalue
    /// tau(2) = -24; its series mod 691 is a nontrivial fixture because the
    /// eigenvalue survives reduction.
    #[test]
    fn delta_is_a_t2_eigenform_mod_691() {
        let tau_shifted = eta_power_series(1, 24, 691, 128).unwrap();
        // Reindex so that coefficient n is tau(n) (tau(0) = 0).
        let delta = FpSeries::from_fn(
            691,
            128,
            |n| {
                if n == 0 {
                    0
                } else {
                    tau_shifted.coeff(n - 1)
                }
            },
        )
        .unwrap();
        let f = form(delta.clone(), space(12, 1, 1));
        let image = t_operator(&f, 2).unwrap();
        let eigen = delta.scale(691 - 24);
        for n in 0..image.len() {
            assert_eq!(image.coeff(n), eigen.coeff(n), "n={n}");
        }
    }

    #[test]
    fn rejections() {
        let f = form(FpSeries::one(7, 16).unwrap(), space(2, 3456, 6));
        assert_eq!(t_operator(&f, 4), Err(HeckeError::NotPrime(4)));
        assert_eq!(
            t_operator(&f, 3),
            Err(HeckeError::DividesLevel { l: 3, level: 3456 })
        );
    }

    #[test]
    fn linearity_and_support() {
        let m = 97;
        let mut state = 0x5eed5eed5eed5eedu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let sp = space(4, 5, 1);
        let a = FpSeries::from_fn(m, 120, |_| next() % m).unwrap();
        let b = FpSeries::from_fn(m, 120, |_| next() % m).unwrap();
        let combo = a.scale(17).add(&b).unwrap();
        let ta = t_operator(&form(a.clone(), sp), 3).unwrap();
        let tb = t_operator(&form(b.clone(), sp), 3).unwrap();
        let tc = t_operator(&form(combo, sp), 3).unwrap();
        assert_eq!(tc, ta.scale(17).add(&tb).unwrap());
        // Where 3 does not divide n, the image reads a(3n) directly.
        for n in [1usize, 2, 4, 5, 7, 8].into_iter() {
            assert_eq!(ta.coeff(n), a.coeff(3 * n), "n={n}");
        }
    }

    #[test]
    fn vanishing_statuses() {
        // sturm_bound(2, 5) = 1, so a clean check to bound 1 verifies.
        let sp = space(2, 5, 1);
        let zero = form(FpSeries::zero(7, 100).unwrap(), sp);
        let cert = verify_vanishing(&zero, 3, 1).unwrap();
        assert_eq!(cert.status, CertStatus::Verified);
        assert_eq!(cert.sturm_bound, 1);

        // Requested bound under the Sturm bound: partial, never verified.
        let sp_big = space(12, 256, 1);
        let zero = form(FpSeries::zero(7, 100).unwrap(), sp_big);
        let cert = verify_vanishing(&zero, 3, 30).unwrap();
        assert_eq!(cert.status, CertStatus::Partial);
        assert_eq!(cert.checked_to, 30);

        // Truncation too short for the requested bound: partial.
        let cert = verify_vanishing(&zero, 3, 384).unwrap();
        assert_eq!(cert.status, CertStatus::Partial);
        assert_eq!(cert.checked_to, 33);

        // A nonzero coefficient refutes with its index.
        let mut spiked = FpSeries::zero(7, 100).unwrap();
        spiked.set_coeff(6, 1);
        let spiked = form(spiked, sp);
        let cert = verify_vanishing(&spiked, 3, 20).unwrap();
        assert_eq!(cert.status, CertStatus::Refuted);
        assert_eq!(cert.first_nonzero, Some(2));
    }

    #[test]
    fn certificate_serializes_with_schema_fields() {
        let sp = space(2, 5, 1);
        let zero = form(FpSeries::zero(7, 100).unwrap(), sp);
        let cert = verify_vanishing(&zero, 3, 1).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["kind"], "hecke_vanishing");
        assert_eq!(json["status"], "verified");
        assert!(json["family"]["l"].is_u64());
        assert!(json["space"]["weight"].is_u64());
        assert!(json.get("first_nonzero").is_none());
        assert_eq!(json["base_series_hash"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn required_truncation_frozen_values() {
        assert_eq!(required_truncation(5, 1, 8, 809, 384), 194_160);
        assert_eq!(required_truncation(3, 1, 8, 1, 1), 1);
        assert_eq!(required_truncation(25, 5, 24, 1973, 27648), 56_822_400);
        assert_eq!(required_truncation(7, 1, 8, 1889, 576), 952_056);
    }
}
