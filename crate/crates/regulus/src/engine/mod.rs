//! The modular constructions behind 4- and 6-regular congruences.
//!
//! For an odd prime m the generating function of b_k is congruent mod m to
//! an eta quotient, and a chain of U/V dilation operators cuts its support
//! down to one arithmetic progression. Packaged as a q-series this says
//!
//! ```text
//!   F(z) = sum_n b_k((M n - c)/d) q^n     (terms with d niet| Mn - c read 0)
//! ```
//!
//! is congruent mod m to a modular form of explicit weight, level and
//! character: for k = 4 the map is n -> (mn - 1)/8 and F lives in weight
//! 3m - 3 on Gamma_0(256); for k = 6 it is n -> (Mn - 5)/24 with M = m and
//! weight 2m - 2 on Gamma_0(3456) with character kronecker(6, .), except
//! that m = 5 runs through M = 25 at weight 48. A Sturm-bounded prefix
//! check of F | T(l) then certifies whole families of congruences
//! b_k(M l^2 n + B) == 0 (mod m); see [`crate::hecke`] and [`families`].
//!
//! [`FamilyConstruction`] holds the (k, m) parameter table, builds F from
//! the partition series, and exposes the three eta quotients documenting
//! why F lands where it does: the defining quotient congruent to the
//! generating function, its mod-m reduction on level 4 or 6 (via the
//! Frobenius congruence E_{M delta} == E_delta^M), and the low-weight
//! companion on the full level. [`construction_congruence_check`] replays
//! the reduction numerically.
//!
//! [`construction_congruence_check`]: FamilyConstruction::construction_congruence_check

use crate::arith::{inv_mod, is_prime};
use crate::etaq::{sturm_bound, EtaError, EtaQuotient, FormSpace};
use crate::fpseries::{
    eta_quotient_expansion, regular_partition_series, FpSeries, SeriesAgreement, SeriesError,
};
use crate::hecke::{self, FamilyId, HeckeError, HeckeForm};
use serde::Serialize;
use thiserror::Error;

mod families;
mod identities;
mod search;

pub use families::{
    compose_crt, mod3_families, parity_families, parity_scan, specialize_minimal,
    specialize_proposition, verify_family, verify_family_with_series, CongruenceFamily,
    FamilyCheck, Provenance,
};
pub use identities::{
    identity_suite, theta_kronecker, theta_phi, theta_phi_alternating, theta_psi, IdentityResult,
    DEFAULT_CHECK_PRIME, DEFAULT_IDENTITY_TRUNCATION,
};
pub use search::{search_hecke_primes, SearchReport, SkippedPrime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(
        "only 4- and 6-regular partitions are wired into the modular construction; got k = {0}"
    )]
    UnsupportedRegK(u64),
    #[error("modulus {0} must be an odd prime for this construction")]
    ModulusNotOddPrime(u64),
    #[error("b4 mod 2 is the parity regime; use the parity families instead of the modular construction")]
    B4ParityModulus,
    #[error("b6 mod {0} is out of reach here: mod 2 vanishing is an open problem and mod 3 congruences follow from classical dissections; the Hecke construction starts at m = 5")]
    B6SmallModulus(u64),
    #[error("series of length {have} is too short; need {needed}")]
    InsufficientTruncation { needed: u64, have: u64 },
    #[error("specializing prime {l} must be an odd prime coprime to {d} and different from the congruence modulus")]
    BadSpecializingPrime { l: u64, d: u64 },
    #[error("no mod 3 family at l = {l}: kronecker(-6, l) = {symbol}, need -1")]
    Mod3Inadmissible { l: u64, symbol: i64 },
    #[error("congruence families have mismatched k: {left} vs {right}")]
    CrtMismatchedK { left: u64, right: u64 },
    #[error("congruence moduli {left} and {right} are not coprime")]
    CrtModuliNotCoprime { left: u64, right: u64 },
    #[error("progressions {a_left} n + {b_left} and {a_right} n + {b_right} never meet")]
    CrtDisjoint {
        a_left: u64,
        b_left: u64,
        a_right: u64,
        b_right: u64,
    },
    #[error("index arithmetic overflowed while {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// Parameters of the reindexing n -> (M n - c)/d and the target space for
/// one (k, m) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyConstruction {
    pub reg_k: u64,
    /// The congruence modulus.
    pub m: u64,
    /// Index multiplier M; equals m except for b6 mod 5, which runs
    /// through M = 25.
    pub multiplier: u64,
    pub c: u64,
    pub d: u64,
    pub space: FormSpace,
}

/// Outcome of replaying the mod-m reduction of the defining eta quotient.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionCheck {
    pub prefactor_defining: i64,
    pub prefactor_reduced: i64,
    pub agreement: SeriesAgreement,
}

impl ConstructionCheck {
    pub fn passes(&self) -> bool {
        self.prefactor_defining == self.prefactor_reduced && self.agreement.is_agreement()
    }
}

impl FamilyConstruction {
    pub fn new(reg_k: u64, m: u64) -> Result<Self, EngineError> {
        match reg_k {
            4 => Self::b4(m),
            6 => Self::b6(m),
            other => Err(EngineError::UnsupportedRegK(other)),
        }
    }

    /// sum b4((mn-1)/8) q^n lands in weight 3m - 3 on Gamma_0(256) with
    /// trivial character, for odd prime m.
    pub fn b4(m: u64) -> Result<Self, EngineError> {
        if m == 2 {
            return Err(EngineError::B4ParityModulus);
        }
        if !is_prime(m) {
            return Err(EngineError::ModulusNotOddPrime(m));
        }
        Ok(FamilyConstruction {
            reg_k: 4,
            m,
            multiplier: m,
            c: 1,
            d: 8,
            space: FormSpace {
                weight: 3 * m - 3,
                level: 256,
                character_disc: 1,
            },
        })
    }

    /// sum b6((Mn-5)/24) q^n lands in weight 2M - 2 on Gamma_0(3456) with
    /// character kronecker(6, .), where M = m for prime m >= 7 and M = 25
    /// for m = 5 (one extra U(5) pass is needed before the support is a
    /// single progression, which squares the multiplier).
    pub fn b6(m: u64) -> Result<Self, EngineError> {
        if m == 2 || m == 3 {
            return Err(EngineError::B6SmallModulus(m));
        }
        if !is_prime(m) {
            return Err(EngineError::ModulusNotOddPrime(m));
        }
        let multiplier = if m == 5 { 25 } else { m };
        Ok(FamilyConstruction {
            reg_k: 6,
            m,
            multiplier,
            c: 5,
            d: 24,
            space: FormSpace {
                weight: 2 * multiplier - 2,
                level: 3456,
                character_disc: 6,
            },
        })
    }

    /// A note attached to results whose backing construction is used at
    /// the very edge of its stated range.
    pub fn caveat(&self) -> Option<&'static str> {
        (self.reg_k == 4 && self.m == 3).then_some(
            "m = 3 sits at the boundary of the b4 construction's range; \
             treat its certificates as numerical evidence",
        )
    }

    pub fn family_tag(&self) -> String {
        if self.multiplier == self.m {
            format!("b{} mod {}", self.reg_k, self.m)
        } else {
            format!("b{} mod {} via M = {}", self.reg_k, self.m, self.multiplier)
        }
    }

    pub fn sturm_bound(&self) -> u64 {
        sturm_bound(self.space.weight, self.space.level)
    }

    /// The one residue class mod d carrying nonzero coefficients of F.
    pub fn support_residue(&self) -> u64 {
        let inv = inv_mod(self.multiplier % self.d, self.d).expect("multiplier is coprime to d");
        self.c * inv % self.d
    }

    /// Partition-series length needed for a full vanishing check of
    /// F | T(l) through `bound`.
    pub fn required_truncation(&self, l: u64, bound: u64) -> u64 {
        hecke::required_truncation(self.multiplier, self.c, self.d, l, bound)
    }

    /// Largest partition index read when F is built to `form_len` terms,
    /// or None when no index below `form_len` is supported.
    fn max_partition_index(&self, form_len: usize) -> Option<u64> {
        let r = self.support_residue();
        let top = form_len as u64 - 1;
        if top < r {
            return None;
        }
        let n = top - (top - r) % self.d;
        let idx = (self.multiplier as u128 * n as u128 - self.c as u128) / self.d as u128;
        Some(idx as u64)
    }

    pub fn base_series(&self, form_len: usize) -> Result<FpSeries, EngineError> {
        let needed =
            hecke::required_truncation(self.multiplier, self.c, self.d, 1, form_len as u64 - 1);
        let needed = usize::try_from(needed)
            .map_err(|_| EngineError::Overflow("sizing the partition series"))?;
        Ok(regular_partition_series(self.reg_k, self.m, needed)?)
    }

    /// Reindex an already computed partition series mod m into F.
    pub fn build_form_from(
        &self,
        base: &FpSeries,
        form_len: usize,
    ) -> Result<HeckeForm, EngineError> {
        if form_len == 0 {
            return Err(SeriesError::EmptyTruncation.into());
        }
        if base.modulus() != self.m {
            return Err(SeriesError::ModulusMismatch {
                left: base.modulus(),
                right: self.m,
            }
            .into());
        }
        if let Some(needed) = self.max_partition_index(form_len).map(|i| i + 1) {
            if (base.len() as u64) < needed {
                return Err(EngineError::InsufficientTruncation {
                    needed,
                    have: base.len() as u64,
                });
            }
        }
        let (mult, c, d) = (self.multiplier as u128, self.c as u128, self.d as u128);
        let expansion = FpSeries::from_fn(self.m, form_len, |n| {
            let t = mult * n as u128;
            if t >= c && (t - c) % d == 0 {
                base.coeff(((t - c) / d) as usize)
            } else {
                0
            }
        })?;
        Ok(HeckeForm {
            expansion,
            space: self.space,
            family: FamilyId {
                reg_k: self.reg_k,
                m: self.m,
            },
            family_tag: self.family_tag(),
        })
    }

    pub fn build_form(&self, form_len: usize) -> Result<HeckeForm, EngineError> {
        if form_len == 0 {
            return Err(SeriesError::EmptyTruncation.into());
        }
        let base = self.base_series(form_len)?;
        self.build_form_from(&base, form_len)
    }

    /// The eta quotient congruent mod m to the b_k generating function
    /// side of the construction.
    pub fn defining_quotient(&self) -> EtaQuotient {
        let mm = self.multiplier;
        match self.reg_k {
            4 => {
                let a = 4 - (mm % 8) as i64;
                quotient(&[(4, 1), (1, -1), (4 * mm, a), (mm, -a), (2 * mm, 6)])
            }
            _ => {
                let (a, b, c3, d6) = b6_exponents(mm);
                quotient(&[
                    (6, 1),
                    (1, -1),
                    (mm, a),
                    (2 * mm, b),
                    (3 * mm, c3),
                    (6 * mm, d6),
                ])
            }
        }
    }

    /// Mod-m reduction of the defining quotient via the Frobenius
    /// congruence E_{M delta} == E_delta^M: a quotient on level 4 (for b4)
    /// or 6 (for b6) whose admissibility pins down weight and character.
    pub fn reduced_quotient(&self) -> (EtaQuotient, u64) {
        let mm = self.multiplier as i64;
        match self.reg_k {
            4 => {
                let a = 4 - mm.rem_euclid(8);
                (
                    quotient(&[(4, a * mm + 1), (2, 6 * mm), (1, -a * mm - 1)]),
                    4,
                )
            }
            _ => {
                let (a, b, c3, d6) = b6_exponents(self.multiplier);
                (
                    quotient(&[(1, a * mm - 1), (2, b * mm), (3, c3 * mm), (6, d6 * mm + 1)]),
                    6,
                )
            }
        }
    }

    /// The weight-2 companion quotient on the full level whose leading
    /// exponent matches the support residue of F.
    pub fn final_quotient(&self) -> (EtaQuotient, u64) {
        match self.reg_k {
            4 => {
                let a = 4 - (self.multiplier % 8) as i64;
                (quotient(&[(8, 4 + a), (16, -4), (32, 4 - a)]), 256)
            }
            _ => {
                let (a, b, c3, d6) = b6_exponents(self.multiplier);
                (
                    quotient(&[(24, 2 - a), (48, 2 - b), (72, 2 - c3), (144, 2 - d6)]),
                    3456,
                )
            }
        }
    }

    /// Expand the defining quotient and its reduction mod m and compare:
    /// equal 24-normalized leading exponents and an agreeing coefficient
    /// prefix replay the congruence the construction rests on.
    pub fn construction_congruence_check(
        &self,
        len: usize,
    ) -> Result<ConstructionCheck, EngineError> {
        let defining = eta_quotient_expansion(&self.defining_quotient(), self.m, len)?;
        let reduced = eta_quotient_expansion(&self.reduced_quotient().0, self.m, len)?;
        Ok(ConstructionCheck {
            prefactor_defining: defining.prefactor24,
            prefactor_reduced: reduced.prefactor24,
            agreement: defining.series.compare_prefix(&reduced.series)?,
        })
    }
}

/// Exponents (a, b, c, d) of the b6 defining quotient at eta(M z),
/// eta(2M z), eta(3M z), eta(6M z); they sum to 4 and depend only on
/// M mod 24.
fn b6_exponents(multiplier: u64) -> (i64, i64, i64, i64) {
    let mp = (multiplier % 24) as i64;
    let a = mp % 5 - 1;
    let b = mp / 5 - 1;
    let c3 = 3 - mp / 5;
    let d6 = 3 - mp % 5;
    (a, b, c3, d6)
}

fn quotient(terms: &[(u64, i64)]) -> EtaQuotient {
    EtaQuotient::new(terms).expect("construction tables contain no zero deltas")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaq::gordon_hughes;
    use crate::fpseries::bk_exact;

    #[test]
    fn parameter_table() {
        let f = FamilyConstruction::b4(5).unwrap();
        assert_eq!((f.multiplier, f.c, f.d), (5, 1, 8));
        assert_eq!(f.space.weight, 12);
        assert_eq!(f.space.level, 256);
        assert_eq!(f.space.character_disc, 1);
        assert_eq!(f.support_residue(), 5);
        assert_eq!(f.sturm_bound(), 384);
        assert!(f.caveat().is_none());

        let f = FamilyConstruction::b4(3).unwrap();
        assert_eq!(f.space.weight, 6);
        assert_eq!(f.support_residue(), 3);
        assert!(f.caveat().is_some());

        let f = FamilyConstruction::b6(7).unwrap();
        assert_eq!((f.multiplier, f.c, f.d), (7, 5, 24));
        assert_eq!(f.space.weight, 12);
        assert_eq!(f.space.level, 3456);
        assert_eq!(f.space.character_disc, 6);
        assert_eq!(f.support_residue(), 11);
        assert_eq!(f.sturm_bound(), 6912);

        let f = FamilyConstruction::b6(5).unwrap();
        assert_eq!(f.multiplier, 25);
        assert_eq!(f.space.weight, 48);
        assert_eq!(f.support_residue(), 5);
        assert_eq!(f.sturm_bound(), 27648);
        assert_eq!(f.family_tag(), "b6 mod 5 via M = 25");
    }

    #[test]
    fn rejections() {
        assert_eq!(
            FamilyConstruction::b4(2).unwrap_err(),
            EngineError::B4ParityModulus
        );
        assert_eq!(
            FamilyConstruction::b4(9).unwrap_err(),
            EngineError::ModulusNotOddPrime(9)
        );
        assert_eq!(
            FamilyConstruction::b6(2).unwrap_err(),
            EngineError::B6SmallModulus(2)
        );
        assert_eq!(
            FamilyConstruction::b6(3).unwrap_err(),
            EngineError::B6SmallModulus(3)
        );
        assert_eq!(
            FamilyConstruction::new(5, 7).unwrap_err(),
            EngineError::UnsupportedRegK(5)
        );
    }

    #[test]
    fn form_support_and_values() {
        let fc = FamilyConstruction::b4(5).unwrap();
        let f = fc.build_form(64).unwrap();
        for n in 0..64 {
            if n % 8 != 5 {
                assert_eq!(f.expansion.coeff(n), 0, "off-support n={n}");
            }
        }
        // F(8t + 5) = b4((5(8t+5) - 1)/8) = b4(5t + 3).
        for t in 0..7u64 {
            assert_eq!(
                f.expansion.coeff((8 * t + 5) as usize),
                bk_exact(4, 5 * t + 3) % 5,
                "t={t}"
            );
        }

        let fc = FamilyConstruction::b6(5).unwrap();
        let f = fc.build_form(80).unwrap();
        for t in 0..3u64 {
            // F(24t + 5) = b6((25(24t+5) - 5)/24) = b6(25t + 5).
            assert_eq!(
                f.expansion.coeff((24 * t + 5) as usize),
                bk_exact(6, 25 * t + 5) % 5,
                "t={t}"
            );
        }
    }

    #[test]
    fn short_base_is_rejected() {
        let fc = FamilyConstruction::b4(5).unwrap();
        let base = regular_partition_series(4, 5, 10).unwrap();
        // Largest supported index below 40 is n = 37, reading b4(23).
        assert_eq!(
            fc.build_form_from(&base, 40).unwrap_err(),
            EngineError::InsufficientTruncation {
                needed: 24,
                have: 10
            }
        );
    }

    #[test]
    fn eta_scaffolding_is_admissible() {
        for m in [3u64, 5, 7, 11, 13] {
            let fc = FamilyConstruction::b4(m).unwrap();
            let (reduced, lvl) = fc.reduced_quotient();
            let sp = gordon_hughes(&reduced, lvl).unwrap();
            assert_eq!(sp.weight, 3 * m, "reduced weight at m={m}");
            assert_eq!(sp.character_disc, -1, "reduced character at m={m}");
            let (fin, lvl) = fc.final_quotient();
            let sp = gordon_hughes(&fin, lvl).unwrap();
            assert_eq!(sp.weight, 2);
            assert_eq!(sp.character_disc, 1);
            assert_eq!(
                fin.prefactor24(),
                24 * fc.support_residue() as i64,
                "leading exponent matches the support residue at m={m}"
            );
        }
        for m in [5u64, 7, 11, 13] {
            let fc = FamilyConstruction::b6(m).unwrap();
            let mult = fc.multiplier;
            let (reduced, lvl) = fc.reduced_quotient();
            let sp = gordon_hughes(&reduced, lvl).unwrap();
            assert_eq!(sp.weight, 2 * mult, "reduced weight at m={m}");
            assert_eq!(sp.character_disc, 1, "reduced character at m={m}");
            let (fin, lvl) = fc.final_quotient();
            let sp = gordon_hughes(&fin, lvl).unwrap();
            assert_eq!(sp.weight, 2);
            assert_eq!(sp.character_disc, 6, "final character at m={m}");
            assert_eq!(fin.prefactor24(), 24 * fc.support_residue() as i64);
        }
    }

    #[test]
    fn defining_reduces_to_reduced() {
        for fc in [
            FamilyConstruction::b4(5).unwrap(),
            FamilyConstruction::b4(13).unwrap(),
            FamilyConstruction::b6(7).unwrap(),
            FamilyConstruction::b6(5).unwrap(),
        ] {
            let check = fc.construction_congruence_check(600).unwrap();
            assert!(
                check.passes(),
                "construction check failed for {}: {:?}",
                fc.family_tag(),
                check
            );
        }
    }
}
