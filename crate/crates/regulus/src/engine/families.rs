//! Congruence families b_k(A n + B) == 0 (mod m).
//!
//! Three sources feed this type. Specialization turns one Sturm-certified
//! vanishing of F | T(l) into explicit progressions: with M, c, d as in the
//! construction, the coefficient of F at any index l*w with l niet| w
//! vanishes, and choosing w = d(l n + j) + w_0 with a w_0 divisible by l
//! makes the partition index affine in n with step A = M l^2. The mod 3
//! and mod 2 families come with elementary proofs and serve as independent
//! fixtures. CRT composition intersects families with coprime moduli.
//!
//! Verification against the partition series is deliberately dumb: compute
//! b_k mod m out to A n_max + B and look. It shares no reasoning with the
//! derivations above, which is what makes it evidence.

use std::fmt;

use super::{EngineError, FamilyConstruction};
use crate::arith::{gcd, inv_mod, is_prime};
use crate::etaq::kronecker;
use crate::fpseries::{regular_partition_series, FpSeries};
use num_integer::Roots;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFamily {
    pub reg_k: u64,
    pub modulus: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(flatten)]
    pub provenance: Provenance,
}

/// Where a family came from; `derivation` carries the parameters needed to
/// re-derive it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "provenance", content = "derivation", rename_all = "snake_case")]
pub enum Provenance {
    /// Quoted from the literature, kept as a fixture.
    PaperExample,
    HeckeSpecialized {
        m: u64,
        l: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j: Option<u64>,
    },
    Mod3Family {
        l: u64,
        branch: u8,
    },
    Parity {
        m: u64,
    },
    CrtComposed,
}

impl fmt::Display for CongruenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "b{}({} n + {}) == 0 (mod {})",
            self.reg_k, self.a, self.b, self.modulus
        )
    }
}

/// Result of checking a family against the partition series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FamilyCheck {
    Holds { checked_through: u64 },
    Fails { n: u64, index: u64, value: u64 },
}

impl FamilyCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FamilyCheck::Holds { .. })
    }
}

fn check_specializing_prime(fc: &FamilyConstruction, l: u64) -> Result<(), EngineError> {
    if !is_prime(l) || fc.d % l == 0 || l == fc.m {
        return Err(EngineError::BadSpecializingPrime { l, d: fc.d });
    }
    Ok(())
}

fn checked_a(fc: &FamilyConstruction, l: u64) -> Result<u64, EngineError> {
    (fc.multiplier as u128 * l as u128 * l as u128)
        .try_into()
        .map_err(|_| EngineError::Overflow("computing the family step M l^2"))
}

/// The j = 0 offset of the published specialization: B_0 = (M l w_0 - c)/d
/// with w_0 = M l for b4, 5 M l for b6 at prime m >= 7, and 5 l for the
/// M = 25 case. Each w_0 is divisible by l, so w = d(l n + j) + w_0 stays
/// coprime to l for 1 <= j <= l - 1.
fn proposition_base_offset(fc: &FamilyConstruction, l: u64) -> u64 {
    let (mm, ll) = (fc.multiplier as u128, l as u128);
    let value = match (fc.reg_k, fc.multiplier == fc.m) {
        (4, _) => (mm * mm * ll * ll - 1) / 8,
        (6, true) => (5 * mm * mm * ll * ll - 5) / 24,
        _ => (125 * ll * ll - 5) / 24,
    };
    value as u64
}

/// All l - 1 families implied by a certified vanishing of F | T(l), one
/// per offset j in [1, l-1]: b_k(M l^2 n + M l j + B_0) == 0 (mod m).
pub fn specialize_proposition(
    fc: &FamilyConstruction,
    l: u64,
) -> Result<Vec<CongruenceFamily>, EngineError> {
    check_specializing_prime(fc, l)?;
    let a = checked_a(fc, l)?;
    let b0 = proposition_base_offset(fc, l);
    (1..l)
        .map(|j| {
            let b = fc
                .multiplier
                .checked_mul(l)
                .and_then(|ml| ml.checked_mul(j))
                .and_then(|t| t.checked_add(b0))
                .ok_or(EngineError::Overflow("computing a family offset"))?;
            #[cfg(debug_assertions)]
            {
                // The F-index at n = 0 must be l times a unit mod l.
                let raw = fc.d as u128 * b as u128 + fc.c as u128;
                debug_assert_eq!(raw % fc.multiplier as u128, 0);
                let f_index = raw / fc.multiplier as u128;
                debug_assert_eq!(f_index % l as u128, 0);
                debug_assert_ne!((f_index / l as u128) % l as u128, 0);
            }
            Ok(CongruenceFamily {
                reg_k: fc.reg_k,
                modulus: fc.m,
                a,
                b,
                provenance: Provenance::HeckeSpecialized {
                    m: fc.m,
                    l,
                    j: Some(j),
                },
            })
        })
        .collect()
}

/// The single family with the least offset the certified vanishing at l
/// yields: among F-indices n == r (mod d) coprime to l, take the smallest.
pub fn specialize_minimal(
    fc: &FamilyConstruction,
    l: u64,
) -> Result<CongruenceFamily, EngineError> {
    check_specializing_prime(fc, l)?;
    let a = checked_a(fc, l)?;
    let d = fc.d;
    let ml = fc.multiplier as u128 * l as u128;
    let r = fc.c as u128
        * inv_mod((ml % d as u128) as u64, d).expect("M l is coprime to d") as u128
        % d as u128;
    // At most one of r, d + r can be divisible by l since gcd(d, l) = 1.
    let n0 = if r % l as u128 != 0 { r } else { d as u128 + r };
    debug_assert!(n0 % l as u128 != 0);
    let b = ((ml * n0 - fc.c as u128) / d as u128)
        .try_into()
        .map_err(|_| EngineError::Overflow("computing the minimal family offset"))?;
    Ok(CongruenceFamily {
        reg_k: fc.reg_k,
        modulus: fc.m,
        a,
        b,
        provenance: Provenance::HeckeSpecialized {
            m: fc.m,
            l,
            j: None,
        },
    })
}

/// Check b_k(A n + B) == 0 (mod m) for n = 0..=n_max, computing the
/// partition series at exactly the needed truncation.
pub fn verify_family(fam: &CongruenceFamily, n_max: u64) -> Result<FamilyCheck, EngineError> {
    let top = fam
        .a
        .checked_mul(n_max)
        .and_then(|t| t.checked_add(fam.b))
        .and_then(|t| t.checked_add(1))
        .ok_or(EngineError::Overflow("sizing the verification series"))?;
    let len = usize::try_from(top)
        .map_err(|_| EngineError::Overflow("sizing the verification series"))?;
    let series = regular_partition_series(fam.reg_k, fam.modulus, len)?;
    check_against(fam, &series, Some(n_max))
}

/// Check a family against an existing series, as far as the truncation
/// allows. Lets one long series back many families.
pub fn verify_family_with_series(
    fam: &CongruenceFamily,
    series: &FpSeries,
) -> Result<FamilyCheck, EngineError> {
    if series.modulus() != fam.modulus {
        return Err(crate::fpseries::SeriesError::ModulusMismatch {
            left: series.modulus(),
            right: fam.modulus,
        }
        .into());
    }
    check_against(fam, series, None)
}

fn check_against(
    fam: &CongruenceFamily,
    series: &FpSeries,
    n_cap: Option<u64>,
) -> Result<FamilyCheck, EngineError> {
    if fam.a == 0 {
        return Err(crate::fpseries::SeriesError::ZeroStep.into());
    }
    let len = series.len() as u64;
    if fam.b >= len {
        return Err(EngineError::InsufficientTruncation {
            needed: fam.b + 1,
            have: len,
        });
    }
    let reach = (len - 1 - fam.b) / fam.a;
    if let Some(cap) = n_cap {
        if cap > reach {
            return Err(EngineError::InsufficientTruncation {
                needed: fam.a * cap + fam.b + 1,
                have: len,
            });
        }
    }
    let checked_through = n_cap.map_or(reach, |cap| cap.min(reach));
    for n in 0..=checked_through {
        let idx = (fam.a * n + fam.b) as usize;
        let value = series.coeff(idx);
        if value != 0 {
            return Ok(FamilyCheck::Fails {
                n,
                index: idx as u64,
                value,
            });
        }
    }
    Ok(FamilyCheck::Holds { checked_through })
}

/// Both fans of mod 3 congruences at an admissible prime l:
/// b4(3l(ln + j) + (l^2 - 1)/8) and b4(3l(ln + j) + (9l^2 - 1)/8) for
/// j in [1, l-1], admissible exactly when kronecker(-6, l) = -1. That
/// symbol condition and the residue table l mod 24 in {13, 17, 19, 23} are
/// computed independently and cross-checked.
pub fn mod3_families(l: u64) -> Result<Vec<CongruenceFamily>, EngineError> {
    if !is_prime(l) || l == 2 || l == 3 {
        return Err(EngineError::BadSpecializingPrime { l, d: 24 });
    }
    let symbol = kronecker(-6, l as i64);
    let by_symbol = symbol == -1;
    let by_residue = matches!(l % 24, 13 | 17 | 19 | 23);
    assert_eq!(
        by_symbol, by_residue,
        "quadratic character of -6 disagrees with the residue table at l = {l}"
    );
    if !by_symbol {
        return Err(EngineError::Mod3Inadmissible { l, symbol });
    }
    let ll = l as u128;
    let a: u64 = (3 * ll * ll)
        .try_into()
        .map_err(|_| EngineError::Overflow("computing the family step 3 l^2"))?;
    let offsets = [
        (1u8, ((ll * ll - 1) / 8) as u64),
        (2, ((9 * ll * ll - 1) / 8) as u64),
    ];
    let mut out = Vec::with_capacity(2 * (l as usize - 1));
    for (branch, offset) in offsets {
        for j in 1..l {
            let b = 3u64
                .checked_mul(l)
                .and_then(|t| t.checked_mul(j))
                .and_then(|t| t.checked_add(offset))
                .ok_or(EngineError::Overflow("computing a mod 3 family offset"))?;
            out.push(CongruenceFamily {
                reg_k: 4,
                modulus: 3,
                a,
                b,
                provenance: Provenance::Mod3Family { l, branch },
            });
        }
    }
    Ok(out)
}

/// The mod 2 families: b4(m^2 n + j) is even whenever m | 8j + 1 but
/// m^2 niet| 8j + 1, for odd prime m.
pub fn parity_families(m: u64) -> Result<Vec<CongruenceFamily>, EngineError> {
    if m == 2 || !is_prime(m) {
        return Err(EngineError::ModulusNotOddPrime(m));
    }
    let msq = m
        .checked_mul(m)
        .ok_or(EngineError::Overflow("squaring the parity modulus"))?;
    let mut out = Vec::new();
    for j in 0..msq {
        let t = 8u128 * j as u128 + 1;
        if t % m as u128 == 0 && t % msq as u128 != 0 {
            out.push(CongruenceFamily {
                reg_k: 4,
                modulus: 2,
                a: msq,
                b: j,
                provenance: Provenance::Parity { m },
            });
        }
    }
    Ok(out)
}

/// Exhaustive check that b4(n) is odd exactly at triangular n, for
/// n <= limit.
pub fn parity_scan(limit: u64) -> Result<FamilyCheck, EngineError> {
    let len = usize::try_from(limit as u128 + 1)
        .map_err(|_| EngineError::Overflow("sizing the parity scan"))?;
    let series = regular_partition_series(4, 2, len)?;
    for n in 0..=limit {
        let value = series.coeff(n as usize);
        if (value == 1) != is_triangular(n) {
            return Ok(FamilyCheck::Fails { n, index: n, value });
        }
    }
    Ok(FamilyCheck::Holds {
        checked_through: limit,
    })
}

fn is_triangular(n: u64) -> bool {
    let t = 8u128 * n as u128 + 1;
    let s = t.sqrt();
    s * s == t
}

/// Intersect two families with coprime moduli: indices in both
/// progressions satisfy both congruences, so the composite holds mod
/// m1 m2 with step lcm(A1, A2). The offset is the smallest index lying in
/// both index sets (each family only speaks for indices >= its own B).
pub fn compose_crt(
    f1: &CongruenceFamily,
    f2: &CongruenceFamily,
) -> Result<CongruenceFamily, EngineError> {
    if f1.reg_k != f2.reg_k {
        return Err(EngineError::CrtMismatchedK {
            left: f1.reg_k,
            right: f2.reg_k,
        });
    }
    if gcd(f1.modulus, f2.modulus) != 1 {
        return Err(EngineError::CrtModuliNotCoprime {
            left: f1.modulus,
            right: f2.modulus,
        });
    }
    if f1.a == 0 || f2.a == 0 {
        return Err(crate::fpseries::SeriesError::ZeroStep.into());
    }
    let g = gcd(f1.a, f2.a);
    if f1.b % g != f2.b % g {
        return Err(EngineError::CrtDisjoint {
            a_left: f1.a,
            b_left: f1.b,
            a_right: f2.a,
            b_right: f2.b,
        });
    }
    let lcm = (f1.a as u128 / g as u128) * f2.a as u128;
    // x == b1 (mod a1), x == b2 (mod a2): write x = b1 + a1 t and solve
    // t == (b2 - b1)/g * inv(a1/g) (mod a2/g).
    let a1g = f1.a / g;
    let a2g = f2.a / g;
    let diff = (f2.b % f2.a) as i128 - (f1.b % f1.a) as i128;
    let step = diff.div_euclid(g as i128).rem_euclid(a2g as i128) as u64;
    let t = match inv_mod(a1g % a2g, a2g) {
        Some(inv) => (step as u128 * inv as u128) % a2g as u128,
        // a2g == 1: the second congruence adds nothing.
        None => 0,
    };
    let x0 = (f1.b % f1.a) as u128 + f1.a as u128 * t;
    debug_assert_eq!(x0 % f2.a as u128, (f2.b % f2.a) as u128);
    let lower = f1.b.max(f2.b) as u128;
    let b = if x0 >= lower {
        x0
    } else {
        x0 + lcm * ((lower - x0).div_ceil(lcm))
    };
    let modulus = f1
        .modulus
        .checked_mul(f2.modulus)
        .ok_or(EngineError::Overflow("multiplying the composed moduli"))?;
    Ok(CongruenceFamily {
        reg_k: f1.reg_k,
        modulus,
        a: lcm
            .try_into()
            .map_err(|_| EngineError::Overflow("computing the composed step"))?,
        b: b.try_into()
            .map_err(|_| EngineError::Overflow("computing the composed offset"))?,
        provenance: Provenance::CrtComposed,
    })
}
