//! Eta quotients as formal modular objects.
//!
//! An eta quotient is a finite product f(z) = prod_delta eta(delta z)^{r_delta}
//! with integer exponents. For delta ranging over divisors of a level N, the
//! classical Gordon-Hughes-Newman conditions decide when f transforms like a
//! modular form on Gamma_0(N):
//!
//! * sum delta * r_delta == 0 (mod 24),
//! * sum (N/delta) * r_delta == 0 (mod 24),
//! * sum r_delta even, giving integral weight k = (sum r_delta)/2,
//!
//! with nebentypus the Kronecker character attached to (-1)^k prod
//! delta^{r_delta}; only the squarefree kernel of that product matters, and
//! this module reduces the character to that signed kernel without ever
//! forming the (astronomically large) product itself.
//!
//! Orders of vanishing at the cusps of Gamma_0(N) follow Martin's formula:
//! a cusp with denominator d | N carries
//!
//! ```text
//!   ord_d(f) = (N/24) * sum_delta r_delta * gcd(d, delta)^2 / (delta * gcd(d^2, N))
//! ```
//!
//! counted phi(gcd(d, N/d)) times. These are exact rationals; holomorphy,
//! cuspidality, the valence identity sum = k*mu/12 (mu the index of
//! Gamma_0(N)), and the Sturm bound floor(k*mu/12) all derive from them.

use crate::arith::{euler_phi, prime_factors};
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EtaError {
    #[error("eta arguments must be positive; got delta = 0")]
    ZeroDelta,
    #[error("malformed eta quotient term {0:?}; expected delta:exponent")]
    Parse(String),
    #[error("level must be positive")]
    ZeroLevel,
    #[error("delta {delta} does not divide the level {level}")]
    DeltaNotDividingLevel { delta: u64, level: u64 },
    #[error("sum of delta*r is {0}, not divisible by 24")]
    PrefactorNot24Divisible(i64),
    #[error("sum of (N/delta)*r is {0}, not divisible by 24")]
    CofactorNot24Divisible(i64),
    #[error("exponent sum {0} is odd, so the weight is half-integral")]
    HalfIntegralWeight(i64),
}

/// Formal eta quotient: sorted (delta, exponent) pairs, exponents nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    terms: Vec<(u64, i64)>,
}

impl EtaQuotient {
    /// Build from (delta, exponent) pairs; duplicates merge, zero exponents
    /// drop out.
    pub fn new(terms: &[(u64, i64)]) -> Result<Self, EtaError> {
        let mut map: BTreeMap<u64, i64> = BTreeMap::new();
        for &(delta, r) in terms {
            if delta == 0 {
                return Err(EtaError::ZeroDelta);
            }
            *map.entry(delta).or_insert(0) += r;
        }
        Ok(EtaQuotient {
            terms: map.into_iter().filter(|&(_, r)| r != 0).collect(),
        })
    }

    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    /// Twice the weight: sum of all exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.terms.iter().map(|&(_, r)| r).sum()
    }

    /// Sum of delta * r_delta, i.e. 24 times the leading q-exponent.
    pub fn prefactor24(&self) -> i64 {
        self.terms.iter().map(|&(delta, r)| delta as i64 * r).sum()
    }

    /// Sum of (N/delta) * r_delta.
    pub fn cofactor24(&self, level: u64) -> Result<i64, EtaError> {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut sum = 0i64;
        for &(delta, r) in &self.terms {
            if level % delta != 0 {
                return Err(EtaError::DeltaNotDividingLevel { delta, level });
            }
            sum += (level / delta) as i64 * r;
        }
        Ok(sum)
    }

    /// Signed squarefree kernel of (-1)^k prod delta^{r_delta}, computed on
    /// factored exponents. This is the discriminant naming the nebentypus:
    /// chi(d) = kronecker(kernel, d).
    pub fn character_kernel(&self) -> i64 {
        let weight2 = self.exponent_sum();
        let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
        for &(delta, r) in &self.terms {
            for (p, e) in prime_factors(delta) {
                *exps.entry(p).or_insert(0) += e as i64 * r;
            }
        }
        let mut kernel = 1i64;
        for (p, e) in exps {
            if e.rem_euclid(2) == 1 {
                kernel *= p as i64;
            }
        }
        // (-1)^k with k = weight2/2; for odd weight2 this is never consulted
        // because admissibility rejects half-integral weight first.
        if (weight2 / 2).rem_euclid(2) == 1 {
            kernel = -kernel;
        }
        kernel
    }

    /// Order of vanishing at a cusp of denominator d | N, in local-variable
    /// units (Martin's formula).
    pub fn cusp_order(&self, level: u64, d: u64) -> Ratio<i64> {
        assert!(
            level > 0 && level % d == 0,
            "cusp denominator must divide the level"
        );
        let mut sum = Ratio::new(0, 1);
        for &(delta, r) in &self.terms {
            let g = d.gcd(&delta) as i64;
            let den = delta as i64 * (d * d).gcd(&level) as i64;
            sum += Ratio::new(g * g, den) * r;
        }
        Ratio::new(level as i64, 24) * sum
    }

    /// One row per cusp denominator, with multiplicity phi(gcd(d, N/d)).
    pub fn cusp_table(&self, level: u64) -> Result<Vec<CuspRow>, EtaError> {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        for &(delta, _) in &self.terms {
            if level % delta != 0 {
                return Err(EtaError::DeltaNotDividingLevel { delta, level });
            }
        }
        Ok(crate::arith::divisors(level)
            .into_iter()
            .map(|d| CuspRow {
                denominator: d,
                multiplicity: euler_phi(d.gcd(&(level / d))),
                order: self.cusp_order(level, d),
            })
            .collect())
    }

    /// True when every cusp order is nonnegative.
    pub fn is_holomorphic(&self, level: u64) -> Result<bool, EtaError> {
        Ok(self
            .cusp_table(level)?
            .iter()
            .all(|r| r.order >= Ratio::new(0, 1)))
    }

    /// True when every cusp order is strictly positive.
    pub fn is_cuspidal(&self, level: u64) -> Result<bool, EtaError> {
        Ok(self
            .cusp_table(level)?
            .iter()
            .all(|r| r.order > Ratio::new(0, 1)))
    }

    /// Verify the valence identity sum(mult * order) = k * mu / 12 with mu
    /// the index of Gamma_0(N). A failure here means an arithmetic slip in
    /// the cusp table, so this doubles as a self-check of the order formula.
    pub fn valence_check(&self, level: u64) -> Result<bool, EtaError> {
        let rows = self.cusp_table(level)?;
        let total: Ratio<i64> = rows
            .iter()
            .map(|r| Ratio::from_integer(r.multiplicity as i64) * r.order)
            .sum();
        let mu = gamma0_index(level) as i64;
        Ok(total == Ratio::new(self.exponent_sum() * mu, 24))
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(delta, r) in &self.terms {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{delta}:{r}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = EtaError;

    /// Parse the `delta:exponent,delta:exponent` shape used on the command
    /// line, e.g. `8:3,16:-4,32:5`.
    fn from_str(s: &str) -> Result<Self, EtaError> {
        let mut terms = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (delta, r) = part
                .split_once(':')
                .ok_or_else(|| EtaError::Parse(part.to_string()))?;
            let delta: u64 = delta
                .trim()
                .parse()
                .map_err(|_| EtaError::Parse(part.to_string()))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| EtaError::Parse(part.to_string()))?;
            terms.push((delta, r));
        }
        EtaQuotient::new(&terms)
    }
}

/// One cusp class of Gamma_0(N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspRow {
    pub denominator: u64,
    pub multiplicity: u64,
    pub order: Ratio<i64>,
}

/// The ambient space a form lives in, as recorded in certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormSpace {
    pub weight: u64,
    pub level: u64,
    pub character_disc: i64,
}

/// Index of Gamma_0(N) in SL_2(Z): N * prod_{p | N} (1 + 1/p).
pub fn gamma0_index(level: u64) -> u64 {
    let mut mu = level;
    for (p, _) in prime_factors(level) {
        mu = mu / p * (p + 1);
    }
    mu
}

/// Sturm bound for weight k on Gamma_0(N): floor(k * mu / 12). Equality of
/// q-expansions of two weight-k forms through this index forces equality of
/// the forms; a single cusp form vanishing through it vanishes identically.
pub fn sturm_bound(weight: u64, level: u64) -> u64 {
    weight * gamma0_index(level) / 12
}

/// Gordon-Hughes-Newman admissibility of an eta quotient on Gamma_0(N).
/// Returns the space data (weight, level, character discriminant) or the
/// first violated condition.
pub fn gordon_hughes(quotient: &EtaQuotient, level: u64) -> Result<FormSpace, EtaError> {
    let pre = quotient.prefactor24();
    let cof = quotient.cofactor24(level)?;
    if pre.rem_euclid(24) != 0 {
        return Err(EtaError::PrefactorNot24Divisible(pre));
    }
    if cof.rem_euclid(24) != 0 {
        return Err(EtaError::CofactorNot24Divisible(cof));
    }
    let weight2 = quotient.exponent_sum();
    if weight2.rem_euclid(2) != 0 {
        return Err(EtaError::HalfIntegralWeight(weight2));
    }
    Ok(FormSpace {
        weight: (weight2 / 2)
            .try_into()
            .expect("negative weight eta quotients are not modular forms"),
        level,
        character_disc: quotient.character_kernel(),
    })
}

/// Kronecker symbol (a | n), the Jacobi symbol extended to all integers.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    // Strip twos from n; each contributes (a | 2) = (-1)^((a^2-1)/8).
    let mut v = 0u32;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Jacobi loop on odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && matches!(n % 8, 3 | 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}
