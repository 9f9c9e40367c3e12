//! A battery of dissection and theta identities for b4.
//!
//! These tie the partition series to closed forms produced by entirely
//! different code paths (theta constructions, eta products, Kronecker
//! symbols), so they double as an end-to-end consistency check of the
//! series arithmetic. Exact identities are compared over a large prime
//! field; congruence identities are compared mod their stated modulus.
//! A disagreement reports the first differing coefficient.

use crate::etaq::kronecker;
use crate::fpseries::{
    eta_power_series, regular_partition_series, FpSeries, SeriesAgreement, SeriesError,
};
use serde::Serialize;

pub const DEFAULT_IDENTITY_TRUNCATION: usize = 2000;
pub const DEFAULT_CHECK_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    pub modulus: u64,
    pub checked_terms: usize,
    pub agreement: SeriesAgreement,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.agreement.is_agreement()
    }
}

/// phi(q) = 1 + 2 sum_{k >= 1} q^{k^2}.
pub fn theta_phi(modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut s = FpSeries::zero(modulus, len)?;
    s.set_coeff(0, 1);
    let mut k = 1u128;
    while k * k < len as u128 {
        s.set_coeff((k * k) as usize, 2);
        k += 1;
    }
    Ok(s)
}

/// phi(-q) = 1 + 2 sum_{k >= 1} (-1)^k q^{k^2}.
pub fn theta_phi_alternating(modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut s = FpSeries::zero(modulus, len)?;
    s.set_coeff(0, 1);
    let mut k = 1u128;
    while k * k < len as u128 {
        let v = if k % 2 == 1 { modulus - 2 % modulus } else { 2 };
        s.set_coeff((k * k) as usize, v);
        k += 1;
    }
    Ok(s)
}

/// psi(q) = sum_{k >= 0} q^{k(k+1)/2}.
pub fn theta_psi(modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut s = FpSeries::zero(modulus, len)?;
    let mut k = 0u128;
    while k * (k + 1) / 2 < len as u128 {
        s.set_coeff((k * (k + 1) / 2) as usize, 1);
        k += 1;
    }
    Ok(s)
}

/// sum_{j >= 1} kronecker(-6, j) j q^{(j^2 - 1)/24}; only j coprime to 6
/// contribute, and for those 24 | j^2 - 1.
pub fn theta_kronecker(modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut s = FpSeries::zero(modulus, len)?;
    let mut j = 1u128;
    while (j * j - 1) / 24 < len as u128 {
        let sign = kronecker(-6, j as i64);
        if sign != 0 {
            let v = (j as u64) % modulus;
            let v = if sign == 1 {
                v
            } else {
                (modulus - v) % modulus
            };
            s.set_coeff(((j * j - 1) / 24) as usize, v);
        }
        j += 1;
    }
    Ok(s)
}

fn eta_product(parts: &[(u64, i64)], modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut acc = FpSeries::one(modulus, len)?;
    for &(delta, r) in parts {
        acc = acc.mul(&eta_power_series(delta, r, modulus, len)?)?;
    }
    Ok(acc)
}

/// phi and psi at q^3, truncated to `len`.
fn dilated_thetas(modulus: u64, len: usize) -> Result<(FpSeries, FpSeries), SeriesError> {
    let short = len / 3 + 1;
    let phi3 = theta_phi(modulus, short)?.dilate(3)?.truncated(len)?;
    let psi3 = theta_psi(modulus, short)?.dilate(3)?.truncated(len)?;
    Ok((phi3, psi3))
}

/// Run the whole identity battery at truncation `len`, using `check_prime`
/// as the field for the exact identities.
pub fn identity_suite(len: usize, check_prime: u64) -> Result<Vec<IdentityResult>, SeriesError> {
    let p = check_prime;
    let mut out = Vec::with_capacity(7);
    let mut push = |name: &'static str, modulus: u64, agreement: SeriesAgreement| {
        out.push(IdentityResult {
            name,
            modulus,
            checked_terms: len,
            agreement,
        });
    };

    let b4_long = regular_partition_series(4, p, 9 * len + 8)?;

    // sum b4(9n + 7) q^n = 12 E2^4 E3^6 E4 / E1^11.
    let lhs = b4_long.progression(9, 7)?.truncated(len)?;
    let rhs = eta_product(&[(2, 4), (3, 6), (4, 1), (1, -11)], p, len)?.scale(12);
    push("b4_9n7_eta", p, lhs.compare_prefix(&rhs)?);

    // sum b4(3n) q^n = E4 E6^4 / (E1^3 E12^2).
    let lhs = b4_long.progression(3, 0)?.truncated(len)?;
    let rhs = eta_product(&[(4, 1), (6, 4), (1, -3), (12, -2)], p, len)?;
    push("b4_3n_eta", p, lhs.compare_prefix(&rhs)?);

    // E2^13 / (E1^5 E4^5) = sum kronecker(-6, j) j q^{(j^2-1)/24}.
    let lhs = eta_product(&[(2, 13), (1, -5), (4, -5)], p, len)?;
    let rhs = theta_kronecker(p, len)?;
    push("eta_kronecker_theta", p, lhs.compare_prefix(&rhs)?);

    // E1^2 / E2 = phi(-q).
    let lhs = eta_product(&[(1, 2), (2, -1)], p, len)?;
    let rhs = theta_phi_alternating(p, len)?;
    push("phi_neg_q", p, lhs.compare_prefix(&rhs)?);

    // sum b4(3n) q^n == (kronecker theta) * phi(-q)  (mod 3).
    let b4_mod3 = regular_partition_series(4, 3, 3 * len + 1)?;
    let lhs = b4_mod3.progression(3, 0)?.truncated(len)?;
    let rhs = theta_kronecker(3, len)?.mul(&theta_phi_alternating(3, len)?)?;
    push("b4_3n_mod3_double_theta", 3, lhs.compare_prefix(&rhs)?);

    // sum (-1)^n b4(3n + 1) q^n = phi(q^3) psi(q^3) / phi(q)^2.
    let raw = b4_long.progression(3, 1)?.truncated(len)?;
    let lhs = FpSeries::from_fn(p, len, |n| {
        if n % 2 == 1 {
            (p - raw.coeff(n)) % p
        } else {
            raw.coeff(n)
        }
    })?;
    let (phi3, psi3) = dilated_thetas(p, len)?;
    let phi_sq_inv = theta_phi(p, len)?.pow(-2)?;
    let rhs = phi3.mul(&psi3)?.mul(&phi_sq_inv)?;
    push("b4_3n1_phi_psi", p, lhs.compare_prefix(&rhs)?);

    // phi(q^3) psi(q^3) / phi(q)^2 == phi(q) psi(q^3)  (mod 3).
    let (phi3, psi3) = dilated_thetas(3, len)?;
    let lhs = phi3.mul(&psi3)?.mul(&theta_phi(3, len)?.pow(-2)?)?;
    let rhs = theta_phi(3, len)?.mul(&psi3)?;
    push("phi_psi_mod3", 3, lhs.compare_prefix(&rhs)?);

    Ok(out)
}
