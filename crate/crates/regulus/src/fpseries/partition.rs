//! Partition counting: an exact small-n oracle and truncated series mod m.
//!
//! The k-regular partition function b_k(n) counts partitions of n with no
//! part divisible by k. Its generating function is
//!
//! ```text
//!   sum b_k(n) q^n = (q^k; q^k)_inf / (q; q)_inf,
//! ```
//!
//! a quotient of two Euler products. Both are pentagonal-number sparse by
//! Euler's theorem, (q;q)_inf = sum_j (-1)^j q^{j(3j-1)/2} over j in Z, which
//! gives two independent routes to the coefficients mod m:
//!
//! * fast path: Newton-invert the dense denominator, then one NTT product
//!   with the dilated numerator, O(N log N);
//! * recurrence path: solve b * (q;q)_inf = (q^k;q^k)_inf term by term using
//!   only the O(sqrt N) pentagonal terms per coefficient, O(N sqrt N).
//!
//! The two share no multiplication code, so their agreement is a meaningful
//! cross-check, and both are pinned for small n against [`bk_exact`], a
//! direct bounded dynamic program that never touches series arithmetic.

use super::{FpSeries, SeriesAgreement, SeriesError};
use crate::arith::is_prime;

/// Largest n for which [`bk_exact`] is guaranteed to fit in u64 comfortably.
pub const BK_EXACT_LIMIT: u64 = 60;

/// b_k(n) computed exactly by dynamic programming over parts, no series
/// arithmetic involved. Panics if k < 2 or n exceeds [`BK_EXACT_LIMIT`].
pub fn bk_exact(k: u64, n: u64) -> u64 {
    assert!(k >= 2, "k-regular partitions need k >= 2");
    assert!(
        n <= BK_EXACT_LIMIT,
        "bk_exact is an oracle for n <= {BK_EXACT_LIMIT}"
    );
    let n = n as usize;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        if part as u64 % k == 0 {
            continue;
        }
        for s in part..=n {
            ways[s] += ways[s - part];
        }
    }
    ways[n]
}

/// Generalized pentagonal numbers j(3j-1)/2 with their signs (-1)^j,
/// ascending, strictly below `limit`.
fn pentagonal_terms(limit: usize) -> Vec<(usize, bool)> {
    let mut out = vec![(0usize, false)];
    let mut j = 1usize;
    loop {
        let a = j * (3 * j - 1) / 2;
        let b = j * (3 * j + 1) / 2;
        let neg = j % 2 == 1;
        if a >= limit {
            break;
        }
        out.push((a, neg));
        if b < limit {
            out.push((b, neg));
        }
        j += 1;
    }
    out
}

/// (q; q)_inf mod m, truncated to `len`, via the pentagonal number theorem.
pub fn euler_series(modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    let mut s = FpSeries::zero(modulus, len)?;
    for (idx, neg) in pentagonal_terms(len) {
        s.set_coeff(idx, if neg { modulus - 1 } else { 1 });
    }
    Ok(s)
}

/// (q^delta; q^delta)_inf ^ r mod m, truncated to `len`. The q-power
/// prefactor of the eta function is not included here; see
/// [`eta_quotient_expansion`](super::eta_quotient_expansion) for that
/// bookkeeping.
pub fn eta_power_series(
    delta: u64,
    r: i64,
    modulus: u64,
    len: usize,
) -> Result<FpSeries, SeriesError> {
    if delta == 0 {
        return Err(SeriesError::ZeroStep);
    }
    if r == 0 {
        return FpSeries::one(modulus, len);
    }
    let delta = delta as usize;
    let mut base = FpSeries::zero(modulus, len)?;
    for (idx, neg) in pentagonal_terms((len - 1) / delta + 1) {
        base.set_coeff(idx * delta, if neg { modulus - 1 } else { 1 });
    }
    match r {
        1 => Ok(base),
        -1 => base.invert(),
        _ => base.pow(r),
    }
}

/// sum b_k(n) q^n mod m to `len` coefficients: Newton inversion of the
/// denominator followed by one product with the sparse dilated numerator.
pub fn regular_partition_series(k: u64, modulus: u64, len: usize) -> Result<FpSeries, SeriesError> {
    assert!(k >= 2, "k-regular partitions need k >= 2");
    let denominator_inverse = euler_series(modulus, len)?.invert()?;
    let numerator = eta_power_series(k, 1, modulus, len)?;
    numerator.mul(&denominator_inverse)
}

/// Same series as [`regular_partition_series`], computed instead by the
/// pentagonal recurrence
///
/// ```text
///   b_k(n) = e_k(n) - sum_{0 < g <= n} eps(g) b_k(n - g)
/// ```
///
/// where eps(g) are the coefficients of (q;q)_inf and e_k those of
/// (q^k;q^k)_inf. No polynomial multiplication is involved, which makes
/// this an independent witness for the fast path.
pub fn regular_partition_series_recurrence(
    k: u64,
    modulus: u64,
    len: usize,
) -> Result<FpSeries, SeriesError> {
    assert!(k >= 2, "k-regular partitions need k >= 2");
    let m = modulus;
    FpSeries::zero(m, len)?; // validate modulus and length up front
    let pents: Vec<(usize, bool)> = pentagonal_terms(len)
        .into_iter()
        .filter(|&(g, _)| g > 0)
        .collect();
    let k = k as usize;
    let mut numer = vec![0u64; len];
    for (g, neg) in pentagonal_terms((len - 1) / k + 1) {
        numer[g * k] = if neg { m - 1 } else { 1 };
    }
    let mut b = vec![0u64; len];
    for n in 0..len {
        // Split the convolution sum by sign so byte-size residues can be
        // accumulated without per-term reduction.
        let mut pos = 0u64;
        let mut neg_acc = 0u64;
        let small = m < 256;
        for &(g, neg) in pents.iter().take_while(|&&(g, _)| g <= n) {
            let term = b[n - g];
            let bucket = if neg { &mut pos } else { &mut neg_acc };
            if small {
                *bucket += term;
            } else {
                *bucket = (*bucket + term) % m;
            }
        }
        b[n] = ((numer[n] + pos % m + m) - neg_acc % m) % m;
    }
    FpSeries::from_u64_coeffs(m, &b)
}

/// Check the Frobenius congruence (q;q)_inf^p == (q^p;q^p)_inf mod p on a
/// prefix of length `len`. Requires p prime.
pub fn frobenius_congruence_check(p: u64, len: usize) -> Result<SeriesAgreement, SeriesError> {
    if !is_prime(p) {
        return Err(SeriesError::PrimeRequired(p));
    }
    let lhs = eta_power_series(1, p as i64, p, len)?;
    let rhs = eta_power_series(p, 1, p, len)?;
    lhs.compare_prefix(&rhs)
}
