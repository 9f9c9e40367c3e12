//! Small modular-arithmetic helpers shared across the crate.
//!
//! Everything here works on plain machine words. Moduli are arbitrary
//! (not necessarily prime) unless a function says otherwise; intermediate
//! products go through u128 so any modulus below 2^63 is safe.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `a * b mod m` without overflow for m < 2^63.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square and multiply. `0^0 = 1`.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` when gcd(a, m) = 1, via extended Euclid.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tmp_r = old_r - q * r;
        old_r = r;
        r = tmp_r;
        let tmp_s = old_s - q * s;
        old_s = s;
        s = tmp_s;
    }
    if old_r != 1 && old_r != -1 {
        return None;
    }
    let mut inv = old_s * old_r.signum();
    inv = inv.rem_euclid(m as i128);
    Some(inv as u64)
}

/// Deterministic Miller-Rabin for u64.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to
/// be exact for all n < 2^64 (Sorenson & Webster).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// pow_mod above assumes m < 2^63; primality testing must cover all of u64.
fn pow_mod_u128(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Primes in `[lo, hi)` in increasing order.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}

/// Euler's totient by trial-division factoring.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Prime factorization as (prime, multiplicity) pairs in increasing order
/// (trial division).
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_inverse() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        for m in [2u64, 3, 97, 1 << 40, (1 << 62) + 57] {
            for a in [1u64, 2, 3, 12345, 987654321] {
                if gcd(a % m, m) == 1 {
                    let inv = inv_mod(a % m, m).unwrap();
                    assert_eq!(mul_mod(a % m, inv, m), 1 % m);
                }
            }
        }
    }

    #[test]
    fn pow_mod_matches_naive() {
        for m in [2u64, 5, 31, 1000003] {
            for b in [0u64, 1, 2, 7, 19] {
                let mut expect = 1 % m;
                for e in 0..20u64 {
                    assert_eq!(pow_mod(b, e, m), expect);
                    expect = mul_mod(expect, b % m, m);
                }
            }
        }
    }

    #[test]
    fn primality_known_values() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(809));
        assert!(is_prime(1889));
        assert!(is_prime(1973));
        assert!(is_prime(2711));
        assert!(!is_prime(2047)); // 23 * 89, strong pseudoprime to base 2
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1u64 << 62) - 1));
        let below_100 = primes_in_range(0, 100);
        assert_eq!(below_100.len(), 25);
        assert_eq!(below_100[0], 2);
        assert_eq!(below_100[24], 97);
    }

    #[test]
    fn phi_divisors_factors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(256), 128);
        assert_eq!(euler_phi(3456), 1152);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(256).len(), 9);
        assert_eq!(prime_factors(3456), vec![(2, 7), (3, 3)]);
        assert_eq!(prime_factors(1), Vec::<(u64, u32)>::new());
    }
}
