//! Exact convolution of residue sequences via number-theoretic transforms.
//!
//! A product of series over Z/mZ is computed by convolving the coefficient
//! vectors exactly over the integers and reducing afterwards. The integer
//! convolution runs modulo one or more 31-bit primes p = c*2^s + 1 and is
//! reconstructed by CRT; primes are taken from a fixed table until their
//! product exceeds min_len*(m-1)^2, the largest value a true convolution
//! coefficient can reach, so the reconstruction is exact.
//!
//! Inputs of any length are cut into blocks of at most 2^24 coefficients.
//! Block pairs on one output diagonal are transformed at size 2^25,
//! multiplied pointwise, and accumulated in the frequency domain; a sliding
//! two-block carry window turns inverse transforms back into finished
//! coefficients one block at a time. Peak memory is therefore a few
//! transform-size buffers regardless of input length, which is what lets
//! series with ~10^8 coefficients multiply inside a 1 GB budget.
//!
//! Montgomery arithmetic stays strictly reduced (values in [0, p)); the
//! butterfly ordering follows the rate-table scheme of the AtCoder Library
//! convolution, which needs no bit-reversal pass and only O(log p) twiddle
//! state.

/// Coefficient storage types that convolution can work on.
pub(crate) trait Residue: Copy + Default + Send + Sync + 'static {
    fn to_u64(self) -> u64;
    fn from_u64(v: u64) -> Self;
}

impl Residue for u8 {
    #[inline(always)]
    fn to_u64(self) -> u64 {
        self as u64
    }
    #[inline(always)]
    fn from_u64(v: u64) -> Self {
        debug_assert!(v < 256);
        v as u8
    }
}

impl Residue for u64 {
    #[inline(always)]
    fn to_u64(self) -> u64 {
        self
    }
    #[inline(always)]
    fn from_u64(v: u64) -> Self {
        v
    }
}

/// The modulus is too large to convolve sequences of this length exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NttCapacityExceeded {
    pub modulus: u64,
    pub min_operand_len: usize,
}

/// NTT primes, largest first. All are = 1 mod 2^25, so every entry supports
/// the maximal transform size used by the blocked driver.
const PRIMES: [(u32, u32); 4] = [
    (2013265921, 31), // 15 * 2^27 + 1
    (1811939329, 13), // 27 * 2^26 + 1
    (469762049, 3),   // 7 * 2^26 + 1
    (167772161, 3),   // 5 * 2^25 + 1
];

const MAX_BLOCK: usize = 1 << 24;
const MAX_FFT: usize = 1 << 25;

/// Montgomery context for a fixed odd prime p < 2^31, R = 2^32.
#[derive(Clone, Copy)]
struct Mont32 {
    p: u32,
    /// -p^-1 mod 2^32.
    neg_inv: u32,
    /// 2^64 mod p, for conversion into Montgomery form.
    r2: u32,
}

impl Mont32 {
    fn new(p: u32) -> Self {
        // Inverse of p mod 2^32 by Newton lifting, then negate.
        let mut inv: u32 = 1;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r2 = ((1u128 << 64) % p as u128) as u32;
        Mont32 {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    /// Montgomery reduction of t < p * 2^32 into [0, p).
    #[inline(always)]
    fn reduce(self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.neg_inv);
        let u = ((t + m as u64 * self.p as u64) >> 32) as u32;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    #[inline(always)]
    fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b; // both < p < 2^31, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    fn to_mont(self, a: u32) -> u32 {
        debug_assert!(a < self.p);
        self.mul(a, self.r2)
    }

    #[inline(always)]
    fn demont(self, a: u32) -> u32 {
        self.reduce(a as u64)
    }

    fn one(self) -> u32 {
        self.to_mont(1)
    }

    fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(self, a: u32) -> u32 {
        self.pow(a, self.p as u64 - 2)
    }
}

/// Per-prime transform context: Montgomery state plus the rate tables that
/// supply twiddle updates between butterfly blocks.
struct PrimeCtx {
    mp: Mont32,
    rank2: u32,
    rate2: [u32; 32],
    irate2: [u32; 32],
}

impl PrimeCtx {
    fn new(p: u32, g: u32) -> Self {
        let mp = Mont32::new(p);
        let rank2 = (p - 1).trailing_zeros();
        let mut root = [0u32; 33];
        let mut iroot = [0u32; 33];
        root[rank2 as usize] = mp.pow(mp.to_mont(g), ((p - 1) >> rank2) as u64);
        iroot[rank2 as usize] = mp.inv(root[rank2 as usize]);
        for i in (0..rank2 as usize).rev() {
            root[i] = mp.mul(root[i + 1], root[i + 1]);
            iroot[i] = mp.mul(iroot[i + 1], iroot[i + 1]);
        }
        let mut rate2 = [0u32; 32];
        let mut irate2 = [0u32; 32];
        let mut prod = mp.one();
        let mut iprod = mp.one();
        for i in 0..=(rank2 as usize).saturating_sub(2) {
            rate2[i] = mp.mul(root[i + 2], prod);
            irate2[i] = mp.mul(iroot[i + 2], iprod);
            prod = mp.mul(prod, iroot[i + 2]);
            iprod = mp.mul(iprod, root[i + 2]);
        }
        PrimeCtx {
            mp,
            rank2,
            rate2,
            irate2,
        }
    }

    /// In-place forward transform; the output ordering is the fixed point of
    /// the matching inverse below, not natural order.
    fn forward(&self, a: &mut [u32]) {
        let n = a.len();
        let h = n.trailing_zeros();
        debug_assert_eq!(n, 1 << h);
        debug_assert!(h <= self.rank2);
        let mp = self.mp;
        for len in 0..h {
            let half = 1usize << (h - 1 - len);
            let mut rot = mp.one();
            for s in 0..(1u32 << len) {
                let offset = (s as usize) << (h - len);
                for i in offset..offset + half {
                    let l = a[i];
                    let r = mp.mul(a[i + half], rot);
                    a[i] = mp.add(l, r);
                    a[i + half] = mp.sub(l, r);
                }
                if s + 1 != (1 << len) {
                    rot = mp.mul(rot, self.rate2[(!s).trailing_zeros() as usize]);
                }
            }
        }
    }

    /// In-place inverse of `forward`, up to the factor n which the caller
    /// folds into extraction.
    fn inverse(&self, a: &mut [u32]) {
        let n = a.len();
        let h = n.trailing_zeros();
        debug_assert_eq!(n, 1 << h);
        let mp = self.mp;
        for len in (1..=h).rev() {
            let half = 1usize << (h - len);
            let mut irot = mp.one();
            for s in 0..(1u32 << (len - 1)) {
                let offset = (s as usize) << (h - len + 1);
                for i in offset..offset + half {
                    let l = a[i];
                    let r = a[i + half];
                    a[i] = mp.add(l, r);
                    a[i + half] = mp.mul(mp.sub(l, r), irot);
                }
                if s + 1 != (1 << (len - 1)) {
                    irot = mp.mul(irot, self.irate2[(!s).trailing_zeros() as usize]);
                }
            }
        }
    }
}

/// Number of table primes needed so their product exceeds the largest
/// possible true convolution coefficient.
fn prime_count_for(modulus: u64, min_len: usize) -> Option<usize> {
    if min_len == 0 {
        return Some(1);
    }
    let per_term = (modulus as u128 - 1).saturating_mul(modulus as u128 - 1);
    let bound = per_term.saturating_mul(min_len as u128);
    let mut acc: u128 = 1;
    for (count, &(p, _)) in PRIMES.iter().enumerate() {
        acc = acc.saturating_mul(p as u128);
        if acc > bound {
            return Some(count + 1);
        }
    }
    None
}

/// Reconstruct the integer with the given residues (one per table prime in
/// order) and reduce it mod m. Garner's mixed-radix walk; everything fits in
/// u128 because at most four 31-bit primes take part.
struct Crt {
    count: usize,
    /// prefix_mod_p[i][j] = (p_0 * .. * p_{j-1}) mod p_i
    prefix_mod_p: [[u64; 4]; 4],
    /// inverse of (p_0 * .. * p_{i-1}) mod p_i
    inv_prefix: [u64; 4],
    /// (p_0 * .. * p_{j-1}) mod m
    prefix_mod_m: [u64; 4],
    primes: [u64; 4],
    modulus: u64,
}

impl Crt {
    fn new(count: usize, modulus: u64) -> Self {
        let mut c = Crt {
            count,
            prefix_mod_p: [[0; 4]; 4],
            inv_prefix: [0; 4],
            prefix_mod_m: [0; 4],
            primes: [0; 4],
            modulus,
        };
        for i in 0..count {
            c.primes[i] = PRIMES[i].0 as u64;
        }
        for i in 0..count {
            let pi = c.primes[i];
            let mut pref: u64 = 1 % pi;
            for j in 0..count {
                c.prefix_mod_p[i][j] = pref;
                pref = pref * c.primes[j] % pi;
            }
            c.inv_prefix[i] = crate::arith::inv_mod(c.prefix_mod_p[i][i], pi).unwrap();
        }
        let mut pref_m: u64 = 1 % modulus;
        for j in 0..count {
            c.prefix_mod_m[j] = pref_m;
            pref_m = crate::arith::mul_mod(pref_m, c.primes[j] % modulus, modulus);
        }
        c
    }

    #[inline]
    fn combine(&self, residues: &[u32; 4]) -> u64 {
        if self.count == 1 {
            return residues[0] as u64 % self.modulus;
        }
        let mut digits = [0u64; 4];
        for i in 0..self.count {
            let pi = self.primes[i];
            let mut acc: u128 = 0;
            for j in 0..i {
                acc += digits[j] as u128 * self.prefix_mod_p[i][j] as u128;
            }
            let partial = (acc % pi as u128) as u64;
            let mut t = residues[i] as u64 % pi;
            if t < partial {
                t += pi;
            }
            digits[i] = crate::arith::mul_mod(t - partial, self.inv_prefix[i], pi);
        }
        let mut acc: u128 = 0;
        for j in 0..self.count {
            acc += digits[j] as u128 * self.prefix_mod_m[j] as u128;
        }
        (acc % self.modulus as u128) as u64
    }
}

/// Exact truncated convolution of residue vectors mod m.
///
/// Returns `out_len` coefficients of (a * b) with every coefficient reduced
/// mod m. Fails only when the modulus is so large that the fixed prime table
/// cannot bound the integer coefficients (or, for inputs long enough to need
/// blocking, when more than two primes would be required, which would break
/// the memory envelope the blocked path is there to protect).
pub(crate) fn convolve<T: Residue>(
    a: &[T],
    b: &[T],
    out_len: usize,
    modulus: u64,
) -> Result<Vec<T>, NttCapacityExceeded> {
    let la = a.len().min(out_len);
    let lb = b.len().min(out_len);
    if out_len == 0 {
        return Ok(Vec::new());
    }
    if la == 0 || lb == 0 {
        return Ok(vec![T::from_u64(0); out_len]);
    }
    let block = MAX_BLOCK.min(la.max(lb).next_power_of_two());
    convolve_blocked(&a[..la], &b[..lb], out_len, modulus, block)
}

/// Blocked convolution driver with an explicit block size (power of two,
/// at most 2^24). Exposed at crate level so tests can exercise the diagonal
/// and carry logic with tiny blocks.
pub(crate) fn convolve_blocked<T: Residue>(
    a: &[T],
    b: &[T],
    out_len: usize,
    modulus: u64,
    block: usize,
) -> Result<Vec<T>, NttCapacityExceeded> {
    assert!(block.is_power_of_two() && block <= MAX_BLOCK);
    let la = a.len().min(out_len);
    let lb = b.len().min(out_len);
    let a = &a[..la];
    let b = &b[..lb];
    let fft = 2 * block;
    debug_assert!(fft <= MAX_FFT);

    let capacity_err = NttCapacityExceeded {
        modulus,
        min_operand_len: la.min(lb),
    };
    let count = prime_count_for(modulus, la.min(lb)).ok_or(capacity_err)?;
    let multi_block = la.max(lb) > block;
    if multi_block && count > 2 {
        // More primes would mean more carry windows; the long-series path is
        // reserved for small moduli where one or two primes always suffice.
        return Err(capacity_err);
    }

    let ctxs: Vec<PrimeCtx> = PRIMES[..count]
        .iter()
        .map(|&(p, g)| PrimeCtx::new(p, g))
        .collect();
    let crt = Crt::new(count, modulus);

    let nb_a = la.div_ceil(block);
    let nb_b = lb.div_ceil(block);
    let d_max = (out_len - 1) / block;

    let mut fa = vec![0u32; fft];
    let mut fb = vec![0u32; fft];
    let mut acc = vec![0u32; fft];
    // carry[k] covers absolute output range [d*block, d*block + fft).
    let mut carries: Vec<Vec<u32>> = (0..count).map(|_| vec![0u32; fft]).collect();
    let mut out: Vec<T> = Vec::with_capacity(out_len);

    for d in 0..=d_max {
        for (k, ctx) in ctxs.iter().enumerate() {
            let mp = ctx.mp;
            acc.fill(0);
            let mut any = false;
            let i_lo = (d + 1).saturating_sub(nb_b);
            for i in i_lo..nb_a.min(d + 1) {
                let j = d - i;
                debug_assert!(j < nb_b);
                lift_block(&a[i * block..la.min((i + 1) * block)], &mut fa, mp);
                ctx.forward(&mut fa);
                lift_block(&b[j * block..lb.min((j + 1) * block)], &mut fb, mp);
                ctx.forward(&mut fb);
                for t in 0..fft {
                    acc[t] = mp.add(acc[t], mp.mul(fa[t], fb[t]));
                }
                any = true;
            }
            if any {
                ctx.inverse(&mut acc);
                let n_inv = mp.inv(mp.to_mont(fft as u32));
                let carry = &mut carries[k];
                for t in 0..fft {
                    let v = mp.demont(mp.mul(acc[t], n_inv));
                    carry[t] = mp.add(carry[t], v);
                }
            }
        }
        // Output range [d*block, (d+1)*block) can no longer receive
        // contributions: emit it and slide every carry window down a block.
        let seg_start = d * block;
        let seg_len = block.min(out_len - seg_start);
        let mut residues = [0u32; 4];
        for t in 0..seg_len {
            for k in 0..count {
                residues[k] = carries[k][t];
            }
            out.push(T::from_u64(crt.combine(&residues)));
        }
        for carry in carries.iter_mut() {
            carry.copy_within(block.., 0);
            carry[block..].fill(0);
        }
    }
    debug_assert_eq!(out.len(), out_len);
    Ok(out)
}

#[inline]
fn lift_block<T: Residue>(src: &[T], dst: &mut [u32], mp: Mont32) {
    let p = mp.p as u64;
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        let v = s.to_u64();
        let v = if v >= p { (v % p) as u32 } else { v as u32 };
        *d = mp.to_mont(v);
    }
    dst[src.len()..].fill(0);
}
