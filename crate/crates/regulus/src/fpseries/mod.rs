//! Dense truncated power series over Z/mZ.
//!
//! A series carries its modulus and a coefficient vector `c[0..N)`; N is the
//! truncation, i.e. the series is known mod q^N. Coefficients live in one
//! byte each when m < 256 (the only storage that keeps ~10^8-term series
//! affordable) and in a u64 word otherwise, so the same type serves both
//! partition series mod tiny primes and identity checking mod a word-size
//! prime.
//!
//! Products are truncated to the shorter operand: that is the information
//! limit, since an unknown tail on either side contaminates everything
//! beyond it. Multiplication dispatches between schoolbook and the blocked
//! NTT of [`ntt`] at a fixed length threshold; inversion is Newton's
//! iteration with precision doubling and a final trim.

pub mod cache;
mod ntt;
mod partition;
mod qexp;

pub use partition::{
    bk_exact, eta_power_series, euler_series, frobenius_congruence_check, regular_partition_series,
    regular_partition_series_recurrence, BK_EXACT_LIMIT,
};
pub use qexp::{eta_quotient_expansion, QExpansion};

use ntt::Residue;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Result length at or below which schoolbook multiplication is used.
pub const DEFAULT_MUL_THRESHOLD: usize = 1024;

/// Largest supported modulus (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("modulus {0} unsupported; need 2 <= m < 2^63")]
    InvalidModulus(u64),
    #[error("truncation length must be at least 1")]
    EmptyTruncation,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("constant term {constant} is not invertible mod {modulus}")]
    NonInvertibleConstant { constant: u64, modulus: u64 },
    #[error("requested truncation overflows the address space")]
    TruncationOverflow,
    #[error("progression offset {offset} is not below the truncation {len}")]
    OffsetBeyondTruncation { offset: usize, len: usize },
    #[error("modulus {modulus} too large for exact convolution with operands of length {min_operand_len}")]
    ConvolutionCapacity {
        modulus: u64,
        min_operand_len: usize,
    },
    #[error("step or dilation factor must be at least 1")]
    ZeroStep,
    #[error("modulus {0} must be prime for this operation")]
    PrimeRequired(u64),
}

impl From<ntt::NttCapacityExceeded> for SeriesError {
    fn from(e: ntt::NttCapacityExceeded) -> Self {
        SeriesError::ConvolutionCapacity {
            modulus: e.modulus,
            min_operand_len: e.min_operand_len,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Coeffs {
    Bytes(Vec<u8>),
    Words(Vec<u64>),
}

/// Truncated power series over Z/mZ.
#[derive(Clone, PartialEq, Eq)]
pub struct FpSeries {
    modulus: u64,
    coeffs: Coeffs,
}

/// Outcome of comparing two series on their common prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SeriesAgreement {
    Agree { checked: usize },
    Differ { index: usize, left: u64, right: u64 },
}

impl SeriesAgreement {
    pub fn is_agreement(&self) -> bool {
        matches!(self, SeriesAgreement::Agree { .. })
    }
}

fn check_modulus(m: u64) -> Result<(), SeriesError> {
    if m < 2 || m >= MODULUS_LIMIT {
        Err(SeriesError::InvalidModulus(m))
    } else {
        Ok(())
    }
}

impl FpSeries {
    fn uses_bytes(modulus: u64) -> bool {
        modulus < 256
    }

    /// The zero series to truncation `len`.
    pub fn zero(modulus: u64, len: usize) -> Result<Self, SeriesError> {
        check_modulus(modulus)?;
        if len == 0 {
            return Err(SeriesError::EmptyTruncation);
        }
        let coeffs = if Self::uses_bytes(modulus) {
            Coeffs::Bytes(vec![0u8; len])
        } else {
            Coeffs::Words(vec![0u64; len])
        };
        Ok(FpSeries { modulus, coeffs })
    }

    /// The constant series 1 to truncation `len`.
    pub fn one(modulus: u64, len: usize) -> Result<Self, SeriesError> {
        let mut s = Self::zero(modulus, len)?;
        s.set_coeff(0, 1);
        Ok(s)
    }

    /// Series with each coefficient produced by `f(n)` and reduced mod m.
    pub fn from_fn(
        modulus: u64,
        len: usize,
        mut f: impl FnMut(usize) -> u64,
    ) -> Result<Self, SeriesError> {
        check_modulus(modulus)?;
        if len == 0 {
            return Err(SeriesError::EmptyTruncation);
        }
        let coeffs = if Self::uses_bytes(modulus) {
            Coeffs::Bytes((0..len).map(|n| (f(n) % modulus) as u8).collect())
        } else {
            Coeffs::Words((0..len).map(|n| f(n) % modulus).collect())
        };
        Ok(FpSeries { modulus, coeffs })
    }

    /// Series from explicit coefficients, reduced mod m.
    pub fn from_u64_coeffs(modulus: u64, coeffs: &[u64]) -> Result<Self, SeriesError> {
        Self::from_fn(modulus, coeffs.len(), |n| coeffs[n])
    }

    /// Series from signed coefficients, reduced into [0, m).
    pub fn from_i64_coeffs(modulus: u64, coeffs: &[i64]) -> Result<Self, SeriesError> {
        check_modulus(modulus)?;
        Self::from_fn(modulus, coeffs.len(), |n| {
            coeffs[n].rem_euclid(modulus as i64) as u64
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Truncation: the number of known coefficients.
    pub fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Bytes(v) => v.len(),
            Coeffs::Words(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficient of q^i. Panics if `i` is at or beyond the truncation;
    /// coefficients past the truncation are unknown, not zero.
    pub fn coeff(&self, i: usize) -> u64 {
        match &self.coeffs {
            Coeffs::Bytes(v) => v[i] as u64,
            Coeffs::Words(v) => v[i],
        }
    }

    /// Overwrite one coefficient (value reduced mod m).
    pub fn set_coeff(&mut self, i: usize, value: u64) {
        let v = value % self.modulus;
        match &mut self.coeffs {
            Coeffs::Bytes(vec) => vec[i] = v as u8,
            Coeffs::Words(vec) => vec[i] = v,
        }
    }

    /// Coefficients as raw bytes when the modulus is below 256.
    pub fn as_bytes(&self) -> Option<&[u8]> {
        match &self.coeffs {
            Coeffs::Bytes(v) => Some(v),
            Coeffs::Words(_) => None,
        }
    }

    pub fn iter_u64(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.coeffs {
            Coeffs::Bytes(v) => Box::new(v.iter().map(|&b| b as u64)),
            Coeffs::Words(v) => Box::new(v.iter().copied()),
        }
    }

    pub fn to_u64_vec(&self) -> Vec<u64> {
        self.iter_u64().collect()
    }

    /// Prefix of length `min(len, self.len())`.
    pub fn truncated(&self, len: usize) -> Result<Self, SeriesError> {
        if len == 0 {
            return Err(SeriesError::EmptyTruncation);
        }
        let n = len.min(self.len());
        let coeffs = match &self.coeffs {
            Coeffs::Bytes(v) => Coeffs::Bytes(v[..n].to_vec()),
            Coeffs::Words(v) => Coeffs::Words(v[..n].to_vec()),
        };
        Ok(FpSeries {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.coeffs {
            Coeffs::Bytes(v) => v.iter().position(|&c| c != 0),
            Coeffs::Words(v) => v.iter().position(|&c| c != 0),
        }
    }

    fn require_same_modulus(&self, other: &Self) -> Result<(), SeriesError> {
        if self.modulus != other.modulus {
            Err(SeriesError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            })
        } else {
            Ok(())
        }
    }

    /// Compare on the common prefix.
    pub fn compare_prefix(&self, other: &Self) -> Result<SeriesAgreement, SeriesError> {
        self.require_same_modulus(other)?;
        let n = self.len().min(other.len());
        for i in 0..n {
            let (l, r) = (self.coeff(i), other.coeff(i));
            if l != r {
                return Ok(SeriesAgreement::Differ {
                    index: i,
                    left: l,
                    right: r,
                });
            }
        }
        Ok(SeriesAgreement::Agree { checked: n })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.elementwise(other, |a, b, m| (a + b) % m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.elementwise(other, |a, b, m| (a + m - b) % m)
    }

    fn elementwise(
        &self,
        other: &Self,
        op: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<Self, SeriesError> {
        self.require_same_modulus(other)?;
        let n = self.len().min(other.len());
        let m = self.modulus;
        FpSeries::from_fn(m, n, |i| op(self.coeff(i), other.coeff(i), m))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        FpSeries::from_fn(m, self.len(), |i| (m - self.coeff(i)) % m).expect("same shape")
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = c % m;
        FpSeries::from_fn(m, self.len(), |i| {
            crate::arith::mul_mod(self.coeff(i), c, m)
        })
        .expect("same shape")
    }

    /// Product truncated to the shorter operand, dispatching between
    /// schoolbook and NTT at [`DEFAULT_MUL_THRESHOLD`].
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_with_threshold(other, DEFAULT_MUL_THRESHOLD)
    }

    /// Like [`mul`](Self::mul) with an explicit strategy threshold.
    pub fn mul_with_threshold(&self, other: &Self, threshold: usize) -> Result<Self, SeriesError> {
        self.require_same_modulus(other)?;
        let out_len = self.len().min(other.len());
        if out_len <= threshold {
            self.mul_schoolbook(other)
        } else {
            self.mul_ntt(other)
        }
    }

    /// Quadratic-time product; exact for any supported modulus and length.
    pub fn mul_schoolbook(&self, other: &Self) -> Result<Self, SeriesError> {
        self.require_same_modulus(other)?;
        let out_len = self.len().min(other.len());
        let m = self.modulus;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Bytes(a), Coeffs::Bytes(b)) => {
                Coeffs::Bytes(schoolbook_bytes(a, b, out_len, m))
            }
            (Coeffs::Words(a), Coeffs::Words(b)) => {
                Coeffs::Words(schoolbook_words(a, b, out_len, m))
            }
            _ => unreachable!("storage follows modulus and moduli are equal"),
        };
        Ok(FpSeries { modulus: m, coeffs })
    }

    /// NTT product; exact, equal to schoolbook coefficient for coefficient.
    pub fn mul_ntt(&self, other: &Self) -> Result<Self, SeriesError> {
        self.require_same_modulus(other)?;
        let out_len = self.len().min(other.len());
        let m = self.modulus;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Bytes(a), Coeffs::Bytes(b)) => Coeffs::Bytes(ntt::convolve(a, b, out_len, m)?),
            (Coeffs::Words(a), Coeffs::Words(b)) => Coeffs::Words(ntt::convolve(a, b, out_len, m)?),
            _ => unreachable!("storage follows modulus and moduli are equal"),
        };
        Ok(FpSeries { modulus: m, coeffs })
    }

    /// Multiplicative inverse by Newton iteration, truncated like the input.
    /// Requires an invertible constant term.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let m = self.modulus;
        let coeffs = match &self.coeffs {
            Coeffs::Bytes(a) => Coeffs::Bytes(invert_impl(a, m)?),
            Coeffs::Words(a) => Coeffs::Words(invert_impl(a, m)?),
        };
        Ok(FpSeries { modulus: m, coeffs })
    }

    /// Integer power, with negative exponents routed through `invert`.
    pub fn pow(&self, exp: i64) -> Result<Self, SeriesError> {
        if exp < 0 {
            let positive = self.pow(exp.checked_neg().ok_or(SeriesError::TruncationOverflow)?)?;
            return positive.invert();
        }
        let mut acc = FpSeries::one(self.modulus, self.len())?;
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// U(j): keep every j-th coefficient, a(n) -> a(jn).
    pub fn u_operator(&self, j: usize) -> Result<Self, SeriesError> {
        if j == 0 {
            return Err(SeriesError::ZeroStep);
        }
        let out_len = (self.len() - 1) / j + 1;
        FpSeries::from_fn(self.modulus, out_len, |i| self.coeff(i * j))
    }

    /// V(j) or dilation: substitute q -> q^j. A series known to precision N
    /// determines the dilation to precision N*j.
    pub fn dilate(&self, j: usize) -> Result<Self, SeriesError> {
        if j == 0 {
            return Err(SeriesError::ZeroStep);
        }
        let out_len = self
            .len()
            .checked_mul(j)
            .ok_or(SeriesError::TruncationOverflow)?;
        let mut out = FpSeries::zero(self.modulus, out_len)?;
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Bytes(dst), Coeffs::Bytes(src)) => {
                for (i, &c) in src.iter().enumerate() {
                    dst[i * j] = c;
                }
            }
            (Coeffs::Words(dst), Coeffs::Words(src)) => {
                for (i, &c) in src.iter().enumerate() {
                    dst[i * j] = c;
                }
            }
            _ => unreachable!(),
        }
        Ok(out)
    }

    /// Coefficients along the arithmetic progression `step*n + offset`.
    pub fn progression(&self, step: usize, offset: usize) -> Result<Self, SeriesError> {
        if step == 0 {
            return Err(SeriesError::ZeroStep);
        }
        if offset >= self.len() {
            return Err(SeriesError::OffsetBeyondTruncation {
                offset,
                len: self.len(),
            });
        }
        let out_len = (self.len() - 1 - offset) / step + 1;
        FpSeries::from_fn(self.modulus, out_len, |i| self.coeff(offset + i * step))
    }

    /// SHA-256 of a canonical encoding (modulus, truncation, coefficients),
    /// as lowercase hex. Stable across runs and platforms.
    pub fn digest_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"QSERH1");
        h.update(self.modulus.to_le_bytes());
        h.update((self.len() as u64).to_le_bytes());
        match &self.coeffs {
            Coeffs::Bytes(v) => h.update(v),
            Coeffs::Words(v) => {
                for w in v {
                    h.update(w.to_le_bytes());
                }
            }
        }
        let digest = h.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }
}

impl std::fmt::Debug for FpSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let head: Vec<u64> = self.iter_u64().take(8).collect();
        write!(
            f,
            "FpSeries(mod {}, len {}, coeffs {:?}{})",
            self.modulus,
            self.len(),
            head,
            if self.len() > 8 { ", .." } else { "" }
        )
    }
}

fn schoolbook_bytes(a: &[u8], b: &[u8], out_len: usize, m: u64) -> Vec<u8> {
    // Products of byte residues fit 16 bits; a u64 accumulator cannot
    // overflow until ~2^48 terms, far beyond any addressable length.
    let mut acc = vec![0u64; out_len];
    for (i, &x) in a.iter().enumerate().take(out_len) {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        let jmax = (out_len - i).min(b.len());
        for (j, &y) in b[..jmax].iter().enumerate() {
            acc[i + j] += x * y as u64;
        }
    }
    acc.iter().map(|&v| (v % m) as u8).collect()
}

fn schoolbook_words(a: &[u64], b: &[u64], out_len: usize, m: u64) -> Vec<u64> {
    let mut acc = vec![0u64; out_len];
    let m128 = m as u128;
    for (i, &x) in a.iter().enumerate().take(out_len) {
        if x == 0 {
            continue;
        }
        let jmax = (out_len - i).min(b.len());
        for (j, &y) in b[..jmax].iter().enumerate() {
            let t = (acc[i + j] as u128 + x as u128 * y as u128 % m128) % m128;
            acc[i + j] = t as u64;
        }
    }
    acc
}

fn invert_impl<T: Residue>(a: &[T], m: u64) -> Result<Vec<T>, SeriesError> {
    let n = a.len();
    if n == 0 {
        return Err(SeriesError::EmptyTruncation);
    }
    let c0 = a[0].to_u64();
    let inv0 = crate::arith::inv_mod(c0, m).ok_or(SeriesError::NonInvertibleConstant {
        constant: c0,
        modulus: m,
    })?;
    let mut b = vec![T::from_u64(inv0)];
    let mut s = 1usize;
    let two = 2 % m;
    while s < n {
        let s2 = (2 * s).min(n);
        // t = a * b to precision s2; then b <- b * (2 - t).
        let t = ntt::convolve(&a[..s2.min(n)], &b, s2, m)?;
        let w: Vec<T> = t
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let base = if i == 0 { two } else { 0 };
                T::from_u64((base + m - c.to_u64()) % m)
            })
            .collect();
        b = ntt::convolve(&b, &w, s2, m)?;
        s = s2;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_reduction() {
        let s = FpSeries::from_i64_coeffs(5, &[1, -1, 6, -6]).unwrap();
        assert_eq!(s.to_u64_vec(), vec![1, 4, 1, 4]);
        assert!(s.as_bytes().is_some());
        let w = FpSeries::from_u64_coeffs((1 << 31) - 1, &[1, 2]).unwrap();
        assert!(w.as_bytes().is_none());
        assert!(FpSeries::zero(1, 4).is_err());
        assert!(FpSeries::zero(u64::MAX, 4).is_err());
        assert!(FpSeries::zero(7, 0).is_err());
    }

    #[test]
    fn product_of_one_plus_and_minus_q() {
        // (1+q)(1-q) = 1 - q^2 which is [1, 0, 4] mod 5.
        let a = FpSeries::from_i64_coeffs(5, &[1, 1, 0]).unwrap();
        let b = FpSeries::from_i64_coeffs(5, &[1, -1, 0]).unwrap();
        assert_eq!(a.mul(&b).unwrap().to_u64_vec(), vec![1, 0, 4]);
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = FpSeries::one(7, 10).unwrap();
        let b = FpSeries::one(7, 4).unwrap();
        assert_eq!(a.mul(&b).unwrap().len(), 4);
        assert_eq!(a.add(&b).unwrap().len(), 4);
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        let a = FpSeries::one(7, 4).unwrap();
        let b = FpSeries::one(5, 4).unwrap();
        assert_eq!(
            a.mul(&b),
            Err(SeriesError::ModulusMismatch { left: 7, right: 5 })
        );
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1-q) = 1 + q + q^2 + ... mod 7.
        let a = FpSeries::from_i64_coeffs(7, &[1, -1, 0, 0]).unwrap();
        assert_eq!(a.invert().unwrap().to_u64_vec(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn inverse_roundtrip_various_moduli() {
        // Includes composite moduli; only the constant term must be a unit.
        for m in [2u64, 3, 15, 100, 251, (1 << 31) - 1] {
            let mut state = 0xabcdef1234567891u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            let coeffs: Vec<u64> = std::iter::once(1)
                .chain((1..97).map(|_| next() % m))
                .collect();
            let a = FpSeries::from_u64_coeffs(m, &coeffs).unwrap();
            let inv = a.invert().unwrap();
            let mut expect = vec![0u64; coeffs.len()];
            expect[0] = 1;
            assert_eq!(a.mul(&inv).unwrap().to_u64_vec(), expect, "m={m}");
        }
    }

    #[test]
    fn non_invertible_constant_is_an_error() {
        let a = FpSeries::from_u64_coeffs(15, &[3, 1, 1]).unwrap();
        assert_eq!(
            a.invert(),
            Err(SeriesError::NonInvertibleConstant {
                constant: 3,
                modulus: 15
            })
        );
    }

    #[test]
    fn pow_and_negative_pow() {
        let a = FpSeries::from_i64_coeffs(11, &[1, 3, 0, 0, 0]).unwrap();
        // (1+3q)^2 = 1 + 6q + 9q^2
        assert_eq!(a.pow(2).unwrap().to_u64_vec(), vec![1, 6, 9, 0, 0]);
        let back = a.pow(3).unwrap().mul(&a.pow(-3).unwrap()).unwrap();
        assert_eq!(back.to_u64_vec(), vec![1, 0, 0, 0, 0]);
        assert_eq!(a.pow(0).unwrap().to_u64_vec(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn u_operator_keeps_every_jth() {
        let a = FpSeries::from_u64_coeffs(97, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(a.u_operator(2).unwrap().to_u64_vec(), vec![1, 3, 5]);
        assert_eq!(a.u_operator(5).unwrap().to_u64_vec(), vec![1]);
        assert!(a.u_operator(0).is_err());
    }

    #[test]
    fn dilation_spreads_and_scales_truncation() {
        let a = FpSeries::from_u64_coeffs(97, &[1, 1]).unwrap();
        assert_eq!(a.dilate(3).unwrap().to_u64_vec(), vec![1, 0, 0, 1, 0, 0]);
        assert!(a.dilate(usize::MAX).is_err());
    }

    #[test]
    fn progression_extraction() {
        let a = FpSeries::from_u64_coeffs(97, &[10, 11, 12, 13, 14, 15, 16]).unwrap();
        assert_eq!(a.progression(3, 1).unwrap().to_u64_vec(), vec![11, 14]);
        assert!(a.progression(3, 7).is_err());
    }

    #[test]
    fn distributivity_schoolbook_vs_ntt() {
        let mut state = 0x1234567890abcdefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for m in [3u64, 97, (1 << 31) - 1] {
            let rand_series = |next: &mut dyn FnMut() -> u64| {
                let coeffs: Vec<u64> = (0..130).map(|_| next() % m).collect();
                FpSeries::from_u64_coeffs(m, &coeffs).unwrap()
            };
            let a = rand_series(&mut next);
            let b = rand_series(&mut next);
            let c = rand_series(&mut next);
            let lhs = a.add(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "distributivity m={m}");
            assert_eq!(a.mul_schoolbook(&b).unwrap(), a.mul_ntt(&b).unwrap());
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }
    }

    #[test]
    fn digest_is_stable_and_shape_sensitive() {
        let a = FpSeries::from_u64_coeffs(5, &[1, 2, 3]).unwrap();
        let again = FpSeries::from_u64_coeffs(5, &[1, 2, 3]).unwrap();
        assert_eq!(a.digest_hex(), again.digest_hex());
        let b = FpSeries::from_u64_coeffs(5, &[1, 2, 3, 0]).unwrap();
        assert_ne!(a.digest_hex(), b.digest_hex());
        assert_eq!(a.digest_hex().len(), 64);
    }

    #[test]
    fn compare_prefix_reports_first_difference() {
        let a = FpSeries::from_u64_coeffs(7, &[1, 2, 3, 4]).unwrap();
        let b = FpSeries::from_u64_coeffs(7, &[1, 2, 5]).unwrap();
        assert_eq!(
            a.compare_prefix(&b).unwrap(),
            SeriesAgreement::Differ {
                index: 2,
                left: 3,
                right: 5
            }
        );
        let c = FpSeries::from_u64_coeffs(7, &[1, 2]).unwrap();
        assert_eq!(
            a.compare_prefix(&c).unwrap(),
            SeriesAgreement::Agree { checked: 2 }
        );
    }
}
