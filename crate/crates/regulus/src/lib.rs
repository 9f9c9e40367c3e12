//! Congruence hunting for k-regular partition functions.
//!
//! A partition is k-regular when none of its parts is divisible by k; the
//! counting function b_k(n) has generating function (q^k;q^k)_inf/(q;q)_inf.
//! This crate computes such series truncated mod small integers, builds the
//! eta-quotient and Hecke-operator machinery needed to certify Ramanujan-type
//! congruences b_k(An + B) = 0 (mod m), and packages the search, the
//! specialization to explicit arithmetic progressions, and the verification
//! runs behind a command line.
//!
//! Layering, bottom up:
//!
//! * [`fpseries`] - dense truncated power series over Z/mZ with schoolbook
//!   and NTT multiplication, Newton inversion, and the sparse pentagonal
//!   expansions of eta powers.
//! * [`etaq`] - eta quotients as formal objects: admissibility for Gamma_0(N),
//!   cusp orders, valence bookkeeping, Sturm bounds, Kronecker symbols.
//! * [`hecke`] - Hecke operators T(l) acting on coefficient series and
//!   machine-checkable vanishing certificates.
//! * [`engine`] - the constructions tying b_4 and b_6 to eta quotients,
//!   prime searches, specialization of verified vanishings to explicit
//!   progressions, identity checks, and CRT composition.
//! * [`cli`] - subcommand wiring for the `regulus` binary.

pub mod arith;
pub mod cli;
pub mod engine;
pub mod etaq;
pub mod fpseries;
pub mod hecke;

pub use fpseries::FpSeries;
