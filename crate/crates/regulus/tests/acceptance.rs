//! Acceptance battery: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`). The two long-running
//! verifications ("extended" tiers) are `#[ignore]` and run on demand via
//! `cargo test --test acceptance -- --ignored`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regulus::arith::{divisors, primes_in_range};
use regulus::engine::{
    identity_suite, mod3_families, parity_scan, search_hecke_primes, specialize_minimal,
    verify_family, verify_family_with_series, CongruenceFamily, FamilyConstruction, Provenance,
};
use regulus::etaq::sturm_bound;
use regulus::fpseries::{bk_exact, regular_partition_series, regular_partition_series_recurrence};
use regulus::hecke::{verify_vanishing, CertStatus};
use regulus::FpSeries;

fn criterion(label: &str, body: impl FnOnce()) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!(
        "acceptance {label}: {verdict} ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
    if let Err(e) = result {
        resume_unwind(e);
    }
}

fn int(n: u64) -> Ratio<i64> {
    Ratio::from_integer(n as i64)
}

#[test]
fn c01_exact_oracle_matches_series_for_small_n() {
    criterion("01 exact oracle vs series, k in 2..=8, n <= 40", || {
        for k in 2..=8u64 {
            for m in [2u64, 3, 5, 7, 11] {
                let series = regular_partition_series(k, m, 41).unwrap();
                for n in 0..=40u64 {
                    assert_eq!(
                        series.coeff(n as usize),
                        bk_exact(k, n) % m,
                        "k={k} m={m} n={n}"
                    );
                }
            }
        }
    });
}

#[test]
fn c02_b4_of_398_is_1_mod_3() {
    criterion("02 b4(398) == 1 (mod 3) on both series routes", || {
        let fast = regular_partition_series(4, 3, 399).unwrap();
        let slow = regular_partition_series_recurrence(4, 3, 399).unwrap();
        assert_eq!(fast.coeff(398), 1);
        assert_eq!(slow.coeff(398), 1);
    });
}

#[test]
fn c03_identity_battery_at_full_truncation() {
    criterion("03 seven identities, 2000 terms, prime 2^31 - 1", || {
        let results = identity_suite(2000, (1 << 31) - 1).unwrap();
        let names: Vec<&str> = results.iter().map(|r| r.name).collect();
        assert_eq!(
            names,
            [
                "b4_9n7_eta",
                "b4_3n_eta",
                "eta_kronecker_theta",
                "phi_neg_q",
                "b4_3n_mod3_double_theta",
                "b4_3n1_phi_psi",
                "phi_psi_mod3",
            ]
        );
        for r in &results {
            assert!(r.passed(), "{} failed: {:?}", r.name, r.agreement);
            assert!(
                r.checked_terms >= 2000,
                "{} checked {}",
                r.name,
                r.checked_terms
            );
        }
    });
}

#[test]
fn c04_mod3_fans_hold_and_the_third_offset_fails() {
    criterion("04 mod 3 fans at l in {13,17,19,23}, n <= 50", || {
        for l in [13u64, 17, 19, 23] {
            let fams = mod3_families(l).unwrap();
            assert_eq!(fams.len(), 2 * (l as usize - 1));
            let top = fams.iter().map(|f| f.a * 50 + f.b).max().unwrap();
            let series = regular_partition_series(4, 3, top as usize + 1).unwrap();
            for fam in &fams {
                let check = verify_family_with_series(fam, &series).unwrap();
                assert!(check.holds(), "l={l} family {fam} fails: {check:?}");
            }
        }
        // The analogous third offset (17 l^2 - 1)/8 does not survive: at
        // l = 13, j = 1 it asks for b4(398) == 0 (mod 3), which is false.
        let bogus = CongruenceFamily {
            reg_k: 4,
            modulus: 3,
            a: 507,
            b: 39 + (17 * 169 - 1) / 8,
            provenance: Provenance::PaperExample,
        };
        assert_eq!(bogus.b, 398);
        let check = verify_family(&bogus, 5).unwrap();
        assert!(!check.holds(), "the third offset must be refuted");
    });
}

#[test]
fn c05_parity_matches_triangular_numbers_to_a_million() {
    criterion("05 b4(n) odd iff n triangular, n <= 10^6", || {
        let check = parity_scan(1_000_000).unwrap();
        assert!(check.holds(), "{check:?}");
    });
}

#[test]
fn c06_prime_searches_find_the_frozen_verified_sets() {
    criterion("06 Sturm-verified primes in two windows", || {
        let fc5 = FamilyConstruction::b4(5).unwrap();
        assert_eq!(fc5.sturm_bound(), 384);
        let report = search_hecke_primes(&fc5, 800, 1850, 384).unwrap();
        assert_eq!(report.verified, [809, 839, 1249, 1279, 1319, 1489, 1811]);
        assert!(report.partial.is_empty());
        assert!(report.skipped.is_empty());

        let fc7 = FamilyConstruction::b4(7).unwrap();
        assert_eq!(fc7.sturm_bound(), 576);
        let report = search_hecke_primes(&fc7, 1850, 1950, 576).unwrap();
        assert!(report.partial.is_empty());
        assert_eq!(
            report.verified,
            [1889, 1901],
            "the published m=7 pair does not survive recomputation: both \
             primes are refuted on their first supported coefficient \
             (T(1889)F at n=7 reads b4(11570) = 5 mod 7, T(1901)F at n=3 \
             reads b4(4990) = 5 mod 7), and the only prime below 2000 whose \
             certificate reaches the Sturm bound is 1063; see \
             b4_mod7_ground_truth"
        );
    });
}

#[test]
fn c07_minimal_specializations_are_frozen_and_hold() {
    criterion("07 minimal specialized families and direct checks", || {
        let fc5 = FamilyConstruction::b4(5).unwrap();
        let fam5 = specialize_minimal(&fc5, 809).unwrap();
        assert_eq!((fam5.a, fam5.b), (3_272_405, 2_528));

        let fc7 = FamilyConstruction::b4(7).unwrap();
        let fam7 = specialize_minimal(&fc7, 1889).unwrap();
        assert_eq!((fam7.a, fam7.b), (24_978_247, 11_570));

        let fc6 = FamilyConstruction::b6(5).unwrap();
        let fam6 = specialize_minimal(&fc6, 1973).unwrap();
        assert_eq!((fam6.a, fam6.b), (97_318_225, 2_055));

        // b4(3272405 n + 2528) == 0 (mod 5) for n <= 3, straight off the
        // series; the published mod 7 family is asserted at n = 0 as
        // printed, although every route we can compute disagrees with it.
        assert!(verify_family(&fam5, 3).unwrap().holds());
        let check7 = verify_family(&fam7, 0).unwrap();
        assert!(
            check7.holds(),
            "the published mod 7 family fails at its first member, \
             b4(11570) = 5 (mod 7); the prime that does verify is 1063 \
             with family b4(7909783 n + 930), see b4_mod7_ground_truth \
             ({check7:?})"
        );
    });
}

#[test]
fn c08_b6_dissection_progression_mod_3() {
    criterion("08 b6(169 n + 48) == 0 (mod 3), n <= 2000", || {
        let series = regular_partition_series(6, 3, 169 * 2000 + 49).unwrap();
        for n in 0..=2000usize {
            assert_eq!(series.coeff(169 * n + 48), 0, "n={n}");
        }
    });
}

#[test]
fn c09_quick_b6_of_2055_vanishes_mod_5() {
    criterion("09 b6(2055) == 0 (mod 5)", || {
        let series = regular_partition_series(6, 5, 2056).unwrap();
        assert_eq!(series.coeff(2055), 0);
    });
}

#[test]
#[ignore = "computes a 97-million-term series; run with --ignored"]
fn c09_extended_b6_family_first_two_terms() {
    criterion("09x b6(97318225 n + 2055) == 0 (mod 5), n <= 1", || {
        let fam = CongruenceFamily {
            reg_k: 6,
            modulus: 5,
            a: 97_318_225,
            b: 2_055,
            provenance: Provenance::HeckeSpecialized {
                m: 5,
                l: 1973,
                j: None,
            },
        };
        let check = verify_family(&fam, 1).unwrap();
        assert!(check.holds(), "{check:?}");
    });
}

#[test]
fn c10_quick_partial_certificates_for_the_b6_primes() {
    criterion(
        "10 b6 mod 5 partial certificates at l in {1973, 2711}",
        || {
            let fc = FamilyConstruction::b6(5).unwrap();
            assert_eq!(fc.sturm_bound(), 27_648);
            let bound = 3000;
            // One base series backs both primes: size it for the larger one.
            let needed = fc.required_truncation(2711, bound) as usize;
            let base = regular_partition_series(6, 5, needed).unwrap();
            for l in [1973u64, 2711] {
                let form_len = (l * bound + 1) as usize;
                let form = fc.build_form_from(&base, form_len).unwrap();
                let cert = verify_vanishing(&form, l, bound).unwrap();
                assert_eq!(cert.status, CertStatus::Partial, "l={l}");
                assert_eq!(cert.checked_to, bound);
                assert_eq!(cert.sturm_bound, 27_648);
                assert_eq!(cert.first_nonzero, None);
            }
        },
    );
}

#[test]
#[ignore = "two full Sturm-bound runs over ~60-80 million terms; run with --ignored"]
fn c10_extended_full_sturm_verification_for_the_b6_primes() {
    criterion("10x b6 mod 5 verified through Sturm bound 27648", || {
        let fc = FamilyConstruction::b6(5).unwrap();
        let bound = fc.sturm_bound();
        for l in [1973u64, 2711] {
            let needed = fc.required_truncation(l, bound) as usize;
            let base = regular_partition_series(6, 5, needed).unwrap();
            let form_len = (l * bound + 1) as usize;
            let form = fc.build_form_from(&base, form_len).unwrap();
            let cert = verify_vanishing(&form, l, bound).unwrap();
            assert_eq!(cert.status, CertStatus::Verified, "l={l}: {cert:?}");
        }
    });
}

#[test]
fn c11_b6_mod_7_search_refutes_every_prime_to_200() {
    criterion(
        "11 b6 mod 7: all primes l <= 200 refuted at the Sturm bound",
        || {
            let fc = FamilyConstruction::b6(7).unwrap();
            assert_eq!(fc.sturm_bound(), 6912);
            let report = search_hecke_primes(&fc, 2, 201, 6912).unwrap();

            let skipped: Vec<(u64, &str)> = report
                .skipped
                .iter()
                .map(|s| (s.l, s.reason.as_str()))
                .collect();
            assert_eq!(
                skipped,
                [
                    (2, "divides the level 3456"),
                    (3, "divides the level 3456"),
                    (7, "equals the congruence modulus"),
                ]
            );

            assert!(report.verified.is_empty());
            assert!(report.partial.is_empty());
            let expected: Vec<u64> = primes_in_range(2, 201)
                .into_iter()
                .filter(|l| ![2, 3, 7].contains(l))
                .collect();
            assert_eq!(report.refuted, expected);
            for cert in &report.certificates {
                assert_eq!(cert.status, CertStatus::Refuted);
                let witness = cert.first_nonzero.expect("refutations carry a witness");
                assert!(witness <= 6912);
            }
        },
    );
}

#[test]
fn c12_cusp_order_tables_are_reproduced_exactly() {
    criterion("12 cusp orders of every reduced and final quotient", || {
        for m in [3u64, 5, 7, 11, 13] {
            let fc = FamilyConstruction::b4(m).unwrap();
            let mp = m % 8;

            let (reduced, level) = fc.reduced_quotient();
            assert_eq!(level, 4);
            assert_eq!(reduced.cusp_order(4, 1), int((m * mp - 1) / 8), "m={m}");
            assert_eq!(reduced.cusp_order(4, 2), Ratio::new(m as i64, 2));
            assert_eq!(reduced.cusp_order(4, 4), int(((8 - mp) * m + 1) / 8));
            assert!(reduced.is_cuspidal(4).unwrap());
            assert!(reduced.valence_check(4).unwrap());

            let (fin, level) = fc.final_quotient();
            assert_eq!(level, 256);
            for d in divisors(256) {
                let expected = if d <= 8 {
                    int(8 - mp)
                } else if d == 16 {
                    int(0)
                } else {
                    int(mp)
                };
                assert_eq!(fin.cusp_order(256, d), expected, "m={m} d={d}");
            }
            assert!(fin.is_holomorphic(256).unwrap());
            assert!(!fin.is_cuspidal(256).unwrap(), "order 0 at denominator 16");
            assert!(fin.valence_check(256).unwrap());
        }

        for m in [5u64, 7, 11, 13] {
            let fc = FamilyConstruction::b6(m).unwrap();
            let big_m = fc.multiplier;
            let mp = big_m % 24;
            let t5 = 5 * big_m % 24;

            let (reduced, level) = fc.reduced_quotient();
            assert_eq!(level, 6);
            assert_eq!(
                reduced.cusp_order(6, 1),
                int((big_m * t5 - 5) / 24),
                "m={m}"
            );
            assert_eq!(reduced.cusp_order(6, 2), int((big_m * mp - 1) / 24));
            assert_eq!(reduced.cusp_order(6, 3), int((big_m * (24 - mp) + 1) / 24));
            assert_eq!(reduced.cusp_order(6, 6), int((big_m * (24 - t5) + 5) / 24));
            assert!(reduced.is_cuspidal(6).unwrap());
            assert!(reduced.valence_check(6).unwrap());

            let (fin, level) = fc.final_quotient();
            assert_eq!(level, 3456);
            for d in divisors(3456) {
                let small2 = d % 16 != 0;
                let small3 = d % 9 != 0;
                let expected = match (small2, small3) {
                    (true, true) => 24 - t5,
                    (true, false) => mp,
                    (false, true) => 24 - mp,
                    (false, false) => t5,
                };
                assert_eq!(fin.cusp_order(3456, d), int(expected), "m={m} d={d}");
            }
            assert!(fin.is_holomorphic(3456).unwrap());
            assert!(fin.valence_check(3456).unwrap());
        }

        // The M = 25 route in one frozen row: orders 5, 1, 24, 20 on level 6.
        let fc = FamilyConstruction::b6(5).unwrap();
        let (reduced, _) = fc.reduced_quotient();
        let got: Vec<Ratio<i64>> = [1u64, 2, 3, 6]
            .iter()
            .map(|&d| reduced.cusp_order(6, d))
            .collect();
        assert_eq!(got, [int(5), int(1), int(24), int(20)]);

        for (weight, level, bound) in [
            (12u64, 256u64, 384u64),
            (18, 256, 576),
            (6, 256, 192),
            (48, 3456, 27_648),
            (12, 3456, 6_912),
            (2, 3456, 1_152),
            (4, 6, 4),
        ] {
            assert_eq!(sturm_bound(weight, level), bound);
        }
    });
}

#[test]
fn c13_defining_quotients_reduce_correctly_mod_m() {
    criterion("13 eta-quotient reduction replay, 2000 terms", || {
        for m in [3u64, 5, 7, 11, 13] {
            let fc = FamilyConstruction::b4(m).unwrap();
            let check = fc.construction_congruence_check(2000).unwrap();
            assert!(check.passes(), "b4 m={m}: {check:?}");
        }
        for m in [5u64, 7, 11, 13] {
            let fc = FamilyConstruction::b6(m).unwrap();
            let check = fc.construction_congruence_check(2000).unwrap();
            assert!(check.passes(), "b6 m={m}: {check:?}");
        }
    });
}

#[test]
fn c14_multiplication_routes_and_series_routes_agree() {
    criterion("14 NTT vs schoolbook and fast vs recurrence", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        let moduli = [2u64, 3, 5, 7, 97, 251, 65_521, 1_000_003, (1 << 31) - 1];
        for trial in 0..1000 {
            let m = moduli[rng.gen_range(0..moduli.len())];
            let la = rng.gen_range(1..=1024);
            let lb = rng.gen_range(1..=1024);
            let a = FpSeries::from_fn(m, la, |_| rng.gen_range(0..m)).unwrap();
            let b = FpSeries::from_fn(m, lb, |_| rng.gen_range(0..m)).unwrap();
            let school = a.mul_schoolbook(&b).unwrap();
            let ntt = a.mul_ntt(&b).unwrap();
            assert_eq!(
                school.to_u64_vec(),
                ntt.to_u64_vec(),
                "trial {trial}: m={m} la={la} lb={lb}"
            );
        }

        for k in [4u64, 6] {
            for m in [2u64, 3, 5, 7] {
                let fast = regular_partition_series(k, m, 100_000).unwrap();
                let slow = regular_partition_series_recurrence(k, m, 100_000).unwrap();
                assert_eq!(fast.digest_hex(), slow.digest_hex(), "k={k} m={m}");
            }
        }
    });
}

#[test]
fn skipped_search_primes_are_not_silently_verified() {
    // Companion check to the sweep criteria: a window containing only
    // level divisors produces no certificates at all.
    let fc = FamilyConstruction::b6(7).unwrap();
    let report = search_hecke_primes(&fc, 2, 4, 100).unwrap();
    assert!(report.certificates.is_empty());
    assert!(report.verified.is_empty());
    assert_eq!(report.skipped.len(), 2);
    let skipped: BTreeSet<u64> = report.skipped.iter().map(|s| s.l).collect();
    assert_eq!(skipped, BTreeSet::from([2, 3]));
}

// The published b4 mod 7 search results do not withstand recomputation, and
// the criterion assertions above (06 and 07) are kept faithful to the
// printed values, so those two fail. This companion pins what the
// arithmetic actually says, keeping the failures explained and guarding the
// underlying series code against regression. Both printed primes die on
// their first supported coefficient, where T(l)F reads a single series
// value (the second Hecke term needs l | n), so no choice of weight,
// character, or space can rescue them. The lone survivor below 2000 is
// l = 1063; its minimal family b4(7909783 n + 930) == 0 (mod 7) also holds
// through n = 2 by direct series computation out of band.
#[test]
fn b4_mod7_ground_truth() {
    // The two killing values, agreed by independent series routes.
    let fast = regular_partition_series(4, 7, 11_571).unwrap();
    let slow = regular_partition_series_recurrence(4, 7, 11_571).unwrap();
    assert_eq!(fast.digest_hex(), slow.digest_hex());
    assert_eq!(fast.coeff(11_570), 5);
    assert_eq!(fast.coeff(4_990), 5);

    // Instant refutations for the printed pair, via the search path.
    let fc = FamilyConstruction::b4(7).unwrap();
    let report = search_hecke_primes(&fc, 1889, 1902, 30).unwrap();
    assert_eq!(report.refuted, [1889, 1901]);
    let first: Vec<Option<u64>> = report
        .certificates
        .iter()
        .map(|c| c.first_nonzero)
        .collect();
    assert_eq!(first, [Some(7), Some(3)]);

    // The genuine verified prime, certified at the full Sturm bound.
    let report = search_hecke_primes(&fc, 1040, 1080, 576).unwrap();
    assert_eq!(report.verified, [1063]);
    let cert = report
        .certificates
        .iter()
        .find(|c| c.family.l == 1063)
        .unwrap();
    assert_eq!(cert.status, CertStatus::Verified);
    assert_eq!(cert.checked_to, 576);
    assert_eq!(cert.sturm_bound, 576);

    // Its minimal family starts at b4(930), which really does vanish.
    let fam = specialize_minimal(&fc, 1063).unwrap();
    assert_eq!((fam.a, fam.b), (7_909_783, 930));
    let series = regular_partition_series(4, 7, 931).unwrap();
    assert_eq!(series.coeff(930), 0);
}

#[test]
#[ignore = "sweeps every prime below 2000 at the full Sturm bound; minutes"]
fn b4_mod7_full_sweep_below_2000() {
    let fc = FamilyConstruction::b4(7).unwrap();
    let report = search_hecke_primes(&fc, 3, 2000, 576).unwrap();
    assert_eq!(report.verified, [1063]);
    assert!(report.partial.is_empty());
    assert_eq!(report.skipped.len(), 1);
    assert_eq!(report.skipped[0].l, 7);
}
