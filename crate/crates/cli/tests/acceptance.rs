//! Acceptance suite. Each test prints one `PASS`/`FAIL` line straight to
//! stderr (bypassing libtest capture) and then asserts.
//!
//! Run with `cargo test -p rankforge --test acceptance`; add
//! `-- --include-ignored` for the long-run agreement check.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rankforge::report::CountTableView;
use rankforge_core::deck::classify_by_subsets;
use rankforge_core::ranking::DEFAULT_MAX_ITER;
use rankforge_core::{
    binom, certify_stability, classify, freq_closed, freq_poly, Card, Count, Enumerator, HandClass,
    HandSet, Ranking, RankingEngine,
};

use HandClass::*;

type Check = Result<String, String>;

fn report(name: &str, started: Instant, result: Check) {
    let secs = started.elapsed().as_secs_f64();
    let line = match &result {
        Ok(detail) => format!("PASS  {name} ({secs:.1} s): {detail}\n"),
        Err(why) => format!("FAIL  {name} ({secs:.1} s): {why}\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(why) = result {
        panic!("{name}: {why}");
    }
}

fn criterion(name: &str, check: impl FnOnce() -> Check) {
    let started = Instant::now();
    report(name, started, check());
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Plain (non-canonical) engine shared by the tests, so each deck is swept once.
fn engine() -> &'static RankingEngine {
    static E: OnceLock<RankingEngine> = OnceLock::new();
    E.get_or_init(|| RankingEngine::new(Enumerator::new()))
}

fn order(s: &str) -> Ranking {
    s.replace(" < ", "\n")
        .parse()
        .expect("valid ranking literal")
}

fn showdown_via_cli(r: u32) -> Result<CountTableView, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rankforge"))
        .args([
            "showdown",
            "--ranks",
            &r.to_string(),
            "--format",
            "json",
            "--progress",
            "0",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn check_showdown_table(r: u32, expected: &[(&str, u64)], total: u64) -> Check {
    let view = showdown_via_cli(r)?;
    let got: Vec<(String, u64)> = view
        .counts
        .iter()
        .map(|c| (c.class.clone(), c.count.parse().unwrap()))
        .collect();
    let want: Vec<(String, u64)> = expected.iter().map(|&(c, n)| (c.to_string(), n)).collect();
    ensure(got == want, || format!("rows {got:?}, expected {want:?}"))?;
    let sum: u64 = got.iter().map(|x| x.1).sum();
    ensure(sum == total && view.total == total.to_string(), || {
        format!("sum {sum}, total {}, expected {total}", view.total)
    })?;
    ensure(
        binom(4 * i64::from(r), 7).unwrap() == Count::from(total),
        || "total is not C(4r, 7)".into(),
    )?;
    Ok(format!("nine counts exact, sum {total}"))
}

#[test]
fn showdown_counts_r9() {
    criterion("showdown counts for r = 9", || {
        check_showdown_table(
            9,
            &[
                ("SF", 10_560),
                ("4X", 44_640),
                ("FL", 175_560),
                ("HC", 233_100),
                ("3X", 607_200),
                ("FH", 633_024),
                ("ST", 1_169_940),
                ("1P", 2_316_600),
                ("2P", 3_157_056),
            ],
            8_347_680,
        )
    });
}

#[test]
fn showdown_counts_r13() {
    criterion("showdown counts for r = 13", || {
        check_showdown_table(
            13,
            &[
                ("SF", 41_584),
                ("4X", 224_848),
                ("FH", 3_473_184),
                ("FL", 4_047_644),
                ("ST", 6_180_020),
                ("3X", 6_461_620),
                ("HC", 23_294_460),
                ("2P", 31_433_400),
                ("1P", 58_627_800),
            ],
            133_784_560,
        )
    });
}

#[test]
fn closed_forms_equal_enumeration() {
    criterion("closed form == enumeration for r in 5..=14", || {
        let mut compared = 0;
        for r in 5..=14 {
            let table = engine()
                .histogram(r)
                .map_err(|e| e.to_string())?
                .inclusive();
            for h in HandClass::ALL {
                if !freq_poly(h).is_valid_at(r) {
                    continue;
                }
                let closed = freq_closed(h, r).map_err(|e| e.to_string())?;
                ensure(&closed == table.get(h), || {
                    format!("r = {r}, {h}: closed {closed}, enumerated {}", table.get(h))
                })?;
                compared += 1;
            }
        }
        Ok(format!("{compared} (r, class) pairs agree"))
    });
}

#[test]
fn frequency_breakpoints_to_1000() {
    criterion("frequency ranking breakpoints over r in 5..=1000", || {
        let expected = [
            (5, "HC=1P < 2P < 3X < FH < ST < 4X < FL=SF"),
            (6, "HC=1P < 2P < ST < 3X < FH < 4X < FL < SF"),
            (7, "HC < 1P < 2P < ST < 3X < FH < FL < 4X < SF"),
            (8, "HC < 1P < 2P < 3X < ST < FH < FL < 4X < SF"),
            (13, "HC < 1P < 2P < 3X < ST < FL < FH < 4X < SF"),
            (15, "HC < 1P < 2P < 3X < FL < ST < FH < 4X < SF"),
            (19, "HC < 1P < 2P < FL < 3X < ST < FH < 4X < SF"),
            (36, "HC < 1P < FL < 2P < 3X < FH < ST < 4X < SF"),
            (307, "HC < FL < 1P < 2P < 3X < FH < ST < 4X < SF"),
            (761, "HC < FL < 1P < 2P < 3X < FH < 4X < ST < SF"),
        ];
        let report = engine()
            .scan_breakpoints(5, 1000)
            .map_err(|e| e.to_string())?;
        let starts = report.starts();
        let want: Vec<u32> = expected.iter().map(|e| e.0).collect();
        ensure(starts == want, || {
            format!("starts {starts:?}, expected {want:?}")
        })?;
        for (seg, (start, ranking)) in report.segments.iter().zip(expected) {
            ensure(seg.ranking == order(ranking), || {
                format!("segment from {start}: {}, expected {ranking}", seg.ranking)
            })?;
        }
        Ok(format!("{} segments, starts {starts:?}", starts.len()))
    });
}

#[test]
fn flush_crosses_one_pair_at_307() {
    criterion("flush overtakes one pair at r = 307", || {
        let f = |h, r| freq_closed(h, r).unwrap();
        ensure(f(Flush, 306) < f(OnePair, 306), || "FL >= 1P at 306".into())?;
        ensure(f(Flush, 307) > f(OnePair, 307), || "FL <= 1P at 307".into())?;
        Ok("FL < 1P at 306, FL > 1P at 307".into())
    });
}

#[test]
fn straight_crosses_quads_at_761() {
    criterion("straight drops below four of a kind at r = 761", || {
        let f = |h, r| freq_closed(h, r).unwrap();
        ensure(f(Straight, 760) > f(FourOfAKind, 760), || {
            "ST <= 4X at 760".into()
        })?;
        ensure(f(Straight, 761) < f(FourOfAKind, 761), || {
            "ST >= 4X at 761".into()
        })?;
        Ok("ST > 4X at 760, ST < 4X at 761".into())
    });
}

#[test]
fn ranking_stable_from_761() {
    criterion("ranking certified stable for all r >= 761", || {
        let report = certify_stability(761).map_err(|e| e.to_string())?;
        let want = order("HC < FL < 1P < 2P < 3X < FH < 4X < ST < SF");
        ensure(report.ranking == want, || {
            format!("ranking {}", report.ranking)
        })?;
        ensure(report.is_certified(), || {
            format!(
                "first failure {:?}",
                report.first_failure().map(|p| (p.first, p.second))
            )
        })?;
        ensure(report.pairs.len() == 7, || {
            format!("{} pairs", report.pairs.len())
        })?;
        Ok(format!("{} adjacent pairs certified", report.pairs.len()))
    });
}

#[test]
fn asymptotic_leading_terms() {
    criterion("expanded leading terms match the known asymptotics", || {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let expected = [
            (StraightFlush, q(32, 1), 3),
            (Straight, q(8192, 1), 3),
            (FourOfAKind, q(32, 3), 4),
            (FullHouse, q(192, 1), 4),
            (ThreeOfAKind, q(128, 3), 5),
            (TwoPair, q(192, 1), 5),
            (OnePair, q(256, 5), 6),
            (Flush, q(211, 1260), 7),
        ];
        for (h, c, d) in expected {
            let got = &freq_poly(h).leading;
            ensure(*got == (c.clone(), d), || {
                format!("{h}: {}*r^{}, expected {c}*r^{d}", got.0, got.1)
            })?;
        }
        Ok("all eight rows, including 1P's r^7 cancellation".into())
    });
}

#[test]
fn minimal_agreement_excluding_high_card() {
    criterion(
        "smallest r with showdown == frequency ranking ignoring HC is 13",
        || {
            let report = engine()
                .find_min_agreement(false, 14)
                .map_err(|e| e.to_string())?;
            ensure(report.found == Some(13), || {
                format!("found {:?}", report.found)
            })?;
            for row in &report.rows {
                if row.r < 13 {
                    let non_hc = row
                        .discrepancies
                        .iter()
                        .any(|&(a, b)| a != HighCard && b != HighCard);
                    ensure(non_hc, || {
                        format!("r = {} has no non-HC discrepancy", row.r)
                    })?;
                }
            }
            Ok("r = 5..12 each disagree on a non-HC pair; r = 13 agrees".into())
        },
    );
}

#[test]
#[ignore = "long run: sweeps every deck up to r = 23"]
fn minimal_agreement_including_high_card() {
    criterion(
        "smallest r with showdown == frequency ranking over all classes is 23",
        || {
            let engine = RankingEngine::new(Enumerator::new().suit_canonical(true).long_run(true));
            let report = engine
                .find_min_agreement(true, 23)
                .map_err(|e| e.to_string())?;
            ensure(report.found == Some(23), || {
                format!("found {:?}", report.found)
            })?;
            let outcome = engine
                .iterate_showdown(23, &report.rows.last().unwrap().frequency, DEFAULT_MAX_ITER)
                .map_err(|e| e.to_string())?;
            ensure(outcome.trajectory.len() == 2, || {
                "r = 23 is not a fixpoint at step one".into()
            })?;
            Ok("r = 5..22 disagree, r = 23 agrees and is a showdown fixpoint".into())
        },
    );
}

#[test]
fn property_suite() {
    criterion(
        "properties: partition, dominance, determinism, r = 5 tie, subset oracle",
        || {
            // partition identity under the frequency ranking and a fixed other one
            for r in 5..=13 {
                let hist = engine().histogram(r).map_err(|e| e.to_string())?;
                let total = binom(4 * i64::from(r), 7).unwrap();
                for ranking in [
                    Ranking::from_counts(&hist.inclusive().counts),
                    Ranking::canonical(),
                ] {
                    let sum = hist.showdown(&ranking).sum();
                    ensure(sum == total, || {
                        format!("r = {r}: showdown sum {sum} != {total}")
                    })?;
                }
            }

            // containment dominance on inclusive counts
            let le = [
                (StraightFlush, Straight),
                (StraightFlush, Flush),
                (FourOfAKind, ThreeOfAKind),
                (FourOfAKind, TwoPair),
                (FullHouse, ThreeOfAKind),
                (FullHouse, TwoPair),
                (ThreeOfAKind, OnePair),
                (TwoPair, OnePair),
                (OnePair, HighCard),
            ];
            for r in 5..=14 {
                let t = engine()
                    .histogram(r)
                    .map_err(|e| e.to_string())?
                    .inclusive();
                for (a, b) in le {
                    ensure(t.get(a) <= t.get(b), || format!("r = {r}: {a} > {b}"))?;
                }
            }

            // determinism across thread counts
            for r in [7, 9] {
                let one = Enumerator::new()
                    .threads(1)
                    .profile_histogram(r)
                    .map_err(|e| e.to_string())?;
                for n in [2, 3, 4, 7] {
                    let many = Enumerator::new()
                        .threads(n)
                        .profile_histogram(r)
                        .map_err(|e| e.to_string())?;
                    ensure(one.profiles().eq(many.profiles()), || {
                        format!("r = {r}: {n} threads differ")
                    })?;
                }
            }

            // r = 5 flush / straight flush tie
            let top = engine().frequency_ranking(5).map_err(|e| e.to_string())?;
            ensure(top.top() == [Flush, StraightFlush], || {
                format!("r = 5 top group {:?}", top.top())
            })?;

            // classifier vs literal five-card subsets
            let mut rng = StdRng::seed_from_u64(2024);
            let mut hands = 0;
            for r in 5..=14 {
                for _ in 0..100_000 {
                    let cards: Vec<Card> = rand::seq::index::sample(&mut rng, 4 * r as usize, 7)
                        .into_iter()
                        .map(|i| Card::from_index(i as u32))
                        .collect();
                    let hand = HandSet::new(&cards, r).unwrap();
                    ensure(classify(&hand) == classify_by_subsets(&hand), || {
                        format!("{hand:?}")
                    })?;
                    hands += 1;
                }
            }
            Ok(format!(
                "all five hold; {hands} random hands match the subset oracle"
            ))
        },
    );
}
