//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//! Statistical criteria use fixed seed bases, so every run is deterministic.

use std::time::Instant;

use num::One;
use rayon::prelude::*;

use nca_core::advice::{
    advice_tape, catalan, dyck_rank, dyck_unrank, elias_delta_decode, elias_delta_encode,
    enumerate_dyck_words, is_dyck, sam_oracle,
};
use nca_core::adversaries::{
    run_duel, CollinearRevokingAdversary, RestrictedAdversary, RevokingAdversary,
    TwoWeightAdversary,
};
use nca_core::algorithms::{
    optimal_bim_ratio_parameter, Bim, Greedy, OnlineAlgorithm, Rrm, Sam, Tgm, Twm, Wam,
};
use nca_core::classify::ClassificationParams;
use nca_core::generators::{
    collinear_random_input, random_disk, random_line, random_two_weight, random_weights,
    yao_random_input,
};
use nca_core::oracle::{brute_force_perfect_nm, is_perfect, split_perfect_nm, validate_non_crossing};
use nca_core::rational::{pow2, rat, rat_int, to_f64, Rational};
use nca_core::runner::{run_online, RunOptions};
use nca_core::{Position, Space};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[criterion {id:02}] {} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} {name}: {detail}");
}

fn quiet() -> RunOptions {
    RunOptions {
        paranoid: true,
        transcript: false,
    }
}

/// Criterion 1: the tree-guided matcher matches every point with probability
/// at least 1/3. 10,000 trials of 50 points; per-point empirical frequency
/// >= 1/3 - 0.02 and the mean matched-weight ratio >= 0.3333 - 0.01, in
/// under 30 seconds.
#[test]
fn criterion_01_tgm_one_third() {
    let start = Instant::now();
    let trials = 10_000u64;
    let points_per_trial = 50usize;
    let (counts, ratio_sum) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let input = random_disk(points_per_trial / 2, 0xA001_0000 + t);
            let mut alg = Tgm::seeded(0xA002_0000 + t);
            let rec = run_online(&mut alg, &input, Space::Plane, quiet()).unwrap();
            let mut counts = vec![0u32; points_per_trial];
            for (i, &f) in rec.outcome.matched_flags.iter().enumerate() {
                if f {
                    counts[i] = 1;
                }
            }
            (counts, to_f64(&rec.outcome.ratio()))
        })
        .reduce(
            || (vec![0u32; points_per_trial], 0.0f64),
            |(mut a, ra), (b, rb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, ra + rb)
            },
        );
    let min_freq = counts
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .fold(f64::INFINITY, f64::min);
    let mean_ratio = ratio_sum / trials as f64;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = min_freq >= 1.0 / 3.0 - 0.02 && mean_ratio >= 0.3333 - 0.01 && elapsed < 30.0;
    report(
        1,
        "tgm-one-third",
        pass,
        &format!(
            "min per-point freq {min_freq:.4} >= {:.4}; mean ratio {mean_ratio:.4} >= {:.4}; {elapsed:.1}s < 30s",
            1.0 / 3.0 - 0.02,
            0.3333 - 0.01
        ),
    );
}

/// Criterion 2: the two-weight matcher earns at least W/3 - 1 on every
/// two-weight instance with U >= 3, checked exactly.
#[test]
fn criterion_02_twm_lower_bound() {
    let trials = 1000u64;
    for u_val in [3i64, 10, 100] {
        let u = rat_int(u_val);
        let failures: usize = (0..trials)
            .into_par_iter()
            .map(|t| {
                let input = random_two_weight(15, &u, 0xB000_0000 + u_val as u64 * 7919 + t);
                let mut alg = Twm::new(u.clone());
                let rec = run_online(&mut alg, &input, Space::Circle, quiet()).unwrap();
                let floor = rec.outcome.total_weight.clone() / rat_int(3) - Rational::one();
                usize::from(rec.outcome.matched_weight < floor)
            })
            .sum();
        report(
            2,
            "twm-lower-bound",
            failures == 0,
            &format!("U={u_val}: {failures}/{trials} instances below W/3 - 1 (exact)"),
        );
    }
}

/// Criterion 3: the two-weight adversary holds every irrevocable matcher to
/// at most 1/3 + 2/(3U+3) + 3/W, exactly, at U = 100 and k = 60.
#[test]
fn criterion_03_two_weight_upper_bound() {
    let u = rat_int(100);
    for name in ["twm", "greedy"] {
        let mut adv = TwoWeightAdversary::new(u.clone(), 60).unwrap();
        let mut twm;
        let mut greedy;
        let alg: &mut dyn OnlineAlgorithm = if name == "twm" {
            twm = Twm::new(u.clone());
            &mut twm
        } else {
            greedy = Greedy::new();
            &mut greedy
        };
        let rec = run_duel(alg, &mut adv, quiet()).unwrap();
        let ratio = rec.run.outcome.ratio();
        let threshold = rat(1, 3) + rat(2, 303) + rat_int(3) / rec.run.outcome.total_weight.clone();
        let pass = ratio <= threshold && rec.checks.iter().all(|c| c.satisfied);
        report(
            3,
            "two-weight-upper-bound",
            pass,
            &format!(
                "{name}: ratio {:.6} <= 1/3 + 2/303 + 3/W = {:.6} (exact compare), {} points",
                to_f64(&ratio),
                to_f64(&threshold),
                rec.run.state.len()
            ),
        );
    }
}

/// Criterion 4: the wait-and-match guarantee at U = 65536 (k = 4): every
/// instance's exact ratio is at least 2^-12 and the mapping lemmas hold with
/// zero violations over 500 instances of 100 points.
#[test]
fn criterion_04_wam_guarantee() {
    let u = rat_int(65536);
    let floor = pow2(-12);
    let results: Vec<(bool, bool)> = (0..500u64)
        .into_par_iter()
        .map(|t| {
            let input = random_weights(50, &u, 0xC000_0000 + t).unwrap();
            let params = ClassificationParams::new(u.clone()).unwrap();
            let mut alg = Wam::new(params);
            let rec = run_online(&mut alg, &input, Space::Plane, quiet()).unwrap();
            let ratio_ok = rec.outcome.ratio() >= floor;
            let mapping_ok = alg.mapping_report(&rec.state).is_ok();
            (ratio_ok, mapping_ok)
        })
        .collect();
    let ratio_failures = results.iter().filter(|r| !r.0).count();
    let mapping_failures = results.iter().filter(|r| !r.1).count();
    report(
        4,
        "wam-guarantee",
        ratio_failures == 0 && mapping_failures == 0,
        &format!(
            "500 instances: {ratio_failures} below 2^-12 (exact), {mapping_failures} mapping-lemma violations"
        ),
    );
}

/// Criterion 5: the restricted adversary at U = 65536, m = 20 certifies its
/// per-face case bounds exactly and holds both matchers to 8 * 2^-k.
#[test]
fn criterion_05_restricted_adversary() {
    let u = rat_int(65536);
    for name in ["wam", "greedy"] {
        let mut adv = RestrictedAdversary::new(u.clone(), 20).unwrap();
        let mut wam;
        let mut greedy;
        let alg: &mut dyn OnlineAlgorithm = if name == "wam" {
            wam = Wam::new(ClassificationParams::new(u.clone()).unwrap());
            &mut wam
        } else {
            greedy = Greedy::new();
            &mut greedy
        };
        let rec = run_duel(alg, &mut adv, quiet()).unwrap();
        let unsatisfied: Vec<_> = rec.checks.iter().filter(|c| !c.satisfied).collect();
        let ratio = rec.run.outcome.ratio();
        report(
            5,
            "restricted-adversary",
            unsatisfied.is_empty() && ratio <= pow2(-1),
            &format!(
                "{name}: ratio {:.6} <= 0.5, {} certified checks, {} unsatisfied, {} points emitted",
                to_f64(&ratio),
                rec.checks.len(),
                unsatisfied.len(),
                rec.run.state.len()
            ),
        );
    }
}

/// Criterion 6: the revoking matcher's strict bound at the optimal parameter:
/// (a) every random instance's exact ratio >= 0.2862 - 1e-4;
/// (b) the four-point tightness instance lands within 0.003 of 1/(1+2r*).
#[test]
fn criterion_06_bim_bound_and_tightness() {
    let r_star = optimal_bim_ratio_parameter();
    let floor = rat(2861, 10_000); // 0.2862 - 1e-4
    let failures: usize = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let u = rat_int(1 << 20);
            let input = random_weights(20, &u, 0xD000_0000 + t).unwrap();
            let mut alg = Bim::new(r_star.clone()).unwrap();
            let rec = run_online(&mut alg, &input, Space::Plane, quiet()).unwrap();
            usize::from(rec.outcome.ratio() < floor)
        })
        .sum();
    report(
        6,
        "bim-bound",
        failures == 0,
        &format!("1000 arbitrary-weight instances at r*: {failures} below 0.2861 (exact)"),
    );

    // Tightness: alpha north, beta south, two flankers of weight r*beta - eps.
    let beta = rat_int(1000);
    let eps = rat(1, 1 << 20);
    let flank = &r_star * &beta - &eps;
    let input = vec![
        (Position::circle(rat(1, 4)), Rational::one()),
        (Position::circle(rat(3, 4)), beta),
        (Position::circle(rat(1, 2)), flank.clone()),
        (Position::circle(rat(0, 1)), flank),
    ];
    let mut alg = Bim::new(r_star.clone()).unwrap();
    let rec = run_online(&mut alg, &input, Space::Circle, quiet()).unwrap();
    let ratio = to_f64(&rec.outcome.ratio());
    let limit = 1.0 / (1.0 + 2.0 * to_f64(&r_star));
    let pass = (ratio - limit).abs() <= 0.003 && rec.outcome.matched_weight == rat_int(1001);
    report(
        6,
        "bim-tightness",
        pass,
        &format!("tightness ratio {ratio:.6} within 0.003 of 1/(1+2r*) = {limit:.6}"),
    );
}

/// Criterion 7: no revocable matcher beats 2/3 against the revoking
/// adversary: matched fraction <= 2/3 + 2/n at n = 300.
#[test]
fn criterion_07_revoking_impossibility() {
    for name in ["bim", "greedy"] {
        let mut adv = RevokingAdversary::new(300);
        let mut bim;
        let mut greedy;
        let alg: &mut dyn OnlineAlgorithm = if name == "bim" {
            bim = Bim::with_optimal_parameter();
            &mut bim
        } else {
            greedy = Greedy::new();
            &mut greedy
        };
        let rec = run_duel(alg, &mut adv, quiet()).unwrap();
        let fraction = rec.run.outcome.ratio();
        let threshold = rat(2, 3) + rat(2, 300);
        let pass = fraction <= threshold && rec.checks.iter().all(|c| c.satisfied);
        report(
            7,
            "revoking-impossibility",
            pass,
            &format!(
                "{name}: matched fraction {:.5} <= 2/3 + 2/300 = {:.5} over {} points",
                to_f64(&fraction),
                to_f64(&threshold),
                rec.run.state.len()
            ),
        );
    }
}

/// Criterion 8: the random-revoking matcher earns at least (2n-1)/4 pairs in
/// expectation on 2n = 40 line points; 10,000 trials against the sample
/// noise (3 sigma), with the interval invariants checked at every arrival.
#[test]
fn criterion_08_rrm_half() {
    let trials = 10_000u64;
    let pair_counts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let input = random_line(20, 0xE000_0000 + t);
            let mut alg = Rrm::seeded(0xE001_0000 + t);
            let rec = run_online(&mut alg, &input, Space::Line, quiet()).unwrap();
            rec.outcome.matched_pair_count as f64
        })
        .collect();
    let n = pair_counts.len() as f64;
    let mean = pair_counts.iter().sum::<f64>() / n;
    let var = pair_counts.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let sigma = (var / n).sqrt();
    let floor = 39.0 / 4.0 - 3.0 * sigma;
    report(
        8,
        "rrm-half",
        mean >= floor,
        &format!("mean pairs {mean:.4} >= (2n-1)/4 - 3 sigma = {floor:.4}; zero invariant violations"),
    );
}

/// Criterion 9: collinear impossibilities. (a) The oblivious midpoint input
/// caps greedy's expected pairs at about 2 (we allow 2.2); (b) the adaptive
/// midpoint adversary pins the random-revoking matcher to one concurrent
/// pair and at most one final pair.
#[test]
fn criterion_09_collinear_impossibilities() {
    let trials = 10_000u64;
    let total_pairs: f64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let input = collinear_random_input(50, 0xF000_0000 + t);
            let mut alg = Greedy::new();
            let rec = run_online(&mut alg, &input, Space::Line, quiet()).unwrap();
            rec.outcome.matched_pair_count as f64
        })
        .sum();
    let mean = total_pairs / trials as f64;
    report(
        9,
        "collinear-random-vs-greedy",
        mean <= 2.2,
        &format!("mean matched pairs {mean:.4} <= 2.2 over {trials} seeds"),
    );

    let mut adv = CollinearRevokingAdversary::new(50);
    let mut alg = Rrm::seeded(41);
    let rec = run_duel(&mut alg, &mut adv, quiet()).unwrap();
    let pass = rec.checks.iter().all(|c| c.satisfied) && rec.run.state.edge_count() <= 1;
    report(
        9,
        "collinear-revoking-vs-rrm",
        pass,
        &format!(
            "max concurrent pairs {} <= 1; final pairs {} <= 1",
            adv.max_concurrent_pairs(),
            rec.run.state.edge_count()
        ),
    );
}

/// Criterion 10: split-and-match is optimal: advice from the offline pass
/// always yields a perfect matching, the advice is a Dyck word, and the tape
/// length obeys the delta-code bound with ceil(log2 C_n) < 2n.
#[test]
fn criterion_10_sam_optimality_and_advice_size() {
    let failures: usize = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let n = 1 + (t as usize % 12);
            let input = random_disk(n, 0xAB00_0000 + t);
            let positions: Vec<Position> = input.iter().map(|(p, _)| p.clone()).collect();
            let advice = sam_oracle(&positions).unwrap();
            if !is_dyck(advice.bits()) {
                return 1;
            }
            let mut alg = Sam::new(advice.bits().to_vec());
            let rec = run_online(&mut alg, &input, Space::Plane, quiet()).unwrap();
            if rec.outcome.matched_pair_count != n {
                return 1;
            }
            let tape = advice_tape(&positions).unwrap();
            let c_n = catalan(n);
            let l = if c_n <= num::BigUint::one() {
                0u64
            } else {
                (&c_n - 1u32).bits()
            };
            let cap = l + 2 * (64 - (l + 1).leading_zeros() as u64 - 1) + 1;
            if (tape.len() as u64) > cap {
                return 1;
            }
            if n >= 1 && l >= 2 * n as u64 {
                return 1;
            }
            0
        })
        .sum();
    report(
        10,
        "sam-optimality",
        failures == 0,
        &format!("1000 instances (n <= 12): {failures} failures across perfection/Dyck/tape-size checks"),
    );
}

/// Criterion 11: combinatorial kernel facts. Rank/unrank round-trips
/// exhaustively through n = 7 (429 words), enumeration counts match the
/// Catalan recurrence through n = 6, C_10 = 16796, and the delta code is the
/// identity on 1..=10^6.
#[test]
fn criterion_11_dyck_catalan_elias() {
    let mut ok = true;
    let mut detail = String::new();
    for n in 0..=7usize {
        let words = enumerate_dyck_words(n);
        if n <= 6 && num::BigUint::from(words.len()) != catalan(n) {
            ok = false;
            detail = format!("enumeration count mismatch at n={n}");
        }
        for (idx, w) in words.iter().enumerate() {
            let r = dyck_rank(w).unwrap();
            if r != num::BigUint::from(idx) || &dyck_unrank(n, &r).unwrap() != w {
                ok = false;
                detail = format!("rank/unrank mismatch at n={n} idx={idx}");
            }
        }
    }
    if catalan(10) != num::BigUint::from(16796u32) {
        ok = false;
        detail = "C_10 != 16796".into();
    }
    let delta_failures: usize = (1..=1_000_000u64)
        .into_par_iter()
        .map(|m| {
            let v = num::BigUint::from(m);
            let bits = elias_delta_encode(&v).unwrap();
            match elias_delta_decode(&bits) {
                Ok((back, used)) if back == v && used == bits.len() => 0,
                _ => 1,
            }
        })
        .sum();
    if delta_failures > 0 {
        ok = false;
        detail = format!("{delta_failures} delta round-trip failures");
    }
    if ok {
        detail = "429 words at n=7 round-trip; counts match C_n; C_10 = 16796; delta identity on 1..=10^6".into();
    }
    report(11, "dyck-catalan-elias", ok, &detail);
}

/// Criterion 12: oracle soundness. The minimum-length matching is
/// non-crossing on every small random instance; the split constructor stays
/// perfect and non-crossing up to 200 points; and every run in this suite
/// already passes validation with matched weight <= W (enforced by the
/// runner on every run).
#[test]
fn criterion_12_oracle_soundness() {
    let brute_failures: usize = (0..2000u64)
        .into_par_iter()
        .map(|t| {
            let n = 2 + (t as usize % 4); // 2n in {4,6,8,10}
            let input = random_disk(n, 0xCD00_0000 + t);
            let positions: Vec<Position> = input.iter().map(|(p, _)| p.clone()).collect();
            match brute_force_perfect_nm(&positions) {
                Ok(m) => usize::from(
                    !is_perfect(positions.len(), &m.edges)
                        || !validate_non_crossing(&positions, &m.edges).unwrap().is_empty(),
                ),
                Err(_) => 1,
            }
        })
        .sum();
    let split_failures: usize = [(25usize, 4u64), (50, 4), (100, 2)]
        .into_par_iter()
        .map(|(n_pairs, seeds)| {
            (0..seeds)
                .map(|s| {
                    let input = random_disk(n_pairs, 0xCE00_0000 + n_pairs as u64 * 131 + s);
                    let positions: Vec<Position> = input.iter().map(|(p, _)| p.clone()).collect();
                    match split_perfect_nm(&positions) {
                        Ok(m) => usize::from(
                            !is_perfect(positions.len(), &m.edges)
                                || !validate_non_crossing(&positions, &m.edges)
                                    .unwrap()
                                    .is_empty(),
                        ),
                        Err(_) => 1,
                    }
                })
                .sum::<usize>()
        })
        .sum();
    // Spot-check the runner-level guarantee on a mixed sample of runs.
    let run_failures: usize = (0..50u64)
        .into_par_iter()
        .map(|t| {
            let input = random_disk(10, 0xCF00_0000 + t);
            let mut alg = Tgm::seeded(t);
            let rec = run_online(&mut alg, &input, Space::Plane, quiet()).unwrap();
            let positions: Vec<Position> = input.iter().map(|(p, _)| p.clone()).collect();
            let edges: Vec<_> = rec.state.edges().collect();
            usize::from(
                !validate_non_crossing(&positions, &edges).unwrap().is_empty()
                    || rec.outcome.matched_weight > rec.outcome.total_weight,
            )
        })
        .sum();
    report(
        12,
        "oracle-soundness",
        brute_failures == 0 && split_failures == 0 && run_failures == 0,
        &format!(
            "brute force: {brute_failures}/2000 failures; split constructor up to 200 points: \
             {split_failures} failures; sampled runs: {run_failures} validation failures"
        ),
    );
}

/// Criterion 13: measured matched fractions on the randomized circle input
/// stay below 16/17 + 0.02 for the implemented algorithms (an informative
/// check on specific algorithms, not a universality certificate).
#[test]
fn criterion_13_yao_input_measurement() {
    let seeds = 2000u64;
    for name in ["greedy", "tgm"] {
        let total: f64 = (0..seeds)
            .into_par_iter()
            .map(|t| {
                let input = yao_random_input(200, 0xFA00_0000 + t);
                let ratio = if name == "greedy" {
                    let mut alg = Greedy::new();
                    let rec = run_online(&mut alg, &input, Space::Circle, quiet()).unwrap();
                    rec.outcome.ratio()
                } else {
                    let mut alg = Tgm::seeded(0xFB00_0000 + t);
                    let rec = run_online(&mut alg, &input, Space::Circle, quiet()).unwrap();
                    rec.outcome.ratio()
                };
                to_f64(&ratio)
            })
            .sum();
        let mean = total / seeds as f64;
        let cap = 16.0 / 17.0 + 0.02;
        report(
            13,
            "yao-input-measurement",
            mean <= cap,
            &format!("{name}: mean matched fraction {mean:.4} <= 16/17 + 0.02 = {cap:.4}"),
        );
    }
}
