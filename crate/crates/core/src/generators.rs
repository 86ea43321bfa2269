//! Seeded random instance generators.
//!
//! All generators derive their randomness from a `ChaCha` stream seeded with
//! a caller-supplied value, so instances replay exactly. Plane points are
//! sampled from a fine rational grid inside the unit disk and
//! rejection-sampled into general position; the rejection test runs on the
//! integer grid (128-bit cross products), which keeps generation cheap even
//! for thousands of instances.

use num::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::coin::{Coin, SeededCoin};
use crate::error::Error;
use crate::geometry::Position;
use crate::rational::{rat, rat_int, Rational};
use crate::Result;

/// Grid resolution for plane/line sampling: coordinates are i / 2^12.
const GRID_BITS: u32 = 12;
const GRID: i64 = 1 << GRID_BITS;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    // splitmix64 scramble keeps per-trial streams independent.
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// 2n plane points in general position inside the unit disk, unit weights.
pub fn random_disk(n_pairs: usize, seed: u64) -> Vec<(Position, Rational)> {
    let mut rng = rng_for(seed, 0xD15C);
    let grid = sample_disk_grid(&mut rng, 2 * n_pairs);
    grid.into_iter()
        .map(|(x, y)| (Position::plane(rat(x, GRID), rat(y, GRID)), Rational::one()))
        .collect()
}

/// Integer grid points in the disk of radius `GRID`, pairwise distinct, no
/// collinear triple. Exact, via i128 arithmetic.
fn sample_disk_grid(rng: &mut ChaCha8Rng, count: usize) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(count);
    while pts.len() < count {
        let x = rng.gen_range(-GRID..=GRID);
        let y = rng.gen_range(-GRID..=GRID);
        if x * x + y * y > GRID * GRID {
            continue;
        }
        if pts.contains(&(x, y)) {
            continue;
        }
        let collinear = pts.iter().enumerate().any(|(i, &a)| {
            pts.iter().skip(i + 1).any(|&b| {
                (b.0 - a.0) as i128 * (y - a.1) as i128 == (b.1 - a.1) as i128 * (x - a.0) as i128
            })
        });
        if !collinear {
            pts.push((x, y));
        }
    }
    pts
}

/// 2n distinct line positions in (0, 1), unit weights.
pub fn random_line(n_pairs: usize, seed: u64) -> Vec<(Position, Rational)> {
    let mut rng = rng_for(seed, 0x71E);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(2 * n_pairs);
    while out.len() < 2 * n_pairs {
        let v = rng.gen_range(1..GRID * 16);
        if seen.insert(v) {
            out.push((Position::line(rat(v, GRID * 16)), Rational::one()));
        }
    }
    out
}

/// 2n distinct circle positions, unit weights.
pub fn random_circle(n_pairs: usize, seed: u64) -> Vec<(Position, Rational)> {
    let mut rng = rng_for(seed, 0xC1C);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(2 * n_pairs);
    while out.len() < 2 * n_pairs {
        let v = rng.gen_range(0..GRID * 16);
        if seen.insert(v) {
            out.push((Position::circle(rat(v, GRID * 16)), Rational::one()));
        }
    }
    out
}

/// Disk positions with weights drawn from `[1, U]`: half the draws land on
/// the exact classification thresholds `r^i` (when representable) or `U`,
/// half are dyadic rationals spread log-uniformly across `[1, U]`.
pub fn random_weights(n_pairs: usize, u: &Rational, seed: u64) -> Result<Vec<(Position, Rational)>> {
    if *u < Rational::one() {
        return Err(Error::Config(format!("U must be >= 1, got {u}")));
    }
    let params = crate::classify::ClassificationParams::new(u.clone())?;
    let mut rng = rng_for(seed, 0x3317);
    let positions = sample_disk_grid(&mut rng, 2 * n_pairs);
    let mut out = Vec::with_capacity(2 * n_pairs);
    for (x, y) in positions {
        let w = if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..=params.k());
            match params.exact_threshold(i) {
                Some(a) => a,
                None => u.clone(),
            }
        } else {
            // Log-uniform-ish dyadic: w = U^(j / 4096) rounded onto dyadics
            // via repeated squaring is overkill; a geometric ladder of dyadic
            // midpoints between 1 and U serves the same purpose.
            let steps = 24u32;
            let j = rng.gen_range(0..=steps);
            // Linear interpolation on a dyadic grid between 1 and U, biased
            // toward the low end by squaring the fraction.
            let frac = rat((j * j) as i64, (steps * steps) as i64);
            Rational::one() + frac * (u - Rational::one())
        };
        out.push((Position::plane(rat(x, GRID), rat(y, GRID)), w));
    }
    Ok(out)
}

/// Circle positions with weights drawn uniformly from `{1, U}`.
pub fn random_two_weight(n_pairs: usize, u: &Rational, seed: u64) -> Vec<(Position, Rational)> {
    let mut rng = rng_for(seed, 0x7A0);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(2 * n_pairs);
    while out.len() < 2 * n_pairs {
        let v = rng.gen_range(0..GRID * 16);
        if !seen.insert(v) {
            continue;
        }
        let w = if rng.gen_bool(0.5) {
            u.clone()
        } else {
            Rational::one()
        };
        out.push((Position::circle(rat(v, GRID * 16)), w));
    }
    out
}

/// The randomized circle construction driven by two coin streams.
///
/// The first two points sit on antipodes; afterwards the active point walks:
/// coin `L` places the next point in the middle of the active point's left
/// (clockwise) or right (counter-clockwise) arc, coin `F` decides whether that
/// point is skipped — in which case its successor is placed in the middle of
/// the active point's *other* arc and becomes active — or becomes the new
/// active point itself. All positions are dyadic; the input is oblivious.
pub fn yao_random_input(n_pairs: usize, seed: u64) -> Vec<(Position, Rational)> {
    let mut coin = SeededCoin::new(seed);
    yao_input_with_coin(n_pairs, &mut coin)
}

pub fn yao_input_with_coin(n_pairs: usize, coin: &mut dyn Coin) -> Vec<(Position, Rational)> {
    assert!(n_pairs >= 1);
    let total = 2 * n_pairs;
    let mut ts: Vec<Rational> = vec![rat(0, 1), rat(1, 2)];
    let mut sorted: std::collections::BTreeSet<Rational> = ts.iter().cloned().collect();
    let mut active = rat(1, 2);
    while ts.len() < total {
        // Left arc: from `active` clockwise to its nearest neighbor.
        let left_neighbor = prev_cyclic(&sorted, &active);
        let right_neighbor = next_cyclic(&sorted, &active);
        let went_left = coin.flip();
        let new_t = if went_left {
            arc_mid(&left_neighbor, &active)
        } else {
            arc_mid(&active, &right_neighbor)
        };
        ts.push(new_t.clone());
        sorted.insert(new_t.clone());
        if ts.len() == total {
            break;
        }
        let skipped = coin.flip();
        if skipped {
            // The skipped point is abandoned; its successor goes to the
            // middle of the active point's other arc (as it was before the
            // skipped point landed) and becomes active.
            let other = if went_left {
                arc_mid(&active, &right_neighbor)
            } else {
                arc_mid(&left_neighbor, &active)
            };
            ts.push(other.clone());
            sorted.insert(other.clone());
            active = other;
        } else {
            active = new_t;
        }
    }
    ts.into_iter()
        .map(|t| (Position::circle(t), Rational::one()))
        .collect()
}

/// Midpoint of the counter-clockwise arc from `a` to `b` (both in [0,1)).
fn arc_mid(a: &Rational, b: &Rational) -> Rational {
    let span = crate::rational::mod1(&(b - a));
    crate::rational::mod1(&(a + span / rat_int(2)))
}

fn prev_cyclic(set: &std::collections::BTreeSet<Rational>, t: &Rational) -> Rational {
    set.range(..t.clone())
        .next_back()
        .or_else(|| set.iter().next_back())
        .expect("nonempty")
        .clone()
}

fn next_cyclic(set: &std::collections::BTreeSet<Rational>, t: &Rational) -> Rational {
    use std::ops::Bound;
    set.range((Bound::Excluded(t.clone()), Bound::Unbounded))
        .next()
        .or_else(|| set.iter().next())
        .expect("nonempty")
        .clone()
}

/// The collinear random construction: `p1 = 0`, `p2 = 1`, `p3 = 1/2`, then
/// each point halves the gap to the left or right of its predecessor.
pub fn collinear_random_input(n_pairs: usize, seed: u64) -> Vec<(Position, Rational)> {
    let mut coin = SeededCoin::new(seed);
    collinear_input_with_coin(n_pairs, &mut coin)
}

pub fn collinear_input_with_coin(n_pairs: usize, coin: &mut dyn Coin) -> Vec<(Position, Rational)> {
    assert!(n_pairs >= 2, "the construction needs at least 4 points");
    let total = 2 * n_pairs;
    let mut xs: Vec<Rational> = vec![rat_int(0), rat_int(1), rat(1, 2)];
    let mut sorted: std::collections::BTreeSet<Rational> = xs.iter().cloned().collect();
    while xs.len() < total {
        let last = xs.last().unwrap().clone();
        let go_left = coin.flip();
        let next = if go_left {
            let left = sorted.range(..last.clone()).next_back().expect("p1 bounds");
            (left + &last) / rat_int(2)
        } else {
            use std::ops::Bound;
            let right = sorted
                .range((Bound::Excluded(last.clone()), Bound::Unbounded))
                .next()
                .expect("p2 bounds");
            (&last + right) / rat_int(2)
        };
        xs.push(next.clone());
        sorted.insert(next);
    }
    xs.into_iter()
        .map(|x| (Position::line(x), Rational::one()))
        .collect()
}
