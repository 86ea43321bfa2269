//! Offline ground truth: perfect non-crossing matching constructors, the
//! offline optimum value, matching validation, and empirical-ratio summaries.
//!
//! Total Euclidean length is a sum of square roots, so the brute-force
//! minimizer compares candidates through rational interval arithmetic: each
//! `sqrt` is bracketed by integer square roots at increasing precision (32,
//! 64, 128 bits) until the sums separate. Pairs of matchings whose lengths
//! the 128-bit intervals cannot separate are ordered by their sorted squared
//! lengths and then by their edge lists, which keeps the minimizer
//! deterministic; any true minimizer is non-crossing, so ties are harmless.

use std::cmp::Ordering;

use num::bigint::{BigInt, BigUint};
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::geometry::{segments_properly_cross, sq_dist_plane, Position, Segment, Space};
use crate::matching::{PointId, RunOutcome};
use crate::rational::Rational;
use crate::Result;

/// A perfect non-crossing matching produced offline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OfflineMatching {
    pub edges: Vec<(PointId, PointId)>,
}

/// The offline optimum: every point can always be matched, so the optimum is
/// the total weight. Requires an even number of points.
pub fn opt_value(weights: &[Rational]) -> Result<Rational> {
    if weights.len() % 2 != 0 {
        return Err(Error::Config(format!(
            "odd number of points ({}) has no perfect matching",
            weights.len()
        )));
    }
    let mut sum = Rational::zero();
    for w in weights {
        sum += w;
    }
    Ok(sum)
}

/// `[lo, hi]` bracket of `sqrt(q)` with `2^bits` precision.
fn sqrt_interval(q: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(!q.is_negative());
    // sqrt(a/b) = sqrt(a*b)/b.
    let n: BigUint = (q.numer() * q.denom()).to_biguint().expect("non-negative");
    let scaled = &n << (2 * bits as usize);
    let s = scaled.sqrt();
    let den = BigInt::from(q.denom().clone()) << bits as usize;
    let lo = Rational::new(BigInt::from(s.clone()), den.clone());
    let hi = Rational::new(BigInt::from(s + BigUint::one()), den);
    (lo, hi)
}

/// Compares two sums of square roots of rationals. Falls back to `Equal` when
/// 128-bit intervals cannot separate them.
pub fn cmp_sqrt_sums(a: &[Rational], b: &[Rational]) -> Ordering {
    for bits in [32u32, 64, 128] {
        let mut a_lo = Rational::zero();
        let mut a_hi = Rational::zero();
        for q in a {
            let (lo, hi) = sqrt_interval(q, bits);
            a_lo += lo;
            a_hi += hi;
        }
        let mut b_lo = Rational::zero();
        let mut b_hi = Rational::zero();
        for q in b {
            let (lo, hi) = sqrt_interval(q, bits);
            b_lo += lo;
            b_hi += hi;
        }
        if a_hi < b_lo {
            return Ordering::Less;
        }
        if b_hi < a_lo {
            return Ordering::Greater;
        }
    }
    Ordering::Equal
}

fn sorted_sq_lengths(points: &[Position], edges: &[(PointId, PointId)]) -> Result<Vec<Rational>> {
    let mut v = edges
        .iter()
        .map(|&(i, j)| sq_dist_plane(&points[i - 1], &points[j - 1]))
        .collect::<Result<Vec<_>>>()?;
    v.sort();
    Ok(v)
}

/// True when `cand` is strictly better than `best` under the deterministic
/// order: interval-compared total length, then sorted squared lengths, then
/// the edge lists themselves.
fn better_matching(
    points: &[Position],
    cand: &[(PointId, PointId)],
    best: &[(PointId, PointId)],
) -> Result<bool> {
    let cand_sq = sorted_sq_lengths(points, cand)?;
    let best_sq = sorted_sq_lengths(points, best)?;
    match cmp_sqrt_sums(&cand_sq, &best_sq) {
        Ordering::Less => Ok(true),
        Ordering::Greater => Ok(false),
        Ordering::Equal => match cand_sq.cmp(&best_sq) {
            Ordering::Less => Ok(true),
            Ordering::Greater => Ok(false),
            Ordering::Equal => Ok(cand < best),
        },
    }
}

const BRUTE_FORCE_CAP: usize = 14;

/// Minimum-total-length perfect matching by exhaustive enumeration
/// (`(2n-1)!!` candidates; capped at 14 points). The result is asserted
/// non-crossing — a crossing minimizer would contradict the triangle
/// inequality on the crossing quadrilateral.
pub fn brute_force_perfect_nm(points: &[Position]) -> Result<OfflineMatching> {
    if points.len() % 2 != 0 {
        return Err(Error::Config("odd point count".into()));
    }
    if points.len() > BRUTE_FORCE_CAP {
        return Err(Error::Config(format!(
            "{} points exceed the brute-force cap of {BRUTE_FORCE_CAP}; use the split constructor",
            points.len()
        )));
    }
    if points.is_empty() {
        return Ok(OfflineMatching { edges: Vec::new() });
    }
    for p in points {
        if p.space() != Space::Plane {
            return Err(Error::MixedSpaces);
        }
    }
    let n = points.len();
    let mut best: Option<Vec<(PointId, PointId)>> = None;
    let mut current: Vec<(PointId, PointId)> = Vec::with_capacity(n / 2);
    let mut used = vec![false; n + 1];

    fn rec(
        points: &[Position],
        used: &mut Vec<bool>,
        current: &mut Vec<(PointId, PointId)>,
        best: &mut Option<Vec<(PointId, PointId)>>,
    ) -> Result<()> {
        let first = match (1..used.len()).find(|&i| !used[i]) {
            Some(i) => i,
            None => {
                let cand = current.clone();
                let replace = match best {
                    None => true,
                    Some(b) => better_matching(points, &cand, b)?,
                };
                if replace {
                    *best = Some(cand);
                }
                return Ok(());
            }
        };
        used[first] = true;
        for j in first + 1..used.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            current.push((first, j));
            rec(points, used, current, best)?;
            current.pop();
            used[j] = false;
        }
        used[first] = false;
        Ok(())
    }
    rec(points, &mut used, &mut current, &mut best)?;
    let edges = best.expect("nonempty input has a matching");
    let crossings = validate_non_crossing(points, &edges)?;
    if !crossings.is_empty() {
        return Err(Error::Invariant(format!(
            "minimum-length matching came out crossing: {crossings:?}"
        )));
    }
    Ok(OfflineMatching { edges })
}

/// Scalable perfect non-crossing matching: take the lexicographically least
/// point `b`, sort the rest by angle around it, match `b` to the first point
/// in angular order whose line leaves an even number of points on each open
/// side (the angular minimum always qualifies), and recurse on each side.
pub fn split_perfect_nm(points: &[Position]) -> Result<OfflineMatching> {
    if points.len() % 2 != 0 {
        return Err(Error::Config("odd point count".into()));
    }
    for p in points {
        if p.space() != Space::Plane {
            return Err(Error::MixedSpaces);
        }
    }
    let mut ids: Vec<PointId> = (1..=points.len()).collect();
    let mut edges = Vec::with_capacity(points.len() / 2);
    split_rec(points, &mut ids, &mut edges)?;
    Ok(OfflineMatching { edges })
}

fn split_rec(
    points: &[Position],
    ids: &mut Vec<PointId>,
    edges: &mut Vec<(PointId, PointId)>,
) -> Result<()> {
    if ids.is_empty() {
        return Ok(());
    }
    // Lexicographically least by (x, y).
    let &b = ids
        .iter()
        .min_by(|&&i, &&j| points[i - 1].cmp(&points[j - 1]))
        .unwrap();
    let mut rest: Vec<PointId> = ids.iter().copied().filter(|&i| i != b).collect();
    // Angular sort around b; everything lies in the closed right half-plane,
    // so one CCW comparison is a total order under general position.
    let b_pos = &points[b - 1];
    rest.sort_by(|&i, &j| {
        match crate::geometry::orientation(b_pos, &points[i - 1], &points[j - 1]) {
            Ok(crate::geometry::Orientation::Cw) => Ordering::Less,
            Ok(crate::geometry::Orientation::Ccw) => Ordering::Greater,
            _ => Ordering::Equal,
        }
    });
    // Parity sweep: the candidate at index idx leaves idx points on one side
    // and m-1-idx on the other; both must be even.
    let m = rest.len();
    let q_idx = (0..m)
        .find(|&idx| idx % 2 == 0 && (m - 1 - idx) % 2 == 0)
        .ok_or_else(|| Error::Invariant("parity sweep found no candidate".into()))?;
    let q = rest[q_idx];
    edges.push((b.min(q), b.max(q)));
    let mut side1: Vec<PointId> = rest[..q_idx].to_vec();
    let mut side2: Vec<PointId> = rest[q_idx + 1..].to_vec();
    split_rec(points, &mut side1, edges)?;
    split_rec(points, &mut side2, edges)?;
    Ok(())
}

/// All-pairs proper-crossing check; returns the list of crossing edge pairs.
pub fn validate_non_crossing(
    points: &[Position],
    edges: &[(PointId, PointId)],
) -> Result<Vec<((PointId, PointId), (PointId, PointId))>> {
    let mut crossings = Vec::new();
    for (idx, &(a, b)) in edges.iter().enumerate() {
        let s = Segment::new(points[a - 1].clone(), points[b - 1].clone())?;
        for &(c, d) in &edges[idx + 1..] {
            let t = Segment::new(points[c - 1].clone(), points[d - 1].clone())?;
            if segments_properly_cross(&s, &t)? {
                crossings.push(((a, b), (c, d)));
            }
        }
    }
    Ok(crossings)
}

/// Whether a matching covers every point exactly once.
pub fn is_perfect(point_count: usize, edges: &[(PointId, PointId)]) -> bool {
    let mut seen = vec![false; point_count + 1];
    for &(a, b) in edges {
        if a == b || a == 0 || b == 0 || a > point_count || b > point_count || seen[a] || seen[b] {
            return false;
        }
        seen[a] = true;
        seen[b] = true;
    }
    edges.len() * 2 == point_count
}

/// Summary statistics over a batch of runs. Per-run ratios stay exact; the
/// mean is exact; the 99% half-width uses the normal approximation.
#[derive(Clone, Debug)]
pub struct RatioSummary {
    pub ratios: Vec<Rational>,
    pub mean: Rational,
    pub min: Rational,
    pub ci99_half_width: f64,
}

pub fn empirical_ratio(outcomes: &[RunOutcome]) -> Result<RatioSummary> {
    if outcomes.is_empty() {
        return Err(Error::Config("no runs to summarize".into()));
    }
    let ratios: Vec<Rational> = outcomes.iter().map(|o| o.ratio()).collect();
    let mut sum = Rational::zero();
    for r in &ratios {
        sum += r;
    }
    let n = ratios.len();
    let mean = sum / Rational::from_integer(n.into());
    let min = ratios.iter().min().unwrap().clone();
    let mean_f = mean.to_f64().unwrap_or(f64::NAN);
    let var = ratios
        .iter()
        .map(|r| {
            let d = r.to_f64().unwrap_or(f64::NAN) - mean_f;
            d * d
        })
        .sum::<f64>()
        / n as f64;
    // z for a two-sided 99% normal interval.
    let ci99_half_width = if n > 1 {
        2.5758293035489004 * (var / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(RatioSummary {
        ratios,
        mean,
        min,
        ci99_half_width,
    })
}
