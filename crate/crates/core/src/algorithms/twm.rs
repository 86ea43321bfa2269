//! Two-weight matcher.
//!
//! Weights are restricted to `{1, U}`. The matcher keeps a convex partition of
//! the space and only matches points inside one region; each match extends its
//! segment to the region boundary, splitting the region in two.
//!
//! Arrival rules for a point `p` landing in region `R` with unmatched points:
//! (1) if `w(p) = U`, match the largest-weight unmatched point of `R`;
//! (2) if `w(p) = 1` and `R` holds an unmatched weight-`U` point, match it;
//! (3) otherwise everything in sight has weight 1, and `p` is matched to a
//!     point `q` only if both resulting sub-regions keep at least one
//!     unmatched point each ("empty" means empty of unmatched points).
//!
//! Execution invariant, asserted after every arrival: a region holding more
//! than one point holds only weight-1 points, and no region holds more than
//! three unmatched points.

use num::One;

use crate::error::Error;
use crate::matching::{MatchingState, PointId, WeightedPoint};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

pub struct Twm {
    u: Rational,
    partition: Option<Partition>,
}

impl Twm {
    pub fn new(u: Rational) -> Self {
        Twm { u, partition: None }
    }

}

impl OnlineAlgorithm for Twm {
    fn name(&self) -> &'static str {
        "twm"
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let one = Rational::one();
        if p.weight != one && p.weight != self.u {
            return Err(Error::WeightOutOfRange(format!(
                "two-weight matcher saw weight {} (expected 1 or {})",
                p.weight, self.u
            )));
        }
        let u = self.u.clone();
        let part = self.partition.get_or_insert_with(|| Partition::new(state.space()));
        let region = part.insert_point(p.id, p.pos.clone())?;
        let others: Vec<PointId> = part
            .points_in(region)
            .iter()
            .copied()
            .filter(|&q| q != p.id)
            .collect();
        if others.is_empty() {
            return Ok(OnlineDecision::Leave);
        }

        let weight_of = |id: PointId| -> Result<Rational> { Ok(state.point(id)?.weight.clone()) };
        let chosen: Option<PointId> = if p.weight == u && u != one {
            // Case 1: heaviest unmatched point, earliest arrival on ties.
            let mut best: Option<(Rational, PointId)> = None;
            for &q in &others {
                let w = weight_of(q)?;
                let better = match &best {
                    None => true,
                    Some((bw, bq)) => w > *bw || (w == *bw && q < *bq),
                };
                if better {
                    best = Some((w, q));
                }
            }
            best.map(|(_, q)| q)
        } else if let Some(&q) = others
            .iter()
            .find(|&&q| state.point(q).map(|pt| pt.weight == u && u != one).unwrap_or(false))
        {
            // Case 2: a weight-U point is waiting here.
            Some(q)
        } else {
            // Case 3: all weight 1. Find q keeping both sides non-empty of
            // unmatched points; prefer the most balanced split, ties by
            // earliest arrival.
            let mut best: Option<(usize, PointId)> = None;
            for &q in &others {
                let q_pos = part
                    .position_of(q)
                    .ok_or(Error::UnknownPoint(q))?
                    .clone();
                let (s1, s2) =
                    part.side_counts(region, &p.pos, &q_pos, |pid| pid != p.id && pid != q)?;
                if s1 >= 1 && s2 >= 1 {
                    let score = s1.min(s2);
                    let better = match &best {
                        None => true,
                        Some((bs, bq)) => score > *bs || (score == *bs && q < *bq),
                    };
                    if better {
                        best = Some((score, q));
                    }
                }
            }
            best.map(|(_, q)| q)
        };

        match chosen {
            Some(q) => {
                let q_pos = part.position_of(q).ok_or(Error::UnknownPoint(q))?.clone();
                part.split(region, p.id, q, &p.pos, &q_pos)?;
                Ok(OnlineDecision::Match(q))
            }
            None => Ok(OnlineDecision::Leave),
        }
    }

    fn check_invariants(&self, state: &MatchingState) -> Result<()> {
        let part = match &self.partition {
            Some(p) => p,
            None => return Ok(()),
        };
        let one = Rational::one();
        for r in part.active_regions() {
            let pts = part.points_in(r);
            if pts.len() > 3 {
                return Err(Error::Invariant(format!(
                    "region {r} holds {} unmatched points (> 3)",
                    pts.len()
                )));
            }
            if pts.len() > 1 {
                for &id in pts {
                    if state.point(id)?.weight != one {
                        return Err(Error::Invariant(format!(
                            "region {r} holds several points including heavy point {id}"
                        )));
                    }
                }
            }
            for &id in pts {
                if state.is_matched(id) {
                    return Err(Error::Invariant(format!(
                        "matched point {id} still recorded as unmatched in region {r}"
                    )));
                }
            }
        }
        Ok(())
    }
}
