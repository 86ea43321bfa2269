//! Nearest-unmatched greedy baseline.
//!
//! Matches each arriving point to the closest unmatched point reachable
//! without crossing any current edge (Euclidean in the plane, arc distance on
//! the circle, coordinate distance on the line). Ties go to the earlier
//! arrival. Never revokes.

use crate::geometry::comparable_dist;
use crate::matching::{MatchingState, WeightedPoint};
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

#[derive(Default)]
pub struct Greedy;

impl Greedy {
    pub fn new() -> Self {
        Greedy
    }
}

impl OnlineAlgorithm for Greedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let mut candidates = Vec::new();
        for id in state.unmatched_ids() {
            if id == p.id {
                continue;
            }
            let q = state.point(id)?;
            candidates.push((comparable_dist(&p.pos, &q.pos)?, id));
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, id) in candidates {
            if state.crossing_conflict(p.id, id)?.is_none() {
                return Ok(OnlineDecision::Match(id));
            }
        }
        Ok(OnlineDecision::Leave)
    }
}
