//! Online matchers behind one uniform interface.
//!
//! Every matcher consumes arrivals through [`OnlineAlgorithm::on_arrival`]:
//! it inspects the read-only [`MatchingState`], updates its own bookkeeping,
//! and returns an [`OnlineDecision`] which the runner then applies (and
//! validates) against the state. Matchers never mutate the matching directly.

mod bim;
mod greedy;
mod rrm;
mod sam;
mod tgm;
mod twm;
mod wam;

pub use bim::{optimal_bim_ratio_parameter, Bim};
pub use greedy::Greedy;
pub use rrm::{IntervalPartition, Rrm};
pub use sam::Sam;
pub use tgm::Tgm;
pub use twm::Twm;
pub use wam::{Wam, WamMappingReport};

use crate::matching::{MatchingState, Mode, PointId, WeightedPoint};
use crate::Result;

/// What an online matcher does with an arriving point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OnlineDecision {
    Leave,
    Match(PointId),
    /// Remove an existing edge, then match the arriving point with `partner`.
    /// Only valid in revocable mode.
    RevokeAndMatch {
        revoke: (PointId, PointId),
        partner: PointId,
    },
}

pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    /// Whether the matcher ever revokes; the runner picks the state mode from this.
    fn revocable(&self) -> bool {
        false
    }

    /// Decide for the arriving point `p`. `state` already contains `p`
    /// (unmatched); the runner applies the returned decision.
    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision>;

    /// Per-arrival self-checks, called by the runner after the decision is
    /// applied. Algorithms with execution invariants assert them here.
    fn check_invariants(&self, _state: &MatchingState) -> Result<()> {
        Ok(())
    }
}

pub fn mode_for(alg: &dyn OnlineAlgorithm) -> Mode {
    if alg.revocable() {
        Mode::Revocable
    } else {
        Mode::Irrevocable
    }
}
