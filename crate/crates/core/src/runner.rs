//! Drives an online algorithm over a point sequence, applying and validating
//! each decision against the matching state.

use crate::algorithms::{mode_for, OnlineAlgorithm, OnlineDecision};
use crate::error::Error;
use crate::geometry::Position;
use crate::matching::{MatchingState, RunOutcome};
use crate::rational::{format_rational, Rational};
use crate::transcript::{
    state_hash, transcript_position, TranscriptEmit, TranscriptRecord,
};
use crate::{Result, Space};

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Run the algorithm's own invariant checks after every arrival.
    pub paranoid: bool,
    /// Re-check the whole matching pairwise after every arrival. Each match
    /// is already validated against all current edges when applied, so the
    /// matching is non-crossing inductively; this re-check is for tests.
    pub exhaustive_noncrossing: bool,
    /// Collect a transcript record per arrival.
    pub transcript: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            paranoid: true,
            exhaustive_noncrossing: false,
            transcript: false,
        }
    }
}

impl RunOptions {
    /// Everything on: per-step exhaustive re-validation included.
    pub fn strict() -> Self {
        RunOptions {
            paranoid: true,
            exhaustive_noncrossing: true,
            transcript: false,
        }
    }
}

#[derive(Debug)]
pub struct RunRecord {
    pub state: MatchingState,
    pub outcome: RunOutcome,
    pub transcript: Vec<TranscriptRecord>,
}

/// Applies one decision to the state, validating as the state layer demands.
pub fn apply_decision(state: &mut MatchingState, id: usize, decision: &OnlineDecision) -> Result<()> {
    match decision {
        OnlineDecision::Leave => Ok(()),
        OnlineDecision::Match(j) => state.apply_match(id, *j),
        OnlineDecision::RevokeAndMatch { revoke, partner } => {
            state.apply_revoke(revoke.0, revoke.1)?;
            state.apply_match(id, *partner)
        }
    }
}

/// Runs an algorithm over a full input sequence.
pub fn run_online(
    alg: &mut dyn OnlineAlgorithm,
    points: &[(Position, Rational)],
    space: Space,
    options: RunOptions,
) -> Result<RunRecord> {
    let mut state = MatchingState::new(space, mode_for(alg));
    let mut transcript = Vec::new();
    for (pos, weight) in points {
        let p = state.ingest(pos.clone(), weight.clone())?.clone();
        let decision = alg.on_arrival(&state, &p)?;
        apply_decision(&mut state, p.id, &decision)?;
        if options.paranoid {
            state.assert_noncrossing()?;
            alg.check_invariants(&state)?;
        }
        if options.transcript {
            transcript.push(TranscriptRecord {
                step: p.id,
                emit: TranscriptEmit {
                    pos: transcript_position(pos),
                    w: format_rational(weight),
                },
                decision: (&decision).into(),
                state_hash: state_hash(&state),
            });
        }
    }
    finish(state, transcript)
}

/// Final validation shared by plain runs and duels: the matching must be
/// non-crossing and the matched weight can never exceed the total.
pub fn finish(state: MatchingState, transcript: Vec<TranscriptRecord>) -> Result<RunRecord> {
    state.assert_noncrossing()?;
    let outcome = state.outcome();
    if outcome.matched_weight > outcome.total_weight {
        return Err(Error::Invariant(
            "matched weight exceeds total weight".into(),
        ));
    }
    Ok(RunRecord {
        state,
        outcome,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Greedy;
    use crate::rational::{rat, rat_int};

    #[test]
    fn greedy_run_with_transcript() {
        let points: Vec<(Position, Rational)> = [(0i64, 0i64), (1, 2), (4, 1), (2, 5)]
            .iter()
            .map(|&(x, y)| (Position::plane(rat_int(x), rat_int(y)), rat_int(1)))
            .collect();
        let mut alg = Greedy::new();
        let rec = run_online(
            &mut alg,
            &points,
            Space::Plane,
            RunOptions {
                paranoid: true,
                transcript: true,
            },
        )
        .unwrap();
        assert_eq!(rec.transcript.len(), 4);
        assert_eq!(rec.outcome.matched_pair_count, 2);
        assert_eq!(rec.outcome.ratio(), rat_int(1));
        let replay = run_online(
            &mut Greedy::new(),
            &points,
            Space::Plane,
            RunOptions {
                paranoid: false,
                transcript: true,
            },
        )
        .unwrap();
        assert_eq!(rec.transcript, replay.transcript);
    }

    #[test]
    fn seeded_algorithms_replay() {
        let points = crate::generators::random_disk(10, 5);
        let run1 = run_online(
            &mut crate::algorithms::Tgm::seeded(3),
            &points,
            Space::Plane,
            RunOptions::default(),
        )
        .unwrap();
        let run2 = run_online(
            &mut crate::algorithms::Tgm::seeded(3),
            &points,
            Space::Plane,
            RunOptions::default(),
        )
        .unwrap();
        assert_eq!(run1.outcome, run2.outcome);
        assert_eq!(run1.outcome.ratio(), run1.outcome.matched_weight / rat(20, 1));
    }
}
