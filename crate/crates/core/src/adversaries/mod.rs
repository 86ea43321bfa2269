//! Adaptive and oblivious lower-bound input constructions, behind one duel
//! protocol: the adversary emits points one at a time, observing after each
//! emission the algorithm's decision and a read-only snapshot of the matching
//! state — never the algorithm's internals or coins. Adaptive adversaries are
//! deterministic functions of the report stream, so a duel against a seeded
//! algorithm replays exactly.

mod collinear;
mod faces;
mod restricted;
mod revoking;
mod two_weight;

pub use collinear::CollinearRevokingAdversary;
pub use faces::{FaceArena, FaceId};
pub use restricted::RestrictedAdversary;
pub use revoking::RevokingAdversary;
pub use two_weight::TwoWeightAdversary;

use crate::algorithms::{mode_for, OnlineAlgorithm, OnlineDecision};
use crate::error::Error;
use crate::geometry::Position;
use crate::matching::MatchingState;
use crate::rational::{format_rational, to_f64, Rational};
use crate::runner::{apply_decision, finish, RunOptions, RunRecord};
use crate::transcript::{state_hash, transcript_position, TranscriptEmit, TranscriptRecord};
use crate::{Result, Space};

/// One emission step of an adversary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryEvent {
    Emit { pos: Position, weight: Rational },
    End,
}

/// What the adversary learns after each emission.
pub struct AlgorithmReport<'a> {
    pub decision: OnlineDecision,
    pub state: &'a MatchingState,
}

/// A named exact bound the adversary certifies after the duel.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub name: String,
    pub observed: String,
    pub threshold: String,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn ratio_le(name: &str, observed: &Rational, threshold: &Rational) -> Self {
        BoundCheck {
            name: name.to_string(),
            observed: format!("{} ({:.6})", format_rational(observed), to_f64(observed)),
            threshold: format!("{} ({:.6})", format_rational(threshold), to_f64(threshold)),
            satisfied: observed <= threshold,
        }
    }
}

pub trait Adversary {
    fn name(&self) -> &'static str;
    fn space(&self) -> Space;
    /// Next event, given the report for the previous emission (`None` before
    /// the first).
    fn next(&mut self, report: Option<&AlgorithmReport<'_>>) -> Result<AdversaryEvent>;
    /// Post-run certification of the construction's bounds.
    fn certify(&self, state: &MatchingState) -> Result<Vec<BoundCheck>>;
}

#[derive(Debug)]
pub struct DuelRecord {
    pub run: RunRecord,
    pub checks: Vec<BoundCheck>,
}

const EMISSION_SAFETY_CAP: usize = 1_000_000;

/// Runs the full algorithm-versus-adversary protocol to completion.
pub fn run_duel(
    alg: &mut dyn OnlineAlgorithm,
    adv: &mut dyn Adversary,
    options: RunOptions,
) -> Result<DuelRecord> {
    let mut state = MatchingState::new(adv.space(), mode_for(alg));
    let mut transcript = Vec::new();
    let mut last_decision: Option<OnlineDecision> = None;
    loop {
        let event = match &last_decision {
            None => adv.next(None)?,
            Some(d) => {
                let report = AlgorithmReport {
                    decision: d.clone(),
                    state: &state,
                };
                adv.next(Some(&report))?
            }
        };
        match event {
            AdversaryEvent::End => break,
            AdversaryEvent::Emit { pos, weight } => {
                if state.len() >= EMISSION_SAFETY_CAP {
                    return Err(Error::Protocol("adversary emission cap exceeded".into()));
                }
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
                            pos: transcript_position(&pos),
                            w: format_rational(&weight),
                        },
                        decision: (&decision).into(),
                        state_hash: state_hash(&state),
                    });
                }
                last_decision = Some(decision);
            }
        }
    }
    let checks = adv.certify(&state)?;
    let run = finish(state, transcript)?;
    Ok(DuelRecord { run, checks })
}
