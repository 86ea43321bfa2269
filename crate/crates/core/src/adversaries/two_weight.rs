//! Adaptive two-weight adversary on the circle, for irrevocable algorithms.
//!
//! Phase 1 emits `2k` unit-weight points at deterministic fresh positions
//! (largest-gap midpoints). If the algorithm makes fewer than `k/3` matches
//! the sequence simply ends. Otherwise every chord is associated with one of
//! the faces it created — leaving exactly one face, the most recently created
//! one, ignored — and each associated face is attacked according to its
//! number of unmatched points:
//!
//! * 0: one heavy point the algorithm cannot match;
//! * 1: one heavy probe; if the algorithm matches it, two more heavy points
//!   flank the new chord, both unmatchable;
//! * 2: one unit point; a match here strands an empty side, which then
//!   receives an unmatchable heavy point; a leave escalates to the 3-case;
//! * 3: one unit point; a match either strands an empty side (heavy point
//!   there) or yields two one-point sides attacked like the 1-case; a leave
//!   ends the attack (four unmatched points stay behind);
//! * 4+: nothing — the unmatched points already outweigh the chord.

use std::collections::{HashMap, HashSet, VecDeque};

use num::{One, Zero};

use crate::algorithms::OnlineDecision;
use crate::error::Error;
use crate::matching::{MatchingState, PointId};
use crate::rational::{rat_int, Rational};
use crate::{Position, Result, Space};

use super::faces::{FaceArena, FaceId};
use super::{Adversary, AdversaryEvent, AlgorithmReport, BoundCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    One,
    Attacks,
    Done,
}

#[derive(Clone, Copy, Debug)]
enum Task {
    /// Attack a face, dispatching on its current unmatched count.
    Attack(FaceId),
    /// Attack a face known to hold exactly one unmatched point.
    AttackAsOne(FaceId),
    /// Emit a heavy point that cannot be matched.
    HeavyUnmatchable(FaceId),
}

#[derive(Clone, Copy, Debug)]
enum Await {
    None,
    Phase1,
    Heavy,
    SingleProbe { q: PointId },
    PairProbe { face: FaceId },
    TripleProbe,
}

pub struct TwoWeightAdversary {
    u: Rational,
    k: usize,
    arena: FaceArena,
    matched: HashSet<PointId>,
    weights: HashMap<PointId, Rational>,
    emitted: usize,
    phase: Phase,
    tasks: VecDeque<Task>,
    awaiting: Await,
    last_split: Option<(FaceId, FaceId)>,
}

impl TwoWeightAdversary {
    pub fn new(u: Rational, k: usize) -> Result<Self> {
        if u < rat_int(3) {
            return Err(Error::Config(format!("two-weight adversary needs U >= 3, got {u}")));
        }
        if k == 0 {
            return Err(Error::Config("phase budget k must be positive".into()));
        }
        Ok(TwoWeightAdversary {
            u,
            k,
            arena: FaceArena::new(),
            matched: HashSet::new(),
            weights: HashMap::new(),
            emitted: 0,
            phase: Phase::One,
            tasks: VecDeque::new(),
            awaiting: Await::None,
            last_split: None,
        })
    }

    fn unmatched_in(&self, face: FaceId) -> Vec<PointId> {
        let matched = &self.matched;
        self.arena.unmatched_in_face(face, |id| matched.contains(&id))
    }

    fn emit_at(&mut self, t: Rational, weight: Rational) -> Result<AdversaryEvent> {
        self.emitted += 1;
        let id = self.emitted;
        self.arena.insert_point(id, t.clone())?;
        self.weights.insert(id, weight.clone());
        Ok(AdversaryEvent::Emit {
            pos: Position::circle(t),
            weight,
        })
    }

    /// Mirrors a match decision into the arena and matched set; returns the
    /// two faces created by the split.
    fn observe_match(&mut self, partner: PointId) -> Result<(FaceId, FaceId)> {
        let p = self.emitted;
        if self.matched.contains(&p) || self.matched.contains(&partner) {
            return Err(Error::Protocol(format!(
                "match involves an already matched point ({p} or {partner})"
            )));
        }
        let fp = self.arena.face_of_point(p)?;
        let fq = self.arena.face_of_point(partner)?;
        if fp != fq {
            return Err(Error::Protocol(format!(
                "match ({p},{partner}) spans faces {fp} and {fq}"
            )));
        }
        let children = self.arena.split_face(fp, p, partner)?;
        self.matched.insert(p);
        self.matched.insert(partner);
        self.last_split = Some(children);
        Ok(children)
    }

    fn observe(&mut self, report: &AlgorithmReport<'_>) -> Result<()> {
        let awaiting = self.awaiting;
        self.awaiting = Await::None;
        match &report.decision {
            OnlineDecision::RevokeAndMatch { .. } => {
                return Err(Error::Protocol(
                    "two-weight adversary expects an irrevocable algorithm".into(),
                ))
            }
            OnlineDecision::Leave => match awaiting {
                Await::Heavy | Await::Phase1 | Await::None => {}
                Await::SingleProbe { .. } => {} // attack over: (ALG 2, OPT U+3)
                Await::PairProbe { face } => {
                    // The face now holds three unmatched points; escalate.
                    self.tasks.push_front(Task::Attack(face));
                }
                Await::TripleProbe => {} // four unmatched points stay
            },
            OnlineDecision::Match(q) => {
                let (f1, f2) = self.observe_match(*q)?;
                match awaiting {
                    Await::Phase1 => {}
                    Await::None => {
                        return Err(Error::Protocol("unexpected match outside any probe".into()))
                    }
                    Await::Heavy => {
                        return Err(Error::Protocol(
                            "algorithm matched a heavy point that has no legal partner".into(),
                        ))
                    }
                    Await::SingleProbe { q: expected } => {
                        if *q != expected {
                            return Err(Error::Protocol(format!(
                                "single-point probe matched {q}, expected {expected}"
                            )));
                        }
                        // Flank both sides of the fresh chord with heavy points.
                        self.tasks.push_front(Task::HeavyUnmatchable(f2));
                        self.tasks.push_front(Task::HeavyUnmatchable(f1));
                    }
                    Await::PairProbe { .. } => {
                        let (n1, n2) = (self.unmatched_in(f1).len(), self.unmatched_in(f2).len());
                        match (n1, n2) {
                            (1, 0) => self.tasks.push_front(Task::HeavyUnmatchable(f2)),
                            (0, 1) => self.tasks.push_front(Task::HeavyUnmatchable(f1)),
                            other => {
                                return Err(Error::Protocol(format!(
                                    "pair probe split into unexpected counts {other:?}"
                                )))
                            }
                        }
                    }
                    Await::TripleProbe => {
                        let (n1, n2) = (self.unmatched_in(f1).len(), self.unmatched_in(f2).len());
                        match (n1, n2) {
                            (2, 0) => self.tasks.push_front(Task::HeavyUnmatchable(f2)),
                            (0, 2) => self.tasks.push_front(Task::HeavyUnmatchable(f1)),
                            (1, 1) => {
                                self.tasks.push_front(Task::AttackAsOne(f2));
                                self.tasks.push_front(Task::AttackAsOne(f1));
                            }
                            other => {
                                return Err(Error::Protocol(format!(
                                    "triple probe split into unexpected counts {other:?}"
                                )))
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Assigns each phase-1 chord to one face it created, leaving the most
    /// recently created face unassigned: at each split node the
    /// earlier-created spare is assigned and the later one bubbles up.
    fn attack_order(&self) -> Vec<FaceId> {
        let mut children: HashMap<FaceId, (FaceId, FaceId)> = HashMap::new();
        for &(parent, _chord, f1, f2) in self.arena.splits() {
            children.insert(parent, (f1, f2));
        }
        let mut assigned = Vec::new();
        fn spare(
            face: FaceId,
            children: &HashMap<FaceId, (FaceId, FaceId)>,
            assigned: &mut Vec<FaceId>,
        ) -> FaceId {
            match children.get(&face) {
                None => face,
                Some(&(f1, f2)) => {
                    let s1 = spare(f1, children, assigned);
                    let s2 = spare(f2, children, assigned);
                    let (keep, up) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
                    assigned.push(keep);
                    up
                }
            }
        }
        let _ignored = spare(0, &children, &mut assigned);
        assigned.sort_unstable();
        assigned
    }

    fn produce(&mut self) -> Result<AdversaryEvent> {
        loop {
            match self.phase {
                Phase::One => {
                    if self.emitted < 2 * self.k {
                        let t = self.arena.fresh_position_global();
                        self.awaiting = Await::Phase1;
                        return self.emit_at(t, Rational::one());
                    }
                    let s = self.matched.len() / 2;
                    if 3 * s < self.k {
                        self.phase = Phase::Done;
                        return Ok(AdversaryEvent::End);
                    }
                    self.tasks = self.attack_order().into_iter().map(Task::Attack).collect();
                    self.phase = Phase::Attacks;
                }
                Phase::Attacks => {
                    let task = match self.tasks.pop_front() {
                        Some(t) => t,
                        None => {
                            self.phase = Phase::Done;
                            return Ok(AdversaryEvent::End);
                        }
                    };
                    match task {
                        Task::Attack(face) => {
                            let unmatched = self.unmatched_in(face);
                            match unmatched.len() {
                                0 => {
                                    let t = self.arena.fresh_position_in(face)?;
                                    self.awaiting = Await::Heavy;
                                    return self.emit_at(t, self.u.clone());
                                }
                                1 => {
                                    let t = self.arena.fresh_position_in(face)?;
                                    self.awaiting = Await::SingleProbe { q: unmatched[0] };
                                    return self.emit_at(t, self.u.clone());
                                }
                                2 => {
                                    let t = self.arena.fresh_position_in(face)?;
                                    self.awaiting = Await::PairProbe { face };
                                    return self.emit_at(t, Rational::one());
                                }
                                3 => {
                                    let t = self.arena.fresh_position_in(face)?;
                                    self.awaiting = Await::TripleProbe;
                                    return self.emit_at(t, Rational::one());
                                }
                                _ => {} // 4+ unmatched: leave the face alone
                            }
                        }
                        Task::AttackAsOne(face) => {
                            let unmatched = self.unmatched_in(face);
                            if unmatched.len() != 1 {
                                return Err(Error::Invariant(format!(
                                    "expected exactly one unmatched point in face {face}, found {}",
                                    unmatched.len()
                                )));
                            }
                            let t = self.arena.fresh_position_in(face)?;
                            self.awaiting = Await::SingleProbe { q: unmatched[0] };
                            return self.emit_at(t, self.u.clone());
                        }
                        Task::HeavyUnmatchable(face) => {
                            if !self.unmatched_in(face).is_empty() {
                                return Err(Error::Invariant(format!(
                                    "face {face} should be empty of unmatched points"
                                )));
                            }
                            let t = self.arena.fresh_position_in(face)?;
                            self.awaiting = Await::Heavy;
                            return self.emit_at(t, self.u.clone());
                        }
                    }
                }
                Phase::Done => return Ok(AdversaryEvent::End),
            }
        }
    }
}

impl Adversary for TwoWeightAdversary {
    fn name(&self) -> &'static str {
        "two-weight"
    }

    fn space(&self) -> Space {
        Space::Circle
    }

    fn next(&mut self, report: Option<&AlgorithmReport<'_>>) -> Result<AdversaryEvent> {
        if let Some(r) = report {
            self.observe(r)?;
        }
        self.produce()
    }

    fn certify(&self, state: &MatchingState) -> Result<Vec<BoundCheck>> {
        let ratio = if state.total_weight().is_zero() {
            Rational::zero()
        } else {
            state.matched_weight() / state.total_weight()
        };
        let third = Rational::new(1.into(), 3.into());
        let slack = rat_int(2) / (rat_int(3) * &self.u + rat_int(3));
        let tail = if state.total_weight().is_zero() {
            Rational::zero()
        } else {
            rat_int(3) / state.total_weight()
        };
        let threshold = third + slack + tail;
        // Cross-check our matched mirror against the real state.
        let mirror = self.matched.len();
        let real = state
            .outcome()
            .matched_flags
            .iter()
            .filter(|&&f| f)
            .count();
        if mirror != real {
            return Err(Error::Invariant(format!(
                "adversary mirror tracked {mirror} matched points, state has {real}"
            )));
        }
        Ok(vec![BoundCheck::ratio_le(
            "two-weight ratio <= 1/3 + 2/(3U+3) + 3/W",
            &ratio,
            &threshold,
        )])
    }
}
