//! Adaptive bounded-weight adversary on the circle, for irrevocable
//! deterministic algorithms. Weights come from the classification ladder
//! `a_i = r^i`, so `U` must be an exact k-th power of a rational.
//!
//! Phase 1 feeds unit points (largest-gap midpoints) until the algorithm has
//! matched `m` pairs or `m * 2^k` points are out; in the latter case the
//! sequence ends with the ratio already below `2^(1-k)`. Otherwise each
//! matched pair is responsible for one face (the first pair for two), with
//! responsibility forwarded on splits to the side not bounded by the old
//! pair's chord. Each responsible face is then attacked:
//!
//! * Case 1 — at least `2^k - 1` unmatched points: skip; those points are
//!   charged to the face's pair (weight 2).
//! * Case 2 — fewer: probe with ascending weights `a_1, a_2, ...`; after each
//!   match the side with at most half the unmatched points becomes active.
//!   Some probe `a_j` must stay unmatched, and the matched weight `M`
//!   accumulated in the face stays below `(r^j - 1)/(r - 1) + j + 2`.

use std::collections::{HashMap, HashSet, VecDeque};

use num::{One, Zero};

use crate::algorithms::OnlineDecision;
use crate::classify::ClassificationParams;
use crate::error::Error;
use crate::matching::{MatchingState, PointId};
use crate::rational::{format_rational, pow, pow2, rat_int, Rational};
use crate::{Position, Result, Space};

use super::faces::{FaceArena, FaceId};
use super::{Adversary, AdversaryEvent, AlgorithmReport, BoundCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    One,
    Attacks,
    Done,
}

/// Certificate for one attacked face.
#[derive(Clone, Debug)]
pub struct FaceCase {
    pub face: FaceId,
    /// Case 1: the number of unmatched points charged to the pair.
    pub case1_unmatched: Option<usize>,
    /// Case 2: (j, M) — index of the first unmatched probe and the matched
    /// weight accumulated in the face.
    pub case2: Option<(u32, Rational)>,
}

pub struct RestrictedAdversary {
    params: ClassificationParams,
    ratio: Rational, // exact r
    m: usize,
    arena: FaceArena,
    matched: HashSet<PointId>,
    emitted: usize,
    phase: Phase,
    responsible: HashMap<FaceId, (PointId, PointId)>,
    queue: VecDeque<FaceId>,
    /// Active attack: (root face, active sub-face, next probe index, matched
    /// weight so far in this face).
    attack: Option<(FaceId, FaceId, u32, Rational)>,
    awaiting_probe: bool,
    cases: Vec<FaceCase>,
}

impl RestrictedAdversary {
    pub fn new(u: Rational, m: usize) -> Result<Self> {
        let params = ClassificationParams::new(u)?;
        let ratio = params.exact_ratio().ok_or_else(|| {
            Error::Config(format!(
                "probe weights need U to be an exact {}-th power of a rational",
                params.k()
            ))
        })?;
        if params.k() == 0 {
            return Err(Error::Config("U must exceed 1".into()));
        }
        if m == 0 {
            return Err(Error::Config("pair budget m must be positive".into()));
        }
        Ok(RestrictedAdversary {
            params,
            ratio,
            m,
            arena: FaceArena::new(),
            matched: HashSet::new(),
            emitted: 0,
            phase: Phase::One,
            responsible: HashMap::new(),
            queue: VecDeque::new(),
            attack: None,
            awaiting_probe: false,
            cases: Vec::new(),
        })
    }

    pub fn cases(&self) -> &[FaceCase] {
        &self.cases
    }

    fn unmatched_in(&self, face: FaceId) -> Vec<PointId> {
        let matched = &self.matched;
        self.arena.unmatched_in_face(face, |id| matched.contains(&id))
    }

    fn budget(&self) -> usize {
        self.m << self.params.k() as usize
    }

    fn threshold_weight(&self, i: u32) -> Rational {
        pow(&self.ratio, i)
    }

    fn emit_at(&mut self, t: Rational, weight: Rational) -> Result<AdversaryEvent> {
        self.emitted += 1;
        self.arena.insert_point(self.emitted, t.clone())?;
        Ok(AdversaryEvent::Emit {
            pos: Position::circle(t),
            weight,
        })
    }

    fn observe_match(&mut self, partner: PointId) -> Result<(FaceId, FaceId)> {
        let p = self.emitted;
        let fp = self.arena.face_of_point(p)?;
        let fq = self.arena.face_of_point(partner)?;
        if fp != fq {
            return Err(Error::Protocol(format!(
                "match ({p},{partner}) spans faces {fp} and {fq}"
            )));
        }
        let (f1, f2) = self.arena.split_face(fp, p, partner)?;
        self.matched.insert(p);
        self.matched.insert(partner);
        // Responsibility forwarding: the side bounded by the old pair's chord
        // keeps it; the other side belongs to the new pair.
        match self.responsible.remove(&fp) {
            None => {
                // First match: the new pair takes both sides.
                self.responsible.insert(f1, (p, partner));
                self.responsible.insert(f2, (p, partner));
            }
            Some(pair) => {
                let old_on_positive = self.arena.point_side(p, partner, pair.0)?;
                debug_assert_eq!(
                    old_on_positive,
                    self.arena.point_side(p, partner, pair.1)?,
                    "the old chord cannot straddle the new one"
                );
                let (keeps_old, gets_new) = if old_on_positive { (f1, f2) } else { (f2, f1) };
                self.responsible.insert(keeps_old, pair);
                self.responsible.insert(gets_new, (p, partner));
            }
        }
        Ok((f1, f2))
    }

    fn observe(&mut self, report: &AlgorithmReport<'_>) -> Result<()> {
        match &report.decision {
            OnlineDecision::RevokeAndMatch { .. } => {
                return Err(Error::Protocol(
                    "restricted adversary expects an irrevocable algorithm".into(),
                ))
            }
            OnlineDecision::Leave => {
                if self.awaiting_probe {
                    // First unmatched probe: close out this face with a
                    // Case-2 certificate.
                    self.awaiting_probe = false;
                    let (face, _active, probe_index, m_weight) =
                        self.attack.take().expect("probe belongs to an attack");
                    let j = probe_index;
                    let m_value = m_weight + rat_int(2);
                    let cap = (pow(&self.ratio, j) - Rational::one())
                        / (&self.ratio - Rational::one())
                        + rat_int(j as i64)
                        + rat_int(2);
                    if m_value > cap {
                        return Err(Error::Invariant(format!(
                            "face {face}: matched weight {m_value} exceeds the case-2 cap {cap}"
                        )));
                    }
                    self.cases.push(FaceCase {
                        face,
                        case1_unmatched: None,
                        case2: Some((j, m_value)),
                    });
                }
            }
            OnlineDecision::Match(q) => {
                let was_probe = self.awaiting_probe;
                self.awaiting_probe = false;
                let partner_unmatched = !self.matched.contains(q);
                if !partner_unmatched {
                    return Err(Error::Protocol(format!("partner {q} is already matched")));
                }
                let (f1, f2) = self.observe_match(*q)?;
                if was_probe {
                    let (face, _active, probe_index, m_weight) =
                        self.attack.take().expect("probe belongs to an attack");
                    // The partner must be one of the unit points.
                    let probe_weight = self.threshold_weight(probe_index);
                    if probe_index >= self.params.k() {
                        return Err(Error::Invariant(format!(
                            "face {face}: all {} probes were matched, which the halving \
                             argument rules out",
                            self.params.k()
                        )));
                    }
                    // The side with at most half of the unmatched points
                    // becomes active (ties toward the negative side).
                    let (n1, n2) = (self.unmatched_in(f1).len(), self.unmatched_in(f2).len());
                    let active = if n1 < n2 { f1 } else { f2 };
                    self.attack = Some((
                        face,
                        active,
                        probe_index + 1,
                        m_weight + Rational::one() + probe_weight,
                    ));
                }
            }
        }
        Ok(())
    }

    fn produce(&mut self) -> Result<AdversaryEvent> {
        loop {
            match self.phase {
                Phase::One => {
                    if self.matched.len() / 2 >= self.m {
                        // Snapshot the current faces and attack them in order.
                        let mut faces: Vec<FaceId> = self.responsible.keys().copied().collect();
                        faces.sort_unstable();
                        self.queue = faces.into_iter().collect();
                        self.phase = Phase::Attacks;
                        continue;
                    }
                    if self.emitted >= self.budget() {
                        self.phase = Phase::Done;
                        return Ok(AdversaryEvent::End);
                    }
                    let t = self.arena.fresh_position_global();
                    return self.emit_at(t, Rational::one());
                }
                Phase::Attacks => {
                    if let Some((_face, active, probe_index, _)) = &self.attack {
                        let t = self.arena.fresh_position_in(*active)?;
                        let w = self.threshold_weight(*probe_index);
                        self.awaiting_probe = true;
                        return self.emit_at(t, w);
                    }
                    let face = match self.queue.pop_front() {
                        Some(f) => f,
                        None => {
                            self.phase = Phase::Done;
                            return Ok(AdversaryEvent::End);
                        }
                    };
                    let unmatched = self.unmatched_in(face).len();
                    let case1_floor = (1usize << self.params.k() as usize) - 1;
                    if unmatched >= case1_floor {
                        self.cases.push(FaceCase {
                            face,
                            case1_unmatched: Some(unmatched),
                            case2: None,
                        });
                        continue;
                    }
                    self.attack = Some((face, face, 1, Rational::zero()));
                }
                Phase::Done => return Ok(AdversaryEvent::End),
            }
        }
    }
}

impl Adversary for RestrictedAdversary {
    fn name(&self) -> &'static str {
        "restricted"
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
        let mut checks = Vec::new();
        let ratio = if state.total_weight().is_zero() {
            Rational::zero()
        } else {
            state.matched_weight() / state.total_weight()
        };
        // Overall: matched weight / total weight <= 8 * 2^-k.
        let threshold = pow2(3 - self.params.k() as i64);
        checks.push(BoundCheck::ratio_le(
            "restricted ratio <= 8 * 2^-k",
            &ratio,
            &threshold,
        ));
        let case1_floor = (1usize << self.params.k() as usize) - 1;
        for case in &self.cases {
            if let Some(count) = case.case1_unmatched {
                checks.push(BoundCheck {
                    name: format!("face {} case 1: unmatched >= 2^k - 1", case.face),
                    observed: count.to_string(),
                    threshold: case1_floor.to_string(),
                    satisfied: count >= case1_floor,
                });
            }
            if let Some((j, m_value)) = &case.case2 {
                let cap = (pow(&self.ratio, *j) - Rational::one())
                    / (&self.ratio - Rational::one())
                    + rat_int(*j as i64)
                    + rat_int(2);
                checks.push(BoundCheck {
                    name: format!("face {} case 2: M <= (r^j-1)/(r-1) + j + 2 at j={j}", case.face),
                    observed: format_rational(m_value),
                    threshold: format_rational(&cap),
                    satisfied: *m_value <= cap,
                });
            }
        }
        Ok(checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::run_duel;
    use crate::algorithms::{Greedy, OnlineAlgorithm};
    use crate::matching::WeightedPoint;
    use crate::runner::RunOptions;

    struct NeverMatch;
    impl OnlineAlgorithm for NeverMatch {
        fn name(&self) -> &'static str {
            "never"
        }
        fn on_arrival(&mut self, _: &MatchingState, _: &WeightedPoint) -> Result<OnlineDecision> {
            Ok(OnlineDecision::Leave)
        }
    }

    #[test]
    fn never_match_exhausts_the_budget() {
        let mut adv = RestrictedAdversary::new(rat_int(16), 2).unwrap();
        let rec = run_duel(&mut NeverMatch, &mut adv, RunOptions::default()).unwrap();
        // k = 2 for U = 16, so the budget is 2 * 4 = 8 points.
        assert_eq!(rec.run.state.len(), 8);
        assert_eq!(rec.run.outcome.matched_weight, rat_int(0));
        assert!(rec.checks.iter().all(|c| c.satisfied));
    }

    #[test]
    fn greedy_faces_case_analysis() {
        let mut adv = RestrictedAdversary::new(rat_int(16), 3).unwrap();
        let mut alg = Greedy::new();
        let rec = run_duel(&mut alg, &mut adv, RunOptions::default()).unwrap();
        assert!(rec.checks.iter().all(|c| c.satisfied), "{:#?}", rec.checks);
        // Greedy matches eagerly, so phase 2 must have engaged.
        assert!(!adv.cases().is_empty());
        assert!(rec.run.state.len() > 6);
    }

    #[test]
    fn irrational_ratio_is_rejected() {
        assert!(RestrictedAdversary::new(rat_int(10), 2).is_err());
    }
}
