//! Adaptive unit-weight adversary on the circle for algorithms that may
//! revoke. Keeps one active face and, per matched pair, exactly one
//! associated unmatched point whose face is bordered by the pair's chord.
//!
//! A phase emits fresh points into the active face until the algorithm acts.
//! On a plain match, the richer side keeps (or, if both sides are empty,
//! first receives) the associated point and the poorer side becomes active.
//! On a revoke-and-match, the two faces adjacent to the revoked chord merge
//! (the revoked pair loses its associate), the freed endpoint becomes the
//! associate of the new pair, and the side of the new chord away from it
//! becomes active. Any algorithm behavior outside this case analysis is a
//! loud protocol error rather than a silent guess.

use std::collections::HashMap;

use num::Zero;

use crate::algorithms::OnlineDecision;
use crate::error::Error;
use crate::matching::{MatchingState, PointId};
use crate::rational::{rat, rat_int, Rational};
use crate::{Position, Result, Space};

use super::faces::{FaceArena, FaceId};
use super::{Adversary, AdversaryEvent, AlgorithmReport, BoundCheck};

fn norm(a: PointId, b: PointId) -> (PointId, PointId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug)]
enum Extra {
    No,
    /// A fresh match left both sides empty; the next emission goes into
    /// `into`, which will hold the associate, and `other` becomes active.
    NeedEmit { pair: (PointId, PointId), into: FaceId, other: FaceId },
    /// The extra point is out; waiting for its report.
    Awaiting { pair: (PointId, PointId), other: FaceId },
}

pub struct RevokingAdversary {
    n_pairs: usize,
    arena: FaceArena,
    partner: HashMap<PointId, PointId>,
    associate: HashMap<(PointId, PointId), PointId>,
    active: FaceId,
    emitted: usize,
    extra: Extra,
    done: bool,
}

impl RevokingAdversary {
    pub fn new(n_pairs: usize) -> Self {
        RevokingAdversary {
            n_pairs,
            arena: FaceArena::new(),
            partner: HashMap::new(),
            associate: HashMap::new(),
            active: 0,
            emitted: 0,
            extra: Extra::No,
            done: false,
        }
    }

    fn unmatched_in(&self, face: FaceId) -> Vec<PointId> {
        let partner = &self.partner;
        self.arena
            .unmatched_in_face(face, |id| partner.contains_key(&id))
    }

    fn emit_into(&mut self, face: FaceId) -> Result<AdversaryEvent> {
        let t = self.arena.fresh_position_in(face)?;
        self.emitted += 1;
        self.arena.insert_point(self.emitted, t.clone())?;
        Ok(AdversaryEvent::Emit {
            pos: Position::circle(t),
            weight: Rational::from_integer(1.into()),
        })
    }

    fn handle_match(&mut self, q: PointId) -> Result<()> {
        let p = self.emitted;
        let face = self.arena.face_of_point(p)?;
        if face != self.active {
            return Err(Error::Protocol(format!(
                "match for point {p} happened in face {face}, not the active face {}",
                self.active
            )));
        }
        if self.partner.contains_key(&q) {
            return Err(Error::Protocol(format!("partner {q} is already matched")));
        }
        let (f1, f2) = self.arena.split_face(face, p, q)?;
        self.partner.insert(p, q);
        self.partner.insert(q, p);
        let pair = norm(p, q);
        let (n1, n2) = (self.unmatched_in(f1).len(), self.unmatched_in(f2).len());
        if n1 == 0 && n2 == 0 {
            // Give one extra point to the first side; association completes
            // when its report arrives.
            self.extra = Extra::NeedEmit {
                pair,
                into: f1,
                other: f2,
            };
        } else {
            // The richer side keeps the associate; the poorer side is next.
            let (rich, poor) = if n1 >= n2 { (f1, f2) } else { (f2, f1) };
            let candidate = *self
                .unmatched_in(rich)
                .first()
                .expect("rich side has an unmatched point");
            self.associate.insert(pair, candidate);
            self.active = poor;
        }
        Ok(())
    }

    fn handle_revoke_match(&mut self, revoked: (PointId, PointId), c: PointId) -> Result<()> {
        let p = self.emitted;
        let (a, b) = revoked;
        if self.partner.get(&a) != Some(&b) {
            return Err(Error::Protocol(format!(
                "revoked edge ({a},{b}) is not in the adversary's mirror"
            )));
        }
        // The chord must border the face the arriving point landed in (the
        // region under attack at emission time).
        let p_face = self.arena.face_of_point(p)?;
        let (fl, fr) = self.arena.faces_at_point(a)?;
        if fl != p_face && fr != p_face {
            return Err(Error::Protocol(format!(
                "revoked chord ({a},{b}) does not border the arrival's face {p_face}"
            )));
        }
        if fl == fr {
            return Err(Error::Invariant(
                "chord endpoints see a single face before the merge".into(),
            ));
        }
        self.partner.remove(&a);
        self.partner.remove(&b);
        self.associate.remove(&norm(a, b));
        let merged = self.arena.merge_faces(fl, fr)?;
        // The new match (p, c).
        if self.partner.contains_key(&c) {
            return Err(Error::Protocol(format!("partner {c} is already matched")));
        }
        if self.arena.face_of_point(p)? != merged || self.arena.face_of_point(c)? != merged {
            return Err(Error::Protocol(
                "new match does not live inside the merged face".into(),
            ));
        }
        let (f1, f2) = self.arena.split_face(merged, p, c)?;
        self.partner.insert(p, c);
        self.partner.insert(c, p);
        // A freed endpoint of the revoked pair becomes the associate.
        let freed = if c == a {
            b
        } else if c == b {
            a
        } else {
            a.min(b)
        };
        let pair = norm(p, c);
        self.associate.insert(pair, freed);
        let freed_side = if self.arena.point_side(p, c, freed)? { f1 } else { f2 };
        self.active = if freed_side == f1 { f2 } else { f1 };
        Ok(())
    }

    fn check_invariants(&self) -> Result<()> {
        let mut seen_faces = HashMap::new();
        let mut pairs = 0usize;
        for (&x, &y) in &self.partner {
            if x > y {
                continue;
            }
            pairs += 1;
            let pair = (x, y);
            let q = *self.associate.get(&pair).ok_or_else(|| {
                Error::Invariant(format!("pair ({x},{y}) has no associated point"))
            })?;
            if self.partner.contains_key(&q) {
                return Err(Error::Invariant(format!(
                    "associate {q} of pair ({x},{y}) is matched"
                )));
            }
            let face = self.arena.face_of_point(q)?;
            if let Some(other) = seen_faces.insert(face, q) {
                return Err(Error::Invariant(format!(
                    "associates {other} and {q} share face {face}"
                )));
            }
            // The pair's chord borders the associate's face.
            let (fl, fr) = self.arena.faces_at_point(x)?;
            if face != fl && face != fr {
                return Err(Error::Invariant(format!(
                    "associate {q} lives in face {face}, not adjacent to chord ({x},{y})"
                )));
            }
        }
        if self.associate.len() != pairs {
            return Err(Error::Invariant(format!(
                "{} associations for {pairs} pairs",
                self.associate.len()
            )));
        }
        Ok(())
    }
}

impl Adversary for RevokingAdversary {
    fn name(&self) -> &'static str {
        "revoking"
    }

    fn space(&self) -> Space {
        Space::Circle
    }

    fn next(&mut self, report: Option<&AlgorithmReport<'_>>) -> Result<AdversaryEvent> {
        if let Some(r) = report {
            match (&r.decision, self.extra) {
                (OnlineDecision::Leave, Extra::Awaiting { pair, other }) => {
                    // The extra point stays unmatched and becomes the associate.
                    self.associate.insert(pair, self.emitted);
                    self.active = other;
                    self.extra = Extra::No;
                    self.check_invariants()?;
                }
                (OnlineDecision::Leave, Extra::No) => {}
                (OnlineDecision::Leave, Extra::NeedEmit { .. }) => {
                    return Err(Error::Invariant("leave while an emission is pending".into()))
                }
                (OnlineDecision::Match(q), Extra::No) => {
                    self.handle_match(*q)?;
                    if matches!(self.extra, Extra::No) {
                        self.check_invariants()?;
                    }
                }
                (OnlineDecision::Match(_), _) => {
                    return Err(Error::Protocol(
                        "the extra point has no legal partner to match".into(),
                    ))
                }
                (OnlineDecision::RevokeAndMatch { revoke, partner }, extra) => {
                    // A revoke may arrive while the extra point is pending its
                    // report; the pending pair simply loses its chance at an
                    // associate through this path, which the case analysis
                    // only permits when that very pair is the one revoked.
                    if let Extra::Awaiting { pair, .. } = extra {
                        if norm(revoke.0, revoke.1) != pair {
                            return Err(Error::Protocol(
                                "revoke of an unrelated pair while an extra point is pending"
                                    .into(),
                            ));
                        }
                    }
                    self.extra = Extra::No;
                    self.handle_revoke_match(*revoke, *partner)?;
                    self.check_invariants()?;
                }
            }
        }
        if let Extra::NeedEmit { pair, into, other } = self.extra {
            if self.emitted >= 2 * self.n_pairs {
                self.done = true;
                return Ok(AdversaryEvent::End);
            }
            self.extra = Extra::Awaiting { pair, other };
            return self.emit_into(into);
        }
        if self.done || self.emitted >= 2 * self.n_pairs {
            self.done = true;
            return Ok(AdversaryEvent::End);
        }
        let face = self.active;
        self.emit_into(face)
    }

    fn certify(&self, state: &MatchingState) -> Result<Vec<BoundCheck>> {
        let matched_points = rat_int(2 * state.edge_count() as i64);
        let emitted = state.len();
        let threshold = rat(2, 3) * rat_int(emitted as i64) + rat_int(2);
        let ratio = if state.total_weight().is_zero() {
            Rational::zero()
        } else {
            state.matched_weight() / state.total_weight()
        };
        let _ = ratio;
        Ok(vec![BoundCheck::ratio_le(
            "revoking: matched points <= (2/3) emitted + 2",
            &matched_points,
            &threshold,
        )])
    }
}
