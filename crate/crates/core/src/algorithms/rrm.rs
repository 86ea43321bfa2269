//! Random-revoking matching on a line (unweighted, revocable, randomized).
//!
//! The line is kept partitioned into intervals:
//!
//! * open and half-open intervals contain no matched pairs;
//! * each half-open interval contains exactly one unmatched point, sitting on
//!   its closed boundary;
//! * closed intervals contain exactly two points, on the boundaries, matched
//!   together.
//!
//! Arrivals are handled per interval kind: the first point in an open interval
//! waits; the second is matched to it, carving out a closed interval; a point
//! inside a closed interval revokes the pair and marries one endpoint chosen
//! by a fair coin, leaving a closed plus a half-open interval; a point in a
//! half-open interval marries the boundary point.

use std::collections::HashMap;

use crate::coin::Coin;
use crate::error::Error;
use crate::matching::{MatchingState, PointId, WeightedPoint};
use crate::rational::Rational;
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(Rational),
    PosInf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    /// No matched pair inside; at most one waiting point.
    Open { occupant: Option<PointId> },
    /// `[closed, hi)` — the unmatched point sits on the left boundary.
    HalfOpenLeftClosed { closed: PointId },
    /// `(lo, closed]` — the unmatched point sits on the right boundary.
    HalfOpenRightClosed { closed: PointId },
    /// `[left, right]`, matched together.
    Closed { left: PointId, right: PointId },
}

#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
    pub kind: IntervalKind,
}

/// Ordered partition of the line into disjoint covering intervals.
#[derive(Clone, Debug, Default)]
pub struct IntervalPartition {
    intervals: Vec<Interval>,
    positions: HashMap<PointId, Rational>,
}

impl IntervalPartition {
    pub fn new() -> Self {
        IntervalPartition {
            intervals: vec![Interval {
                lo: Bound::NegInf,
                hi: Bound::PosInf,
                kind: IntervalKind::Open { occupant: None },
            }],
            positions: HashMap::new(),
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    fn locate(&self, x: &Rational) -> Result<usize> {
        for (idx, iv) in self.intervals.iter().enumerate() {
            let above_lo = match &iv.lo {
                Bound::NegInf => true,
                Bound::At(l) => l < x,
                Bound::PosInf => false,
            };
            let below_hi = match &iv.hi {
                Bound::NegInf => false,
                Bound::At(h) => x < h,
                Bound::PosInf => true,
            };
            if above_lo && below_hi {
                return Ok(idx);
            }
        }
        Err(Error::Invariant(format!(
            "position {x} not covered by the interval partition"
        )))
    }

    /// Structural invariants: ordered contiguous cover, and per-kind content.
    pub fn check(&self, state: &MatchingState) -> Result<()> {
        if self.intervals.is_empty() {
            return Err(Error::Invariant("empty interval partition".into()));
        }
        if self.intervals.first().unwrap().lo != Bound::NegInf
            || self.intervals.last().unwrap().hi != Bound::PosInf
        {
            return Err(Error::Invariant("partition does not span the line".into()));
        }
        for w in self.intervals.windows(2) {
            match (&w[0].hi, &w[1].lo) {
                (Bound::At(a), Bound::At(b)) if a == b => {}
                _ => return Err(Error::Invariant("intervals are not contiguous".into())),
            }
        }
        for iv in &self.intervals {
            match &iv.kind {
                IntervalKind::Open { occupant } => {
                    if let Some(id) = occupant {
                        if state.is_matched(*id) {
                            return Err(Error::Invariant(format!(
                                "open interval holds matched point {id}"
                            )));
                        }
                    }
                }
                IntervalKind::HalfOpenLeftClosed { closed }
                | IntervalKind::HalfOpenRightClosed { closed } => {
                    if state.is_matched(*closed) {
                        return Err(Error::Invariant(format!(
                            "half-open interval boundary point {closed} is matched"
                        )));
                    }
                    let pos = self.positions.get(closed).ok_or(Error::UnknownPoint(*closed))?;
                    let boundary = match &iv.kind {
                        IntervalKind::HalfOpenLeftClosed { .. } => &iv.lo,
                        _ => &iv.hi,
                    };
                    if boundary != &Bound::At(pos.clone()) {
                        return Err(Error::Invariant(
                            "half-open interval point is not on its closed boundary".into(),
                        ));
                    }
                }
                IntervalKind::Closed { left, right } => {
                    if state.partner_of(*left) != Some(*right) {
                        return Err(Error::Invariant(format!(
                            "closed interval pair ({left},{right}) is not matched together"
                        )));
                    }
                    let lp = self.positions.get(left).ok_or(Error::UnknownPoint(*left))?;
                    let rp = self.positions.get(right).ok_or(Error::UnknownPoint(*right))?;
                    if iv.lo != Bound::At(lp.clone()) || iv.hi != Bound::At(rp.clone()) {
                        return Err(Error::Invariant(
                            "closed interval pair is not on its boundaries".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

pub struct Rrm {
    coin: Box<dyn Coin + Send>,
    partition: IntervalPartition,
}

impl Rrm {
    pub fn new(coin: Box<dyn Coin + Send>) -> Self {
        Rrm {
            coin,
            partition: IntervalPartition::new(),
        }
    }

    pub fn seeded(seed: u64) -> Self {
        Self::new(Box::new(crate::coin::SeededCoin::new(seed)))
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }
}

impl OnlineAlgorithm for Rrm {
    fn name(&self) -> &'static str {
        "rrm"
    }

    fn revocable(&self) -> bool {
        true
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let x = p.pos.line_x()?.clone();
        self.partition.positions.insert(p.id, x.clone());
        let idx = self.partition.locate(&x)?;
        let iv = self.partition.intervals[idx].clone();
        let (replacement, decision) = match iv.kind {
            IntervalKind::Open { occupant: None } => (
                vec![Interval {
                    lo: iv.lo,
                    hi: iv.hi,
                    kind: IntervalKind::Open { occupant: Some(p.id) },
                }],
                OnlineDecision::Leave,
            ),
            IntervalKind::Open { occupant: Some(q) } => {
                let qx = self.partition.positions[&q].clone();
                let (l_id, l_pos, r_id, r_pos) = if x < qx {
                    (p.id, x.clone(), q, qx)
                } else {
                    (q, qx, p.id, x.clone())
                };
                (
                    vec![
                        Interval {
                            lo: iv.lo,
                            hi: Bound::At(l_pos.clone()),
                            kind: IntervalKind::Open { occupant: None },
                        },
                        Interval {
                            lo: Bound::At(l_pos),
                            hi: Bound::At(r_pos.clone()),
                            kind: IntervalKind::Closed { left: l_id, right: r_id },
                        },
                        Interval {
                            lo: Bound::At(r_pos),
                            hi: iv.hi,
                            kind: IntervalKind::Open { occupant: None },
                        },
                    ],
                    OnlineDecision::Match(q),
                )
            }
            IntervalKind::Closed { left, right } => {
                let lp = self.partition.positions[&left].clone();
                let rp = self.partition.positions[&right].clone();
                if self.coin.flip() {
                    // Marry the right endpoint: [left, p) plus [p, right].
                    (
                        vec![
                            Interval {
                                lo: Bound::At(lp),
                                hi: Bound::At(x.clone()),
                                kind: IntervalKind::HalfOpenLeftClosed { closed: left },
                            },
                            Interval {
                                lo: Bound::At(x.clone()),
                                hi: Bound::At(rp),
                                kind: IntervalKind::Closed { left: p.id, right },
                            },
                        ],
                        OnlineDecision::RevokeAndMatch {
                            revoke: (left, right),
                            partner: right,
                        },
                    )
                } else {
                    // Marry the left endpoint: [left, p] plus (p, right].
                    (
                        vec![
                            Interval {
                                lo: Bound::At(lp),
                                hi: Bound::At(x.clone()),
                                kind: IntervalKind::Closed { left, right: p.id },
                            },
                            Interval {
                                lo: Bound::At(x.clone()),
                                hi: Bound::At(rp),
                                kind: IntervalKind::HalfOpenRightClosed { closed: right },
                            },
                        ],
                        OnlineDecision::RevokeAndMatch {
                            revoke: (left, right),
                            partner: left,
                        },
                    )
                }
            }
            IntervalKind::HalfOpenLeftClosed { closed } => {
                let cp = self.partition.positions[&closed].clone();
                (
                    vec![
                        Interval {
                            lo: Bound::At(cp),
                            hi: Bound::At(x.clone()),
                            kind: IntervalKind::Closed { left: closed, right: p.id },
                        },
                        Interval {
                            lo: Bound::At(x.clone()),
                            hi: iv.hi,
                            kind: IntervalKind::Open { occupant: None },
                        },
                    ],
                    OnlineDecision::Match(closed),
                )
            }
            IntervalKind::HalfOpenRightClosed { closed } => {
                let cp = self.partition.positions[&closed].clone();
                (
                    vec![
                        Interval {
                            lo: iv.lo,
                            hi: Bound::At(x.clone()),
                            kind: IntervalKind::Open { occupant: None },
                        },
                        Interval {
                            lo: Bound::At(x.clone()),
                            hi: Bound::At(cp),
                            kind: IntervalKind::Closed { left: p.id, right: closed },
                        },
                    ],
                    OnlineDecision::Match(closed),
                )
            }
        };
        self.partition.intervals.splice(idx..=idx, replacement);
        let _ = state;
        Ok(decision)
    }

    fn check_invariants(&self, state: &MatchingState) -> Result<()> {
        self.partition.check(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::ScriptedCoin;
    use crate::matching::Mode;
    use crate::rational::{rat, rat_int};
    use crate::{Position, Space};

    fn arrive(state: &mut MatchingState, alg: &mut Rrm, x: Rational) -> OnlineDecision {
        let p = state.ingest(Position::line(x), rat_int(1)).unwrap().clone();
        let d = alg.on_arrival(state, &p).unwrap();
        match &d {
            OnlineDecision::Match(j) => state.apply_match(p.id, *j).unwrap(),
            OnlineDecision::RevokeAndMatch { revoke, partner } => {
                state.apply_revoke(revoke.0, revoke.1).unwrap();
                state.apply_match(p.id, *partner).unwrap();
            }
            OnlineDecision::Leave => {}
        }
        alg.check_invariants(state).unwrap();
        state.assert_noncrossing().unwrap();
        d
    }

    #[test]
    fn first_two_points_partition_the_line() {
        let mut st = MatchingState::new(Space::Line, Mode::Revocable);
        let mut alg = Rrm::seeded(0);
        assert_eq!(arrive(&mut st, &mut alg, rat_int(0)), OnlineDecision::Leave);
        assert_eq!(arrive(&mut st, &mut alg, rat_int(1)), OnlineDecision::Match(1));
        let ivs = alg.partition().intervals();
        assert_eq!(ivs.len(), 3);
        assert!(matches!(ivs[0].kind, IntervalKind::Open { occupant: None }));
        assert!(matches!(ivs[1].kind, IntervalKind::Closed { left: 1, right: 2 }));
        assert!(matches!(ivs[2].kind, IntervalKind::Open { occupant: None }));
    }

    #[test]
    fn arrival_in_closed_interval_revokes_and_rematches_left() {
        let mut st = MatchingState::new(Space::Line, Mode::Revocable);
        // Scripted: coin false -> marry the left endpoint p1.
        let mut alg = Rrm::new(Box::new(ScriptedCoin::new([false])));
        arrive(&mut st, &mut alg, rat_int(0));
        arrive(&mut st, &mut alg, rat_int(1));
        let d = arrive(&mut st, &mut alg, rat(1, 2));
        assert_eq!(
            d,
            OnlineDecision::RevokeAndMatch {
                revoke: (1, 2),
                partner: 1
            }
        );
        let ivs = alg.partition().intervals();
        assert_eq!(ivs.len(), 4);
        assert!(matches!(ivs[1].kind, IntervalKind::Closed { left: 1, right: 3 }));
        assert!(matches!(
            ivs[2].kind,
            IntervalKind::HalfOpenRightClosed { closed: 2 }
        ));
    }

    #[test]
    fn arrival_in_half_open_interval_marries_boundary_point() {
        let mut st = MatchingState::new(Space::Line, Mode::Revocable);
        let mut alg = Rrm::new(Box::new(ScriptedCoin::new([false])));
        arrive(&mut st, &mut alg, rat_int(0));
        arrive(&mut st, &mut alg, rat_int(1));
        arrive(&mut st, &mut alg, rat(1, 2));
        // p4 outside everything stays unmatched; p5 inside (p3, p2] marries p2.
        assert_eq!(arrive(&mut st, &mut alg, rat_int(5)), OnlineDecision::Leave);
        let d5 = arrive(&mut st, &mut alg, rat(3, 4));
        assert_eq!(d5, OnlineDecision::Match(2));
        let ivs = alg.partition().intervals();
        // (-inf,0) [0,1/2] (1/2,3/4) [3/4,1] (1, inf with occupant 4)
        assert_eq!(ivs.len(), 5);
        assert!(matches!(ivs[2].kind, IntervalKind::Open { occupant: None }));
        assert!(matches!(ivs[3].kind, IntervalKind::Closed { left: 5, right: 2 }));
        assert!(matches!(ivs[4].kind, IntervalKind::Open { occupant: Some(4) }));
    }

    #[test]
    fn coin_true_marries_right_endpoint() {
        let mut st = MatchingState::new(Space::Line, Mode::Revocable);
        let mut alg = Rrm::new(Box::new(ScriptedCoin::new([true])));
        arrive(&mut st, &mut alg, rat_int(0));
        arrive(&mut st, &mut alg, rat_int(1));
        let d = arrive(&mut st, &mut alg, rat(1, 2));
        assert_eq!(
            d,
            OnlineDecision::RevokeAndMatch {
                revoke: (1, 2),
                partner: 2
            }
        );
        let ivs = alg.partition().intervals();
        assert!(matches!(
            ivs[1].kind,
            IntervalKind::HalfOpenLeftClosed { closed: 1 }
        ));
        assert!(matches!(ivs[2].kind, IntervalKind::Closed { left: 3, right: 2 }));
    }
}
