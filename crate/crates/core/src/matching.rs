//! Weighted points and the matching state model.
//!
//! `MatchingState` is the single source of truth for which points are matched.
//! Every `apply_match` re-checks the non-crossing constraint against all
//! current edges with exact predicates, so no algorithm can smuggle in an
//! invalid matching.

use std::collections::BTreeSet;

use num::Signed;

use crate::error::Error;
use crate::geometry::{segments_properly_cross, Position, Segment, Space};
use crate::rational::Rational;
use crate::Result;

/// 1-based arrival index.
pub type PointId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoint {
    pub id: PointId,
    pub pos: Position,
    pub weight: Rational,
}

impl WeightedPoint {
    pub fn new(id: PointId, pos: Position, weight: Rational) -> Result<Self> {
        if !weight.is_positive() {
            return Err(Error::NonpositiveWeight(weight.to_string()));
        }
        Ok(WeightedPoint { id, pos, weight })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Irrevocable,
    Revocable,
}

/// An edge removed by a revoke, with the arrival step at which it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevokedEdge {
    pub a: PointId,
    pub b: PointId,
    pub step: usize,
}

/// Aggregate result of a completed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub total_weight: Rational,
    pub matched_weight: Rational,
    pub matched_pair_count: usize,
    pub matched_flags: Vec<bool>,
}

impl RunOutcome {
    /// Exact ratio of matched weight to total weight.
    pub fn ratio(&self) -> Rational {
        &self.matched_weight / &self.total_weight
    }
}

#[derive(Clone, Debug)]
pub struct MatchingState {
    space: Space,
    mode: Mode,
    points: Vec<WeightedPoint>,
    partner: Vec<Option<PointId>>,
    edges: BTreeSet<(PointId, PointId)>,
    revoked: Vec<RevokedEdge>,
    seen_positions: BTreeSet<Position>,
}

fn norm(i: PointId, j: PointId) -> (PointId, PointId) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl MatchingState {
    pub fn new(space: Space, mode: Mode) -> Self {
        MatchingState {
            space,
            mode,
            points: Vec::new(),
            partner: Vec::new(),
            edges: BTreeSet::new(),
            revoked: Vec::new(),
            seen_positions: BTreeSet::new(),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Adds the next arriving point. Ids must be consecutive from 1.
    pub fn ingest(&mut self, pos: Position, weight: Rational) -> Result<&WeightedPoint> {
        if pos.space() != self.space {
            return Err(Error::MixedSpaces);
        }
        if self.seen_positions.contains(&pos) {
            return Err(Error::DuplicatePosition(pos.describe()));
        }
        let id = self.points.len() + 1;
        let point = WeightedPoint::new(id, pos.clone(), weight)?;
        self.seen_positions.insert(pos);
        self.points.push(point);
        self.partner.push(None);
        Ok(self.points.last().unwrap())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> Result<&WeightedPoint> {
        if id == 0 || id > self.points.len() {
            return Err(Error::UnknownPoint(id));
        }
        Ok(&self.points[id - 1])
    }

    pub fn partner_of(&self, id: PointId) -> Option<PointId> {
        self.partner.get(id.wrapping_sub(1)).copied().flatten()
    }

    pub fn is_matched(&self, id: PointId) -> bool {
        self.partner_of(id).is_some()
    }

    pub fn edges(&self) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn revoked(&self) -> &[RevokedEdge] {
        &self.revoked
    }

    pub fn unmatched_ids(&self) -> impl Iterator<Item = PointId> + '_ {
        (1..=self.points.len()).filter(|&id| !self.is_matched(id))
    }

    fn segment(&self, i: PointId, j: PointId) -> Result<Segment> {
        Segment::new(self.point(i)?.pos.clone(), self.point(j)?.pos.clone())
    }

    /// The first current edge that the candidate segment `(i, j)` would cross,
    /// if any. Exact, O(current edges).
    pub fn crossing_conflict(&self, i: PointId, j: PointId) -> Result<Option<(PointId, PointId)>> {
        let cand = self.segment(i, j)?;
        for &(a, b) in &self.edges {
            if a == i || a == j || b == i || b == j {
                continue;
            }
            let edge = self.segment(a, b)?;
            if segments_properly_cross(&cand, &edge)? {
                return Ok(Some((a, b)));
            }
        }
        Ok(None)
    }

    /// Adds the edge `{i, j}` after checking every precondition.
    pub fn apply_match(&mut self, i: PointId, j: PointId) -> Result<()> {
        if i == j {
            return Err(Error::IdenticalEndpoints(i));
        }
        self.point(i)?;
        self.point(j)?;
        if self.is_matched(i) {
            return Err(Error::AlreadyMatched(i));
        }
        if self.is_matched(j) {
            return Err(Error::AlreadyMatched(j));
        }
        if let Some((a, b)) = self.crossing_conflict(i, j)? {
            return Err(Error::CrossingViolation(i, j, a, b));
        }
        self.edges.insert(norm(i, j));
        self.partner[i - 1] = Some(j);
        self.partner[j - 1] = Some(i);
        Ok(())
    }

    /// Removes the current edge `{i, j}`; both endpoints become re-matchable.
    pub fn apply_revoke(&mut self, i: PointId, j: PointId) -> Result<()> {
        if self.mode != Mode::Revocable {
            return Err(Error::IrrevocableMode);
        }
        let key = norm(i, j);
        if !self.edges.remove(&key) {
            return Err(Error::EdgeAbsent(i, j));
        }
        self.partner[i - 1] = None;
        self.partner[j - 1] = None;
        self.revoked.push(RevokedEdge {
            a: key.0,
            b: key.1,
            step: self.points.len(),
        });
        Ok(())
    }

    /// Exhaustive pairwise non-crossing check over the current matching.
    pub fn assert_noncrossing(&self) -> Result<()> {
        let edges: Vec<_> = self.edges.iter().copied().collect();
        for (idx, &(a, b)) in edges.iter().enumerate() {
            let s = self.segment(a, b)?;
            for &(c, d) in &edges[idx + 1..] {
                let t = self.segment(c, d)?;
                if segments_properly_cross(&s, &t)? {
                    return Err(Error::CrossingViolation(a, b, c, d));
                }
            }
        }
        Ok(())
    }

    pub fn matched_weight(&self) -> Rational {
        let mut sum = Rational::from_integer(0.into());
        for &(a, b) in &self.edges {
            sum += &self.points[a - 1].weight;
            sum += &self.points[b - 1].weight;
        }
        sum
    }

    pub fn total_weight(&self) -> Rational {
        let mut sum = Rational::from_integer(0.into());
        for p in &self.points {
            sum += &p.weight;
        }
        sum
    }

    pub fn outcome(&self) -> RunOutcome {
        let matched_flags: Vec<bool> = (1..=self.points.len()).map(|id| self.is_matched(id)).collect();
        RunOutcome {
            total_weight: self.total_weight(),
            matched_weight: self.matched_weight(),
            matched_pair_count: self.edges.len(),
            matched_flags,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn plane(x: i64, y: i64) -> Position {
        Position::plane(rat_int(x), rat_int(y))
    }

    fn two_point_state() -> MatchingState {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        st.ingest(plane(0, 0), rat_int(1)).unwrap();
        st.ingest(plane(1, 1), rat_int(1)).unwrap();
        st
    }

    #[test]
    fn match_two_points() {
        let mut st = two_point_state();
        st.apply_match(1, 2).unwrap();
        assert_eq!(st.partner_of(1), Some(2));
        assert_eq!(st.edge_count(), 1);
    }

    #[test]
    fn crossing_rejected() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        st.ingest(plane(0, 0), rat_int(1)).unwrap();
        st.ingest(plane(2, 2), rat_int(1)).unwrap();
        st.ingest(plane(0, 2), rat_int(1)).unwrap();
        st.ingest(plane(2, 0), rat_int(1)).unwrap();
        st.apply_match(1, 2).unwrap();
        assert!(matches!(
            st.apply_match(3, 4),
            Err(Error::CrossingViolation(..))
        ));
    }

    #[test]
    fn self_match_rejected() {
        let mut st = two_point_state();
        assert!(matches!(
            st.apply_match(1, 1),
            Err(Error::IdenticalEndpoints(1))
        ));
    }

    #[test]
    fn rematch_rejected() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        st.ingest(plane(0, 0), rat_int(1)).unwrap();
        st.ingest(plane(1, 1), rat_int(1)).unwrap();
        st.ingest(plane(5, 0), rat_int(1)).unwrap();
        st.apply_match(1, 2).unwrap();
        assert!(matches!(st.apply_match(3, 1), Err(Error::AlreadyMatched(1))));
    }

    #[test]
    fn revoke_flow() {
        let mut st = MatchingState::new(Space::Plane, Mode::Revocable);
        st.ingest(plane(0, 0), rat_int(1)).unwrap();
        st.ingest(plane(1, 1), rat_int(1)).unwrap();
        st.apply_match(1, 2).unwrap();
        st.apply_revoke(1, 2).unwrap();
        assert_eq!(st.edge_count(), 0);
        assert_eq!(st.revoked().len(), 1);
        assert!(!st.is_matched(1));
        assert!(matches!(st.apply_revoke(1, 2), Err(Error::EdgeAbsent(1, 2))));
        // Endpoints are re-matchable.
        st.apply_match(1, 2).unwrap();
    }

    #[test]
    fn revoke_in_irrevocable_mode() {
        let mut st = two_point_state();
        st.apply_match(1, 2).unwrap();
        assert!(matches!(st.apply_revoke(1, 2), Err(Error::IrrevocableMode)));
    }

    #[test]
    fn nonpositive_weight_rejected() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        assert!(st.ingest(plane(0, 0), rat_int(0)).is_err());
        assert!(st.ingest(plane(0, 0), rat(-1, 2)).is_err());
    }

    #[test]
    fn duplicate_position_rejected() {
        let mut st = two_point_state();
        assert!(matches!(
            st.ingest(plane(0, 0), rat_int(1)),
            Err(Error::DuplicatePosition(_))
        ));
    }

    #[test]
    fn outcome_arithmetic() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        st.ingest(plane(0, 0), rat_int(1)).unwrap();
        st.ingest(plane(1, 0), rat_int(1)).unwrap();
        st.ingest(plane(0, 1), rat_int(5)).unwrap();
        st.ingest(plane(1, 1), rat_int(5)).unwrap();
        st.apply_match(3, 4).unwrap();
        let out = st.outcome();
        assert_eq!(out.total_weight, rat_int(12));
        assert_eq!(out.matched_weight, rat_int(10));
        assert_eq!(out.matched_pair_count, 1);
        assert_eq!(out.matched_flags, vec![false, false, true, true]);
        assert_eq!(out.ratio(), rat(5, 6));
        assert_eq!(
            out.matched_flags.iter().filter(|&&f| f).count(),
            2 * out.matched_pair_count
        );
    }

    #[test]
    fn no_edges_outcome() {
        let st = two_point_state();
        assert_eq!(st.outcome().matched_weight, rat_int(0));
    }

    #[test]
    fn line_mode_nesting_conflicts() {
        let mut st = MatchingState::new(Space::Line, Mode::Irrevocable);
        for x in [0, 3, 1, 2] {
            st.ingest(Position::line(rat_int(x)), rat_int(1)).unwrap();
        }
        st.apply_match(1, 2).unwrap();
        assert!(matches!(
            st.apply_match(3, 4),
            Err(Error::CrossingViolation(..))
        ));
    }
}
