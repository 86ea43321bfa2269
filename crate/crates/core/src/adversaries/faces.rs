//! Face bookkeeping for circle adversaries.
//!
//! The circle's current matching chords partition it into faces. Each face is
//! a set of arcs (maximal point-free open intervals between circularly
//! consecutive emitted points). Arcs never contain points in their interior,
//! and a chord's endpoints are points, so every arc lies wholly inside one
//! face: splitting a face classifies its arcs by an exact side-of-chord test
//! on arc midpoints, and revoking a chord merges the two adjacent faces by
//! relabeling. This mirrors the region structure the proofs reason about,
//! independently of any internal structure the algorithm keeps.

use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;

use num::One;

use crate::error::Error;
use crate::geometry::in_ccw_arc;
use crate::matching::PointId;
use crate::rational::{mod1, rat_int, Rational};
use crate::Result;

pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct FaceArena {
    /// position -> point id, circular order.
    by_pos: BTreeMap<Rational, PointId>,
    pos_of: HashMap<PointId, Rational>,
    /// arc keyed by its left (clockwise) endpoint position -> face id.
    arc_face: BTreeMap<Rational, FaceId>,
    next_face: FaceId,
    /// chronological record: (face split, chord, positive child, negative child).
    splits: Vec<(FaceId, (PointId, PointId), FaceId, FaceId)>,
}

impl Default for FaceArena {
    fn default() -> Self {
        Self::new()
    }
}

impl FaceArena {
    pub fn new() -> Self {
        FaceArena {
            by_pos: BTreeMap::new(),
            pos_of: HashMap::new(),
            arc_face: BTreeMap::new(),
            next_face: 1, // face 0 is the whole circle
            splits: Vec::new(),
        }
    }

    pub fn point_count(&self) -> usize {
        self.by_pos.len()
    }

    pub fn position_of(&self, id: PointId) -> Option<&Rational> {
        self.pos_of.get(&id)
    }

    pub fn splits(&self) -> &[(FaceId, (PointId, PointId), FaceId, FaceId)] {
        &self.splits
    }

    /// Records a new point at `t`, splitting the arc it lands in.
    pub fn insert_point(&mut self, id: PointId, t: Rational) -> Result<FaceId> {
        if self.pos_of.contains_key(&id) || self.by_pos.contains_key(&t) {
            return Err(Error::DuplicatePosition(format!("t={t}")));
        }
        let face = if self.by_pos.is_empty() {
            // First point: the whole circle becomes one arc.
            self.arc_face.insert(t.clone(), 0);
            0
        } else {
            let left = self.prev_pos(&t);
            let face = *self.arc_face.get(&left).expect("arc exists");
            self.arc_face.insert(t.clone(), face);
            face
        };
        self.by_pos.insert(t.clone(), id);
        self.pos_of.insert(id, t);
        Ok(face)
    }

    fn prev_pos(&self, t: &Rational) -> Rational {
        self.by_pos
            .range::<Rational, _>((Bound::Unbounded, Bound::Excluded(t.clone())))
            .next_back()
            .or_else(|| self.by_pos.iter().next_back())
            .map(|(p, _)| p.clone())
            .expect("nonempty")
    }

    fn next_pos(&self, t: &Rational) -> Rational {
        self.by_pos
            .range::<Rational, _>((Bound::Excluded(t.clone()), Bound::Unbounded))
            .next()
            .or_else(|| self.by_pos.iter().next())
            .map(|(p, _)| p.clone())
            .expect("nonempty")
    }

    /// Face of an unmatched point: both adjacent arcs agree, we use the
    /// counter-clockwise one.
    pub fn face_of_point(&self, id: PointId) -> Result<FaceId> {
        let t = self.pos_of.get(&id).ok_or(Error::UnknownPoint(id))?;
        self.arc_face
            .get(t)
            .copied()
            .ok_or_else(|| Error::Invariant(format!("no arc keyed at point {id}")))
    }

    /// The two faces bordered by the chord incident to matched point `id`.
    pub fn faces_at_point(&self, id: PointId) -> Result<(FaceId, FaceId)> {
        let t = self.pos_of.get(&id).ok_or(Error::UnknownPoint(id))?;
        let right = *self
            .arc_face
            .get(t)
            .ok_or_else(|| Error::Invariant("missing right arc".into()))?;
        let left_key = self.prev_pos(t);
        let left = *self
            .arc_face
            .get(&left_key)
            .ok_or_else(|| Error::Invariant("missing left arc".into()))?;
        Ok((left, right))
    }

    /// Splits `face` by the chord `(a, b)`; returns `(positive, negative)`
    /// children, where positive is the side on the counter-clockwise arc from
    /// `a` to `b`.
    pub fn split_face(
        &mut self,
        face: FaceId,
        a: PointId,
        b: PointId,
    ) -> Result<(FaceId, FaceId)> {
        let ta = self.pos_of.get(&a).ok_or(Error::UnknownPoint(a))?.clone();
        let tb = self.pos_of.get(&b).ok_or(Error::UnknownPoint(b))?.clone();
        let f_pos = self.next_face;
        let f_neg = self.next_face + 1;
        self.next_face += 2;
        let keys: Vec<Rational> = self
            .arc_face
            .iter()
            .filter(|&(_, f)| *f == face)
            .map(|(k, _)| k.clone())
            .collect();
        if keys.is_empty() {
            return Err(Error::Invariant(format!("face {face} has no arcs")));
        }
        for k in keys {
            let mid = self.arc_midpoint(&k);
            let side = in_ccw_arc(&ta, &tb, &mid);
            self.arc_face.insert(k, if side { f_pos } else { f_neg });
        }
        self.splits.push((face, (a, b), f_pos, f_neg));
        Ok((f_pos, f_neg))
    }

    /// Merges the two faces adjacent to the chord at matched point `a`
    /// (endpoint of the revoked chord); keeps the first id.
    pub fn merge_faces(&mut self, f1: FaceId, f2: FaceId) -> Result<FaceId> {
        if f1 == f2 {
            return Err(Error::Invariant("cannot merge a face with itself".into()));
        }
        for (_, f) in self.arc_face.iter_mut() {
            if *f == f2 {
                *f = f1;
            }
        }
        Ok(f1)
    }

    fn arc_midpoint(&self, left_key: &Rational) -> Rational {
        let next = self.next_pos(left_key);
        if next == *left_key {
            // single point: the arc is the full circle
            return mod1(&(left_key + rat_int(1) / rat_int(2)));
        }
        let span = mod1(&(&next - left_key));
        mod1(&(left_key + span / rat_int(2)))
    }

    fn arc_length(&self, left_key: &Rational) -> Rational {
        let next = self.next_pos(left_key);
        if next == *left_key {
            return Rational::one();
        }
        mod1(&(&next - left_key))
    }

    /// Midpoint of the largest arc of `face` (ties to the smallest left
    /// endpoint). Fresh and strictly inside the face by construction.
    pub fn fresh_position_in(&self, face: FaceId) -> Result<Rational> {
        if self.by_pos.is_empty() {
            return Ok(rat_int(0));
        }
        let mut best: Option<(Rational, Rational)> = None; // (length, key)
        for (k, f) in &self.arc_face {
            if *f != face {
                continue;
            }
            let len = self.arc_length(k);
            let better = match &best {
                None => true,
                Some((bl, _)) => len > *bl,
            };
            if better {
                best = Some((len, k.clone()));
            }
        }
        let (_, key) = best.ok_or_else(|| Error::Invariant(format!("face {face} has no arcs")))?;
        Ok(self.arc_midpoint(&key))
    }

    /// Midpoint of the globally largest gap (ties to the smallest left
    /// endpoint); `t = 0` when no points exist yet.
    pub fn fresh_position_global(&self) -> Rational {
        if self.by_pos.is_empty() {
            return rat_int(0);
        }
        let mut best: Option<(Rational, Rational)> = None;
        for k in self.arc_face.keys() {
            let len = self.arc_length(k);
            let better = match &best {
                None => true,
                Some((bl, _)) => len > *bl,
            };
            if better {
                best = Some((len, k.clone()));
            }
        }
        let (_, key) = best.expect("nonempty");
        self.arc_midpoint(&key)
    }

    /// Ids of unmatched points inside `face`, by arrival order.
    pub fn unmatched_in_face(
        &self,
        face: FaceId,
        is_matched: impl Fn(PointId) -> bool,
    ) -> Vec<PointId> {
        let mut ids: Vec<PointId> = self
            .by_pos
            .values()
            .copied()
            .filter(|&id| !is_matched(id))
            .filter(|&id| matches!(self.face_of_point(id), Ok(f) if f == face))
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Side of the chord `(a, b)` that point `q` lies on; true = the
    /// counter-clockwise arc from `a` to `b` (the "positive" child).
    pub fn point_side(&self, a: PointId, b: PointId, q: PointId) -> Result<bool> {
        let ta = self.pos_of.get(&a).ok_or(Error::UnknownPoint(a))?;
        let tb = self.pos_of.get(&b).ok_or(Error::UnknownPoint(b))?;
        let tq = self.pos_of.get(&q).ok_or(Error::UnknownPoint(q))?;
        if tq == ta || tq == tb {
            return Err(Error::DegeneratePosition);
        }
        Ok(in_ccw_arc(ta, tb, tq))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn split_and_merge_round_trip() {
        let mut arena = FaceArena::new();
        arena.insert_point(1, rat(0, 1)).unwrap();
        arena.insert_point(2, rat(1, 2)).unwrap();
        arena.insert_point(3, rat(1, 4)).unwrap();
        arena.insert_point(4, rat(3, 4)).unwrap();
        let (f_pos, f_neg) = arena.split_face(0, 1, 2).unwrap();
        assert_eq!(arena.face_of_point(3).unwrap(), f_pos);
        assert_eq!(arena.face_of_point(4).unwrap(), f_neg);
        let (l, r) = arena.faces_at_point(1).unwrap();
        assert_ne!(l, r);
        arena.merge_faces(f_pos, f_neg).unwrap();
        assert_eq!(arena.face_of_point(3).unwrap(), f_pos);
        assert_eq!(arena.face_of_point(4).unwrap(), f_pos);
    }

    #[test]
    fn fresh_positions_prefer_large_gaps() {
        let mut arena = FaceArena::new();
        assert_eq!(arena.fresh_position_global(), rat(0, 1));
        arena.insert_point(1, rat(0, 1)).unwrap();
        assert_eq!(arena.fresh_position_global(), rat(1, 2));
        arena.insert_point(2, rat(1, 2)).unwrap();
        // Two equal gaps; tie goes to the smaller left endpoint.
        assert_eq!(arena.fresh_position_global(), rat(1, 4));
        arena.insert_point(3, rat(1, 4)).unwrap();
        assert_eq!(arena.fresh_position_global(), rat(3, 4));
    }

    #[test]
    fn fresh_position_respects_faces() {
        let mut arena = FaceArena::new();
        arena.insert_point(1, rat(0, 1)).unwrap();
        arena.insert_point(2, rat(1, 2)).unwrap();
        let (f_pos, f_neg) = arena.split_face(0, 1, 2).unwrap();
        let p = arena.fresh_position_in(f_pos).unwrap();
        assert!(in_ccw_arc(&rat(0, 1), &rat(1, 2), &p));
        let q = arena.fresh_position_in(f_neg).unwrap();
        assert!(!in_ccw_arc(&rat(0, 1), &rat(1, 2), &q));
    }

    #[test]
    fn unmatched_listing() {
        let mut arena = FaceArena::new();
        arena.insert_point(1, rat(0, 1)).unwrap();
        arena.insert_point(2, rat(1, 2)).unwrap();
        arena.insert_point(3, rat(1, 4)).unwrap();
        let (f_pos, _f_neg) = arena.split_face(0, 1, 2).unwrap();
        let matched = |id: PointId| id == 1 || id == 2;
        assert_eq!(arena.unmatched_in_face(f_pos, matched), vec![3]);
    }
}
