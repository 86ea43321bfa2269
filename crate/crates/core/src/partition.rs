//! Convex-partition manager with responsibility bookkeeping.
//!
//! Regions are constraint lists, never materialized polygons: each non-root
//! region adds one half-plane (or arc) constraint to its parent's list, and
//! membership is the conjunction of exact side tests. This supports unbounded
//! regions and sidesteps polygon clipping entirely. The tree keeps its full
//! history: splitting deactivates a region and adds two children; merging two
//! untouched siblings deactivates them and reactivates the parent (the dead
//! children stay in the arena for replay).
//!
//! The partition also tracks which *interior* points currently sit in each
//! active region. When a region is split by a matched pair, the pair's own
//! endpoints land on the new boundary and are dropped from the interior lists.

use std::collections::HashMap;

use crate::error::Error;
use crate::geometry::{circular_side, orientation, ArcSide, Orientation, Position, Space};
use crate::matching::PointId;
use crate::Result;

pub type RegionId = usize;
pub type SplitId = usize;

/// Who a region answers to, in the sense of the various matchers'
/// bookkeeping: a single point, a matched edge, or nobody.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Responsibility {
    None,
    Point(PointId),
    Edge(PointId, PointId),
}

/// The full line (or chord) through two points, used to split a region.
#[derive(Clone, Debug)]
pub struct SplitEdge {
    pub a_id: PointId,
    pub b_id: PointId,
    pub a: Position,
    pub b: Position,
}

/// Which side of a split a child region keeps.
///
/// For plane splits the sides are the CCW/CW half-planes of the directed line
/// `a -> b`; for circle splits they are the two open arcs of the chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Clone, Debug)]
struct RegionNode {
    parent: Option<RegionId>,
    constraint: Option<(SplitId, Side)>,
    children: Option<(RegionId, RegionId)>,
    active: bool,
    created_by: Option<SplitId>,
    responsible: Responsibility,
    points: Vec<PointId>,
    merged_children: Vec<(RegionId, RegionId)>,
}

#[derive(Clone, Debug)]
pub struct Partition {
    space: Space,
    nodes: Vec<RegionNode>,
    splits: Vec<SplitEdge>,
    positions: HashMap<PointId, Position>,
}

pub const ROOT: RegionId = 0;

impl Partition {
    /// A fresh partition whose single active region is the whole space.
    pub fn new(space: Space) -> Self {
        assert!(
            space != Space::Line,
            "line-mode algorithms use interval partitions, not convex partitions"
        );
        Partition {
            space,
            nodes: vec![RegionNode {
                parent: None,
                constraint: None,
                children: None,
                active: true,
                created_by: None,
                responsible: Responsibility::None,
                points: Vec::new(),
                merged_children: Vec::new(),
            }],
            splits: Vec::new(),
            positions: HashMap::new(),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_active(&self, r: RegionId) -> bool {
        self.nodes[r].active
    }

    pub fn parent(&self, r: RegionId) -> Option<RegionId> {
        self.nodes[r].parent
    }

    pub fn children(&self, r: RegionId) -> Option<(RegionId, RegionId)> {
        self.nodes[r].children
    }

    /// The split that created this region, if it is not the root.
    pub fn created_by(&self, r: RegionId) -> Option<&SplitEdge> {
        self.nodes[r].created_by.map(|s| &self.splits[s])
    }

    /// Id of the split that created this region, if it is not the root.
    pub fn created_by_id(&self, r: RegionId) -> Option<SplitId> {
        self.nodes[r].created_by
    }

    pub fn responsible(&self, r: RegionId) -> Responsibility {
        self.nodes[r].responsible
    }

    pub fn set_responsible(&mut self, r: RegionId, who: Responsibility) {
        self.nodes[r].responsible = who;
    }

    pub fn split_edge(&self, s: SplitId) -> &SplitEdge {
        &self.splits[s]
    }

    pub fn active_regions(&self) -> impl Iterator<Item = RegionId> + '_ {
        (0..self.nodes.len()).filter(|&r| self.nodes[r].active)
    }

    /// Ids of the interior points currently recorded in `r`.
    pub fn points_in(&self, r: RegionId) -> &[PointId] {
        &self.nodes[r].points
    }

    pub fn position_of(&self, id: PointId) -> Option<&Position> {
        self.positions.get(&id)
    }

    fn side_of_split(&self, split: &SplitEdge, p: &Position) -> Result<Side> {
        match self.space {
            Space::Plane => match orientation(&split.a, &split.b, p)? {
                Orientation::Ccw => Ok(Side::Positive),
                Orientation::Cw => Ok(Side::Negative),
                Orientation::Collinear => Err(Error::DegeneratePosition),
            },
            Space::Circle => match circular_side((&split.a, &split.b), p) {
                Ok(ArcSide::ArcAb) => Ok(Side::Positive),
                Ok(ArcSide::ArcBa) => Ok(Side::Negative),
                Err(Error::OnChordEndpoint(_)) => Err(Error::DegeneratePosition),
                Err(e) => Err(e),
            },
            Space::Line => unreachable!(),
        }
    }

    /// The unique active region whose constraints `p` satisfies.
    pub fn locate(&self, p: &Position) -> Result<RegionId> {
        let mut cur = ROOT;
        loop {
            let node = &self.nodes[cur];
            if node.active {
                return Ok(cur);
            }
            let (c1, c2) = node
                .children
                .ok_or_else(|| Error::Invariant(format!("inactive region {cur} has no children")))?;
            let (split_id, side) = self.nodes[c1]
                .constraint
                .ok_or_else(|| Error::Invariant(format!("child {c1} lacks a constraint")))?;
            let s = self.side_of_split(&self.splits[split_id], p)?;
            cur = if s == side { c1 } else { c2 };
        }
    }

    /// Inserts a point: locates it and records it in that region's interior.
    pub fn insert_point(&mut self, id: PointId, pos: Position) -> Result<RegionId> {
        let r = self.locate(&pos)?;
        self.positions.insert(id, pos);
        self.nodes[r].points.push(id);
        Ok(r)
    }

    /// Records a point in a region the caller has already determined.
    pub fn place_point(&mut self, r: RegionId, id: PointId, pos: Position) -> Result<()> {
        if !self.nodes[r].active {
            return Err(Error::InactiveRegion(r));
        }
        self.positions.insert(id, pos);
        self.nodes[r].points.push(id);
        Ok(())
    }

    /// Splits active region `r` by the line (or chord) through points `i`, `j`.
    ///
    /// The splitting pair's endpoints are dropped from the interior lists (they
    /// now lie on the boundary); every other recorded point of `r` is moved to
    /// the child whose side it is on. Returns `(positive child, negative child)`.
    pub fn split(
        &mut self,
        r: RegionId,
        i: PointId,
        j: PointId,
        pos_i: &Position,
        pos_j: &Position,
    ) -> Result<(RegionId, RegionId)> {
        if !self.nodes[r].active {
            return Err(Error::InactiveRegion(r));
        }
        let split = SplitEdge {
            a_id: i,
            b_id: j,
            a: pos_i.clone(),
            b: pos_j.clone(),
        };
        let split_id = self.splits.len();
        let mut pos_points = Vec::new();
        let mut neg_points = Vec::new();
        let old_points = std::mem::take(&mut self.nodes[r].points);
        for pid in old_points {
            if pid == i || pid == j {
                continue;
            }
            let pos = self
                .positions
                .get(&pid)
                .ok_or(Error::UnknownPoint(pid))?
                .clone();
            match self.side_of_split(&split, &pos)? {
                Side::Positive => pos_points.push(pid),
                Side::Negative => neg_points.push(pid),
            }
        }
        self.splits.push(split);
        let c1 = self.nodes.len();
        let c2 = c1 + 1;
        self.nodes.push(RegionNode {
            parent: Some(r),
            constraint: Some((split_id, Side::Positive)),
            children: None,
            active: true,
            created_by: Some(split_id),
            responsible: Responsibility::None,
            points: pos_points,
            merged_children: Vec::new(),
        });
        self.nodes.push(RegionNode {
            parent: Some(r),
            constraint: Some((split_id, Side::Negative)),
            children: None,
            active: true,
            created_by: Some(split_id),
            responsible: Responsibility::None,
            points: neg_points,
            merged_children: Vec::new(),
        });
        self.nodes[r].active = false;
        self.nodes[r].children = Some((c1, c2));
        Ok((c1, c2))
    }

    /// Undoes a split: both children must be active, never-split siblings.
    /// The parent is reactivated with its original constraint list and
    /// inherits the children's interior points.
    pub fn merge_siblings(&mut self, r1: RegionId, r2: RegionId) -> Result<RegionId> {
        let parent = match (self.nodes[r1].parent, self.nodes[r2].parent) {
            (Some(p1), Some(p2)) if p1 == p2 && self.nodes[p1].children == Some((r1, r2)) => p1,
            (Some(p1), Some(p2)) if p1 == p2 && self.nodes[p1].children == Some((r2, r1)) => p1,
            _ => return Err(Error::NotSiblings(r1, r2)),
        };
        for r in [r1, r2] {
            if !self.nodes[r].active {
                return Err(Error::InactiveRegion(r));
            }
            if self.nodes[r].children.is_some() {
                return Err(Error::NotSiblings(r1, r2));
            }
        }
        let mut pts = std::mem::take(&mut self.nodes[r1].points);
        pts.extend(std::mem::take(&mut self.nodes[r2].points));
        self.nodes[r1].active = false;
        self.nodes[r2].active = false;
        self.nodes[parent].children = None;
        self.nodes[parent].active = true;
        self.nodes[parent].points = pts;
        self.nodes[parent].responsible = Responsibility::None;
        self.nodes[parent].merged_children.push((r1, r2));
        Ok(parent)
    }

    /// Removes a point from its region's interior list (used when the point
    /// becomes a boundary endpoint through a match made elsewhere).
    pub fn remove_point(&mut self, r: RegionId, id: PointId) {
        self.nodes[r].points.retain(|&p| p != id);
    }

    /// Counts the recorded points of `r` accepted by `filter` strictly on each
    /// side of the line (or chord) through positions `pos_i`, `pos_j`.
    /// Points equal to the filter-excluded ids are the caller's business.
    pub fn side_counts(
        &self,
        r: RegionId,
        pos_i: &Position,
        pos_j: &Position,
        mut filter: impl FnMut(PointId) -> bool,
    ) -> Result<(usize, usize)> {
        if !self.nodes[r].active {
            return Err(Error::InactiveRegion(r));
        }
        let split = SplitEdge {
            a_id: 0,
            b_id: 0,
            a: pos_i.clone(),
            b: pos_j.clone(),
        };
        let mut pos = 0;
        let mut neg = 0;
        for &pid in &self.nodes[r].points {
            if !filter(pid) {
                continue;
            }
            let p = self.positions.get(&pid).ok_or(Error::UnknownPoint(pid))?;
            match self.side_of_split(&split, p)? {
                Side::Positive => pos += 1,
                Side::Negative => neg += 1,
            }
        }
        Ok((pos, neg))
    }

    /// Membership with the boundary included: every ancestor constraint is
    /// satisfied non-strictly.
    pub fn contains_closure(&self, r: RegionId, p: &Position) -> Result<bool> {
        let mut cur = r;
        while let Some((split_id, side)) = self.nodes[cur].constraint {
            match self.side_of_split(&self.splits[split_id], p) {
                Ok(s) => {
                    if s != side {
                        return Ok(false);
                    }
                }
                Err(Error::DegeneratePosition) => {}
                Err(e) => return Err(e),
            }
            cur = self.nodes[cur].parent.expect("constrained region has a parent");
        }
        Ok(true)
    }
}
