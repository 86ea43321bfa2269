//! Big-improvement matching (deterministic, revocable, arbitrary weights).
//!
//! The first two points are matched unconditionally. Every region of the
//! partition is owned by an edge of the current matching; an edge can own at
//! most the two regions its own match created. An arrival into a region with
//! unmatched points matches the heaviest of them, splitting the region and
//! transferring ownership to the new edge. An arrival `p` that is alone in its
//! region considers revoking the owning edge `(p_j, p_j')` (with
//! `w(p_j) <= w(p_j')`): if `w(p) >= r * w(p_j')` the edge is revoked and `p`
//! is matched with `p_j'` — merging the edge's two regions first when it owned
//! both — otherwise `p` is left unmatched. The threshold is inclusive.
//!
//! The parameter `r` must lie in `(1, sqrt(2)]`; the strict competitive ratio
//! is `min((r^2-1)/r^3, 1/(1+2r))`, maximized at the root of
//! `r^3 + r^2 - 2r - 1 = 0` (about 1.2470).

use std::collections::HashMap;

use num::One;

use crate::error::Error;
use crate::matching::{MatchingState, PointId, WeightedPoint};
use crate::partition::{Partition, RegionId, Responsibility};
use crate::rational::{rat, rat_int, Rational};
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

pub struct Bim {
    r: Rational,
    partition: Option<Partition>,
    edge_regions: HashMap<(PointId, PointId), Vec<RegionId>>,
}

fn norm(i: PointId, j: PointId) -> (PointId, PointId) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl Bim {
    pub fn new(r: Rational) -> Result<Self> {
        if r <= Rational::one() || &r * &r > rat_int(2) {
            return Err(Error::Config(format!(
                "revoke threshold parameter must lie in (1, sqrt(2)], got {r}"
            )));
        }
        Ok(Bim {
            r,
            partition: None,
            edge_regions: HashMap::new(),
        })
    }

    pub fn with_optimal_parameter() -> Self {
        Self::new(optimal_bim_ratio_parameter()).expect("optimal parameter is in range")
    }

    pub fn r_param(&self) -> &Rational {
        &self.r
    }

    /// `min((r^2-1)/r^3, 1/(1+2r))` — the strict per-instance ratio floor.
    pub fn strict_ratio_bound(&self) -> Rational {
        strict_ratio_bound(&self.r)
    }

}

fn assign_edge(
    edge_regions: &mut HashMap<(PointId, PointId), Vec<RegionId>>,
    part: &mut Partition,
    a: PointId,
    b: PointId,
    regions: [RegionId; 2],
) {
    for r in regions {
        part.set_responsible(r, Responsibility::Edge(a, b));
    }
    edge_regions.insert(norm(a, b), regions.to_vec());
}

fn release_region(
    edge_regions: &mut HashMap<(PointId, PointId), Vec<RegionId>>,
    edge: (PointId, PointId),
    region: RegionId,
) {
    let key = norm(edge.0, edge.1);
    if let Some(list) = edge_regions.get_mut(&key) {
        list.retain(|&r| r != region);
        if list.is_empty() {
            edge_regions.remove(&key);
        }
    }
}

/// `min((r^2-1)/r^3, 1/(1+2r))` for any `r` in `(1, sqrt(2)]`.
pub fn strict_ratio_bound(r: &Rational) -> Rational {
    let r2 = r * r;
    let first = (&r2 - Rational::one()) / (&r2 * r);
    let second = Rational::one() / (Rational::one() + r * rat_int(2));
    first.min(second)
}

/// The positive root of `r^3 + r^2 - 2r - 1 = 0`, bisected to 60 bits.
/// This is where the two terms of the ratio bound meet (about 1.2470).
pub fn optimal_bim_ratio_parameter() -> Rational {
    let f = |r: &Rational| -> Rational {
        let r2 = r * r;
        &r2 * r + r2 - r * rat_int(2) - Rational::one()
    };
    let mut lo = rat_int(1);
    let mut hi = rat(3, 2);
    debug_assert!(f(&lo) < Rational::from_integer(0.into()));
    debug_assert!(f(&hi) > Rational::from_integer(0.into()));
    for _ in 0..60 {
        let mid = (&lo + &hi) / rat_int(2);
        if f(&mid) < Rational::from_integer(0.into()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl OnlineAlgorithm for Bim {
    fn name(&self) -> &'static str {
        "bim"
    }

    fn revocable(&self) -> bool {
        true
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let r_param = self.r.clone();
        let space = state.space();
        let part = self.partition.get_or_insert_with(|| Partition::new(space));
        let region = part.insert_point(p.id, p.pos.clone())?;

        if p.id == 1 {
            return Ok(OnlineDecision::Leave);
        }
        if p.id == 2 {
            // Match the first two points regardless of their weights.
            let q_pos = part.position_of(1).ok_or(Error::UnknownPoint(1))?.clone();
            let (r1, r2) = part.split(region, 2, 1, &p.pos, &q_pos)?;
            assign_edge(&mut self.edge_regions, part, 1, 2, [r1, r2]);
            return Ok(OnlineDecision::Match(1));
        }

        let owner = match part.responsible(region) {
            Responsibility::Edge(a, b) => (a, b),
            other => {
                return Err(Error::Invariant(format!(
                    "region {region} has no owning edge (found {other:?})"
                )))
            }
        };

        let unmatched: Vec<PointId> = part
            .points_in(region)
            .iter()
            .copied()
            .filter(|&q| q != p.id)
            .collect();

        if !unmatched.is_empty() {
            // Highest weight, earliest arrival on ties.
            let mut best: Option<(Rational, PointId)> = None;
            for &q in &unmatched {
                let w = state.point(q)?.weight.clone();
                let better = match &best {
                    None => true,
                    Some((bw, bq)) => w > *bw || (w == *bw && q < *bq),
                };
                if better {
                    best = Some((w, q));
                }
            }
            let (_, q) = best.unwrap();
            let q_pos = part.position_of(q).ok_or(Error::UnknownPoint(q))?.clone();
            let (r1, r2) = part.split(region, p.id, q, &p.pos, &q_pos)?;
            release_region(&mut self.edge_regions, owner, region);
            assign_edge(&mut self.edge_regions, part, p.id, q, [r1, r2]);
            return Ok(OnlineDecision::Match(q));
        }

        // p is alone: consider revoking the owning edge. The heavier endpoint
        // (larger arrival id on equal weights) is the one p would marry.
        let (a, b) = owner;
        let (wa, wb) = (state.point(a)?.weight.clone(), state.point(b)?.weight.clone());
        let (lighter, heavier, w_heavier) = if wb > wa || (wb == wa && b > a) {
            (a, b, wb)
        } else {
            (b, a, wa)
        };
        if p.weight < &r_param * &w_heavier {
            return Ok(OnlineDecision::Leave);
        }

        let owned = self
            .edge_regions
            .get(&norm(a, b))
            .cloned()
            .unwrap_or_default();
        let heavier_pos = part
            .position_of(heavier)
            .ok_or(Error::UnknownPoint(heavier))?
            .clone();
        let target = if owned.len() == 2 {
            // The edge still owns both regions of its own match: merge them,
            // which puts the freed lighter endpoint strictly inside.
            let (r1, r2) = (owned[0], owned[1]);
            let merged = part.merge_siblings(r1, r2)?;
            let lighter_pos = part
                .position_of(lighter)
                .ok_or(Error::UnknownPoint(lighter))?
                .clone();
            part.place_point(merged, lighter, lighter_pos)?;
            merged
        } else {
            // Regions on the far side of the revoked edge keep their
            // boundaries; the freed endpoint stays on a boundary and is never
            // recorded as interior again.
            region
        };
        // The replacement edge must lie entirely inside the region it serves.
        if !part.contains_closure(target, &p.pos)? || !part.contains_closure(target, &heavier_pos)?
        {
            return Err(Error::Invariant(format!(
                "replacement edge ({}, {heavier}) leaves region {target}",
                p.id
            )));
        }
        let (r1, r2) = part.split(target, p.id, heavier, &p.pos, &heavier_pos)?;
        self.edge_regions.remove(&norm(a, b));
        assign_edge(&mut self.edge_regions, part, p.id, heavier, [r1, r2]);
        Ok(OnlineDecision::RevokeAndMatch {
            revoke: (a, b),
            partner: heavier,
        })
    }

    fn check_invariants(&self, state: &MatchingState) -> Result<()> {
        let part = match &self.partition {
            Some(p) => p,
            None => return Ok(()),
        };
        for (&(a, b), regions) in &self.edge_regions {
            // Responsible edges are defined by two currently matched points.
            if state.partner_of(a) != Some(b) {
                return Err(Error::Invariant(format!(
                    "owning edge ({a},{b}) is not in the current matching"
                )));
            }
            // Each edge owns at most two regions.
            if regions.len() > 2 {
                return Err(Error::Invariant(format!(
                    "edge ({a},{b}) owns {} regions",
                    regions.len()
                )));
            }
            for &r in regions {
                if !part.is_active(r) {
                    return Err(Error::Invariant(format!(
                        "edge ({a},{b}) owns inactive region {r}"
                    )));
                }
                if part.responsible(r) != Responsibility::Edge(a.min(b), a.max(b))
                    && part.responsible(r) != Responsibility::Edge(a, b)
                    && part.responsible(r) != Responsibility::Edge(b, a)
                {
                    return Err(Error::Invariant(format!(
                        "region {r} does not point back at its owning edge"
                    )));
                }
            }
        }
        // After the second arrival, every active region has an owner.
        if state.len() >= 2 {
            for r in part.active_regions() {
                if !matches!(part.responsible(r), Responsibility::Edge(..)) {
                    return Err(Error::Invariant(format!("active region {r} has no owner")));
                }
            }
        }
        Ok(())
    }
}
