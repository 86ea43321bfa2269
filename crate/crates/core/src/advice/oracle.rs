//! Offline advice producer for split-and-match.
//!
//! Simulates the exact region/responsibility process the online matcher will
//! run, but with lookahead: when arrival `i` splits its region, the bit for
//! `i` is 1 iff both sub-regions will receive an even number of future points
//! (a safe match, leaving both sub-regions responsibility-free), else 0 with
//! the old responsible point keeping the positive side and `i` taking the
//! negative side. The first bit is always 0.

use std::collections::HashMap;

use crate::error::Error;
use crate::geometry::Position;
use crate::matching::PointId;
use crate::partition::{Partition, RegionId, Responsibility};
use crate::Result;

use super::AdviceString;

/// Advice bits for the full arrival sequence (ids are positions' indices + 1).
pub fn sam_oracle(positions: &[Position]) -> Result<AdviceString> {
    if positions.len() % 2 != 0 {
        return Err(Error::Config(format!(
            "advice needs an even number of points, got {}",
            positions.len()
        )));
    }
    let mut bits = Vec::with_capacity(positions.len());
    if positions.is_empty() {
        return AdviceString::new(bits);
    }
    let space = positions[0].space();
    let mut part = Partition::new(space);
    // Future points (not yet arrived) per region.
    let mut future: HashMap<RegionId, Vec<PointId>> = HashMap::new();
    future.insert(crate::partition::ROOT, (2..=positions.len()).collect());

    for (idx, pos) in positions.iter().enumerate() {
        let id = idx + 1;
        let region = part.insert_point(id, pos.clone())?;
        future.entry(region).or_default().retain(|&f| f != id);
        match part.responsible(region) {
            Responsibility::None => {
                part.set_responsible(region, Responsibility::Point(id));
                bits.push(false);
            }
            Responsibility::Point(q) => {
                let q_pos = part.position_of(q).ok_or(Error::UnknownPoint(q))?.clone();
                part.set_responsible(region, Responsibility::None);
                let (r1, r2) = part.split(region, id, q, pos, &q_pos)?;
                // Redistribute this region's future points by locating them in
                // the refined tree.
                let pending = future.remove(&region).unwrap_or_default();
                let mut n1 = 0usize;
                let mut n2 = 0usize;
                for f in pending {
                    let target = part.locate(&positions[f - 1])?;
                    if target == r1 {
                        n1 += 1;
                    } else if target == r2 {
                        n2 += 1;
                    } else {
                        return Err(Error::Invariant(format!(
                            "future point {f} escaped its region on split"
                        )));
                    }
                    future.entry(target).or_default().push(f);
                }
                if (n1 + n2) % 2 != 0 {
                    return Err(Error::Invariant(format!(
                        "region future count has odd parity at arrival {id}"
                    )));
                }
                if n1 % 2 == 0 {
                    // Safe match: both sides even, nobody responsible.
                    bits.push(true);
                } else {
                    part.set_responsible(r1, Responsibility::Point(q));
                    part.set_responsible(r2, Responsibility::Point(id));
                    bits.push(false);
                }
            }
            Responsibility::Edge(..) => {
                return Err(Error::Invariant(
                    "advice oracle uses point responsibility only".into(),
                ))
            }
        }
    }
    AdviceString::new(bits)
}
