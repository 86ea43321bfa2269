//! Split-and-match: optimal matching from an advice string.
//!
//! The advice `D` has one bit per arrival. Arrivals in a region with no
//! responsible point take responsibility and wait (their bit is 0). When `p`
//! arrives in a region whose responsible point is `q`, the region is split by
//! the full line through `p` and `q`; bit 1 means the pair is a safe match
//! (both sub-regions will see an even number of future points) and the new
//! regions get no responsible point, bit 0 hands the positive-side region to
//! `q` and the negative-side region to `p`.
//!
//! The split here must mirror the advice producer exactly — same region tree,
//! same side convention (the splitting line is directed from the arriving
//! point to the responsible point) — so the bit indices line up.

use crate::error::Error;
use crate::matching::{MatchingState, WeightedPoint};
use crate::partition::{Partition, Responsibility};
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

pub struct Sam {
    advice: Vec<bool>,
    partition: Option<Partition>,
}

impl Sam {
    /// `advice[i]` is the bit for arrival `i + 1`.
    pub fn new(advice: Vec<bool>) -> Self {
        Sam {
            advice,
            partition: None,
        }
    }

}

impl OnlineAlgorithm for Sam {
    fn name(&self) -> &'static str {
        "sam"
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let bit = *self
            .advice
            .get(p.id - 1)
            .ok_or_else(|| Error::AdviceCorrupted(format!("advice exhausted at arrival {}", p.id)))?;
        let part = self.partition.get_or_insert_with(|| Partition::new(state.space()));
        let region = part.insert_point(p.id, p.pos.clone())?;
        match part.responsible(region) {
            Responsibility::Point(q) => {
                let q_pos = part.position_of(q).ok_or(Error::UnknownPoint(q))?.clone();
                part.set_responsible(region, Responsibility::None);
                let (r1, r2) = part.split(region, p.id, q, &p.pos, &q_pos)?;
                if bit {
                    Ok(OnlineDecision::Match(q))
                } else {
                    part.set_responsible(r1, Responsibility::Point(q));
                    part.set_responsible(r2, Responsibility::Point(p.id));
                    Ok(OnlineDecision::Leave)
                }
            }
            Responsibility::None => {
                if bit {
                    return Err(Error::AdviceCorrupted(format!(
                        "bit {} asks for a match but region {region} has no responsible point",
                        p.id
                    )));
                }
                part.set_responsible(region, Responsibility::Point(p.id));
                Ok(OnlineDecision::Leave)
            }
            Responsibility::Edge(..) => Err(Error::Invariant(
                "split-and-match uses point responsibility only".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Space;
    use crate::matching::Mode;
    use crate::rational::rat_int;
    use crate::Position;

    fn run(points: &[(i64, i64)], advice: &[u8]) -> MatchingState {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        let mut alg = Sam::new(advice.iter().map(|&b| b == 1).collect());
        for &(x, y) in points {
            let p = st
                .ingest(Position::plane(rat_int(x), rat_int(y)), rat_int(1))
                .unwrap()
                .clone();
            match alg.on_arrival(&st, &p).unwrap() {
                OnlineDecision::Match(j) => st.apply_match(p.id, j).unwrap(),
                OnlineDecision::Leave => {}
                OnlineDecision::RevokeAndMatch { .. } => unreachable!(),
            }
        }
        st.assert_noncrossing().unwrap();
        st
    }

    #[test]
    fn two_points_with_match_bit() {
        let st = run(&[(0, 0), (1, 1)], &[0, 1]);
        assert_eq!(st.partner_of(1), Some(2));
    }

    #[test]
    fn side_by_side_pairs() {
        // p2 splits; both later points land on one side: advice 0101 pairs
        // {1,2} then {3,4}.
        let st = run(&[(0, 0), (1, 0), (3, 1), (4, 2)], &[0, 1, 0, 1]);
        assert_eq!(st.partner_of(1), Some(2));
        assert_eq!(st.partner_of(3), Some(4));
    }

    #[test]
    fn straddling_pairs() {
        // p3 and p4 land on opposite sides of the line through p1, p2 (p3 on
        // p1's side, p4 on p2's): advice 0011 pairs {1,3} and {2,4}.
        let st = run(&[(0, 0), (4, 1), (3, -2), (1, 3)], &[0, 0, 1, 1]);
        assert_eq!(st.partner_of(1), Some(3));
        assert_eq!(st.partner_of(2), Some(4));
    }

    #[test]
    fn corrupt_bit_is_detected() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        let mut alg = Sam::new(vec![true, true]);
        let p = st
            .ingest(Position::plane(rat_int(0), rat_int(0)), rat_int(1))
            .unwrap()
            .clone();
        assert!(matches!(
            alg.on_arrival(&st, &p),
            Err(Error::AdviceCorrupted(_))
        ));
    }

    #[test]
    fn exhausted_advice_is_detected() {
        let mut st = MatchingState::new(Space::Plane, Mode::Irrevocable);
        let mut alg = Sam::new(vec![]);
        let p = st
            .ingest(Position::plane(rat_int(0), rat_int(0)), rat_int(1))
            .unwrap()
            .clone();
        assert!(matches!(
            alg.on_arrival(&st, &p),
            Err(Error::AdviceCorrupted(_))
        ));
    }
}
