//! Wait-and-match for weights in `[1, U]`.
//!
//! Arrivals are matched inside their convex region only. The candidate scan
//! walks the region's unmatched points in non-increasing weight order
//! (earliest arrival on ties) and accepts the first candidate `q` such that
//! both sides of the line through `p` and `q` hold at least `2^(k-i) - 1`
//! unmatched points, where `i` is the larger of the two types. A match splits
//! the region.
//!
//! For analysis, every arrival is mapped to the segment that most recently
//! became a boundary of its region; the root region maps to an imaginary
//! weight-`U` pair matched before the sequence starts. The mapping lemmas
//! (type lower bound, per-type count cap, per-segment weight cap) are checked
//! by [`Wam::mapping_report`] after a run.

use std::collections::HashMap;

use crate::classify::{segment_type, ClassificationParams};
use crate::error::Error;
use crate::matching::{MatchingState, PointId, WeightedPoint};
use crate::partition::{Partition, SplitId};
use crate::rational::{pow, pow2, Rational};
use crate::Result;

use super::{OnlineAlgorithm, OnlineDecision};

/// Which segment an arrival is mapped to for the analysis bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MappedSegment {
    /// The pre-matched pair of imaginary weight-U points at infinity.
    Imaginary,
    Split(SplitId),
}

pub struct Wam {
    params: ClassificationParams,
    partition: Option<Partition>,
    mapped: Vec<(PointId, MappedSegment)>,
}

impl Wam {
    pub fn new(params: ClassificationParams) -> Self {
        Wam {
            params,
            partition: None,
            mapped: Vec::new(),
        }
    }

    pub fn params(&self) -> &ClassificationParams {
        &self.params
    }

    /// Exact lower bound on the matched-weight ratio: `2^-(2k+4)`.
    pub fn ratio_floor(&self) -> Rational {
        pow2(-(2 * self.params.k() as i64 + 4))
    }

    /// Checks the three mapping lemmas against a finished run. Returns the
    /// per-segment grouping for reporting; any violation is an error.
    pub fn mapping_report(&self, state: &MatchingState) -> Result<WamMappingReport> {
        let k = self.params.k();
        let type_of_segment = |seg: &MappedSegment| -> Result<u32> {
            match seg {
                MappedSegment::Imaginary => Ok(k),
                MappedSegment::Split(s) => {
                    let part = self.partition.as_ref().expect("run produced splits");
                    let edge = part.split_edge(*s);
                    let ta = self.params.classify(&state.point(edge.a_id)?.weight)?;
                    let tb = self.params.classify(&state.point(edge.b_id)?.weight)?;
                    Ok(segment_type(ta, tb))
                }
            }
        };

        let mut groups: HashMap<MappedSegment, Vec<PointId>> = HashMap::new();
        for (pid, seg) in &self.mapped {
            if !state.is_matched(*pid) {
                groups.entry(*seg).or_default().push(*pid);
            }
        }

        let mut report = WamMappingReport::default();
        for (seg, pids) in &groups {
            let seg_type = type_of_segment(seg)?;
            let mut per_type: HashMap<u32, usize> = HashMap::new();
            let mut weight_sum = Rational::from_integer(0.into());
            for &pid in pids {
                let w = &state.point(pid)?.weight;
                let ty = self.params.classify(w)?;
                // Lemma: an unmatched point's type never exceeds its segment's.
                if ty > seg_type {
                    return Err(Error::Invariant(format!(
                        "unmatched point {pid} of type {ty} mapped to segment of type {seg_type}"
                    )));
                }
                *per_type.entry(ty).or_insert(0) += 1;
                weight_sum += w;
            }
            // Lemma: at most 2^(k-i+2) - 2 unmatched points of type i per segment.
            for (&ty, &count) in &per_type {
                let cap = (1usize << (k - ty + 2)) - 2;
                if count > cap {
                    return Err(Error::Invariant(format!(
                        "{count} unmatched points of type {ty} mapped to one segment (cap {cap})"
                    )));
                }
            }
            // Lemma (U >= 16): total mapped weight <= a_(j+1) * 2^(k-j+3),
            // compared exactly as weight_sum^k <= U^(j+1) * 2^((k-j+3)k).
            if *self.params.u() >= pow2(4) && k >= 1 {
                let lhs = pow(&weight_sum, k);
                let rhs = pow(self.params.u(), seg_type + 1)
                    * pow2(((k - seg_type + 3) * k) as i64);
                if lhs > rhs {
                    return Err(Error::Invariant(format!(
                        "mapped weight {weight_sum} exceeds the type-{seg_type} segment cap"
                    )));
                }
            }
            report.segments += 1;
            report.mapped_unmatched += pids.len();
        }
        report.checked_points = self.mapped.len();
        Ok(report)
    }
}

#[derive(Clone, Debug, Default)]
pub struct WamMappingReport {
    pub checked_points: usize,
    pub segments: usize,
    pub mapped_unmatched: usize,
}

impl OnlineAlgorithm for Wam {
    fn name(&self) -> &'static str {
        "wam"
    }

    fn on_arrival(&mut self, state: &MatchingState, p: &WeightedPoint) -> Result<OnlineDecision> {
        let p_type = self.params.classify(&p.weight)?;
        let params = self.params.clone();
        let part = self.partition.get_or_insert_with(|| Partition::new(state.space()));
        let region = part.insert_point(p.id, p.pos.clone())?;

        // The region's creating split is its most recent boundary segment;
        // arrivals in the never-split root map to the imaginary pair.
        let mapped_segment = match part.created_by_id(region) {
            Some(split_id) => MappedSegment::Split(split_id),
            None => MappedSegment::Imaginary,
        };
        self.mapped.push((p.id, mapped_segment));

        // Candidates: unmatched points of the region, heaviest first,
        // earliest arrival on equal weights.
        let mut candidates: Vec<(Rational, PointId)> = Vec::new();
        for &q in part.points_in(region) {
            if q == p.id {
                continue;
            }
            candidates.push((state.point(q)?.weight.clone(), q));
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        for (q_weight, q) in candidates {
            let q_type = params.classify(&q_weight)?;
            let need = params.side_threshold(segment_type(p_type, q_type));
            let q_pos = part.position_of(q).ok_or(Error::UnknownPoint(q))?.clone();
            let accept = if need == 0 {
                true
            } else {
                let (s1, s2) =
                    part.side_counts(region, &p.pos, &q_pos, |pid| pid != p.id && pid != q)?;
                s1 >= need && s2 >= need
            };
            if accept {
                part.split(region, p.id, q, &p.pos, &q_pos)?;
                return Ok(OnlineDecision::Match(q));
            }
        }
        Ok(OnlineDecision::Leave)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Space;
    use crate::matching::Mode;
    use crate::rational::{rat, rat_int};
    use crate::Position;

    fn arrive(
        state: &mut MatchingState,
        alg: &mut Wam,
        pos: Position,
        w: i64,
    ) -> OnlineDecision {
        let p = state.ingest(pos, rat_int(w)).unwrap().clone();
        let d = alg.on_arrival(state, &p).unwrap();
        if let OnlineDecision::Match(j) = &d {
            state.apply_match(p.id, *j).unwrap();
        }
        d
    }

    fn pc(n: i64, d: i64) -> Position {
        Position::circle(rat(n, d))
    }

    fn wam16() -> Wam {
        // U = 16: k = 2, types 0/1/2 with thresholds 1, 4, 16 and side
        // requirements 3, 1, 0.
        Wam::new(ClassificationParams::new(rat_int(16)).unwrap())
    }

    #[test]
    fn heavy_candidate_is_matched_unconditionally() {
        let mut st = MatchingState::new(Space::Circle, Mode::Irrevocable);
        let mut alg = wam16();
        assert_eq!(arrive(&mut st, &mut alg, pc(0, 1), 16), OnlineDecision::Leave);
        assert_eq!(
            arrive(&mut st, &mut alg, pc(1, 2), 1),
            OnlineDecision::Match(1)
        );
    }

    #[test]
    fn mid_type_candidate_needs_one_point_per_side() {
        let mut st = MatchingState::new(Space::Circle, Mode::Irrevocable);
        let mut alg = wam16();
        // Weight 5 has type 1: matching it requires >= 1 unmatched point on
        // each side. Alone with the arrival, no match.
        arrive(&mut st, &mut alg, pc(0, 1), 5);
        assert_eq!(arrive(&mut st, &mut alg, pc(1, 2), 1), OnlineDecision::Leave);
        assert_eq!(arrive(&mut st, &mut alg, pc(1, 4), 1), OnlineDecision::Leave);
        // The chord {3/8, 0} separates the two waiting light points: fires.
        let d = arrive(&mut st, &mut alg, pc(3, 8), 1);
        assert_eq!(d, OnlineDecision::Match(1));
    }

    #[test]
    fn all_light_needs_three_per_side() {
        let mut st = MatchingState::new(Space::Circle, Mode::Irrevocable);
        let mut alg = wam16();
        // Seven weight-1 points: arrivals keep failing the 3-per-side rule
        // until the region holds 7 unmatched points and the eighth arrival
        // can bisect them.
        for i in 1..=7i64 {
            let d = arrive(&mut st, &mut alg, pc(i, 16), 1);
            assert_eq!(d, OnlineDecision::Leave, "arrival {i}");
        }
        let d = arrive(&mut st, &mut alg, pc(10, 16), 1);
        assert_eq!(d, OnlineDecision::Match(4));
        alg.mapping_report(&st).unwrap();
    }

    #[test]
    fn weight_out_of_range_rejected() {
        let mut st = MatchingState::new(Space::Circle, Mode::Irrevocable);
        let mut alg = wam16();
        let p = st.ingest(pc(0, 1), rat_int(17)).unwrap().clone();
        assert!(alg.on_arrival(&st, &p).is_err());
    }

    #[test]
    fn mapping_report_counts_unmatched() {
        let mut st = MatchingState::new(Space::Circle, Mode::Irrevocable);
        let mut alg = wam16();
        arrive(&mut st, &mut alg, pc(0, 1), 1);
        arrive(&mut st, &mut alg, pc(1, 2), 1);
        let report = alg.mapping_report(&st).unwrap();
        assert_eq!(report.checked_points, 2);
        assert_eq!(report.mapped_unmatched, 2);
    }
}
