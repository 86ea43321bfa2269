//! Adaptive collinear adversary for algorithms with revoking.
//!
//! Free placement (fresh positions beyond everything seen) while no match
//! exists; once a pair forms, every new point lands strictly inside the
//! matched interval, so the algorithm can never hold two pairs at once:
//! a second pair would have to nest inside or straddle the first.

use std::collections::{BTreeMap, HashMap};

use crate::algorithms::OnlineDecision;
use crate::error::Error;
use crate::matching::{MatchingState, PointId};
use crate::rational::{rat, rat_int, Rational};
use crate::{Position, Result, Space};

use super::{Adversary, AdversaryEvent, AlgorithmReport, BoundCheck};

pub struct CollinearRevokingAdversary {
    n_pairs: usize,
    emitted: usize,
    by_pos: BTreeMap<Rational, PointId>,
    pos_of: HashMap<PointId, Rational>,
    partner: HashMap<PointId, PointId>,
    free_counter: i64,
    max_concurrent_pairs: usize,
}

impl CollinearRevokingAdversary {
    pub fn new(n_pairs: usize) -> Self {
        CollinearRevokingAdversary {
            n_pairs,
            emitted: 0,
            by_pos: BTreeMap::new(),
            pos_of: HashMap::new(),
            partner: HashMap::new(),
            free_counter: 0,
            max_concurrent_pairs: 0,
        }
    }

    pub fn max_concurrent_pairs(&self) -> usize {
        self.max_concurrent_pairs
    }

    fn pairs(&self) -> usize {
        self.partner.len() / 2
    }

    fn emit_at(&mut self, x: Rational) -> Result<AdversaryEvent> {
        self.emitted += 1;
        if self.by_pos.contains_key(&x) {
            return Err(Error::DuplicatePosition(format!("x={x}")));
        }
        self.by_pos.insert(x.clone(), self.emitted);
        self.pos_of.insert(self.emitted, x.clone());
        Ok(AdversaryEvent::Emit {
            pos: Position::line(x),
            weight: Rational::from_integer(1.into()),
        })
    }

    fn observe(&mut self, report: &AlgorithmReport<'_>) -> Result<()> {
        match &report.decision {
            OnlineDecision::Leave => {}
            OnlineDecision::Match(q) => {
                let p = self.emitted;
                self.partner.insert(p, *q);
                self.partner.insert(*q, p);
            }
            OnlineDecision::RevokeAndMatch { revoke, partner } => {
                let (a, b) = *revoke;
                if self.partner.remove(&a) != Some(b) || self.partner.remove(&b) != Some(a) {
                    return Err(Error::Protocol(format!(
                        "revoked edge ({a},{b}) is not in the adversary's mirror"
                    )));
                }
                let p = self.emitted;
                self.partner.insert(p, *partner);
                self.partner.insert(*partner, p);
            }
        }
        let pairs = self.pairs();
        self.max_concurrent_pairs = self.max_concurrent_pairs.max(pairs);
        if pairs > 1 {
            return Err(Error::Invariant(format!(
                "the midpoint strategy should cap concurrent pairs at 1, saw {pairs}"
            )));
        }
        Ok(())
    }
}

impl Adversary for CollinearRevokingAdversary {
    fn name(&self) -> &'static str {
        "collinear-revoking"
    }

    fn space(&self) -> Space {
        Space::Line
    }

    fn next(&mut self, report: Option<&AlgorithmReport<'_>>) -> Result<AdversaryEvent> {
        if let Some(r) = report {
            self.observe(r)?;
        }
        if self.emitted >= 2 * self.n_pairs {
            return Ok(AdversaryEvent::End);
        }
        if self.partner.is_empty() {
            // Free placement outside all previous points.
            self.free_counter += 1;
            let x = rat_int(self.free_counter);
            return self.emit_at(x);
        }
        // Exactly one matched pair [a, b]: halve the gap just right of a.
        let (&a, &b) = self.partner.iter().next().expect("nonempty");
        let pa = self.pos_of[&a].clone();
        let pb = self.pos_of[&b].clone();
        let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
        use std::ops::Bound;
        let succ = self
            .by_pos
            .range((Bound::Excluded(lo.clone()), Bound::Unbounded))
            .next()
            .map(|(p, _)| p.clone())
            .expect("the pair's right endpoint bounds the range");
        debug_assert!(succ <= hi);
        let mid = (&lo + &succ) / rat(2, 1);
        self.emit_at(mid)
    }

    fn certify(&self, state: &MatchingState) -> Result<Vec<BoundCheck>> {
        let mut checks = Vec::new();
        checks.push(BoundCheck {
            name: "collinear-revoking: max concurrent pairs <= 1".into(),
            observed: self.max_concurrent_pairs.to_string(),
            threshold: "1".into(),
            satisfied: self.max_concurrent_pairs <= 1,
        });
        checks.push(BoundCheck {
            name: "collinear-revoking: final pairs <= 1".into(),
            observed: state.edge_count().to_string(),
            threshold: "1".into(),
            satisfied: state.edge_count() <= 1,
        });
        let ratio = state.outcome().ratio();
        let threshold = rat_int(1) / rat_int(self.n_pairs as i64);
        checks.push(BoundCheck::ratio_le(
            "collinear-revoking: ratio <= 1/n",
            &ratio,
            &threshold,
        ));
        Ok(checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::run_duel;
    use crate::algorithms::{Greedy, OnlineAlgorithm, Rrm};
    use crate::matching::WeightedPoint;
    use crate::runner::RunOptions;

    #[test]
    fn rrm_is_pinned_to_one_pair() {
        let mut adv = CollinearRevokingAdversary::new(20);
        let mut alg = Rrm::seeded(5);
        let rec = run_duel(&mut alg, &mut adv, RunOptions::default()).unwrap();
        assert_eq!(rec.run.state.len(), 40);
        assert!(rec.checks.iter().all(|c| c.satisfied), "{:#?}", rec.checks);
        assert!(rec.run.state.edge_count() <= 1);
        // The adversary forced plenty of revokes along the way.
        assert!(rec.run.state.revoked().len() > 5);
    }

    #[test]
    fn greedy_stalls_at_its_first_pair() {
        let mut adv = CollinearRevokingAdversary::new(10);
        let mut alg = Greedy::new();
        let rec = run_duel(&mut alg, &mut adv, RunOptions::default()).unwrap();
        assert_eq!(rec.run.state.edge_count(), 1);
        assert!(rec.checks.iter().all(|c| c.satisfied));
    }

    struct NeverMatch;
    impl OnlineAlgorithm for NeverMatch {
        fn name(&self) -> &'static str {
            "never"
        }
        fn revocable(&self) -> bool {
            true
        }
        fn on_arrival(&mut self, _: &MatchingState, _: &WeightedPoint) -> Result<OnlineDecision> {
            Ok(OnlineDecision::Leave)
        }
    }

    #[test]
    fn never_match_scores_zero() {
        let mut adv = CollinearRevokingAdversary::new(5);
        let rec = run_duel(&mut NeverMatch, &mut adv, RunOptions::default()).unwrap();
        assert_eq!(rec.run.outcome.matched_weight, rat_int(0));
        assert!(rec.checks.iter().all(|c| c.satisfied));
    }
}
