//! Core library for experimenting with online non-crossing matching.
//!
//! Points arrive one by one in one of three position spaces (plane, circle,
//! line), each carrying a positive rational weight. An online algorithm must
//! immediately match the arriving point to an earlier unmatched point or leave
//! it unmatched, subject to the constraint that the straight-line segments of
//! all matched pairs are pairwise non-crossing. Everything here is built on
//! exact rational arithmetic so that predicates, competitive ratios, and bound
//! checks are never subject to rounding.
//!
//! The main pieces:
//!
//! * [`geometry`] — exact predicates over the three position spaces,
//! * [`matching`] — weighted points, matching state, non-crossing enforcement,
//! * [`partition`] — convex region partitions with responsibility bookkeeping,
//! * [`classify`] — the weight-type classification shared by several matchers,
//! * [`algorithms`] — the online matchers behind one uniform interface,
//! * [`advice`] — advice-tape machinery (Dyck words, Catalan ranking, Elias delta),
//! * [`adversaries`] — adaptive and oblivious lower-bound input constructions,
//! * [`oracle`] — offline ground truth and empirical-ratio summaries,
//! * [`generators`] — seeded random instance generators,
//! * [`runner`] — drives an algorithm over an input or against an adversary.

pub mod advice;
pub mod adversaries;
pub mod algorithms;
pub mod classify;
pub mod coin;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod rational;
pub mod runner;
pub mod transcript;

pub use error::Error;
pub use geometry::{Position, Segment, Space};
pub use matching::{MatchingState, Mode, PointId, RunOutcome, WeightedPoint};
pub use rational::Rational;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
