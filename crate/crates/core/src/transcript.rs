//! Replayable run records.
//!
//! One record per arrival: the emitted point, the decision taken, and a hash
//! of the matching state after the decision was applied. Serialized as
//! line-delimited JSON for replay and regression diffing.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::OnlineDecision;
use crate::geometry::Position;
use crate::matching::MatchingState;
use crate::rational::format_rational;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TranscriptPosition {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TranscriptRecord {
    pub step: usize,
    pub emit: TranscriptEmit,
    pub decision: TranscriptDecision,
    pub state_hash: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TranscriptEmit {
    pub pos: TranscriptPosition,
    pub w: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TranscriptDecision {
    Leave,
    Match { with: usize },
    RevokeAndMatch { revoked: (usize, usize), with: usize },
}

impl From<&OnlineDecision> for TranscriptDecision {
    fn from(d: &OnlineDecision) -> Self {
        match d {
            OnlineDecision::Leave => TranscriptDecision::Leave,
            OnlineDecision::Match(j) => TranscriptDecision::Match { with: *j },
            OnlineDecision::RevokeAndMatch { revoke, partner } => {
                TranscriptDecision::RevokeAndMatch {
                    revoked: *revoke,
                    with: *partner,
                }
            }
        }
    }
}

pub fn transcript_position(pos: &Position) -> TranscriptPosition {
    match pos {
        Position::Plane { x, y } => TranscriptPosition {
            x: Some(format_rational(x)),
            y: Some(format_rational(y)),
            t: None,
        },
        Position::Circle { t } => TranscriptPosition {
            x: None,
            y: None,
            t: Some(format_rational(t)),
        },
        Position::Line { x } => TranscriptPosition {
            x: Some(format_rational(x)),
            y: None,
            t: None,
        },
    }
}

/// Order-independent digest of the current matching state.
pub fn state_hash(state: &MatchingState) -> String {
    let mut canon = String::new();
    for (a, b) in state.edges() {
        canon.push_str(&format!("e{a},{b};"));
    }
    for id in state.unmatched_ids() {
        canon.push_str(&format!("u{id};"));
    }
    for r in state.revoked() {
        canon.push_str(&format!("r{},{}@{};", r.a, r.b, r.step));
    }
    let digest = Sha256::digest(canon.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Serializes records as JSON lines.
pub fn to_jsonl(records: &[TranscriptRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("transcript records serialize"))
        .collect::<Vec<_>>()
        .join("\n")
        + if records.is_empty() { "" } else { "\n" }
}

pub fn from_jsonl(s: &str) -> crate::Result<Vec<TranscriptRecord>> {
    s.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| crate::Error::Parse(format!("bad transcript line: {e}")))
        })
        .collect()
}
