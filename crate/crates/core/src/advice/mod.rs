//! Advice machinery: the offline advice producer, Dyck-word combinatorics,
//! Catalan numbers, ranking, and Elias-delta coding of the advice index.
//!
//! An advice string of length `2n` records one bit per arrival; bit `i` says
//! whether arrival `i` forms a safe match with the responsible point of its
//! region. Valid strings are exactly Dyck words over `{0, 1}` (0 opens,
//! 1 closes), so there are only `C_n` of them; the tape carries the
//! Elias-delta code of `1 + rank(D)` in the lexicographic ordering.

mod dyck;
mod elias;
mod oracle;
mod tape;

pub use dyck::{catalan, dyck_rank, dyck_unrank, enumerate_dyck_words, is_dyck, CatalanTable};
pub use elias::{elias_delta_decode, elias_delta_encode};
pub use oracle::sam_oracle;
pub use tape::{advice_tape, decode_tape_to_advice, tape_from_bits, tape_to_bits};

use crate::error::Error;
use crate::Result;

/// A validated advice string: balanced, Dyck, first bit 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdviceString {
    bits: Vec<bool>,
}

impl AdviceString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() % 2 != 0 {
            return Err(Error::AdviceCorrupted(format!(
                "advice length {} is odd",
                bits.len()
            )));
        }
        if !is_dyck(&bits) {
            return Err(Error::AdviceCorrupted(
                "advice string is not a Dyck word".into(),
            ));
        }
        if let Some(true) = bits.first() {
            return Err(Error::AdviceCorrupted("first advice bit must be 0".into()));
        }
        Ok(AdviceString { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn pair_count(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn to_string01(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn parse01(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("bad advice character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}
