//! Advice tape: `delta(1 + rank(D))` and its byte-level file format.
//!
//! File layout: an 8-byte big-endian bit count, then the bits packed
//! most-significant-bit first, padded to whole bytes with zeros.

use num::bigint::BigUint;
use num::One;

use crate::error::Error;
use crate::geometry::Position;
use crate::Result;

use super::{dyck_rank, dyck_unrank, elias_delta_decode, elias_delta_encode, sam_oracle, AdviceString};

/// The full pipeline: advice bits for `positions`, ranked and delta-coded.
/// The `+1` shift exists because the delta code handles positive integers.
pub fn advice_tape(positions: &[Position]) -> Result<Vec<bool>> {
    let advice = sam_oracle(positions)?;
    let rank = dyck_rank(advice.bits())?;
    elias_delta_encode(&(rank + BigUint::one()))
}

/// Reverses [`advice_tape`] given the instance size: decodes the delta code,
/// unranks, and validates. The whole tape must be consumed.
pub fn decode_tape_to_advice(bits: &[bool], n_pairs: usize) -> Result<AdviceString> {
    let (value, used) = elias_delta_decode(bits)?;
    if used != bits.len() {
        return Err(Error::AdviceCorrupted(format!(
            "tape has {} trailing bits after the index code",
            bits.len() - used
        )));
    }
    if value < BigUint::one() {
        return Err(Error::AdviceCorrupted("tape index must be positive".into()));
    }
    let rank = value - BigUint::one();
    let word = dyck_unrank(n_pairs, &rank)?;
    AdviceString::new(word)
}

/// Packs bits into the `.tape` byte format.
pub fn tape_from_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + bits.len().div_ceil(8));
    out.extend_from_slice(&(bits.len() as u64).to_be_bytes());
    let mut byte = 0u8;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            byte |= 1 << (7 - (i % 8));
        }
        if i % 8 == 7 {
            out.push(byte);
            byte = 0;
        }
    }
    if bits.len() % 8 != 0 {
        out.push(byte);
    }
    out
}

/// Unpacks the `.tape` byte format, validating the header and the padding.
pub fn tape_to_bits(bytes: &[u8]) -> Result<Vec<bool>> {
    if bytes.len() < 8 {
        return Err(Error::AdviceCorrupted("tape shorter than its header".into()));
    }
    let count = u64::from_be_bytes(bytes[..8].try_into().unwrap()) as usize;
    let body = &bytes[8..];
    if body.len() != count.div_ceil(8) {
        return Err(Error::AdviceCorrupted(format!(
            "tape body is {} bytes but the header promises {} bits",
            body.len(),
            count
        )));
    }
    let mut bits = Vec::with_capacity(count);
    for i in 0..count {
        bits.push(body[i / 8] & (1 << (7 - (i % 8))) != 0);
    }
    // Trailing pad bits must be zero.
    for i in count..body.len() * 8 {
        if body[i / 8] & (1 << (7 - (i % 8))) != 0 {
            return Err(Error::AdviceCorrupted("nonzero padding bits".into()));
        }
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn pts(coords: &[(i64, i64)]) -> Vec<Position> {
        coords
            .iter()
            .map(|&(x, y)| Position::plane(rat_int(x), rat_int(y)))
            .collect()
    }

    #[test]
    fn single_pair_tape_is_one_bit() {
        let tape = advice_tape(&pts(&[(0, 0), (1, 1)])).unwrap();
        assert_eq!(tape, vec![true]); // rank 0 -> delta(1) = "1"
        let advice = decode_tape_to_advice(&tape, 1).unwrap();
        assert_eq!(advice.to_string01(), "01");
    }

    #[test]
    fn rank_zero_word_still_encodes_to_one_bit() {
        // The straddling layout produces "0011", rank 0 at n=2.
        let tape = advice_tape(&pts(&[(0, 0), (4, 1), (3, -2), (1, 3)])).unwrap();
        assert_eq!(tape, vec![true]);
        assert_eq!(
            decode_tape_to_advice(&tape, 2).unwrap().to_string01(),
            "0011"
        );
    }

    #[test]
    fn byte_format_round_trip() {
        for len in [0usize, 1, 7, 8, 9, 17, 64] {
            let bits: Vec<bool> = (0..len).map(|i| i % 3 == 0).collect();
            let bytes = tape_from_bits(&bits);
            assert_eq!(u64::from_be_bytes(bytes[..8].try_into().unwrap()), len as u64);
            assert_eq!(tape_to_bits(&bytes).unwrap(), bits);
        }
    }

    #[test]
    fn corruption_detected() {
        let bits = advice_tape(&pts(&[(0, 0), (4, 1), (3, -2), (1, 3)])).unwrap();
        let mut bytes = tape_from_bits(&bits);
        // Flip a padding bit.
        let last = bytes.len() - 1;
        bytes[last] ^= 0x01;
        assert!(tape_to_bits(&bytes).is_err());
        // Truncate the body.
        let short = &tape_from_bits(&bits)[..8];
        assert!(tape_to_bits(short).is_err());
        // Trailing garbage after the code.
        let mut padded = bits.clone();
        padded.push(true);
        assert!(decode_tape_to_advice(&padded, 2).is_err());
    }
}
