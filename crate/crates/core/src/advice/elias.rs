//! Elias delta code for positive integers of arbitrary size.
//!
//! `delta(m)`: write `gamma(N)` for the bit-length `N` of `m`, then the
//! `N - 1` low bits of `m`. `gamma(N)` is `floor(log2 N)` zeros followed by
//! `N` in binary.

use num::bigint::BigUint;
use num::Zero;

use crate::error::Error;
use crate::Result;

fn bit_length(m: &BigUint) -> u64 {
    m.bits()
}

fn push_binary(bits: &mut Vec<bool>, value: u64, width: u64) {
    for i in (0..width).rev() {
        bits.push((value >> i) & 1 == 1);
    }
}

/// Encodes `m >= 1`.
pub fn elias_delta_encode(m: &BigUint) -> Result<Vec<bool>> {
    if m.is_zero() {
        return Err(Error::Parse("Elias delta is defined on positive integers".into()));
    }
    let n = bit_length(m); // m has n bits, leading bit 1
    let l = 64 - n.leading_zeros() as u64; // bit length of n
    let mut bits = Vec::new();
    for _ in 0..l - 1 {
        bits.push(false);
    }
    push_binary(&mut bits, n, l);
    for i in (0..n - 1).rev() {
        bits.push(m.bit(i));
    }
    Ok(bits)
}

/// Decodes one delta code from the front of `bits`; returns the value and the
/// number of bits consumed.
pub fn elias_delta_decode(bits: &[bool]) -> Result<(BigUint, usize)> {
    let mut pos = 0;
    while pos < bits.len() && !bits[pos] {
        pos += 1;
    }
    if pos == bits.len() {
        return Err(Error::Parse("truncated delta code: no gamma marker".into()));
    }
    let l = pos + 1; // gamma: (l-1) zeros then l bits of N
    if pos + l > bits.len() {
        return Err(Error::Parse("truncated delta code: gamma payload".into()));
    }
    let mut n: u64 = 0;
    for i in 0..l {
        n = (n << 1) | bits[pos + i] as u64;
    }
    pos += l;
    if n == 0 {
        return Err(Error::Parse("corrupt delta code: zero length".into()));
    }
    let payload = (n - 1) as usize;
    if pos + payload > bits.len() {
        return Err(Error::Parse("truncated delta code: value payload".into()));
    }
    let mut m = BigUint::from(1u32);
    for i in 0..payload {
        m <<= 1;
        if bits[pos + i] {
            m += 1u32;
        }
    }
    pos += payload;
    Ok((m, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc_str(m: u64) -> String {
        elias_delta_encode(&BigUint::from(m))
            .unwrap()
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn known_codewords() {
        assert_eq!(enc_str(1), "1");
        assert_eq!(enc_str(2), "0100");
        assert_eq!(enc_str(3), "0101");
        assert_eq!(enc_str(4), "01100");
        assert_eq!(enc_str(10), "00100010");
    }

    #[test]
    fn round_trip_small_range() {
        for m in 1u64..=1000 {
            let bits = elias_delta_encode(&BigUint::from(m)).unwrap();
            let (back, used) = elias_delta_decode(&bits).unwrap();
            assert_eq!(back, BigUint::from(m));
            assert_eq!(used, bits.len());
        }
    }

    #[test]
    fn big_values_round_trip() {
        let m = BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let bits = elias_delta_encode(&m).unwrap();
        let (back, used) = elias_delta_decode(&bits).unwrap();
        assert_eq!(back, m);
        assert_eq!(used, bits.len());
    }

    #[test]
    fn zero_rejected_and_truncation_detected() {
        assert!(elias_delta_encode(&BigUint::zero()).is_err());
        let bits = elias_delta_encode(&BigUint::from(1000u32)).unwrap();
        assert!(elias_delta_decode(&bits[..bits.len() - 1]).is_err());
        assert!(elias_delta_decode(&[false, false]).is_err());
    }
}
