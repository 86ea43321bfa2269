//! Dyck words, Catalan numbers, and lexicographic rank/unrank.
//!
//! Convention: `0` opens, `1` closes; a word is Dyck when no prefix has more
//! ones than zeros and the totals balance. Ranking is lexicographic with
//! `'0' < '1'`, computed with a ballot-number table (paths that return to
//! height zero without going negative).

use num::bigint::BigUint;
use num::{One, Zero};

use crate::error::Error;
use crate::Result;

/// No prefix has more ones than zeros, and the counts balance overall.
pub fn is_dyck(bits: &[bool]) -> bool {
    let mut excess: i64 = 0;
    for &b in bits {
        excess += if b { -1 } else { 1 };
        if excess < 0 {
            return false;
        }
    }
    excess == 0
}

/// Catalan numbers and the completion-count table used for ranking.
pub struct CatalanTable {
    /// `paths[m][e]`: words of length `m` that drain excess `e` to zero
    /// without going negative.
    paths: Vec<Vec<BigUint>>,
}

impl CatalanTable {
    /// Table covering words up to length `2n`.
    pub fn new(n: usize) -> Self {
        let len = 2 * n;
        let mut paths = vec![vec![BigUint::zero(); len + 2]; len + 1];
        paths[0][0] = BigUint::one();
        for m in 1..=len {
            for e in 0..=len {
                let mut v = paths[m - 1][e + 1].clone();
                if e > 0 {
                    v += &paths[m - 1][e - 1];
                }
                paths[m][e] = v;
            }
        }
        CatalanTable { paths }
    }

    fn completions(&self, remaining: usize, excess: usize) -> &BigUint {
        &self.paths[remaining][excess]
    }

    /// `C_m` for `m <= n`.
    pub fn catalan(&self, m: usize) -> &BigUint {
        self.completions(2 * m, 0)
    }
}

/// Exact `C_n` via the recurrence `C_0 = 1`, `C_n = 2(2n-1)/(n+1) * C_(n-1)`;
/// the division is checked to be exact at every step.
pub fn catalan(n: usize) -> BigUint {
    let mut c = BigUint::one();
    for m in 1..=n {
        let num = c * BigUint::from(2 * (2 * m - 1));
        let den = BigUint::from(m + 1);
        let (q, r) = num::Integer::div_rem(&num, &den);
        assert!(r.is_zero(), "Catalan recurrence division must be exact");
        c = q;
    }
    c
}

/// Lexicographic rank of a Dyck word among all Dyck words of its length.
pub fn dyck_rank(bits: &[bool]) -> Result<BigUint> {
    if !is_dyck(bits) {
        return Err(Error::AdviceCorrupted("not a Dyck word".into()));
    }
    let table = CatalanTable::new(bits.len() / 2);
    let mut rank = BigUint::zero();
    let mut excess = 0usize;
    for (i, &b) in bits.iter().enumerate() {
        let remaining = bits.len() - i - 1;
        if b {
            // Everything starting '0' here comes first.
            rank += table.completions(remaining, excess + 1);
            excess -= 1;
        } else {
            excess += 1;
        }
    }
    Ok(rank)
}

/// Inverse of [`dyck_rank`]: the Dyck word of length `2n` at `index`.
pub fn dyck_unrank(n: usize, index: &BigUint) -> Result<Vec<bool>> {
    let table = CatalanTable::new(n);
    if index >= table.catalan(n) {
        return Err(Error::AdviceCorrupted(format!(
            "rank {index} out of range for n={n}"
        )));
    }
    let mut bits = Vec::with_capacity(2 * n);
    let mut rest = index.clone();
    let mut excess = 0usize;
    for i in 0..2 * n {
        let remaining = 2 * n - i - 1;
        let with_zero = table.completions(remaining, excess + 1).clone();
        if rest < with_zero {
            bits.push(false);
            excess += 1;
        } else {
            rest -= with_zero;
            bits.push(true);
            excess -= 1;
        }
    }
    debug_assert_eq!(excess, 0);
    Ok(bits)
}

/// All Dyck words of length `2n`, in lexicographic order. Exponential; for
/// tests and cross-checks only.
pub fn enumerate_dyck_words(n: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(2 * n);
    fn rec(cur: &mut Vec<bool>, opens: usize, excess: usize, len: usize, out: &mut Vec<Vec<bool>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        if opens < len / 2 {
            cur.push(false);
            rec(cur, opens + 1, excess + 1, len, out);
            cur.pop();
        }
        if excess > 0 {
            cur.push(true);
            rec(cur, opens, excess - 1, len, out);
            cur.pop();
        }
    }
    rec(&mut cur, 0, 0, 2 * n, &mut out);
    out
}
