//! PARITY reductions: bit strings encoded as RLE gadgets whose longest
//! common substring reveals the XOR of the bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rle::{RleString, Run, SEP_AT, SEP_HASH};

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    if s.is_empty() {
        return Err(Error::Parameter("empty bit string".into()));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parameter(format!("not a bit: {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parity(bits: &[bool]) -> bool {
    bits.iter().fold(false, |acc, &b| acc ^ b)
}

/// Runs alternating `a`, `b`, starting with `a`, of lengths `scale·B_i + 2`.
fn alternating(bits: &[bool], scale: u64) -> Vec<Run> {
    bits.iter()
        .enumerate()
        .map(|(i, &bit)| Run::new(if i % 2 == 0 { b'a' } else { b'b' }, scale * bit as u64 + 2))
        .collect()
}

/// `S_B`: runs of length `B_i + 2` alternating between `a` and `b`.
pub fn gadget_dl(bits: &[bool]) -> RleString {
    RleString::from_runs(alternating(bits, 1)).expect("alternating runs")
}

/// Parity from the decoded LCS length of `S_B` with itself, which is
/// `2n + ΣB_i`.
pub fn parity_via_dl(
    bits: &[bool],
    mut dl_solver: impl FnMut(&RleString, &RleString) -> Result<u64>,
) -> Result<bool> {
    let s = gadget_dl(bits);
    Ok(dl_solver(&s, &s)? % 2 == 1)
}

/// Runs of length `2B_i + 2` alternating `a`/`b`, then `sep`, then `c^k`.
pub fn gadget_el(bits: &[bool], k: u64, sep: u8) -> Result<RleString> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if sep != SEP_AT && sep != SEP_HASH {
        return Err(Error::Parameter(format!(
            "separator must be '@' or '#', got {:?}",
            sep as char
        )));
    }
    let mut runs = alternating(bits, 2);
    runs.push(Run::new(sep, 1));
    runs.push(Run::new(b'c', k));
    RleString::from_runs(runs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElOutcome {
    pub parity: bool,
    /// Smallest odd `k` for which the common substring is `c^k`.
    pub k_prime: u64,
    /// Decoded length of the `a`/`b` part, `k' - 1`.
    pub gadget_len: u64,
    pub calls: usize,
}

/// Parity from an oracle reporting the encoded length of a longest common
/// substring of `S_B @ c^k` and `S_B # c^k`.
///
/// That substring is `c^k` (one run) when `k` exceeds the even length
/// `|S̃_B| ∈ [2n, 4n]`, and `S_B` (`n` runs) when `k` is smaller. Querying
/// only odd `k` avoids ties, so a binary search over the odd values in
/// `[2n+1, 4n-1]` finds `k' = |S̃_B| + 1`, and `ΣB_i = |S̃_B|/2 - n`.
/// A single bit is padded with a leading zero because `n = 1` makes both
/// answers one run long.
pub fn parity_via_el(
    bits: &[bool],
    mut el_solver: impl FnMut(&RleString, &RleString) -> Result<usize>,
) -> Result<ElOutcome> {
    if bits.is_empty() {
        return Err(Error::Parameter("empty bit string".into()));
    }
    let padded: Vec<bool>;
    let bits = if bits.len() == 1 {
        padded = vec![false, bits[0]];
        &padded[..]
    } else {
        bits
    };
    let n = bits.len() as u64;
    let mut calls = 0;
    let mut responses: Vec<(u64, bool)> = Vec::new();
    let mut probe = |k: u64| -> Result<bool> {
        calls += 1;
        let out = el_solver(&gadget_el(bits, k, SEP_AT)?, &gadget_el(bits, k, SEP_HASH)?)?;
        let is_c = match out {
            1 => true,
            e if e as u64 == n => false,
            e => {
                return Err(Error::Reduction(format!(
                    "solver answered {e} runs at k = {k}, expected 1 or {n}"
                )))
            }
        };
        responses.push((k, is_c));
        Ok(is_c)
    };
    // Odd k = 2n + 1 + 2t for t in 0..n; t = n stands for 4n + 1.
    let (mut lo, mut hi) = (0u64, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if probe(2 * n + 1 + 2 * mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    // With no `c^k` answer seen, confirm the one value of k that must give it.
    if lo == n {
        probe(4 * n + 1)?;
    }
    let k_prime = 2 * n + 1 + 2 * lo;
    let monotone = responses.iter().all(|&(k, is_c)| is_c == (k >= k_prime));
    if !monotone {
        return Err(Error::Reduction(format!(
            "non-monotone solver responses {responses:?}"
        )));
    }
    let parity = ((k_prime >> 1) & 1 == 1) ^ (n & 1 == 1);
    Ok(ElOutcome {
        parity,
        k_prime,
        gadget_len: k_prime - 1,
        calls,
    })
}

/// Upper bound on solver calls made by [`parity_via_el`]:
/// `⌈log₂(2n)⌉ + 1`.
pub fn el_call_bound(n_bits: usize) -> usize {
    (2 * n_bits.max(1)).next_power_of_two().trailing_zeros() as usize + 1
}

/// `a₁ @ a₂ @ … a_ñ @`: every decoded character followed by `@`.
pub fn pad_interleave(a: &RleString) -> Result<RleString> {
    if a.contains_byte(SEP_AT) {
        return Err(Error::InvalidSeparator {
            sep: SEP_AT as char,
        });
    }
    let mut runs = Vec::with_capacity(2 * a.decoded_len() as usize);
    for run in a.runs() {
        for _ in 0..run.len {
            runs.push(Run::new(run.ch, 1));
            runs.push(Run::new(SEP_AT, 1));
        }
    }
    RleString::from_runs(runs)
}
