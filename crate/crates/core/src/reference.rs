//! Brute-force ground truth over decoded strings, and instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rle::{decode, encode, RleString, Run};

/// Largest `ñ_A · ñ_B` (or `ñ²`) the quadratic oracles accept by default.
pub const DEFAULT_DESK_BOUND: u128 = 10_000_000;

/// Symbols used by the generators; none of them is a separator.
pub const GENERATOR_ALPHABET: &[u8] = b"abcd";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteLcs {
    /// Decoded length of a longest common substring.
    pub length: u64,
    /// 0-based decoded starts of one occurrence in each string.
    pub start_a: u64,
    pub start_b: u64,
    /// Number of runs of that occurrence.
    pub encoded_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteLrs {
    pub length: u64,
    /// Two distinct 0-based starts (`first < second`); zero when `length = 0`.
    pub first: u64,
    pub second: u64,
}

fn check_bound(work: u128, bound: u128) -> Result<()> {
    if work > bound {
        Err(Error::Resource { work, bound })
    } else {
        Ok(())
    }
}

pub fn brute_lcs(a: &RleString, b: &RleString) -> Result<BruteLcs> {
    brute_lcs_bounded(a, b, DEFAULT_DESK_BOUND)
}

/// Longest common substring of the decoded strings by the textbook dynamic
/// program with one rolling row. The first maximal occurrence in `a` wins.
pub fn brute_lcs_bounded(a: &RleString, b: &RleString, bound: u128) -> Result<BruteLcs> {
    check_bound(a.decoded_len() as u128 * b.decoded_len() as u128, bound)?;
    let (x, y) = (decode(a), decode(b));
    let mut row = vec![0u32; y.len() + 1];
    let (mut best, mut end_a, mut end_b) = (0u32, 0usize, 0usize);
    for i in 1..=x.len() {
        let mut diag = 0u32;
        for j in 1..=y.len() {
            let up = row[j];
            row[j] = if x[i - 1] == y[j - 1] { diag + 1 } else { 0 };
            if row[j] > best {
                (best, end_a, end_b) = (row[j], i, j);
            }
            diag = up;
        }
    }
    let start_a = end_a - best as usize;
    Ok(BruteLcs {
        length: best as u64,
        start_a: start_a as u64,
        start_b: (end_b - best as usize) as u64,
        encoded_len: encode(&x[start_a..end_a]).len(),
    })
}

pub fn brute_lrs(a: &RleString) -> Result<BruteLrs> {
    brute_lrs_bounded(a, DEFAULT_DESK_BOUND)
}

/// Longest substring occurring at two distinct starts, by scanning every
/// diagonal of the self-comparison matrix.
pub fn brute_lrs_bounded(a: &RleString, bound: u128) -> Result<BruteLrs> {
    let n = a.decoded_len();
    check_bound(n as u128 * n as u128, bound)?;
    let x = decode(a);
    let mut best = BruteLrs {
        length: 0,
        first: 0,
        second: 0,
    };
    for shift in 1..x.len() {
        let mut run = 0u64;
        for i in 0..x.len() - shift {
            run = if x[i] == x[i + shift] { run + 1 } else { 0 };
            if run > best.length {
                let first = i as u64 + 1 - run;
                best = BruteLrs {
                    length: run,
                    first,
                    second: first + shift as u64,
                };
            }
        }
    }
    Ok(best)
}

/// Uniform random RLE string: `n_runs` runs over `alphabet` with lengths in
/// `1..=max_len`, adjacent characters distinct.
///
/// Panics when `alphabet` is empty, or has one symbol and `n_runs > 1`.
pub fn random_rle<R: Rng>(rng: &mut R, n_runs: usize, alphabet: &[u8], max_len: u64) -> RleString {
    assert!(
        n_runs == 0 || alphabet.len() >= 2 || (alphabet.len() == 1 && n_runs == 1),
        "{n_runs} runs need at least two symbols"
    );
    fill(rng, n_runs, alphabet, max_len, &[], &[])
}

/// Random runs whose first character avoids `first_avoid` and whose last
/// character avoids `last_avoid`.
fn fill<R: Rng>(
    rng: &mut R,
    count: usize,
    alphabet: &[u8],
    max_len: u64,
    first_avoid: &[u8],
    last_avoid: &[u8],
) -> RleString {
    let mut runs: Vec<Run> = Vec::with_capacity(count);
    for i in 0..count {
        let prev = runs.last().map(|r| r.ch);
        let options: Vec<u8> = alphabet
            .iter()
            .copied()
            .filter(|&c| Some(c) != prev)
            .filter(|c| i != 0 || !first_avoid.contains(c))
            .filter(|c| i + 1 != count || !last_avoid.contains(c))
            .collect();
        let ch = options[rng.gen_range(0..options.len())];
        runs.push(Run::new(ch, rng.gen_range(1..=max_len)));
    }
    RleString::from_runs(runs).expect("adjacent characters differ")
}

fn concat(parts: &[&RleString]) -> RleString {
    let runs: Vec<Run> = parts
        .iter()
        .flat_map(|p| p.runs().iter().copied())
        .collect();
    RleString::from_runs(runs).expect("parts joined on distinct characters")
}

/// A planted pair and its brute-force ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub a: RleString,
    pub b: RleString,
    pub truth: BruteLcs,
}

/// Two strings of `n_runs` runs each sharing a block of `d_runs` runs with
/// decoded length at least `d_tilde`, placed at random offsets. The runs
/// flanking the block differ between the two strings so the shared block
/// does not extend. The ground truth is recomputed by [`brute_lcs`].
pub fn plant_instance(n_runs: usize, d_runs: usize, d_tilde: u64, seed: u64) -> Result<Planted> {
    let (a, b) = plant_unverified(n_runs, d_runs, d_tilde, seed)?;
    let truth = brute_lcs(&a, &b)?;
    if truth.length < d_tilde {
        return Err(Error::Internal(format!(
            "planted block of {d_tilde} characters not found"
        )));
    }
    Ok(Planted { a, b, truth })
}

/// The strings of [`plant_instance`] without the quadratic re-check, for
/// sizes beyond the brute-force oracle.
pub fn plant_unverified(
    n_runs: usize,
    d_runs: usize,
    d_tilde: u64,
    seed: u64,
) -> Result<(RleString, RleString)> {
    const MAX_LEN: u64 = 9;
    if d_runs == 0 || d_runs > n_runs {
        return Err(Error::Parameter(format!(
            "block of {d_runs} runs does not fit in {n_runs} runs"
        )));
    }
    if d_tilde > d_runs as u64 * MAX_LEN {
        return Err(Error::Parameter(format!(
            "{d_runs} runs of length at most {MAX_LEN} cannot reach {d_tilde} characters"
        )));
    }
    let alphabet = GENERATOR_ALPHABET;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = fill(&mut rng, d_runs, alphabet, MAX_LEN, &[], &[]);
    let mut runs = block.runs().to_vec();
    while runs.iter().map(|r| r.len).sum::<u64>() < d_tilde {
        let i = rng.gen_range(0..runs.len());
        if runs[i].len < MAX_LEN {
            runs[i].len += 1;
        }
    }
    let block = RleString::from_runs(runs)?;
    let (head, tail) = (block.run(1).unwrap().ch, block.run(d_runs).unwrap().ch);

    let extra = n_runs - d_runs;
    let mut make = |avoid_left: &[u8], avoid_right: &[u8]| {
        let left = rng.gen_range(0..=extra);
        let l = fill(&mut rng, left, alphabet, MAX_LEN, &[], avoid_left);
        let r = fill(&mut rng, extra - left, alphabet, MAX_LEN, avoid_right, &[]);
        (l, r)
    };
    let (la, ra) = make(&[head], &[tail]);
    let flank_l: Vec<u8> = [Some(head), la.runs().last().map(|r| r.ch)]
        .into_iter()
        .flatten()
        .collect();
    let flank_r: Vec<u8> = [Some(tail), ra.run(1).map(|r| r.ch)]
        .into_iter()
        .flatten()
        .collect();
    let (lb, rb) = make(&flank_l, &flank_r);
    Ok((concat(&[&la, &block, &ra]), concat(&[&lb, &block, &rb])))
}
