//! Anchor sets over the run indices of the concatenation `S = A $ B`.
//!
//! A `d`-anchor set hits every common substring of encoded length `d` at the
//! same interior offset in both occurrences. Two schemes are provided: every
//! run (always valid), and a seeded minimizer over short run k-mers that is
//! sparse but content-dependent, so equal run blocks select equal offsets.

use serde::{Deserialize, Serialize};

use crate::ds::mix64;
use crate::error::{Error, Result};
use crate::query::{CostModel, QueryLedger};
use crate::rle::{RleString, Run};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorScheme {
    Exhaustive,
    Minimizer,
}

impl std::str::FromStr for AnchorScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(AnchorScheme::Exhaustive),
            "minimizer" => Ok(AnchorScheme::Minimizer),
            other => Err(Error::Parameter(format!("unknown anchor scheme {other:?}"))),
        }
    }
}

/// Strictly increasing run indices `X(1..=m)` of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorSet {
    entries: Vec<usize>,
    d: usize,
    scheme: AnchorScheme,
}

/// Default smallest `d` accepted by [`AnchorSet::build_minimizer`].
pub const DEFAULT_D_MIN: usize = 8;

impl AnchorSet {
    /// Every run of `s`.
    pub fn build_exhaustive(s: &RleString, d: usize) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parameter("anchor set over an empty string".into()));
        }
        Ok(AnchorSet {
            entries: (1..=s.len()).collect(),
            d,
            scheme: AnchorScheme::Exhaustive,
        })
    }

    /// Window minima of a seeded hash of run k-mers, over windows of
    /// `⌈d/2⌉` consecutive positions.
    pub fn build_minimizer(s: &RleString, d: usize, seed: u64, d_min: usize) -> Result<Self> {
        if d < d_min.max(4) {
            return Err(Error::Parameter(format!(
                "minimizer anchors need d >= {}, got {d}",
                d_min.max(4)
            )));
        }
        if s.is_empty() {
            return Err(Error::Parameter("anchor set over an empty string".into()));
        }
        let n = s.len();
        let w = d.div_ceil(2);
        if n < w {
            return Ok(AnchorSet {
                entries: vec![1],
                d,
                scheme: AnchorScheme::Minimizer,
            });
        }
        let q = kmer_len(d);
        let runs = s.runs();
        let hashes: Vec<u64> = (0..n)
            .map(|p| kmer_hash(&runs[p..(p + q).min(n)], seed))
            .collect();
        let mut entries = Vec::new();
        // Sliding-window minimum with a monotone deque of 0-based positions.
        let mut deque = std::collections::VecDeque::new();
        for p in 0..n {
            while deque.back().is_some_and(|&b: &usize| hashes[b] > hashes[p]) {
                deque.pop_back();
            }
            deque.push_back(p);
            if p + 1 >= w {
                let start = p + 1 - w;
                while deque.front().is_some_and(|&f| f < start) {
                    deque.pop_front();
                }
                let best = *deque.front().unwrap();
                if entries.last() != Some(&(best + 1)) {
                    entries.push(best + 1);
                }
            }
        }
        Ok(AnchorSet {
            entries,
            d,
            scheme: AnchorScheme::Minimizer,
        })
    }

    /// Builds with `scheme`, using exhaustive anchors when `d < d_min`.
    pub fn build(
        s: &RleString,
        d: usize,
        scheme: AnchorScheme,
        seed: u64,
        d_min: usize,
    ) -> Result<Self> {
        match scheme {
            AnchorScheme::Minimizer if d >= d_min.max(4) => {
                Self::build_minimizer(s, d, seed, d_min)
            }
            _ => Self::build_exhaustive(s, d),
        }
    }

    /// Keeps every `stride`-th entry. Produces deliberately incomplete sets
    /// for soundness tests.
    pub fn thinned(&self, stride: usize) -> Self {
        let stride = stride.max(1);
        AnchorSet {
            entries: self.entries.iter().copied().step_by(stride).collect(),
            ..self.clone()
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn scheme(&self) -> AnchorScheme {
        self.scheme
    }

    /// `X(k)` for `k` in `1..=m`, charging one anchor computation.
    pub fn anchor_at(&self, k: usize, ledger: &QueryLedger, cost: &CostModel) -> Result<usize> {
        let x = self.get(k)?;
        ledger.charge(cost.anchor_charge(self.d));
        Ok(x)
    }

    /// `X(k)` without charging.
    pub fn get(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.entries.len() {
            return Err(Error::range(k as u64, 1, self.entries.len() as u64));
        }
        Ok(self.entries[k - 1])
    }

    pub fn contains(&self, x: usize) -> bool {
        self.entries.binary_search(&x).is_ok()
    }
}

/// Number of runs hashed per position: as long as possible while a window
/// of hashes still fits inside the `d - 2` interior runs.
fn kmer_len(d: usize) -> usize {
    (d as isize - 1 - d.div_ceil(2) as isize).clamp(1, 6) as usize
}

fn kmer_hash(runs: &[Run], seed: u64) -> u64 {
    runs.iter().fold(mix64(seed), |h, r| {
        mix64(h ^ mix64(((r.ch as u64) << 56) ^ r.len))
    })
}

/// A common substring that no shift anchors. Run indices are 1-based and
/// local to `A` and `B`; `i`, `j` are the first interior runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnchorWitness {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorValidation {
    pub valid: bool,
    /// Common substrings of encoded length `d` that were checked.
    pub checked: usize,
    pub witness: Option<AnchorWitness>,
}

/// Checks the anchor condition over every common generalized substring of
/// encoded length exactly `d` (longer ones contain such a substring).
///
/// `s` is `A sep B` with the separator run at `sep_index`. A substring with
/// first interior run `i` in `A` and `j` in `B` is anchored when some
/// `h ∈ [0, d-3]` has `i + h ∈ X` and `sep_index + j + h ∈ X`. Substrings
/// without interior runs (`d < 3`) are not subject to the condition.
pub fn validate_anchor_set(
    x: &AnchorSet,
    s: &RleString,
    sep_index: usize,
    d: usize,
) -> AnchorValidation {
    let runs = s.runs();
    let n_a = sep_index - 1;
    let n_b = s.len() - sep_index;
    let a = &runs[..n_a];
    let b = &runs[sep_index..];
    let mut checked = 0;
    if d >= 3 && n_a >= d && n_b >= d {
        let interior = d - 2;
        for i in 2..=n_a + 2 - d {
            for j in 2..=n_b + 2 - d {
                // 1-based runs i-1 ..= i+d-2 in A against j-1 ..= j+d-2 in B
                let common = a[i - 2].ch == b[j - 2].ch
                    && a[i + d - 3].ch == b[j + d - 3].ch
                    && a[i - 1..i - 1 + interior] == b[j - 1..j - 1 + interior];
                if !common {
                    continue;
                }
                checked += 1;
                let anchored =
                    (0..interior).any(|h| x.contains(i + h) && x.contains(sep_index + j + h));
                if !anchored {
                    return AnchorValidation {
                        valid: false,
                        checked,
                        witness: Some(AnchorWitness { i, j }),
                    };
                }
            }
        }
    }
    AnchorValidation {
        valid: true,
        checked,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rle::{concat_sep, encode, SEP_DOLLAR};

    #[test]
    fn exhaustive_lists_every_run() {
        let s = RleString::from_pairs(&[
            (b'a', 1),
            (b'b', 2),
            (b'a', 1),
            (b'c', 1),
            (b'a', 1),
            (b'b', 1),
            (b'c', 1),
        ]);
        let x = AnchorSet::build_exhaustive(&s, 3).unwrap();
        assert_eq!(x.entries(), &[1, 2, 3, 4, 5, 6, 7]);
        let ledger = QueryLedger::new();
        assert_eq!(x.anchor_at(5, &ledger, &CostModel::default()).unwrap(), 5);
        assert!((ledger.charged_cost() - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(x.anchor_at(7, &ledger, &CostModel::default()).unwrap(), 7);
        assert!(x.anchor_at(8, &ledger, &CostModel::default()).is_err());
    }

    #[test]
    fn minimizer_short_string_is_single_anchor() {
        let s = encode(b"abc");
        let x = AnchorSet::build_minimizer(&s, 8, 1, 8).unwrap();
        assert_eq!(x.entries(), &[1]);
    }

    #[test]
    fn minimizer_rejects_small_d() {
        let s = encode(b"abcabc");
        assert!(matches!(
            AnchorSet::build_minimizer(&s, 7, 1, 8),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn minimizer_periodic_alignment() {
        let s = encode(&b"ab".repeat(16));
        let x = AnchorSet::build_minimizer(&s, 8, 3, 8).unwrap();
        let residues: std::collections::BTreeSet<usize> =
            x.entries().iter().map(|&p| p % 2).collect();
        // k-mers starting on the same letter hash alike, except where the
        // k-mer is cut short at the end of the string.
        let interior: Vec<usize> = x
            .entries()
            .iter()
            .copied()
            .filter(|&p| p + 3 <= s.len())
            .collect();
        assert!(
            interior.iter().all(|&p| p % 2 == interior[0] % 2),
            "{residues:?}"
        );
    }

    #[test]
    fn minimizer_validates_planted_block() {
        let block = b"xyyzzzwxxyzzywwz";
        let mut a = b"abcacb".to_vec();
        a.extend_from_slice(block);
        a.extend_from_slice(b"cabcab");
        let mut b = b"bcbacabcba".to_vec();
        b.extend_from_slice(block);
        b.extend_from_slice(b"acb");
        let (s, sep) = concat_sep(&encode(&a), &encode(&b), SEP_DOLLAR).unwrap();
        let x = AnchorSet::build_minimizer(&s, 8, 11, 8).unwrap();
        let v = validate_anchor_set(&x, &s, sep, 8);
        assert!(v.checked > 0);
        assert!(v.valid, "{v:?}");
    }

    #[test]
    fn validation_finds_witness_for_empty_set() {
        let (s, sep) = concat_sep(&encode(b"xabcdefy"), &encode(b"zabcdefw"), SEP_DOLLAR).unwrap();
        let mut x = AnchorSet::build_exhaustive(&s, 4).unwrap();
        assert!(validate_anchor_set(&x, &s, sep, 4).valid);
        x.entries = vec![1];
        let v = validate_anchor_set(&x, &s, sep, 4);
        assert!(!v.valid);
        assert!(v.witness.is_some());
    }

    #[test]
    fn no_common_substring_is_vacuous() {
        let (s, sep) = concat_sep(&encode(b"abababab"), &encode(b"cdcdcdcd"), SEP_DOLLAR).unwrap();
        let x = AnchorSet::build_minimizer(&s, 8, 0, 8).unwrap();
        let v = validate_anchor_set(&x, &s, sep, 8);
        assert!(v.valid);
        assert_eq!(v.checked, 0);
    }
}
