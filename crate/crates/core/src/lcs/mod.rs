//! Longest common substring of two RLE strings, and longest repeated
//! substring of one, by a walk over anchor subsets.

mod check;
mod solver;
mod vertex;

use serde::{Deserialize, Serialize};

pub use crate::text::Color;
pub use check::vertex_check;
pub use solver::{
    finalize_answer, inner_search, solve_lcs_rle_p, solve_lrs, verify_candidate, verify_repeat,
    InnerSearch,
};
pub use vertex::{ReferenceSample, VertexData, WalkContext};

/// How stored anchors may pair up in a collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// One red and one blue anchor (common substring of `A` and `B`).
    Bichromatic,
    /// Any two distinct anchors (repeat inside `A`).
    Single,
}

/// Where a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    /// A colliding anchor pair found by the vertex check. For repeats,
    /// `k_red` is the anchor the check started from.
    Walk {
        k_red: usize,
        k_blue: usize,
        d_prime: usize,
        l: u64,
    },
    /// A common substring inside a single run of each side.
    SingleRun,
    /// A common substring spanning one run boundary on each side.
    RunPair,
}

/// An unverified claim that the decoded text of `S` agrees around two
/// aligned positions over at least `d_tilde` characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub source: CandidateSource,
    pub d_tilde: u64,
    /// 1-based decoded positions in `S` of two characters that the common
    /// substring maps onto each other.
    pub aligned: (u64, u64),
}

/// A verified common substring: it starts inside run `i_A` of `A` and run
/// `i_B` of `B`, spans `ell` runs and `d_tilde` characters. Decoded starts
/// are 0-based. For repeats both positions refer to `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsAnswer {
    #[serde(rename = "i_A")]
    pub i_a: usize,
    #[serde(rename = "i_B")]
    pub i_b: usize,
    pub ell: usize,
    pub d_tilde: u64,
    #[serde(rename = "decoded_start_A")]
    pub decoded_start_a: u64,
    #[serde(rename = "decoded_start_B")]
    pub decoded_start_b: u64,
}
