//! Longest common substring of run-length encoded strings, searched by a
//! walk over anchor subsets whose cost is booked against a query ledger.
//!
//! Strings are only read through counted oracles ([`query::OracleHandle`]):
//! the character and length of run `i`, and the decoded length of the first
//! `i` runs. Every search primitive charges the ledger with the cost it would
//! have as a quantum subroutine, while the work itself runs classically.
//!
//! ## Modules
//!
//! - [`rle`]: run-length strings, the `char:count` text format, decoded
//!   comparison helpers.
//! - [`query`]: the ledger, oracle handles and the cost model.
//! - [`walk`]: the generic walk driver over `r`-subsets.
//! - [`ds`]: the positional array with range minima and the 2D point counter.
//! - [`anchors`]: exhaustive and minimizer anchor sets, and their validator.
//! - [`lcs`]: the vertex data, collision check and the outer solver for
//!   common substrings and repeats.
//! - [`reductions`]: parity gadgets.
//! - [`reference`](mod@reference): brute-force oracles and instance generators.
//! - [`bench`](mod@bench): ledger measurements over a grid.
//!
//! ## Examples
//!
//! ```bash
//! cargo run --example encode_decode
//! cargo run --example oracle_queries
//! cargo run --example dynamic_array
//! cargo run --example anchor_sets
//! cargo run --example solve_lcs
//! cargo run --example longest_repeat
//! cargo run --example parity_reductions
//! cargo run --release --example ledger_scaling
//! ```
//!
//! ```
//! use rle_lcs::config::SolverConfig;
//! use rle_lcs::lcs::solve_lcs_rle_p;
//! use rle_lcs::query::{OracleHandle, QueryLedger};
//! use rle_lcs::rle::encode;
//!
//! let ledger = QueryLedger::new();
//! let a = OracleHandle::new(encode(b"abcdbbbbccccc"), ledger.clone());
//! let b = OracleHandle::new(encode(b"abcd@bbbbcc"), ledger.clone());
//! let ans = solve_lcs_rle_p(&a, &b, &SolverConfig::default()).unwrap().unwrap();
//! assert_eq!((ans.d_tilde, ans.ell), (6, 2));
//! ```

pub mod anchors;
pub mod bench;
pub mod config;
pub mod ds;
pub mod error;
pub mod lcs;
pub mod query;
pub mod reductions;
pub mod reference;
pub mod rle;
pub mod text;
pub mod walk;
