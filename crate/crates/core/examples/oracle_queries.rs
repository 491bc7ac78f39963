//! Counted access to a string through run and prefix-length queries, and
//! the charges booked by the search primitives.
//!
//! ```bash
//! cargo run --example oracle_queries
//! ```

use rle_lcs::query::{grover_search, minimum_find, CostModel, OracleHandle, QueryLedger};
use rle_lcs::rle::encode;

fn main() -> rle_lcs::error::Result<()> {
    let ledger = QueryLedger::new();
    let cost = CostModel::default();
    let a = OracleHandle::new(encode(b"abcdbbbbccccc"), ledger.clone());

    let run = a.query_run(5)?;
    println!("run 5:           {}^{}", run.ch as char, run.len);
    println!("prefix(5):       {}", a.query_prefix(5)?);
    println!("run at pos 9:    {}", a.inverse_prefix(9)?);

    // Longest run, found by a counted minimum search over run indices.
    let longest = minimum_find(&ledger, &cost, a.len(), 1.0, |i| {
        std::cmp::Reverse(a.query_run(i).map(|r| r.len).unwrap_or(0))
    });
    println!("longest run:     {longest}");

    let first_c = grover_search(&ledger, &cost, a.len(), 1.0, |i| {
        a.query_run(i).map(|r| r.ch == b'c').unwrap_or(false)
    });
    println!("first c run:     {first_c:?}");

    println!("ledger:          {}", ledger.to_json());
    Ok(())
}
