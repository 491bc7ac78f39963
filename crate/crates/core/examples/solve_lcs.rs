//! Longest common substring by decoded length, with the solver's ledger and
//! a brute-force cross-check.
//!
//! ```bash
//! cargo run --example solve_lcs
//! ```

use rle_lcs::anchors::AnchorScheme;
use rle_lcs::config::SolverConfig;
use rle_lcs::lcs::{solve_lcs_rle_p, verify_candidate};
use rle_lcs::query::{OracleHandle, QueryLedger};
use rle_lcs::reference::{brute_lcs, plant_instance};
use rle_lcs::rle::{encode, slice, to_text_line};
use rle_lcs::walk::WalkMode;

fn main() -> rle_lcs::error::Result<()> {
    let ledger = QueryLedger::new();
    let a = OracleHandle::new(encode(b"abcdbbbbccccc"), ledger.clone());
    let b = OracleHandle::new(encode(b"abcd@bbbbcc"), ledger.clone());
    let cfg = SolverConfig::default();
    let ans = solve_lcs_rle_p(&a, &b, &cfg)?.expect("shared characters");
    println!(
        "answer:  {}",
        serde_json::to_string(&ans).expect("serialisable")
    );
    println!(
        "text:    {}",
        to_text_line(&slice(a.string(), ans.decoded_start_a, ans.d_tilde)?)
    );
    println!("ledger:  {}", ledger.to_json());

    let planted = plant_instance(48, 10, 40, 5)?;
    for (mode, scheme) in [
        (WalkMode::FullSet, AnchorScheme::Exhaustive),
        (WalkMode::FullSet, AnchorScheme::Minimizer),
        (WalkMode::RandomWalk, AnchorScheme::Exhaustive),
        (WalkMode::CostOnly, AnchorScheme::Exhaustive),
    ] {
        let ledger = QueryLedger::new();
        let a = OracleHandle::new(planted.a.clone(), ledger.clone());
        let b = OracleHandle::new(planted.b.clone(), ledger.clone());
        let cfg = SolverConfig {
            mode,
            scheme,
            seed: 3,
            ..SolverConfig::default()
        };
        let found = solve_lcs_rle_p(&a, &b, &cfg)?;
        let length = found.map(|ans| {
            assert!(verify_candidate(&ans, &planted.a, &planted.b));
            ans.d_tilde
        });
        println!(
            "{mode:?}/{scheme:?}: length {length:?} (brute {}), charged {:.0}",
            brute_lcs(&planted.a, &planted.b)?.length,
            ledger.charged_cost()
        );
    }
    Ok(())
}
