//! Exhaustive and minimizer anchor sets on a planted pair, checked against
//! every common substring of encoded length `d`.
//!
//! ```bash
//! cargo run --example anchor_sets
//! ```

use rle_lcs::anchors::{validate_anchor_set, AnchorScheme, AnchorSet, DEFAULT_D_MIN};
use rle_lcs::query::{OracleHandle, QueryLedger};
use rle_lcs::reference::plant_unverified;
use rle_lcs::text::Text;

fn main() -> rle_lcs::error::Result<()> {
    let (a, b) = plant_unverified(200, 24, 24, 7)?;
    let ledger = QueryLedger::new();
    let text = Text::pair(
        OracleHandle::new(a, ledger.clone()),
        OracleHandle::new(b, ledger),
    )?;
    let s = text.materialize();
    let sep = text.sep_index().expect("pair");

    for d in [4, 8, 16] {
        for scheme in [AnchorScheme::Exhaustive, AnchorScheme::Minimizer] {
            let x = AnchorSet::build(&s, d, scheme, 1, DEFAULT_D_MIN)?;
            let report = validate_anchor_set(&x, &s, sep, d);
            println!(
                "d={d:<3} asked {scheme:?}, built {:?}: {} anchors of {} runs, {} substrings, valid={}",
                x.scheme(),
                x.len(),
                s.len(),
                report.checked,
                report.valid
            );
        }
    }

    // Dropping most anchors can leave a shared substring unanchored.
    let sparse = AnchorSet::build_exhaustive(&s, 16)?.thinned(40);
    let report = validate_anchor_set(&sparse, &s, sep, 16);
    println!(
        "every 40th run: valid={} witness={:?}",
        report.valid, report.witness
    );
    Ok(())
}
