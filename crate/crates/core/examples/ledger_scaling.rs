//! Charged cost of one cost-only walk search as the strings grow, and as the
//! encoded scale grows at fixed length.
//!
//! ```bash
//! cargo run --release --example ledger_scaling
//! ```

use rle_lcs::bench::{d_sweep, log_log_slope, n_sweep, run_grid, CSV_HEADER};
use rle_lcs::walk::WalkMode;

fn main() -> rle_lcs::error::Result<()> {
    let trials = 5;
    let seed = 1;

    let by_n = run_grid(&n_sweep(8, 14, 16), trials, seed, WalkMode::CostOnly)?;
    println!("{CSV_HEADER}");
    for row in &by_n {
        println!("{}", row.to_csv());
    }
    let pts: Vec<(f64, f64)> = by_n.iter().map(|r| (r.n as f64, r.charged_cost)).collect();
    println!("slope vs n: {:.3}\n", log_log_slope(&pts)?);

    let by_d = run_grid(&d_sweep(4, 8, 1 << 12), trials, seed, WalkMode::CostOnly)?;
    println!("{CSV_HEADER}");
    for row in &by_d {
        println!("{}", row.to_csv());
    }
    let pts: Vec<(f64, f64)> = by_d.iter().map(|r| (r.d as f64, r.charged_cost)).collect();
    println!("slope vs d: {:.3}", log_log_slope(&pts)?);
    Ok(())
}
