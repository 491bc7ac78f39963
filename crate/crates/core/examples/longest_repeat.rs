//! Longest substring occurring twice in one string.
//!
//! ```bash
//! cargo run --example longest_repeat
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rle_lcs::config::SolverConfig;
use rle_lcs::lcs::{solve_lrs, verify_repeat};
use rle_lcs::query::{OracleHandle, QueryLedger};
use rle_lcs::reference::{brute_lrs, random_rle, GENERATOR_ALPHABET};
use rle_lcs::rle::{encode, slice, to_text_line};

fn main() -> rle_lcs::error::Result<()> {
    let cfg = SolverConfig::default();
    for word in [&b"abcabc"[..], b"aaaa", b"mississippi", b"ab"] {
        let a = OracleHandle::new(encode(word), QueryLedger::new());
        match solve_lrs(&a, &cfg)? {
            Some(ans) => println!(
                "{:<12} length {} at {} and {}: {}",
                String::from_utf8_lossy(word),
                ans.d_tilde,
                ans.decoded_start_a,
                ans.decoded_start_b,
                to_text_line(&slice(a.string(), ans.decoded_start_a, ans.d_tilde)?)
            ),
            None => println!("{:<12} no repeat", String::from_utf8_lossy(word)),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = random_rle(&mut rng, 40, GENERATOR_ALPHABET, 6);
    let ans = solve_lrs(&OracleHandle::new(s.clone(), QueryLedger::new()), &cfg)?.expect("repeat");
    assert!(verify_repeat(&ans, &s));
    println!(
        "random 40 runs: solver {} brute {}",
        ans.d_tilde,
        brute_lrs(&s)?.length
    );
    Ok(())
}
