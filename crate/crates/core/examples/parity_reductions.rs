//! Parity of a bit string recovered from longest-common-substring answers,
//! once from the decoded length and once from the encoded length.
//!
//! ```bash
//! cargo run --example parity_reductions
//! ```

use rle_lcs::reductions::{
    el_call_bound, gadget_dl, gadget_el, parity, parity_via_dl, parity_via_el, parse_bits,
};
use rle_lcs::reference::brute_lcs;
use rle_lcs::rle::to_text_line;

fn main() -> rle_lcs::error::Result<()> {
    let bits = parse_bits("101101")?;
    println!("S_B          {}", to_text_line(&gadget_dl(&bits)));
    println!(
        "S_B @ c^13   {}",
        to_text_line(&gadget_el(&bits, 13, b'@')?)
    );

    let dl = parity_via_dl(&bits, |x, y| Ok(brute_lcs(x, y)?.length))?;
    let el = parity_via_el(&bits, |x, y| Ok(brute_lcs(x, y)?.encoded_len))?;
    println!("parity       {}", parity(&bits) as u8);
    println!("decoded      {}", dl as u8);
    println!(
        "encoded      {} (k' = {}, {} calls, at most {})",
        el.parity as u8,
        el.k_prime,
        el.calls,
        el_call_bound(bits.len())
    );
    Ok(())
}
