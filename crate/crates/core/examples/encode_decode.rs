//! Run-length encoding, the `char:count` text format, and decoded slicing.
//!
//! ```bash
//! cargo run --example encode_decode
//! ```

use rle_lcs::rle::{decode, encode, parse_text_line, slice, to_text_line};

fn main() -> rle_lcs::error::Result<()> {
    let s = encode(b"aaabcccdd");
    println!("runs:     {}", s.len());
    println!("decoded:  {} characters", s.decoded_len());
    println!("text:     {}", to_text_line(&s));

    let parsed = parse_text_line("a:3,b:1,c:3,d:2", 1)?;
    assert_eq!(parsed, s);
    println!("round:    {}", String::from_utf8_lossy(&decode(&parsed)));

    // Characters 2..7 of the decoded string, re-encoded.
    let part = slice(&s, 2, 5)?;
    println!("slice:    {}", to_text_line(&part));

    match parse_text_line("a:3,a:1", 4) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("adjacent runs share a character"),
    }
    Ok(())
}
