//! The positional array with range minima, and the 2D point counter.
//!
//! ```bash
//! cargo run --example dynamic_array
//! ```

use rle_lcs::ds::{DynArray, RangeSum2D};
use rle_lcs::query::QueryLedger;

fn main() -> rle_lcs::error::Result<()> {
    let ledger = QueryLedger::new();
    let mut arr = DynArray::new(ledger.clone());
    for (i, (key, value)) in [(10, 7), (20, 3), (30, 9), (40, 5)].into_iter().enumerate() {
        arr.insert(i + 1, key, value)?;
    }
    arr.insert(3, 25, 1)?;
    println!("contents:        {:?}", arr.to_vec());
    println!("min of 1..=2:    {}", arr.range_min(1, 2)?);
    println!("min of 2..=5:    {}", arr.range_min(2, 5)?);
    println!("position of 30:  {}", arr.locate(30)?);
    arr.delete(3)?;
    println!("after delete:    {}", arr.serialize());

    let mut grid = RangeSum2D::new(8, ledger.clone());
    for (x, y) in [(1, 1), (2, 5), (4, 4), (4, 4), (7, 2)] {
        grid.insert(x, y)?;
    }
    println!("points in [2,4]x[3,5]: {}", grid.count(2, 4, 3, 5));
    grid.delete(4, 4)?;
    println!("after delete:          {}", grid.count(2, 4, 3, 5));
    println!("charged cost:          {:.2}", ledger.charged_cost());
    Ok(())
}
