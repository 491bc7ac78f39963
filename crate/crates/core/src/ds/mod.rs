//! Data structures used inside walk vertices.

mod dyn_array;
mod range_sum;

pub(crate) use dyn_array::mix64;
pub use dyn_array::DynArray;
pub use range_sum::RangeSum2D;
