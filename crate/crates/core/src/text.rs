//! Counted access to `S = A sep B` (or to `A` alone) through the oracles of
//! the two input strings, plus the decoded windows `P(k)` and `Q(k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::query::{OracleHandle, QueryLedger};
use crate::rle::{compare_runs, concat_sep, RleString, Run, SEP_AT, SEP_DOLLAR, SEP_HASH};

/// Side of the separator an anchor falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    White,
}

impl Color {
    pub fn opposite(self) -> Option<Color> {
        match self {
            Color::Red => Some(Color::Blue),
            Color::Blue => Some(Color::Red),
            Color::White => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Text {
    a: OracleHandle,
    b: Option<OracleHandle>,
    sep: u8,
}

/// First byte from `$`, `#`, `@`, then `0..=255` absent from both strings.
pub fn pick_separator(a: &RleString, b: &RleString) -> Result<u8> {
    [SEP_DOLLAR, SEP_HASH, SEP_AT]
        .into_iter()
        .chain(0..=u8::MAX)
        .find(|&c| !a.contains_byte(c) && !b.contains_byte(c))
        .ok_or(Error::InvalidSeparator {
            sep: SEP_DOLLAR as char,
        })
}

impl Text {
    /// `A sep B` with a separator byte occurring in neither string.
    pub fn pair(a: OracleHandle, b: OracleHandle) -> Result<Self> {
        let sep = pick_separator(a.string(), b.string())?;
        Ok(Text { a, b: Some(b), sep })
    }

    /// `A` on its own.
    pub fn single(a: OracleHandle) -> Self {
        Text { a, b: None, sep: 0 }
    }

    pub fn is_pair(&self) -> bool {
        self.b.is_some()
    }

    pub fn a(&self) -> &OracleHandle {
        &self.a
    }

    pub fn b(&self) -> Option<&OracleHandle> {
        self.b.as_ref()
    }

    pub fn ledger(&self) -> &QueryLedger {
        self.a.ledger()
    }

    pub fn n_a(&self) -> usize {
        self.a.len()
    }

    /// Run index of the separator, if any.
    pub fn sep_index(&self) -> Option<usize> {
        self.b.as_ref().map(|_| self.a.len() + 1)
    }

    pub fn sep(&self) -> Option<u8> {
        self.b.as_ref().map(|_| self.sep)
    }

    /// Encoded length `|S|`.
    pub fn len(&self) -> usize {
        match &self.b {
            Some(b) => self.a.len() + 1 + b.len(),
            None => self.a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn decoded_len(&self) -> u64 {
        match &self.b {
            Some(b) => self.a.decoded_len() + 1 + b.decoded_len(),
            None => self.a.decoded_len(),
        }
    }

    /// Decoded position in `S` where `B` starts, minus one.
    pub fn b_offset(&self) -> u64 {
        self.a.decoded_len() + 1
    }

    /// The whole of `S`, read without counting queries.
    pub fn materialize(&self) -> RleString {
        match &self.b {
            Some(b) => {
                concat_sep(self.a.string(), b.string(), self.sep)
                    .expect("separator chosen absent")
                    .0
            }
            None => self.a.string().clone(),
        }
    }

    pub fn run(&self, i: usize) -> Result<Run> {
        let n_a = self.a.len();
        match &self.b {
            _ if (1..=n_a).contains(&i) => self.a.query_run(i),
            Some(_) if i == n_a + 1 => Ok(Run::new(self.sep, 1)),
            Some(b) if i > n_a + 1 && i <= self.len() => b.query_run(i - n_a - 1),
            _ => Err(Error::range(i as u64, 1, self.len() as u64)),
        }
    }

    /// `P_S(i)` for `i` in `0..=|S|`.
    pub fn prefix(&self, i: usize) -> Result<u64> {
        let n_a = self.a.len();
        match &self.b {
            _ if i <= n_a => self.a.query_prefix(i),
            Some(_) if i == n_a + 1 => Ok(self.b_offset()),
            Some(b) if i <= self.len() => Ok(self.b_offset() + b.query_prefix(i - n_a - 1)?),
            _ => Err(Error::range(i as u64, 0, self.len() as u64)),
        }
    }

    /// `P_S(i)` with `i` clamped into `0..=|S|`.
    pub fn prefix_clamped(&self, i: i64) -> Result<u64> {
        self.prefix(i.clamp(0, self.len() as i64) as usize)
    }

    /// Run of `S` containing 1-based decoded position `pos`.
    pub fn inverse_prefix(&self, pos: u64) -> Result<usize> {
        let n_a = self.a.len();
        let da = self.a.decoded_len();
        match &self.b {
            _ if pos >= 1 && pos <= da => self.a.inverse_prefix(pos),
            Some(_) if pos == da + 1 => Ok(n_a + 1),
            Some(b) if pos > da + 1 && pos <= self.decoded_len() => {
                Ok(n_a + 1 + b.inverse_prefix(pos - da - 1)?)
            }
            _ => Err(Error::range(pos, 1, self.decoded_len())),
        }
    }

    /// Red inside `A`, white on the separator, blue inside `B`. Without `B`
    /// every run is red.
    pub fn color(&self, x: usize) -> Color {
        let n_a = self.a.len();
        match &self.b {
            _ if x <= n_a => Color::Red,
            Some(_) if x == n_a + 1 => Color::White,
            _ => Color::Blue,
        }
    }

    /// `P(k)`: runs `x ..= x + 2d` of `S`, clamped.
    pub fn prefix_window(&self, x: usize, d: usize) -> Result<RleString> {
        let end = (x + 2 * d).min(self.len());
        let runs = (x..=end).map(|i| self.run(i)).collect::<Result<Vec<_>>>()?;
        RleString::from_runs(runs)
    }

    /// `Q(k)`: runs `x - 2d ..= x` of `S`, clamped, in reverse order.
    pub fn suffix_window(&self, x: usize, d: usize) -> Result<RleString> {
        let start = x.saturating_sub(2 * d).max(1);
        let runs = (start..=x)
            .rev()
            .map(|i| self.run(i))
            .collect::<Result<Vec<_>>>()?;
        RleString::from_runs(runs)
    }

    /// Runs read rightwards from decoded position `pos`, the first one cut
    /// to start at `pos`.
    fn forward_runs(&self, pos: u64) -> Result<impl Iterator<Item = Run> + '_> {
        let i = self.inverse_prefix(pos)?;
        let end = self.prefix(i)?;
        let first = Run::new(self.run(i)?.ch, end - pos + 1);
        let rest = (i + 1..=self.len()).map_while(move |j| self.run(j).ok());
        Ok(std::iter::once(first).chain(rest))
    }

    /// Runs read leftwards from decoded position `pos`, the first one cut to
    /// end at `pos`.
    fn backward_runs(&self, pos: u64) -> Result<impl Iterator<Item = Run> + '_> {
        let i = self.inverse_prefix(pos)?;
        let start = self.prefix(i - 1)?;
        let first = Run::new(self.run(i)?.ch, pos - start);
        let rest = (1..i).rev().map_while(move |j| self.run(j).ok());
        Ok(std::iter::once(first).chain(rest))
    }

    /// Length of the longest common decoded substring starting at `p` and at `q`.
    pub fn forward_common(&self, p: u64, q: u64) -> Result<u64> {
        let n = self.decoded_len();
        if p == 0 || q == 0 || p > n || q > n {
            return Ok(0);
        }
        Ok(compare_runs(self.forward_runs(p)?, self.forward_runs(q)?).1)
    }

    /// Length of the longest common decoded substring ending at `p` and at `q`.
    pub fn backward_common(&self, p: u64, q: u64) -> Result<u64> {
        let n = self.decoded_len();
        if p == 0 || q == 0 || p > n || q > n {
            return Ok(0);
        }
        Ok(compare_runs(self.backward_runs(p)?, self.backward_runs(q)?).1)
    }
}
