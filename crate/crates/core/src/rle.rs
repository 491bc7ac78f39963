//! Run-length encoded strings and the decoded-domain operations on them.
//!
//! Everything here works on runs directly. Only [`decode`] materialises the
//! underlying byte string.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Separator placed between the two inputs of a longest-common-substring query.
pub const SEP_DOLLAR: u8 = b'$';
/// Separators used by the reduction gadgets.
pub const SEP_AT: u8 = b'@';
pub const SEP_HASH: u8 = b'#';

/// A maximal run `ch^len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub ch: u8,
    pub len: u64,
}

impl Run {
    pub fn new(ch: u8, len: u64) -> Self {
        Run { ch, len }
    }
}

/// A run-length encoded byte string. Adjacent runs always carry distinct bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RleString {
    runs: Vec<Run>,
    decoded_len: u64,
}

impl RleString {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a string from runs, rejecting zero lengths and non-maximal runs.
    pub fn from_runs(runs: Vec<Run>) -> Result<Self> {
        let mut decoded_len = 0u64;
        for (i, run) in runs.iter().enumerate() {
            if run.len == 0 {
                return Err(Error::InvalidRle(format!("run {} has length 0", i + 1)));
            }
            if i > 0 && runs[i - 1].ch == run.ch {
                return Err(Error::InvalidRle(format!(
                    "runs {} and {} share the byte {}",
                    i,
                    i + 1,
                    escape_byte(run.ch)
                )));
            }
            decoded_len = decoded_len
                .checked_add(run.len)
                .ok_or_else(|| Error::InvalidRle("decoded length overflows u64".into()))?;
        }
        Ok(RleString { runs, decoded_len })
    }

    /// Convenience constructor for literals such as `[(b'a', 3), (b'b', 1)]`.
    ///
    /// Panics on invalid input; meant for tests and examples.
    pub fn from_pairs(pairs: &[(u8, u64)]) -> Self {
        Self::from_runs(pairs.iter().map(|&(c, l)| Run::new(c, l)).collect())
            .expect("invalid run literal")
    }

    pub(crate) fn from_runs_unchecked(runs: Vec<Run>) -> Self {
        let decoded_len = runs.iter().map(|r| r.len).sum();
        RleString { runs, decoded_len }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Encoded length (number of runs).
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn decoded_len(&self) -> u64 {
        self.decoded_len
    }

    /// The run at 1-based index `i`.
    pub fn run(&self, i: usize) -> Option<Run> {
        i.checked_sub(1).and_then(|j| self.runs.get(j)).copied()
    }

    pub fn contains_byte(&self, ch: u8) -> bool {
        self.runs.iter().any(|r| r.ch == ch)
    }
}

impl fmt::Display for RleString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_text_line(self))
    }
}

pub fn encode(decoded: &[u8]) -> RleString {
    let mut runs: Vec<Run> = Vec::new();
    for &b in decoded {
        match runs.last_mut() {
            Some(last) if last.ch == b => last.len += 1,
            _ => runs.push(Run::new(b, 1)),
        }
    }
    RleString::from_runs_unchecked(runs)
}

pub fn decode(s: &RleString) -> Vec<u8> {
    let mut out = Vec::with_capacity(s.decoded_len() as usize);
    for run in s.runs() {
        out.extend(std::iter::repeat_n(run.ch, run.len as usize));
    }
    out
}

/// Prefix sums `P[0..=n]` of run lengths; `P[i]` is the decoded end of run `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    values: Vec<u64>,
}

impl PrefixTable {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Number of runs covered.
    pub fn runs(&self) -> usize {
        self.values.len() - 1
    }

    pub fn total(&self) -> u64 {
        *self.values.last().unwrap()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied()
    }

    /// `P(i)` with `P(i) = 0` for `i <= 0` and `P(i) = P[n]` for `i > n`.
    pub fn clamped(&self, i: i64) -> u64 {
        if i <= 0 {
            0
        } else {
            let i = (i as usize).min(self.runs());
            self.values[i]
        }
    }

    /// The run containing 1-based decoded position `pos`.
    pub fn inverse(&self, pos: u64) -> Result<usize> {
        inverse_prefix_by(self.runs(), pos, self.total(), |i| self.values[i])
    }
}

pub fn prefix_table(s: &RleString) -> PrefixTable {
    let mut values = Vec::with_capacity(s.len() + 1);
    let mut acc = 0u64;
    values.push(0);
    for run in s.runs() {
        acc += run.len;
        values.push(acc);
    }
    PrefixTable { values }
}

/// Finds the unique `i` with `P[i-1] < pos <= P[i]` by binary search, reading
/// prefix values through `probe`.
pub(crate) fn inverse_prefix_by(
    n: usize,
    pos: u64,
    total: u64,
    mut probe: impl FnMut(usize) -> u64,
) -> Result<usize> {
    if pos == 0 || pos > total {
        return Err(Error::range(pos, 1, total));
    }
    // smallest i in [1, n] with P[i] >= pos
    let (mut lo, mut hi) = (1usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if probe(mid) >= pos {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

pub fn inverse_prefix(p: &PrefixTable, pos: u64) -> Result<usize> {
    p.inverse(pos)
}

/// Three-way comparison of two decoded strings given as maximal-run streams,
/// together with the length of their longest common decoded prefix.
pub fn compare_runs<I, J>(a: I, b: J) -> (Ordering, u64)
where
    I: IntoIterator<Item = Run>,
    J: IntoIterator<Item = Run>,
{
    let mut a = a.into_iter();
    let mut b = b.into_iter();
    let mut common = 0u64;
    loop {
        let (x, y) = match (a.next(), b.next()) {
            (None, None) => return (Ordering::Equal, common),
            (None, Some(_)) => return (Ordering::Less, common),
            (Some(_), None) => return (Ordering::Greater, common),
            (Some(x), Some(y)) => (x, y),
        };
        if x.ch != y.ch {
            return (x.ch.cmp(&y.ch), common);
        }
        if x.len == y.len {
            common += x.len;
            continue;
        }
        common += x.len.min(y.len);
        // The shorter run is followed by a different byte (or nothing) while
        // the longer one still repeats `x.ch`.
        return if x.len < y.len {
            match a.next() {
                None => (Ordering::Less, common),
                Some(z) => (z.ch.cmp(&y.ch), common),
            }
        } else {
            match b.next() {
                None => (Ordering::Greater, common),
                Some(z) => (x.ch.cmp(&z.ch), common),
            }
        };
    }
}

/// Longest decoded common prefix.
pub fn ldcp(s: &RleString, t: &RleString) -> u64 {
    compare_runs(s.runs().iter().copied(), t.runs().iter().copied()).1
}

/// Lexicographic order of the decoded strings.
pub fn lex_compare_decoded(s: &RleString, t: &RleString) -> Ordering {
    compare_runs(s.runs().iter().copied(), t.runs().iter().copied()).0
}

/// Whether `decode(s)` occurs contiguously in `decode(t)`.
pub fn is_generalized_substring(s: &RleString, t: &RleString) -> bool {
    let (sr, tr) = (s.runs(), t.runs());
    let k = sr.len();
    match k {
        0 => true,
        1 => tr.iter().any(|r| r.ch == sr[0].ch && r.len >= sr[0].len),
        _ if k > tr.len() => false,
        _ => (0..=tr.len() - k).any(|j| {
            let first = tr[j];
            let last = tr[j + k - 1];
            first.ch == sr[0].ch
                && first.len >= sr[0].len
                && last.ch == sr[k - 1].ch
                && last.len >= sr[k - 1].len
                && tr[j + 1..j + k - 1] == sr[1..k - 1]
        }),
    }
}

/// `a ++ sep^1 ++ b`. Returns the string and the 1-based run index of the separator.
pub fn concat_sep(a: &RleString, b: &RleString, sep: u8) -> Result<(RleString, usize)> {
    if a.contains_byte(sep) || b.contains_byte(sep) {
        return Err(Error::InvalidSeparator { sep: sep as char });
    }
    let mut runs = Vec::with_capacity(a.len() + b.len() + 1);
    runs.extend_from_slice(a.runs());
    runs.push(Run::new(sep, 1));
    runs.extend_from_slice(b.runs());
    Ok((RleString::from_runs_unchecked(runs), a.len() + 1))
}

pub fn reverse(s: &RleString) -> RleString {
    RleString::from_runs_unchecked(s.runs().iter().rev().copied().collect())
}

/// RLE form of the decoded substring `[start, start + len)`, 0-based.
pub fn slice(s: &RleString, start: u64, len: u64) -> Result<RleString> {
    let total = s.decoded_len();
    if start.checked_add(len).is_none_or(|end| end > total) {
        return Err(Error::range(start.saturating_add(len), 0, total));
    }
    let mut runs = Vec::new();
    let (mut pos, end) = (0u64, start + len);
    for run in s.runs() {
        let (lo, hi) = (pos.max(start), (pos + run.len).min(end));
        if lo < hi {
            runs.push(Run::new(run.ch, hi - lo));
        }
        pos += run.len;
        if pos >= end {
            break;
        }
    }
    Ok(RleString::from_runs_unchecked(runs))
}

fn escape_byte(b: u8) -> String {
    match b {
        b',' | b':' | b'\\' => format!("\\x{b:02x}"),
        0x21..=0x7e => (b as char).to_string(),
        _ => format!("\\x{b:02x}"),
    }
}

/// Formats a string as comma-separated `char:count` tokens.
pub fn to_text_line(s: &RleString) -> String {
    s.runs()
        .iter()
        .map(|r| format!("{}:{}", escape_byte(r.ch), r.len))
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses one line of the text format. `line_no` is only used in errors.
pub fn parse_text_line(line: &str, line_no: usize) -> Result<RleString> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let line = line.trim_end_matches(['\r', '\n']);
    if line.is_empty() {
        return Ok(RleString::empty());
    }
    let bytes = line.as_bytes();
    let mut runs = Vec::new();
    let mut i = 0;
    loop {
        let ch = if bytes[i..].starts_with(b"\\x") {
            let hex = line
                .get(i + 2..i + 4)
                .ok_or_else(|| err(format!("truncated escape at column {}", i + 1)))?;
            i += 4;
            u8::from_str_radix(hex, 16)
                .map_err(|_| err(format!("bad escape \\x{hex} at column {}", i - 3)))?
        } else {
            i += 1;
            bytes[i - 1]
        };
        if bytes.get(i) != Some(&b':') {
            return Err(err(format!("expected ':' at column {}", i + 1)));
        }
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let len: u64 = line[start..i]
            .parse()
            .map_err(|_| err(format!("bad run length at column {}", start + 1)))?;
        runs.push(Run::new(ch, len));
        match bytes.get(i) {
            None => break,
            Some(b',') if i + 1 < bytes.len() => i += 1,
            Some(_) => return Err(err(format!("unexpected input at column {}", i + 1))),
        }
    }
    RleString::from_runs(runs).map_err(|e| match e {
        Error::InvalidRle(msg) => err(msg),
        other => other,
    })
}

/// Parses a whole document, one string per line.
pub fn parse_text(doc: &str) -> Result<Vec<RleString>> {
    doc.lines()
        .enumerate()
        .map(|(i, line)| parse_text_line(line, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_ldcp(a: &[u8], b: &[u8]) -> u64 {
        a.iter().zip(b).take_while(|(x, y)| x == y).count() as u64
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            encode(b"aaabcccdd"),
            RleString::from_pairs(&[(b'a', 3), (b'b', 1), (b'c', 3), (b'd', 2)])
        );
        assert!(encode(b"").is_empty());
        assert_eq!(encode(b"abc").len(), 3);
        assert_eq!(decode(&RleString::from_pairs(&[(b'x', 5)])), b"xxxxx");
    }

    #[test]
    fn prefix_and_inverse() {
        let s = encode(b"aaabcccdd");
        let p = prefix_table(&s);
        assert_eq!(p.values(), &[0, 3, 4, 7, 9]);
        assert_eq!(prefix_table(&RleString::empty()).values(), &[0]);
        assert_eq!(p.inverse(5).unwrap(), 3);
        assert_eq!(p.inverse(3).unwrap(), 1);
        assert_eq!(p.inverse(9).unwrap(), 4);
        assert!(matches!(p.inverse(0), Err(Error::Range { .. })));
        assert!(matches!(p.inverse(10), Err(Error::Range { .. })));
        let single = prefix_table(&RleString::from_pairs(&[(b'x', 5)]));
        assert_eq!(single.values(), &[0, 5]);
        assert_eq!(single.inverse(1).unwrap(), 1);
        assert_eq!(p.clamped(-3), 0);
        assert_eq!(p.clamped(7), 9);
    }

    #[test]
    fn inverse_prefix_matches_linear_scan() {
        let p = prefix_table(&encode(b"aaabcccdd"));
        for pos in 1..=9u64 {
            let linear = (1..=4).find(|&i| p.values()[i - 1] < pos && pos <= p.values()[i]);
            assert_eq!(Some(p.inverse(pos).unwrap()), linear);
        }
    }

    #[test]
    fn ldcp_examples() {
        let s = RleString::from_pairs(&[(b'a', 3), (b'b', 2)]);
        let t = RleString::from_pairs(&[(b'a', 3), (b'b', 1), (b'c', 1)]);
        assert_eq!(ldcp(&s, &t), naive_ldcp(b"aaabb", b"aaabc"));
        assert_eq!(ldcp(&s, &t), 4);
        assert_eq!(ldcp(&s, &s), 5);
        assert_eq!(ldcp(&encode(b"a"), &encode(b"b")), 0);
        assert_eq!(lex_compare_decoded(&s, &t), Ordering::Less);
        assert_eq!(lex_compare_decoded(&s, &s), Ordering::Equal);
        assert_eq!(
            lex_compare_decoded(&encode(b"a"), &encode(b"aa")),
            Ordering::Less
        );
    }

    #[test]
    fn generalized_substring_examples() {
        let t = RleString::from_pairs(&[(b'a', 3), (b'b', 4), (b'c', 2), (b'd', 5)]);
        let s1 = RleString::from_pairs(&[(b'a', 1), (b'b', 4), (b'c', 2), (b'd', 2)]);
        let s2 = RleString::from_pairs(&[(b'b', 4), (b'c', 2)]);
        let s3 = RleString::from_pairs(&[(b'c', 1), (b'a', 1)]);
        assert!(is_generalized_substring(&s1, &t));
        assert!(is_generalized_substring(&s2, &t));
        assert!(!is_generalized_substring(&s3, &t));
        assert!(is_generalized_substring(&RleString::empty(), &t));
    }

    #[test]
    fn concat_and_reverse() {
        let a = RleString::from_pairs(&[(b'a', 2)]);
        let b = RleString::from_pairs(&[(b'b', 3)]);
        let (s, sep) = concat_sep(&a, &b, SEP_DOLLAR).unwrap();
        assert_eq!(decode(&s), b"aa$bbb");
        assert_eq!(sep, 2);
        let (s, sep) = concat_sep(&RleString::empty(), &b, SEP_DOLLAR).unwrap();
        assert_eq!(decode(&s), b"$bbb");
        assert_eq!(sep, 1);
        let (s, _) = concat_sep(&a, &a, SEP_DOLLAR).unwrap();
        assert_eq!(s.len(), 3);
        assert!(matches!(
            concat_sep(&encode(b"a$"), &b, SEP_DOLLAR),
            Err(Error::InvalidSeparator { .. })
        ));
        assert_eq!(reverse(&encode(b"aaab")), encode(b"baaa"));
        assert_eq!(reverse(&encode(b"abba")), encode(b"abba"));
        assert!(reverse(&RleString::empty()).is_empty());
    }

    #[test]
    fn text_format() {
        let s = encode(b"aaabcccdd");
        assert_eq!(to_text_line(&s), "a:3,b:1,c:3,d:2");
        assert_eq!(parse_text_line("a:3,b:1,c:3,d:2", 1).unwrap(), s);
        let odd = encode(b",,::\\ \n\xff");
        let line = to_text_line(&odd);
        assert_eq!(parse_text_line(&line, 1).unwrap(), odd);
        assert_eq!(parse_text_line("", 1).unwrap(), RleString::empty());
        for bad in ["a", "a:", "a:0", "a:1,a:2", "a:1,", "\\xz1:1", "a:1;b:2"] {
            assert!(
                matches!(parse_text_line(bad, 7), Err(Error::Parse { line: 7, .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn from_runs_rejects_bad_runs() {
        assert!(RleString::from_runs(vec![Run::new(b'a', 0)]).is_err());
        assert!(RleString::from_runs(vec![Run::new(b'a', 1), Run::new(b'a', 1)]).is_err());
    }
}
