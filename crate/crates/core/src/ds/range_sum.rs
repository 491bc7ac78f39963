//! Multiset of points in `[1, u]²` answering rectangle counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::query::QueryLedger;

#[derive(Debug, Clone)]
pub struct RangeSum2D {
    universe: usize,
    tree: Vec<i64>,
    points: BTreeMap<(usize, usize), u64>,
    ledger: Option<QueryLedger>,
}

impl RangeSum2D {
    /// Each operation charges `log₂(u + 2)²` to `ledger`.
    pub fn new(universe: usize, ledger: QueryLedger) -> Self {
        let mut s = Self::uncharged(universe);
        s.ledger = Some(ledger);
        s
    }

    pub fn uncharged(universe: usize) -> Self {
        RangeSum2D {
            universe,
            tree: vec![0; (universe + 1) * (universe + 1)],
            points: BTreeMap::new(),
            ledger: None,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> u64 {
        self.points.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct points with multiplicities, in increasing order (uncharged).
    pub fn points(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.points.iter().map(|(&p, &c)| (p, c))
    }

    fn charge(&self) {
        if let Some(ledger) = &self.ledger {
            ledger.charge(((self.universe + 2) as f64).log2().powi(2));
        }
    }

    fn check_point(&self, x: usize, y: usize) -> Result<()> {
        let u = self.universe as u64;
        if x == 0 || x > self.universe {
            return Err(Error::range(x as u64, 1, u));
        }
        if y == 0 || y > self.universe {
            return Err(Error::range(y as u64, 1, u));
        }
        Ok(())
    }

    fn add(&mut self, x: usize, y: usize, delta: i64) {
        let w = self.universe + 1;
        let mut i = x;
        while i <= self.universe {
            let mut j = y;
            while j <= self.universe {
                self.tree[i * w + j] += delta;
                j += j & j.wrapping_neg();
            }
            i += i & i.wrapping_neg();
        }
    }

    /// Number of points in `[1, x] × [1, y]`.
    fn prefix(&self, x: usize, y: usize) -> i64 {
        let w = self.universe + 1;
        let mut total = 0;
        let mut i = x.min(self.universe);
        while i > 0 {
            let mut j = y.min(self.universe);
            while j > 0 {
                total += self.tree[i * w + j];
                j -= j & j.wrapping_neg();
            }
            i -= i & i.wrapping_neg();
        }
        total
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<()> {
        self.check_point(x, y)?;
        self.charge();
        self.add(x, y, 1);
        *self.points.entry((x, y)).or_insert(0) += 1;
        Ok(())
    }

    /// Removes one copy of `(x, y)`.
    pub fn delete(&mut self, x: usize, y: usize) -> Result<()> {
        self.check_point(x, y)?;
        if !self.points.contains_key(&(x, y)) {
            return Err(Error::NotFound(format!("point ({x}, {y})")));
        }
        self.charge();
        let count = self.points.get_mut(&(x, y)).expect("present");
        *count -= 1;
        if *count == 0 {
            self.points.remove(&(x, y));
        }
        self.add(x, y, -1);
        Ok(())
    }

    /// Number of points in `[x1, x2] × [y1, y2]`; empty ranges count zero.
    pub fn count(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> u64 {
        self.charge();
        let x1 = x1.max(1);
        let y1 = y1.max(1);
        let x2 = x2.min(self.universe);
        let y2 = y2.min(self.universe);
        if x1 > x2 || y1 > y2 {
            return 0;
        }
        let c = self.prefix(x2, y2) - self.prefix(x1 - 1, y2) - self.prefix(x2, y1 - 1)
            + self.prefix(x1 - 1, y1 - 1);
        c as u64
    }
}
