//! Query-counted oracle access and the idealised quantum cost ledger.
//!
//! Every primitive runs a plain classical procedure but charges the ledger
//! what the corresponding quantum routine would cost. Counters record the
//! oracle queries that were actually executed.

use std::cell::{Cell, RefCell};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rle::{inverse_prefix_by, prefix_table, PrefixTable, RleString, Run};

#[derive(Debug, Default)]
struct LedgerInner {
    run_queries: Cell<u64>,
    prefix_queries: Cell<u64>,
    charged: Cell<f64>,
    captures: RefCell<Vec<f64>>,
}

/// Shared handle to the accounting record of one algorithm run.
///
/// Cloning shares the underlying counters. A ledger is confined to a single
/// thread; parallel runs each own one.
#[derive(Debug, Clone, Default)]
pub struct QueryLedger(Rc<LedgerInner>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub run_queries: u64,
    pub prefix_queries: u64,
    pub charged_cost: f64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run_queries(&self) -> u64 {
        self.0.run_queries.get()
    }

    pub fn prefix_queries(&self) -> u64 {
        self.0.prefix_queries.get()
    }

    pub fn charged_cost(&self) -> f64 {
        self.0.charged.get()
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            run_queries: self.run_queries(),
            prefix_queries: self.prefix_queries(),
            charged_cost: self.charged_cost(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.snapshot()).expect("snapshot serialises")
    }

    pub(crate) fn count_run_query(&self) {
        self.0.run_queries.set(self.0.run_queries.get() + 1);
    }

    pub(crate) fn count_prefix_query(&self) {
        self.0.prefix_queries.set(self.0.prefix_queries.get() + 1);
    }

    /// Adds `amount` to the innermost active capture, or to the total.
    pub fn charge(&self, amount: f64) {
        assert!(amount >= 0.0 && amount.is_finite(), "bad charge {amount}");
        let mut captures = self.0.captures.borrow_mut();
        match captures.last_mut() {
            Some(top) => *top += amount,
            None => self.0.charged.set(self.0.charged.get() + amount),
        }
    }

    /// Runs `f` and returns what it charged instead of adding it to the
    /// total. Query counters are unaffected.
    pub fn capture<R>(&self, f: impl FnOnce() -> R) -> (R, f64) {
        self.0.captures.borrow_mut().push(0.0);
        let out = f();
        let amount = self.0.captures.borrow_mut().pop().expect("capture stack");
        (out, amount)
    }
}

/// Read access to one RLE string through the run oracle and the prefix-sum
/// oracle. Each access is counted on the ledger.
#[derive(Debug, Clone)]
pub struct OracleHandle {
    string: Rc<RleString>,
    prefix: Rc<PrefixTable>,
    ledger: QueryLedger,
}

impl OracleHandle {
    pub fn new(string: RleString, ledger: QueryLedger) -> Self {
        let prefix = prefix_table(&string);
        OracleHandle {
            string: Rc::new(string),
            prefix: Rc::new(prefix),
            ledger,
        }
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    /// Encoded length `n`, known to the algorithm up front.
    pub fn len(&self) -> usize {
        self.string.len()
    }

    pub fn is_empty(&self) -> bool {
        self.string.is_empty()
    }

    /// Decoded length `ñ`, known to the algorithm up front.
    pub fn decoded_len(&self) -> u64 {
        self.string.decoded_len()
    }

    /// Uncounted access for verification and reference code.
    pub fn string(&self) -> &RleString {
        &self.string
    }

    pub fn query_run(&self, i: usize) -> Result<Run> {
        let run = self
            .string
            .run(i)
            .ok_or_else(|| Error::range(i as u64, 1, self.len() as u64))?;
        self.ledger.count_run_query();
        Ok(run)
    }

    pub fn query_prefix(&self, i: usize) -> Result<u64> {
        let v = self
            .prefix
            .get(i)
            .ok_or_else(|| Error::range(i as u64, 0, self.len() as u64))?;
        self.ledger.count_prefix_query();
        Ok(v)
    }

    /// Run containing 1-based decoded position `pos`, by binary search over
    /// counted prefix queries.
    pub fn inverse_prefix(&self, pos: u64) -> Result<usize> {
        inverse_prefix_by(self.len(), pos, self.decoded_len(), |i| {
            self.ledger.count_prefix_query();
            self.prefix.values()[i]
        })
    }
}

/// Multiplicative constants of the idealised quantum charges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub grover_factor: f64,
    pub minfind_factor: f64,
    pub whp_log_base: f64,
    pub anchor_factor: f64,
    /// Multiply walk charges by the success-probability boosting factor.
    pub boost_whp: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            grover_factor: 1.0,
            minfind_factor: 1.0,
            whp_log_base: 2.0,
            anchor_factor: 1.0,
            boost_whp: false,
        }
    }
}

fn ceil_sqrt(n: u64) -> f64 {
    (n as f64).sqrt().ceil()
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        let factors = [
            ("grover_factor", self.grover_factor),
            ("minfind_factor", self.minfind_factor),
            ("anchor_factor", self.anchor_factor),
        ];
        for (name, v) in factors {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.whp_log_base > 1.0 && self.whp_log_base.is_finite()) {
            return Err(Error::Parameter(format!(
                "whp_log_base must exceed 1, got {}",
                self.whp_log_base
            )));
        }
        Ok(())
    }

    pub fn grover_charge(&self, space: u64, unit: f64) -> f64 {
        self.grover_factor * ceil_sqrt(space) * unit
    }

    pub fn minfind_charge(&self, space: u64, unit: f64) -> f64 {
        self.minfind_factor * ceil_sqrt(space) * unit
    }

    /// Charge for computing one anchor entry `X(k)`.
    pub fn anchor_charge(&self, d: usize) -> f64 {
        self.anchor_factor * (d as f64).sqrt()
    }

    /// Cost of a subroutine repeated `⌈log n⌉` times and majority-voted.
    pub fn with_whp(&self, inner_cost: f64, n_scale: u64) -> f64 {
        assert!(n_scale >= 2, "n_scale must be at least 2");
        let reps = ((n_scale as f64).ln() / self.whp_log_base.ln() - 1e-12).ceil();
        inner_cost * reps.max(1.0)
    }
}

/// Finds an index in `1..=space` where `predicate` holds. Charges
/// `grover_factor·⌈√N⌉·unit` whatever the outcome.
pub fn grover_search(
    ledger: &QueryLedger,
    cost: &CostModel,
    space: usize,
    unit: f64,
    mut predicate: impl FnMut(usize) -> bool,
) -> Option<usize> {
    let found = ledger.capture(|| (1..=space).find(|&i| predicate(i))).0;
    ledger.charge(cost.grover_charge(space as u64, unit));
    found
}

/// Smallest index of a minimum key in `1..=space`. Charges
/// `minfind_factor·⌈√N⌉·unit`.
pub fn minimum_find<K: Ord>(
    ledger: &QueryLedger,
    cost: &CostModel,
    space: usize,
    unit: f64,
    mut key: impl FnMut(usize) -> K,
) -> usize {
    assert!(space >= 1, "minimum_find over an empty space");
    let best = ledger
        .capture(|| {
            let mut best = 1;
            let mut best_key = key(1);
            for i in 2..=space {
                let k = key(i);
                if k < best_key {
                    best = i;
                    best_key = k;
                }
            }
            best
        })
        .0;
    ledger.charge(cost.minfind_charge(space as u64, unit));
    best
}
