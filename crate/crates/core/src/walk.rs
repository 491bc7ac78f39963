//! Search by a walk on the Johnson graph `J(m, r)`, executed classically.
//!
//! Whatever the mode, the ledger is charged
//! `s + (1/√δ)·(√r·u + c)` where `s`, `u`, `c` are the per-call charges of
//! the setup, update and check hooks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::query::QueryLedger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    /// `r := m`: one setup over every element and one check. Decides exactly.
    #[default]
    FullSet,
    /// Random `r`-subset, alternating random swaps with checks.
    RandomWalk,
    /// Nothing is executed; only the nominal charges are booked.
    CostOnly,
}

impl std::str::FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fullset" => Ok(WalkMode::FullSet),
            "walk" | "randomwalk" => Ok(WalkMode::RandomWalk),
            "costonly" => Ok(WalkMode::CostOnly),
            other => Err(Error::Parameter(format!("unknown walk mode {other:?}"))),
        }
    }
}

/// Per-call charges of the three walk operations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepCharges {
    pub setup: f64,
    pub update: f64,
    pub check: f64,
}

/// The data structure attached to a walk vertex.
pub trait WalkHooks {
    type Report;

    /// Initialise the vertex data for `subset` (1-based element indices).
    fn setup(&mut self, subset: &[usize]) -> Result<()>;

    /// Move to a neighbouring vertex: drop `remove`, add `insert`.
    fn update(&mut self, remove: usize, insert: usize) -> Result<()>;

    fn check(&mut self) -> Result<Option<Self::Report>>;

    /// Charges used when the hooks are not executed, or when a mode never
    /// calls one of them.
    fn nominal(&self, r: usize) -> StepCharges;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub m: usize,
    pub r: usize,
    /// Lower bound on the fraction of marked vertices, in `(0, 1]`.
    pub delta: f64,
    pub mode: WalkMode,
    /// Check rounds before giving up in `RandomWalk` mode.
    pub step_budget: Option<u64>,
    pub seed: u64,
}

impl WalkParams {
    pub fn default_step_budget(&self) -> u64 {
        let rounds = self.m.div_ceil(self.r.max(1)) as u64;
        20 * rounds * (1.0 / self.delta.sqrt()).ceil() as u64
    }
}

/// Total charge of one walk with the given per-call charges.
pub fn walk_charge(c: StepCharges, r: usize, delta: f64) -> f64 {
    c.setup + (1.0 / delta.sqrt()) * ((r as f64).sqrt() * c.update + c.check)
}

pub fn mnrs_walk<H: WalkHooks>(
    ledger: &QueryLedger,
    params: WalkParams,
    hooks: &mut H,
) -> Result<Option<H::Report>> {
    let WalkParams { m, r, delta, .. } = params;
    if r == 0 || r > m {
        return Err(Error::Parameter(format!(
            "walk subset size {r} not in 1..={m}"
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Parameter(format!("delta {delta} not in (0, 1]")));
    }
    let nominal = hooks.nominal(r);
    let (found, charges) = match params.mode {
        WalkMode::CostOnly => (None, nominal),
        WalkMode::FullSet => {
            let all: Vec<usize> = (1..=m).collect();
            let (res, setup) = ledger.capture(|| hooks.setup(&all));
            res?;
            let (found, check) = ledger.capture(|| hooks.check());
            let charges = StepCharges {
                setup,
                update: nominal.update,
                check,
            };
            (found?, charges)
        }
        WalkMode::RandomWalk => random_walk(ledger, params, hooks, nominal)?,
    };
    ledger.charge(walk_charge(charges, r, delta));
    Ok(found)
}

fn random_walk<H: WalkHooks>(
    ledger: &QueryLedger,
    params: WalkParams,
    hooks: &mut H,
    nominal: StepCharges,
) -> Result<(Option<H::Report>, StepCharges)> {
    let WalkParams { m, r, .. } = params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut inside: Vec<usize> = sample(&mut rng, m, r).into_iter().map(|i| i + 1).collect();
    inside.sort_unstable();
    let mut member = vec![false; m + 1];
    for &i in &inside {
        member[i] = true;
    }
    let mut outside: Vec<usize> = (1..=m).filter(|&i| !member[i]).collect();

    let (res, setup) = ledger.capture(|| hooks.setup(&inside));
    res?;
    let budget = params
        .step_budget
        .unwrap_or_else(|| params.default_step_budget());
    let swaps_per_round = (r as f64).sqrt().ceil() as usize;
    let (mut update_total, mut updates) = (0.0, 0u64);
    let (mut check_total, mut checks) = (0.0, 0u64);
    let mut found = None;
    for _ in 0..budget {
        let (res, c) = ledger.capture(|| hooks.check());
        check_total += c;
        checks += 1;
        if let Some(report) = res? {
            found = Some(report);
            break;
        }
        if outside.is_empty() {
            break;
        }
        for _ in 0..swaps_per_round {
            let a = rng.gen_range(0..inside.len());
            let b = rng.gen_range(0..outside.len());
            let (res, u) = ledger.capture(|| hooks.update(inside[a], outside[b]));
            res?;
            update_total += u;
            updates += 1;
            std::mem::swap(&mut inside[a], &mut outside[b]);
        }
    }
    let charges = StepCharges {
        setup,
        update: if updates > 0 {
            update_total / updates as f64
        } else {
            nominal.update
        },
        check: check_total / checks.max(1) as f64,
    };
    Ok((found, charges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Marks a vertex when it contains both elements of a planted pair.
    struct PairHooks {
        pair: Option<(usize, usize)>,
        current: BTreeSet<usize>,
        ledger: QueryLedger,
        calls: [usize; 3],
    }

    impl PairHooks {
        fn new(pair: Option<(usize, usize)>, ledger: QueryLedger) -> Self {
            PairHooks {
                pair,
                current: BTreeSet::new(),
                ledger,
                calls: [0; 3],
            }
        }
    }

    impl WalkHooks for PairHooks {
        type Report = (usize, usize);

        fn setup(&mut self, subset: &[usize]) -> Result<()> {
            self.calls[0] += 1;
            self.current = subset.iter().copied().collect();
            self.ledger.charge(subset.len() as f64);
            Ok(())
        }

        fn update(&mut self, remove: usize, insert: usize) -> Result<()> {
            self.calls[1] += 1;
            assert!(self.current.remove(&remove));
            assert!(self.current.insert(insert));
            self.ledger.charge(2.0);
            Ok(())
        }

        fn check(&mut self) -> Result<Option<(usize, usize)>> {
            self.calls[2] += 1;
            self.ledger.charge(3.0);
            Ok(self
                .pair
                .filter(|(a, b)| self.current.contains(a) && self.current.contains(b)))
        }

        fn nominal(&self, _r: usize) -> StepCharges {
            StepCharges {
                setup: 8.0,
                update: 2.0,
                check: 3.0,
            }
        }
    }

    fn params(m: usize, r: usize, mode: WalkMode) -> WalkParams {
        WalkParams {
            m,
            r,
            delta: (r * r) as f64 / (m * m) as f64,
            mode,
            step_budget: None,
            seed: 7,
        }
    }

    #[test]
    fn costonly_applies_formula() {
        let ledger = QueryLedger::new();
        let mut hooks = PairHooks::new(Some((1, 2)), ledger.clone());
        let p = WalkParams {
            delta: 0.25,
            ..params(8, 4, WalkMode::CostOnly)
        };
        assert_eq!(mnrs_walk(&ledger, p, &mut hooks).unwrap(), None);
        assert_eq!(ledger.charged_cost(), 22.0);
        assert_eq!(hooks.calls, [0, 0, 0]);
    }

    #[test]
    fn fullset_is_exact() {
        for m in 2..=64usize {
            for pair in [None, Some((1, m)), Some((m / 2, m / 2 + 1))] {
                let ledger = QueryLedger::new();
                let mut hooks = PairHooks::new(pair, ledger.clone());
                let got = mnrs_walk(&ledger, params(m, m, WalkMode::FullSet), &mut hooks).unwrap();
                assert_eq!(got, pair);
                // setup = m, check = 3, update nominal 2, delta = 1
                let expected = m as f64 + (m as f64).sqrt() * 2.0 + 3.0;
                assert!((ledger.charged_cost() - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_walk_rejects_without_marks_and_finds_pairs() {
        let ledger = QueryLedger::new();
        let mut hooks = PairHooks::new(None, ledger.clone());
        assert_eq!(
            mnrs_walk(&ledger, params(30, 10, WalkMode::RandomWalk), &mut hooks).unwrap(),
            None
        );
        let mut hooks = PairHooks::new(Some((3, 17)), ledger.clone());
        let got = mnrs_walk(&ledger, params(30, 10, WalkMode::RandomWalk), &mut hooks).unwrap();
        assert_eq!(got, Some((3, 17)));
    }

    #[test]
    fn parameter_errors() {
        let ledger = QueryLedger::new();
        let mut hooks = PairHooks::new(None, ledger.clone());
        assert!(mnrs_walk(&ledger, params(4, 5, WalkMode::FullSet), &mut hooks).is_err());
        let bad = WalkParams {
            delta: 0.0,
            ..params(4, 2, WalkMode::FullSet)
        };
        assert!(mnrs_walk(&ledger, bad, &mut hooks).is_err());
    }

    #[test]
    fn ledger_monotone_across_modes() {
        let ledger = QueryLedger::new();
        let mut last = 0.0;
        for mode in [WalkMode::CostOnly, WalkMode::FullSet, WalkMode::RandomWalk] {
            let mut hooks = PairHooks::new(Some((2, 5)), ledger.clone());
            mnrs_walk(&ledger, params(12, 6, mode), &mut hooks).unwrap();
            assert!(ledger.charged_cost() >= last);
            last = ledger.charged_cost();
        }
    }
}
