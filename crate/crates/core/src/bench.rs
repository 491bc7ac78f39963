//! Ledger measurements of one cost-only walk search on planted instances.

use serde::Serialize;

use crate::anchors::{AnchorScheme, AnchorSet};
use crate::config::SolverConfig;
use crate::ds::mix64;
use crate::error::{Error, Result};
use crate::lcs::InnerSearch;
use crate::query::{OracleHandle, QueryLedger};
use crate::reference::plant_unverified;
use crate::text::Text;
use crate::walk::WalkMode;

/// One grid point: `n` runs per string, encoded scale `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchCell {
    pub n: usize,
    pub d: usize,
}

/// Mean ledger readings over the trials of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub d: usize,
    pub d_tilde: u64,
    pub mode: WalkMode,
    pub charged_cost: f64,
    pub run_q: f64,
    pub prefix_q: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "n,d,d_tilde,mode,charged_cost,run_q,prefix_q,seed";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        let mode = match self.mode {
            WalkMode::FullSet => "fullset",
            WalkMode::RandomWalk => "walk",
            WalkMode::CostOnly => "costonly",
        };
        format!(
            "{},{},{},{},{:.6},{:.1},{:.1},{}",
            self.n,
            self.d,
            self.d_tilde,
            mode,
            self.charged_cost,
            self.run_q,
            self.prefix_q,
            self.seed
        )
    }
}

/// Ledger of a single walk search at scale `d` over minimizer anchors, on a
/// pair of `n`-run strings sharing a planted block of `d` runs.
pub fn measure(
    cell: BenchCell,
    d_tilde: u64,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<QueryLedger> {
    let BenchCell { n, d } = cell;
    let (a, b) = plant_unverified(n, d, d_tilde, seed)?;
    let ledger = QueryLedger::new();
    let text = Text::pair(
        OracleHandle::new(a, ledger.clone()),
        OracleHandle::new(b, ledger.clone()),
    )?;
    let anchors = AnchorSet::build(
        &text.materialize(),
        d,
        cfg.scheme,
        cfg.seed ^ seed,
        cfg.d_min,
    )?;
    InnerSearch::new(text, anchors, cfg).run(d_tilde)?;
    Ok(ledger)
}

/// Runs `trials` seeded trials per cell and averages the ledgers. The
/// planted block has decoded length `d_tilde = d`.
pub fn run_grid(
    cells: &[BenchCell],
    trials: usize,
    seed: u64,
    mode: WalkMode,
) -> Result<Vec<BenchRow>> {
    if trials == 0 {
        return Err(Error::Parameter("at least one trial per cell".into()));
    }
    let cfg = SolverConfig {
        mode,
        scheme: AnchorScheme::Minimizer,
        seed,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    cells
        .iter()
        .map(|&cell| {
            let d_tilde = cell.d as u64;
            let (mut cost, mut run_q, mut prefix_q) = (0.0, 0.0, 0.0);
            for t in 0..trials {
                let trial_seed =
                    mix64(seed ^ mix64((cell.n as u64) << 32 | cell.d as u64) ^ t as u64);
                let ledger = measure(cell, d_tilde, &cfg, trial_seed)?;
                cost += ledger.charged_cost();
                run_q += ledger.run_queries() as f64;
                prefix_q += ledger.prefix_queries() as f64;
            }
            let k = trials as f64;
            Ok(BenchRow {
                n: cell.n,
                d: cell.d,
                d_tilde,
                mode,
                charged_cost: cost / k,
                run_q: run_q / k,
                prefix_q: prefix_q / k,
                seed,
            })
        })
        .collect()
}

/// Cells `n = 2^lo ..= 2^hi` at fixed `d`.
pub fn n_sweep(lo: u32, hi: u32, d: usize) -> Vec<BenchCell> {
    (lo..=hi).map(|e| BenchCell { n: 1 << e, d }).collect()
}

/// Cells `d = 2^lo ..= 2^hi` at fixed `n`.
pub fn d_sweep(lo: u32, hi: u32, n: usize) -> Vec<BenchCell> {
    (lo..=hi).map(|e| BenchCell { n, d: 1 << e }).collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Parameter("need two or more positive points".into()));
    }
    let k = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("all x values equal".into()));
    }
    Ok(sxy / sxx)
}
