//! Solver configuration and its plain-text `key = value` file format.

use serde::{Deserialize, Serialize};

use crate::anchors::{AnchorScheme, DEFAULT_D_MIN};
use crate::error::{Error, Result};
use crate::query::CostModel;
use crate::walk::WalkMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub cost: CostModel,
    pub mode: WalkMode,
    pub scheme: AnchorScheme,
    /// Smallest `d` for which the configured anchor scheme is used.
    pub d_min: usize,
    /// `r = ⌈r_constant · m^{2/3}⌉` outside full-set mode.
    pub r_constant: f64,
    /// Check rounds of a random walk; `None` uses the default budget.
    pub walk_step_budget: Option<u64>,
    pub seed: u64,
    /// Use every run as an anchor below `d_min`. When off, levels below
    /// `d_min` are skipped.
    pub exhaustive_fallback: bool,
    /// Keep only every `anchor_stride`-th anchor (1 keeps all).
    pub anchor_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cost: CostModel::default(),
            mode: WalkMode::FullSet,
            scheme: AnchorScheme::Exhaustive,
            d_min: DEFAULT_D_MIN,
            r_constant: 1.0,
            walk_step_budget: None,
            seed: 0,
            exhaustive_fallback: true,
            anchor_stride: 1,
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad value {value:?} for {key}"),
    })
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        if self.d_min < 3 {
            return Err(Error::Parameter(format!(
                "d_min must be at least 3, got {}",
                self.d_min
            )));
        }
        if !(self.r_constant > 0.0 && self.r_constant.is_finite()) {
            return Err(Error::Parameter(format!(
                "r_constant must be positive, got {}",
                self.r_constant
            )));
        }
        if self.anchor_stride == 0 {
            return Err(Error::Parameter("anchor_stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Sets one key from the config file vocabulary.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "grover_factor" => self.cost.grover_factor = parse_value(line, key, value)?,
            "minfind_factor" => self.cost.minfind_factor = parse_value(line, key, value)?,
            "whp_log_base" => self.cost.whp_log_base = parse_value(line, key, value)?,
            "anchor_factor" => self.cost.anchor_factor = parse_value(line, key, value)?,
            "boost_whp" => self.cost.boost_whp = parse_value(line, key, value)?,
            "d_min" => self.d_min = parse_value(line, key, value)?,
            "r_constant" => self.r_constant = parse_value(line, key, value)?,
            "walk_step_budget" => self.walk_step_budget = Some(parse_value(line, key, value)?),
            "mode" => self.mode = parse_value(line, key, value)?,
            "anchors" => self.scheme = parse_value(line, key, value)?,
            "seed" => self.seed = parse_value(line, key, value)?,
            "exhaustive_fallback" => self.exhaustive_fallback = parse_value(line, key, value)?,
            "anchor_stride" => self.anchor_stride = parse_value(line, key, value)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key {key:?}"),
                })
            }
        }
        Ok(())
    }

    /// Applies a `key = value` document on top of `self`. Blank lines and
    /// text after `#` are ignored.
    pub fn apply_file(&mut self, doc: &str) -> Result<()> {
        for (idx, raw) in doc.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                msg: "expected key = value".into(),
            })?;
            self.set(key.trim(), value.trim(), line)?;
        }
        self.validate()
    }

    pub fn from_file_str(doc: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_file(doc)?;
        Ok(cfg)
    }
}
