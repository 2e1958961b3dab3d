//! Run configuration: flags, an optional TOML file, and their resolution.
//!
//! Precedence is flag, then environment (`DISMANTLE_WORKERS` only), then the
//! config file, then built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use dismantle::{CostMode, DismantlingTarget, EnsembleConfig, Graph};

pub const DEFAULT_ENSEMBLE: usize = 1000;
pub const DEFAULT_OUT: &str = "dismantle-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostArg {
    Unit,
    Degree,
}

impl From<CostArg> for CostMode {
    fn from(c: CostArg) -> Self {
        match c {
            CostArg::Unit => CostMode::Unit,
            CostArg::Degree => CostMode::Degree,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    pub fn is_on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Edge list to read
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// TOML file with defaults for any of these options
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub cost: Option<CostArg>,

    /// Largest allowed component as a fraction of n
    #[arg(long, conflicts_with = "target_size")]
    pub target_fraction: Option<f64>,

    /// Largest allowed component size
    #[arg(long)]
    pub target_size: Option<usize>,

    /// Number of ensemble members
    #[arg(long)]
    pub ensemble: Option<usize>,

    /// Power-iteration budget multiplier
    #[arg(long)]
    pub iter_multiplier: Option<usize>,

    /// Base seed; member k uses seed + k
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    pub reinsert: Option<Toggle>,

    #[arg(long, value_enum)]
    pub fine_tune: Option<Toggle>,

    #[arg(long, env = "DISMANTLE_WORKERS")]
    pub workers: Option<usize>,

    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub input: Option<PathBuf>,
    pub cost: Option<CostArg>,
    pub target_fraction: Option<f64>,
    pub target_size: Option<usize>,
    pub ensemble: Option<usize>,
    pub iter_multiplier: Option<usize>,
    pub seed: Option<u64>,
    pub reinsert: Option<Toggle>,
    pub fine_tune: Option<Toggle>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    Fraction(f64),
    Size(usize),
}

impl TargetSpec {
    pub fn resolve(self, graph: &Graph) -> dismantle::Result<DismantlingTarget> {
        match self {
            TargetSpec::Fraction(f) => DismantlingTarget::from_fraction(graph.node_count(), f),
            TargetSpec::Size(c) => DismantlingTarget::absolute(c),
        }
    }
}

/// Fully resolved settings, echoed into the run manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub cost: CostArg,
    pub target: TargetSpec,
    pub ensemble: usize,
    pub iter_multiplier: usize,
    pub seed: u64,
    pub reinsert: bool,
    pub fine_tune: bool,
    pub workers: Option<usize>,
    pub out: PathBuf,
}

/// Defaults that differ between subcommands.
#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    pub ensemble: usize,
    pub reinsert: bool,
}

impl RunArgs {
    pub fn resolve(&self, defaults: Defaults) -> anyhow::Result<RunConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        if file.target_fraction.is_some() && file.target_size.is_some() {
            bail!("config sets both target_fraction and target_size");
        }
        let target = match (self.target_fraction, self.target_size) {
            (Some(f), _) => TargetSpec::Fraction(f),
            (_, Some(c)) => TargetSpec::Size(c),
            _ => match (file.target_fraction, file.target_size) {
                (Some(f), _) => TargetSpec::Fraction(f),
                (_, Some(c)) => TargetSpec::Size(c),
                _ => TargetSpec::Fraction(DismantlingTarget::DEFAULT_FRACTION),
            },
        };
        match target {
            TargetSpec::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
                bail!("target fraction must be in (0, 1], got {f}")
            }
            TargetSpec::Size(0) => bail!("target size must be at least 1"),
            _ => {}
        }
        let Some(input) = self.input.clone().or(file.input) else {
            bail!("no input file given (use --input)");
        };
        let cfg = RunConfig {
            input,
            cost: self.cost.or(file.cost).unwrap_or(CostArg::Unit),
            target,
            ensemble: self.ensemble.or(file.ensemble).unwrap_or(defaults.ensemble),
            iter_multiplier: self.iter_multiplier.or(file.iter_multiplier).unwrap_or(1),
            seed: self.seed.or(file.seed).unwrap_or(0),
            reinsert: self
                .reinsert
                .or(file.reinsert)
                .map_or(defaults.reinsert, Toggle::is_on),
            fine_tune: self.fine_tune.or(file.fine_tune).is_none_or(Toggle::is_on),
            workers: self.workers.or(file.workers),
            out: self
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        };
        if cfg.ensemble == 0 {
            bail!("ensemble size must be at least 1");
        }
        if cfg.iter_multiplier == 0 {
            bail!("iteration multiplier must be at least 1");
        }
        if cfg.workers == Some(0) {
            bail!("worker count must be at least 1");
        }
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn ensemble_config(&self) -> EnsembleConfig {
        self.ensemble_config_with(self.ensemble, self.iter_multiplier)
    }

    pub fn ensemble_config_with(&self, members: usize, multiplier: usize) -> EnsembleConfig {
        EnsembleConfig {
            members,
            base_seed: self.seed,
            multiplier,
            reinsertion: self.reinsert,
            fine_tuning: self.fine_tune,
            workers: self.workers,
        }
    }
}
