//! TOML configuration files. Every key can also be supplied on the command
//! line; [`ConfigFile::merge`] lets the flags win.
//!
//! ```toml
//! label = "TT-RI-LS2"
//!
//! [problem]
//! n = 9
//! encoding = "bitstring"
//! rs = true
//!
//! [algorithm]
//! population_size = 500
//! evaluation_budget = 10000000
//! target_nl = 241
//!
//! [local_search]
//! variant = "ls2"
//!
//! [campaign]
//! runs = 30
//! seed_base = 1
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ea::{DeParams, OptimizerKind, RunConfig};
use crate::encoding::{EncodingConfig, EncodingKind, TreeParams};
use crate::error::{Error, Result};
use crate::harness::Campaign;
use crate::local_search::{LsConfig, LsVariant};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub n: Option<u32>,
    pub encoding: Option<EncodingKind>,
    pub rs: Option<bool>,
    pub decode: Option<u32>,
    pub max_depth: Option<usize>,
    pub max_nodes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub optimizer: Option<OptimizerKind>,
    pub population_size: Option<usize>,
    pub p_mut: Option<f64>,
    pub evaluation_budget: Option<u64>,
    pub target_nl: Option<u32>,
    pub time_limit_secs: Option<f64>,
    pub seed: Option<u64>,
    pub de_f: Option<f64>,
    pub de_cr: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSearchSection {
    /// `none`, `ls1`, `ls2` or `ls3`.
    pub variant: Option<String>,
    pub fraction: Option<f64>,
    pub trials: Option<usize>,
    pub period: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSection {
    pub runs: Option<usize>,
    pub seed_base: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub timing: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub label: Option<String>,
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub algorithm: AlgorithmSection,
    #[serde(default)]
    pub local_search: LocalSearchSection,
    #[serde(default)]
    pub campaign: CampaignSection,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )+
    };
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn merge(mut self, top: &ConfigFile) -> Self {
        overlay!(self, top, label);
        overlay!(self.problem, top.problem, n, encoding, rs, decode, max_depth, max_nodes);
        overlay!(
            self.algorithm,
            top.algorithm,
            optimizer,
            population_size,
            p_mut,
            evaluation_budget,
            target_nl,
            time_limit_secs,
            seed,
            de_f,
            de_cr
        );
        overlay!(self.local_search, top.local_search, variant, fraction, trials, period);
        overlay!(self.campaign, top.campaign, runs, seed_base, workers, output, timing);
        self
    }

    pub fn run_config(&self) -> Result<RunConfig> {
        let p = &self.problem;
        let n = p.n.ok_or_else(|| Error::Config("the dimension n is required".into()))?;
        let kind = p.encoding.unwrap_or(EncodingKind::Bitstring);
        let defaults = TreeParams::default();
        let encoding = EncodingConfig {
            n,
            kind,
            // the float encoding targets rotation-symmetric genotypes unless told otherwise
            rotation_symmetric: p.rs.unwrap_or(kind == EncodingKind::Float),
            decode: p.decode,
            tree: TreeParams {
                max_depth: p.max_depth.unwrap_or(defaults.max_depth),
                max_nodes: p.max_nodes.unwrap_or(defaults.max_nodes),
            },
        };
        let mut cfg = RunConfig::new(encoding);
        let a = &self.algorithm;
        cfg.label = self.label.clone();
        if let Some(o) = a.optimizer {
            cfg.optimizer = o;
            if o == OptimizerKind::De && a.population_size.is_none() {
                cfg.population_size = 50;
            }
        }
        cfg.population_size = a.population_size.unwrap_or(cfg.population_size);
        cfg.p_mut = a.p_mut.unwrap_or(cfg.p_mut);
        cfg.evaluation_budget = a.evaluation_budget.unwrap_or(cfg.evaluation_budget);
        cfg.target_nl = a.target_nl;
        cfg.time_limit_secs = a.time_limit_secs;
        cfg.seed = a.seed.unwrap_or(cfg.seed);
        let de = DeParams::default();
        cfg.de = DeParams {
            scale: a.de_f.unwrap_or(de.scale),
            crossover_rate: a.de_cr.unwrap_or(de.crossover_rate),
        };
        let ls = &self.local_search;
        cfg.local_search = match ls.variant.as_deref() {
            None | Some("none") => None,
            Some(v) => {
                let mut c = LsConfig::new(v.parse::<LsVariant>()?);
                c.fraction = ls.fraction.unwrap_or(c.fraction);
                c.trials = ls.trials.unwrap_or(c.trials);
                c.period = ls.period;
                Some(c)
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn campaign(&self) -> Result<Campaign> {
        let c = &self.campaign;
        let mut campaign = Campaign::new(self.run_config()?, c.runs.unwrap_or(30), c.seed_base.unwrap_or(0));
        campaign.workers = c.workers.unwrap_or(1);
        campaign.record_timing = c.timing.unwrap_or(false);
        campaign.validate()?;
        Ok(campaign)
    }
}
