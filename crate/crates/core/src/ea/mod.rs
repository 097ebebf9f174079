//! Evolutionary search: the steady-state tournament algorithm, differential
//! evolution, and the run driver that ties them to the evaluation budget.

pub mod de;
pub mod eval;
pub mod sst;
pub mod tree_ops;
pub mod variation;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::Fitness;
use crate::encoding::{EncodingConfig, EncodingKind, GenotypeRecord, Problem};
use crate::error::{Error, Result};
use crate::local_search::{apply_ls, LsConfig};

pub use de::{de_step, DeParams};
pub use eval::{best_index, Evaluator, Individual, StopReason, TrajectoryPoint};
pub use sst::{sst_step, TOURNAMENT_SIZE};

/// The generator used for every run. ChaCha keeps streams identical across platforms.
pub type RunRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sst,
    De,
}

impl std::str::FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sst" => Ok(Self::Sst),
            "de" => Ok(Self::De),
            other => Err(Error::Config(format!("unknown optimizer {other:?}"))),
        }
    }
}

/// Everything that determines a single run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub label: Option<String>,
    pub encoding: EncodingConfig,
    pub optimizer: OptimizerKind,
    pub population_size: usize,
    pub p_mut: f64,
    pub evaluation_budget: u64,
    /// Stop once the best nonlinearity reaches this value.
    pub target_nl: Option<u32>,
    pub time_limit_secs: Option<f64>,
    pub seed: u64,
    pub local_search: Option<LsConfig>,
    pub de: DeParams,
}

impl RunConfig {
    pub fn new(encoding: EncodingConfig) -> Self {
        let optimizer = OptimizerKind::Sst;
        Self {
            label: None,
            encoding,
            optimizer,
            population_size: 500,
            p_mut: 0.5,
            evaluation_budget: 1_000_000,
            target_nl: None,
            time_limit_secs: None,
            seed: 0,
            local_search: None,
            de: DeParams::default(),
        }
    }

    /// Label in the `TT-RI-LS1` / `GP` / `FP-SST` style.
    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let rs = self.encoding.rotation_symmetric;
        let mut label = match self.encoding.kind {
            EncodingKind::Bitstring if rs => "TT-RI".to_string(),
            EncodingKind::Bitstring => "TT".to_string(),
            EncodingKind::Tree => "GP".to_string(),
            EncodingKind::Float => {
                let alg = match self.optimizer {
                    OptimizerKind::Sst => "SST",
                    OptimizerKind::De => "DE",
                };
                if rs {
                    format!("FP-{alg}")
                } else {
                    format!("FP-GEN-{alg}")
                }
            }
        };
        if let Some(ls) = &self.local_search {
            label.push('-');
            label.push_str(ls.variant.suffix());
        }
        label
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_mut) {
            return Err(Error::Config(format!("p_mut = {} is not a probability", self.p_mut)));
        }
        match self.optimizer {
            OptimizerKind::Sst => {
                if self.population_size < TOURNAMENT_SIZE {
                    return Err(Error::PopulationTooSmall {
                        required: TOURNAMENT_SIZE,
                        actual: self.population_size,
                    });
                }
            }
            OptimizerKind::De => {
                if self.encoding.kind != EncodingKind::Float {
                    return Err(Error::Config("differential evolution needs the float encoding".into()));
                }
                if self.population_size < de::MIN_DE_POPULATION {
                    return Err(Error::PopulationTooSmall {
                        required: de::MIN_DE_POPULATION,
                        actual: self.population_size,
                    });
                }
                if self.local_search.is_some() {
                    return Err(Error::Config(
                        "local search runs with the steady-state optimizer only".into(),
                    ));
                }
                if !(0.0..=1.0).contains(&self.de.crossover_rate) || !self.de.scale.is_finite() {
                    return Err(Error::Config("invalid DE parameters".into()));
                }
            }
        }
        if let Some(ls) = &self.local_search {
            ls.validate()?;
            if ls.variant.needs_bitstring() && self.encoding.kind != EncodingKind::Bitstring {
                return Err(Error::Config(format!(
                    "{} flips bits and needs the bitstring encoding",
                    ls.variant.suffix()
                )));
            }
        }
        if let Some(t) = self.time_limit_secs {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("time limit {t} must be positive")));
            }
        }
        Problem::new(&self.encoding).map(|_| ())
    }
}

/// Outcome of one run, serialized as one JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub seed: u64,
    pub n: u32,
    pub nonlinearity: u32,
    pub num_max_values: u32,
    pub fitness: f64,
    pub evaluations: u64,
    pub stop_reason: StopReason,
    pub truth_table: String,
    pub genotype: GenotypeRecord,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Wall-clock seconds; omitted when byte-reproducible output is wanted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_secs: Option<f64>,
    pub config: RunConfig,
}

impl RunRecord {
    pub fn fitness_exact(&self) -> Fitness {
        Fitness::new(self.n, self.nonlinearity, self.num_max_values)
    }
}

/// A population-based search strategy driven by [`run`].
pub trait Optimizer {
    /// One unit of progress: a steady-state step or a full generation.
    /// Returns the number of steady-state steps it represents.
    fn step(&mut self, pop: &mut [Individual], eval: &mut Evaluator, rng: &mut RunRng) -> Result<usize>;
}

pub struct SteadyState {
    pub p_mut: f64,
}

impl Optimizer for SteadyState {
    fn step(&mut self, pop: &mut [Individual], eval: &mut Evaluator, rng: &mut RunRng) -> Result<usize> {
        sst_step(pop, self.p_mut, eval, rng)?;
        Ok(1)
    }
}

pub struct DifferentialEvolution {
    pub params: DeParams,
}

impl Optimizer for DifferentialEvolution {
    fn step(&mut self, pop: &mut [Individual], eval: &mut Evaluator, rng: &mut RunRng) -> Result<usize> {
        de_step(pop, self.params, eval, rng)?;
        Ok(pop.len())
    }
}

/// Executes one run to completion.
///
/// The initial population is always evaluated in full, even when that
/// exceeds the budget; afterwards the loop stops as soon as the budget,
/// the target nonlinearity or the time limit is hit.
pub fn run(cfg: &RunConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let started = Instant::now();
    let problem = Problem::new(&cfg.encoding)?;
    let mut eval = Evaluator::new(problem.clone(), cfg.evaluation_budget)
        .with_target(cfg.target_nl)
        .with_time_limit(cfg.time_limit_secs.map(Duration::from_secs_f64));
    let mut rng = RunRng::seed_from_u64(cfg.seed);

    let mut pop = Vec::with_capacity(cfg.population_size);
    for _ in 0..cfg.population_size {
        let g = problem.random_genotype(&mut rng);
        pop.push(eval.individual(g)?);
    }

    let mut optimizer: Box<dyn Optimizer> = match cfg.optimizer {
        OptimizerKind::Sst => Box::new(SteadyState { p_mut: cfg.p_mut }),
        OptimizerKind::De => Box::new(DifferentialEvolution { params: cfg.de }),
    };
    let ls_period = cfg.local_search.map(|ls| ls.period.unwrap_or(cfg.population_size));
    let mut since_ls = 0usize;

    while !eval.should_stop() {
        since_ls += optimizer.step(&mut pop, &mut eval, &mut rng)?;
        if let (Some(ls), Some(period)) = (&cfg.local_search, ls_period) {
            if since_ls >= period {
                since_ls = 0;
                apply_ls(&mut pop, ls, &mut eval, &mut rng)?;
            }
        }
    }

    let best = &pop[best_index(&pop)];
    let tt = eval.decode(&best.genotype)?;
    Ok(RunRecord {
        label: cfg.label(),
        seed: cfg.seed,
        n: problem.n(),
        nonlinearity: best.fitness.nonlinearity(),
        num_max_values: best.fitness.num_max_values(),
        fitness: best.fitness.value(),
        evaluations: eval.evaluations(),
        stop_reason: eval.stop_reason().unwrap_or(StopReason::Budget),
        truth_table: tt.to_hex(),
        genotype: GenotypeRecord::from(&best.genotype),
        trajectory: eval.trajectory().to_vec(),
        elapsed_secs: Some(started.elapsed().as_secs_f64()),
        config: cfg.clone(),
    })
}
