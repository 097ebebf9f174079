use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::boolfn::{Fitness, TruthTable, WalshWorkspace};
use crate::encoding::{Genotype, Problem, TreeEvaluator};
use crate::error::Result;

/// Evaluation count between wall-clock checks.
pub const TIME_CHECK_INTERVAL: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Budget,
    Target,
    TimeLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub evaluations: u64,
    pub nonlinearity: u32,
    pub num_max_values: u32,
    pub fitness: f64,
}

/// A genotype with its cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    pub fitness: Fitness,
}

impl Individual {
    pub fn nonlinearity(&self) -> u32 {
        self.fitness.nonlinearity()
    }
}

/// Index of the fittest individual; the lowest index wins ties.
pub fn best_index(pop: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in pop.iter().enumerate().skip(1) {
        if ind.fitness > pop[best].fitness {
            best = i;
        }
    }
    best
}

/// Decodes and scores genotypes while accounting for the run's budget.
///
/// Every call to [`Evaluator::evaluate`] consumes one evaluation and updates
/// the best-so-far trajectory.
#[derive(Debug)]
pub struct Evaluator {
    problem: Problem,
    workspace: WalshWorkspace,
    trees: Option<TreeEvaluator>,
    evaluations: u64,
    budget: u64,
    target_nl: Option<u32>,
    deadline: Option<Instant>,
    timed_out: bool,
    best: Option<Fitness>,
    trajectory: Vec<TrajectoryPoint>,
}

impl Evaluator {
    pub fn new(problem: Problem, budget: u64) -> Self {
        let trees = TreeEvaluator::new(problem.n()).ok();
        Self {
            problem,
            workspace: WalshWorkspace::new(),
            trees,
            evaluations: 0,
            budget,
            target_nl: None,
            deadline: None,
            timed_out: false,
            best: None,
            trajectory: Vec::new(),
        }
    }

    pub fn with_target(mut self, target_nl: Option<u32>) -> Self {
        self.target_nl = target_nl;
        self
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.deadline = limit.map(|d| Instant::now() + d);
        self
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn best(&self) -> Option<Fitness> {
        self.best
    }

    pub fn trajectory(&self) -> &[TrajectoryPoint] {
        &self.trajectory
    }

    pub fn decode(&mut self, g: &Genotype) -> Result<TruthTable> {
        match (g, self.trees.as_mut()) {
            (Genotype::Tree(t), Some(te)) => te.evaluate(t),
            _ => self.problem.decode(g),
        }
    }

    pub fn evaluate(&mut self, g: &Genotype) -> Result<Fitness> {
        let tt = self.decode(g)?;
        let fit = self.workspace.fitness(&tt);
        self.evaluations += 1;
        if self.best.is_none_or(|b| fit > b) {
            self.best = Some(fit);
            self.trajectory.push(TrajectoryPoint {
                evaluations: self.evaluations,
                nonlinearity: fit.nonlinearity(),
                num_max_values: fit.num_max_values(),
                fitness: fit.value(),
            });
        }
        if let Some(deadline) = self.deadline {
            if self.evaluations.is_multiple_of(TIME_CHECK_INTERVAL) && Instant::now() >= deadline {
                self.timed_out = true;
            }
        }
        Ok(fit)
    }

    pub fn individual(&mut self, genotype: Genotype) -> Result<Individual> {
        let fitness = self.evaluate(&genotype)?;
        Ok(Individual { genotype, fitness })
    }

    pub fn target_reached(&self) -> bool {
        match (self.target_nl, self.best) {
            (Some(t), Some(b)) => b.nonlinearity() >= t,
            _ => false,
        }
    }

    /// Why the run should stop now, if it should.
    pub fn stop_reason(&self) -> Option<StopReason> {
        if self.target_reached() {
            Some(StopReason::Target)
        } else if self.timed_out {
            Some(StopReason::TimeLimit)
        } else if self.evaluations >= self.budget {
            Some(StopReason::Budget)
        } else {
            None
        }
    }

    pub fn should_stop(&self) -> bool {
        self.stop_reason().is_some()
    }
}
