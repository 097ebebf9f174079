//! Local-search operators applied between generations of the steady-state loop.
//!
//! `Ls1` hill-climbs with the encoding's own mutation operator, `Ls2` sweeps
//! single bit flips over a bitstring until no flip helps, and `Ls3` runs
//! both in that order. Only strict improvements are accepted. Every trial
//! consumes one evaluation from the run's budget and the operators return
//! early once the evaluator reports exhaustion.

use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ea::eval::{best_index, Evaluator, Individual};
use crate::ea::variation::mutate;
use crate::encoding::Genotype;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LsVariant {
    Ls1,
    Ls2,
    Ls3,
}

impl LsVariant {
    pub fn suffix(self) -> &'static str {
        match self {
            LsVariant::Ls1 => "LS1",
            LsVariant::Ls2 => "LS2",
            LsVariant::Ls3 => "LS3",
        }
    }

    pub fn needs_bitstring(self) -> bool {
        !matches!(self, LsVariant::Ls1)
    }
}

impl FromStr for LsVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls1" => Ok(LsVariant::Ls1),
            "ls2" => Ok(LsVariant::Ls2),
            "ls3" => Ok(LsVariant::Ls3),
            other => Err(Error::Config(format!("unknown local search variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsConfig {
    pub variant: LsVariant,
    /// Share of the population that receives local search, best included.
    pub fraction: f64,
    /// Consecutive failed mutations before `Ls1` gives up.
    pub trials: usize,
    /// Steady-state steps between applications; `None` means one
    /// generation, i.e. the population size.
    pub period: Option<usize>,
}

impl LsConfig {
    pub fn new(variant: LsVariant) -> Self {
        Self {
            variant,
            fraction: 0.05,
            trials: 25,
            period: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::Config(format!("ls fraction {} not in (0, 1]", self.fraction)));
        }
        if self.trials == 0 {
            return Err(Error::Config("ls trials must be at least 1".into()));
        }
        if self.period == Some(0) {
            return Err(Error::Config("ls period must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of individuals receiving local search in a population of `size`.
    pub fn selection_size(&self, size: usize) -> usize {
        // tolerate representation error such as 0.05 * 500 = 25.000000000000004
        let k = (self.fraction * size as f64 - 1e-9).ceil() as usize;
        k.clamp(1, size)
    }
}

/// Mutation-based hill climbing. The trial counter restarts after every
/// improvement; `trials` consecutive failures end the search.
pub fn ls_mutation<R: Rng + ?Sized>(
    ind: Individual,
    trials: usize,
    eval: &mut Evaluator,
    rng: &mut R,
) -> Result<Individual> {
    let n = eval.problem().n();
    let params = *eval.problem().tree_params();
    let mut current = ind;
    let mut failures = 0;
    while failures < trials && !eval.should_stop() {
        let candidate = mutate(&current.genotype, n, &params, rng);
        let fitness = eval.evaluate(&candidate)?;
        if fitness > current.fitness {
            current = Individual {
                genotype: candidate,
                fitness,
            };
            failures = 0;
        } else {
            failures += 1;
        }
    }
    Ok(current)
}

/// Exhaustive first-improvement bit-flip search in ascending index order.
/// Terminates after a sweep without improvement, leaving a 1-flip local optimum
/// (unless the budget ran out first).
pub fn ls_bitflip(ind: Individual, eval: &mut Evaluator) -> Result<Individual> {
    let Individual {
        mut genotype,
        fitness: mut best,
    } = ind;
    let len = match &genotype {
        Genotype::Bits(b) => b.len(),
        _ => {
            return Err(Error::EncodingMismatch(
                "bit-flip local search needs a bitstring".into(),
            ))
        }
    };
    'sweeps: loop {
        let mut improved = false;
        for i in 0..len {
            if eval.should_stop() {
                break 'sweeps;
            }
            flip(&mut genotype, i);
            let f = eval.evaluate(&genotype)?;
            if f > best {
                best = f;
                improved = true;
            } else {
                flip(&mut genotype, i);
            }
        }
        if !improved {
            break;
        }
    }
    Ok(Individual {
        genotype,
        fitness: best,
    })
}

fn flip(g: &mut Genotype, i: usize) {
    if let Genotype::Bits(b) = g {
        b.bits[i] = !b.bits[i];
    }
}

pub fn apply_variant<R: Rng + ?Sized>(
    ind: Individual,
    cfg: &LsConfig,
    eval: &mut Evaluator,
    rng: &mut R,
) -> Result<Individual> {
    match cfg.variant {
        LsVariant::Ls1 => ls_mutation(ind, cfg.trials, eval, rng),
        LsVariant::Ls2 => ls_bitflip(ind, eval),
        LsVariant::Ls3 => {
            let ind = ls_mutation(ind, cfg.trials, eval, rng)?;
            ls_bitflip(ind, eval)
        }
    }
}

/// Runs the configured local search on the best individual and a uniform
/// sample of others, `selection_size` in total.
pub fn apply_ls<R: Rng + ?Sized>(
    pop: &mut [Individual],
    cfg: &LsConfig,
    eval: &mut Evaluator,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if pop.is_empty() {
        return Ok(Vec::new());
    }
    let best = best_index(pop);
    let k = cfg.selection_size(pop.len());
    let mut chosen = vec![best];
    chosen.extend(
        index::sample(rng, pop.len() - 1, k - 1)
            .into_iter()
            .map(|i| if i >= best { i + 1 } else { i }),
    );
    for &i in &chosen {
        if eval.should_stop() {
            break;
        }
        let ind = pop[i].clone();
        pop[i] = apply_variant(ind, cfg, eval, rng)?;
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::fitness;
    use crate::encoding::{BitMode, BitstringGenotype, EncodingConfig, EncodingKind, Problem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits_problem(n: u32, rs: bool) -> Problem {
        Problem::new(&EncodingConfig::new(n, EncodingKind::Bitstring).rotation_symmetric(rs)).unwrap()
    }

    fn constant_zero(n: u32) -> Genotype {
        Genotype::Bits(BitstringGenotype::new(vec![false; 1 << n], BitMode::General))
    }

    #[test]
    fn selection_size_matches_fraction() {
        let cfg = LsConfig::new(LsVariant::Ls1);
        assert_eq!(cfg.selection_size(500), 25);
        assert_eq!(cfg.selection_size(10), 1);
        assert_eq!(cfg.selection_size(21), 2);
    }

    #[test]
    fn ls1_lifts_constant_function() {
        let mut eval = Evaluator::new(bits_problem(3, false), u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ind = eval.individual(constant_zero(3)).unwrap();
        assert_eq!(ind.nonlinearity(), 0);
        let out = ls_mutation(ind.clone(), 25, &mut eval, &mut rng).unwrap();
        assert!(out.nonlinearity() >= 1);
        assert!(out.fitness >= ind.fitness);
    }

    #[test]
    fn ls1_stops_after_trials_at_optimum() {
        // bent function: no single mutation can improve nl 6
        let bent = crate::boolfn::TruthTable::from_hex(4, "111e").unwrap();
        let g = Genotype::Bits(BitstringGenotype::new(bent.bits().collect(), BitMode::General));
        let mut eval = Evaluator::new(bits_problem(4, false), u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ind = eval.individual(g).unwrap();
        let out = ls_mutation(ind.clone(), 25, &mut eval, &mut rng).unwrap();
        assert_eq!(out, ind);
        assert_eq!(eval.evaluations(), 26);
    }

    #[test]
    fn ls2_leaves_bent_function_alone() {
        let bent = crate::boolfn::TruthTable::from_hex(4, "111e").unwrap();
        assert_eq!(fitness(&bent).value(), 6.0);
        let g = Genotype::Bits(BitstringGenotype::new(bent.bits().collect(), BitMode::General));
        let mut eval = Evaluator::new(bits_problem(4, false), u64::MAX);
        let ind = eval.individual(g).unwrap();
        let out = ls_bitflip(ind.clone(), &mut eval).unwrap();
        assert_eq!(out, ind);
        assert_eq!(eval.evaluations(), 1 + 16);
    }

    #[test]
    fn ls2_improves_constant_and_is_one_flip_optimal() {
        let mut eval = Evaluator::new(bits_problem(3, false), u64::MAX);
        let ind = eval.individual(constant_zero(3)).unwrap();
        let out = ls_bitflip(ind.clone(), &mut eval).unwrap();
        assert!(out.fitness > ind.fitness);
        let Genotype::Bits(b) = &out.genotype else { panic!() };
        for i in 0..b.len() {
            let mut t = crate::boolfn::TruthTable::from_bits(3, b.bits.iter().copied()).unwrap();
            t.flip(i);
            assert!(fitness(&t) <= out.fitness);
        }
    }

    #[test]
    fn ls2_rejects_trees() {
        let problem = Problem::new(&EncodingConfig::new(3, EncodingKind::Tree)).unwrap();
        let mut eval = Evaluator::new(problem, u64::MAX);
        let ind = eval
            .individual(Genotype::Tree(crate::encoding::GpTree::leaf(1)))
            .unwrap();
        assert!(matches!(ls_bitflip(ind, &mut eval), Err(Error::EncodingMismatch(_))));
    }

    #[test]
    fn budget_interrupts_local_search() {
        let mut eval = Evaluator::new(bits_problem(7, false), 10);
        let ind = eval.individual(constant_zero(7)).unwrap();
        let _ = ls_bitflip(ind, &mut eval).unwrap();
        assert_eq!(eval.evaluations(), 10);
    }

    #[test]
    fn apply_ls_includes_best_and_never_lowers_max() {
        let problem = bits_problem(7, true);
        let mut eval = Evaluator::new(problem.clone(), u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pop: Vec<_> = (0..40)
            .map(|_| eval.individual(problem.random_genotype(&mut rng)).unwrap())
            .collect();
        let cfg = LsConfig {
            fraction: 0.1,
            ..LsConfig::new(LsVariant::Ls3)
        };
        for _ in 0..5 {
            let before_max = pop[best_index(&pop)].fitness;
            let best = best_index(&pop);
            let chosen = apply_ls(&mut pop, &cfg, &mut eval, &mut rng).unwrap();
            assert_eq!(chosen.len(), 4);
            assert_eq!(chosen[0], best);
            let mut dedup = chosen.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), chosen.len());
            assert!(pop[best_index(&pop)].fitness >= before_max);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = LsConfig::new(LsVariant::Ls2);
        assert!(cfg.validate().is_ok());
        cfg.fraction = 0.0;
        assert!(cfg.validate().is_err());
        cfg.fraction = 0.5;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }
}
