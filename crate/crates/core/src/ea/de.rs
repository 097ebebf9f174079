//! Differential evolution (rand/1/bin) over float genotypes.

use rand::Rng;

use crate::encoding::{FloatGenotype, Genotype};
use crate::error::{Error, Result};

use super::eval::{Evaluator, Individual};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeParams {
    /// Scale factor `F`.
    pub scale: f64,
    /// Binomial crossover rate `CR`.
    pub crossover_rate: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            scale: 0.5,
            crossover_rate: 0.9,
        }
    }
}

pub const MIN_DE_POPULATION: usize = 4;

fn as_float(ind: &Individual) -> Result<&FloatGenotype> {
    match &ind.genotype {
        Genotype::Float(f) => Ok(f),
        _ => Err(Error::EncodingMismatch(
            "differential evolution needs float genotypes".into(),
        )),
    }
}

/// Builds the rand/1/bin trial vector for `target` from donors `a`, `b`, `c`.
pub fn trial_vector<R: Rng + ?Sized>(
    target: &FloatGenotype,
    a: &FloatGenotype,
    b: &FloatGenotype,
    c: &FloatGenotype,
    params: DeParams,
    rng: &mut R,
) -> FloatGenotype {
    let dim = target.dimension();
    let forced = rng.random_range(0..dim.max(1));
    let values = (0..dim)
        .map(|j| {
            if j == forced || rng.random::<f64>() < params.crossover_rate {
                a.values()[j] + params.scale * (b.values()[j] - c.values()[j])
            } else {
                target.values()[j]
            }
        })
        .collect();
    FloatGenotype::clipped(values, target.decode())
}

fn distinct_donors<R: Rng + ?Sized>(len: usize, exclude: usize, rng: &mut R) -> [usize; 3] {
    let mut picked = [usize::MAX; 3];
    for k in 0..3 {
        picked[k] = loop {
            let i = rng.random_range(0..len);
            if i != exclude && !picked[..k].contains(&i) {
                break i;
            }
        };
    }
    picked
}

/// One synchronous generation. A trial replaces its target when it is at
/// least as fit. Stops early once the evaluator signals exhaustion.
pub fn de_step<R: Rng + ?Sized>(
    pop: &mut [Individual],
    params: DeParams,
    eval: &mut Evaluator,
    rng: &mut R,
) -> Result<()> {
    if pop.len() < MIN_DE_POPULATION {
        return Err(Error::PopulationTooSmall {
            required: MIN_DE_POPULATION,
            actual: pop.len(),
        });
    }
    let mut next: Vec<Option<Individual>> = vec![None; pop.len()];
    for i in 0..pop.len() {
        if eval.should_stop() {
            break;
        }
        let [ia, ib, ic] = distinct_donors(pop.len(), i, rng);
        let trial = trial_vector(
            as_float(&pop[i])?,
            as_float(&pop[ia])?,
            as_float(&pop[ib])?,
            as_float(&pop[ic])?,
            params,
            rng,
        );
        let candidate = eval.individual(Genotype::Float(trial))?;
        if candidate.fitness >= pop[i].fitness {
            next[i] = Some(candidate);
        }
    }
    for (slot, replacement) in pop.iter_mut().zip(next) {
        if let Some(ind) = replacement {
            *slot = ind;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{EncodingConfig, EncodingKind, Problem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_scale_full_crossover_copies_donor() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = |v: f64| FloatGenotype::new(vec![v; 5], 3).unwrap();
        let params = DeParams {
            scale: 0.0,
            crossover_rate: 1.0,
        };
        let t = trial_vector(&f(0.1), &f(0.7), &f(0.2), &f(0.9), params, &mut rng);
        assert_eq!(t, f(0.7));
    }

    #[test]
    fn trials_are_clipped() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = |v: f64| FloatGenotype::new(vec![v; 5], 3).unwrap();
        let params = DeParams {
            scale: 2.0,
            crossover_rate: 1.0,
        };
        let t = trial_vector(&f(0.5), &f(0.9), &f(1.0), &f(0.0), params, &mut rng);
        assert!(t.values().iter().all(|&v| v == 1.0));
        let t = trial_vector(&f(0.5), &f(0.1), &f(0.0), &f(1.0), params, &mut rng);
        assert!(t.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn small_population_is_rejected() {
        let problem = Problem::new(&EncodingConfig::new(5, EncodingKind::Float)).unwrap();
        let mut eval = Evaluator::new(problem.clone(), 100);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pop: Vec<_> = (0..3)
            .map(|_| eval.individual(problem.random_genotype(&mut rng)).unwrap())
            .collect();
        assert_eq!(
            de_step(&mut pop, DeParams::default(), &mut eval, &mut rng),
            Err(Error::PopulationTooSmall { required: 4, actual: 3 })
        );
    }

    #[test]
    fn replacement_never_decreases_fitness() {
        let problem = Problem::new(&EncodingConfig::new(7, EncodingKind::Float).rotation_symmetric(true)).unwrap();
        let mut eval = Evaluator::new(problem.clone(), u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pop: Vec<_> = (0..10)
            .map(|_| eval.individual(problem.random_genotype(&mut rng)).unwrap())
            .collect();
        for _ in 0..30 {
            let before: Vec<_> = pop.iter().map(|i| i.fitness).collect();
            de_step(&mut pop, DeParams::default(), &mut eval, &mut rng).unwrap();
            for (b, ind) in before.iter().zip(&pop) {
                assert!(ind.fitness >= *b);
            }
        }
    }
}
