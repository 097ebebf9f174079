//! Steady-state evolution with 3-tournament elimination.

use rand::Rng;

use crate::error::Result;

use super::eval::{Evaluator, Individual};
use super::variation::{crossover, mutate};

pub const TOURNAMENT_SIZE: usize = 3;

/// Draws three distinct indices in sampling order.
fn draw_tournament<R: Rng + ?Sized>(len: usize, rng: &mut R) -> [usize; TOURNAMENT_SIZE] {
    let mut picked = [usize::MAX; TOURNAMENT_SIZE];
    for k in 0..TOURNAMENT_SIZE {
        picked[k] = loop {
            let i = rng.random_range(0..len);
            if !picked[..k].contains(&i) {
                break i;
            }
        };
    }
    picked
}

/// Position within the draw of the tournament loser. Among equally bad
/// individuals the one drawn last is eliminated.
pub fn tournament_loser(pop: &[Individual], draw: &[usize]) -> usize {
    let mut loser = 0;
    for k in 1..draw.len() {
        if pop[draw[k]].fitness <= pop[draw[loser]].fitness {
            loser = k;
        }
    }
    loser
}

/// One steady-state iteration: the worst of three random individuals is
/// replaced by a (possibly mutated) crossover child of the other two.
/// Consumes exactly one evaluation.
pub fn sst_step<R: Rng + ?Sized>(pop: &mut [Individual], p_mut: f64, eval: &mut Evaluator, rng: &mut R) -> Result<()> {
    let draw = draw_tournament(pop.len(), rng);
    let loser = tournament_loser(pop, &draw);
    let mut parents = draw.iter().enumerate().filter(|&(k, _)| k != loser).map(|(_, &i)| i);
    let (pa, pb) = (
        parents.next().expect("two parents"),
        parents.next().expect("two parents"),
    );

    let problem = eval.problem();
    let params = *problem.tree_params();
    let n = problem.n();
    let mut child = crossover(&pop[pa].genotype, &pop[pb].genotype, &params, rng)?;
    if rng.random_bool(p_mut) {
        child = mutate(&child, n, &params, rng);
    }
    pop[draw[loser]] = eval.individual(child)?;
    Ok(())
}
