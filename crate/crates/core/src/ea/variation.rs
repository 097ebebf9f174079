//! Mutation and crossover for bitstring and float genotypes, plus dispatch
//! over all three encodings.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::encoding::{BitstringGenotype, FloatGenotype, Genotype, TreeParams};
use crate::error::{Error, Result};

use super::tree_ops;

/// Inverts the bit at `pos`.
pub fn simple_bit_mutation(g: &mut BitstringGenotype, pos: usize) {
    g.bits[pos] = !g.bits[pos];
}

/// Shuffles the bits in the inclusive window `start..=end`.
pub fn shuffle_mutation<R: Rng + ?Sized>(g: &mut BitstringGenotype, start: usize, end: usize, rng: &mut R) {
    debug_assert!(start <= end && end < g.len());
    g.bits[start..=end].shuffle(rng);
}

/// Picks simple bit mutation or shuffle mutation with equal probability.
pub fn mutate_bitstring<R: Rng + ?Sized>(g: &BitstringGenotype, rng: &mut R) -> BitstringGenotype {
    let mut out = g.clone();
    if out.is_empty() {
        return out;
    }
    if rng.random_bool(0.5) {
        let pos = rng.random_range(0..out.len());
        simple_bit_mutation(&mut out, pos);
    } else {
        let a = rng.random_range(0..out.len());
        let b = rng.random_range(0..out.len());
        shuffle_mutation(&mut out, a.min(b), a.max(b), rng);
    }
    out
}

/// `a[..point]` followed by `b[point..]`.
pub fn one_point_crossover(a: &BitstringGenotype, b: &BitstringGenotype, point: usize) -> BitstringGenotype {
    let mut bits = Vec::with_capacity(a.len());
    bits.extend_from_slice(&a.bits[..point]);
    bits.extend_from_slice(&b.bits[point..]);
    BitstringGenotype::new(bits, a.mode)
}

pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &BitstringGenotype,
    b: &BitstringGenotype,
    rng: &mut R,
) -> BitstringGenotype {
    let bits = a
        .bits
        .iter()
        .zip(&b.bits)
        .map(|(&x, &y)| if rng.random_bool(0.5) { x } else { y })
        .collect();
    BitstringGenotype::new(bits, a.mode)
}

/// Picks one-point or uniform crossover with equal probability.
pub fn crossover_bitstring<R: Rng + ?Sized>(
    a: &BitstringGenotype,
    b: &BitstringGenotype,
    rng: &mut R,
) -> Result<BitstringGenotype> {
    if a.len() != b.len() || a.mode != b.mode {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if rng.random_bool(0.5) {
        let (first, second) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let point = if a.len() < 2 { 0 } else { rng.random_range(1..a.len()) };
        Ok(one_point_crossover(first, second, point))
    } else {
        Ok(uniform_crossover(a, b, rng))
    }
}

/// Resamples one uniformly chosen coordinate in `[0, 1]`.
pub fn mutate_float<R: Rng + ?Sized>(g: &FloatGenotype, rng: &mut R) -> FloatGenotype {
    let mut values = g.values().to_vec();
    if !values.is_empty() {
        let i = rng.random_range(0..values.len());
        values[i] = rng.random::<f64>();
    }
    FloatGenotype::clipped(values, g.decode())
}

/// Arithmetic (per-coordinate mean) or uniform crossover, chosen with equal probability.
pub fn crossover_float<R: Rng + ?Sized>(a: &FloatGenotype, b: &FloatGenotype, rng: &mut R) -> Result<FloatGenotype> {
    if a.dimension() != b.dimension() || a.decode() != b.decode() {
        return Err(Error::LengthMismatch {
            expected: a.dimension(),
            actual: b.dimension(),
        });
    }
    let arithmetic = rng.random_bool(0.5);
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| {
            if arithmetic {
                0.5 * (x + y)
            } else if rng.random_bool(0.5) {
                x
            } else {
                y
            }
        })
        .collect();
    Ok(FloatGenotype::clipped(values, a.decode()))
}

/// Encoding-appropriate mutation.
pub fn mutate<R: Rng + ?Sized>(g: &Genotype, n: u32, params: &TreeParams, rng: &mut R) -> Genotype {
    match g {
        Genotype::Bits(b) => Genotype::Bits(mutate_bitstring(b, rng)),
        Genotype::Float(f) => Genotype::Float(mutate_float(f, rng)),
        Genotype::Tree(t) => Genotype::Tree(tree_ops::mutate_tree(t, n, params, rng)),
    }
}

/// Encoding-appropriate crossover producing one child.
pub fn crossover<R: Rng + ?Sized>(a: &Genotype, b: &Genotype, params: &TreeParams, rng: &mut R) -> Result<Genotype> {
    match (a, b) {
        (Genotype::Bits(x), Genotype::Bits(y)) => crossover_bitstring(x, y, rng).map(Genotype::Bits),
        (Genotype::Float(x), Genotype::Float(y)) => crossover_float(x, y, rng).map(Genotype::Float),
        (Genotype::Tree(x), Genotype::Tree(y)) => Ok(Genotype::Tree(tree_ops::crossover_tree(x, y, params, rng))),
        _ => Err(Error::EncodingMismatch("parents use different encodings".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::BitMode;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitstringGenotype {
        BitstringGenotype::new(s.chars().map(|c| c == '1').collect(), BitMode::General)
    }

    #[test]
    fn simple_mutation_flips_one_bit() {
        let mut g = bs("0000");
        simple_bit_mutation(&mut g, 2);
        assert_eq!(g, bs("0010"));
    }

    #[test]
    fn shuffle_degenerate_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut g = bs("0110101");
        shuffle_mutation(&mut g, 3, 3, &mut rng);
        assert_eq!(g, bs("0110101"));
    }

    #[test]
    fn one_point_example() {
        assert_eq!(one_point_crossover(&bs("0000"), &bs("1111"), 2), bs("0011"));
    }

    #[test]
    fn crossover_length_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(crossover_bitstring(&bs("000"), &bs("1111"), &mut rng).is_err());
        let a = FloatGenotype::new(vec![0.1, 0.2], 3).unwrap();
        let b = FloatGenotype::new(vec![0.1], 3).unwrap();
        assert!(crossover_float(&a, &b, &mut rng).is_err());
    }

    #[test]
    fn arithmetic_crossover_of_clones() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = FloatGenotype::new(vec![0.1, 0.7, 1.0, 0.0], 3).unwrap();
        for _ in 0..20 {
            assert_eq!(crossover_float(&g, &g, &mut rng).unwrap(), g);
        }
    }

    proptest! {
        #[test]
        fn bit_mutation_properties(bits in prop::collection::vec(any::<bool>(), 1..200), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = BitstringGenotype::new(bits, BitMode::General);
            let m = mutate_bitstring(&g, &mut rng);
            prop_assert_eq!(m.len(), g.len());
            let ones = |x: &BitstringGenotype| x.bits.iter().filter(|&&b| b).count() as i64;
            let dist = g.bits.iter().zip(&m.bits).filter(|(a, b)| a != b).count();
            // a simple flip moves the weight by one; a shuffle preserves it
            prop_assert!((ones(&m) - ones(&g)).abs() <= 1);
            if ones(&m) != ones(&g) {
                prop_assert_eq!(dist, 1);
            }
        }

        #[test]
        fn crossover_child_bits_come_from_parents(
            pair in (1usize..150).prop_flat_map(|len| (
                prop::collection::vec(any::<bool>(), len),
                prop::collection::vec(any::<bool>(), len),
            )),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = BitstringGenotype::new(pair.0, BitMode::General);
            let b = BitstringGenotype::new(pair.1, BitMode::General);
            let c = crossover_bitstring(&a, &b, &mut rng).unwrap();
            prop_assert_eq!(c.len(), a.len());
            for i in 0..c.len() {
                prop_assert!(c.bits[i] == a.bits[i] || c.bits[i] == b.bits[i]);
            }
            prop_assert_eq!(crossover_bitstring(&a, &a, &mut rng).unwrap(), a.clone());
        }

        #[test]
        fn float_ops_stay_in_range(
            pair in (1usize..40).prop_flat_map(|len| (
                prop::collection::vec(0.0f64..=1.0, len),
                prop::collection::vec(0.0f64..=1.0, len),
            )),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = FloatGenotype::new(pair.0, 3).unwrap();
            let b = FloatGenotype::new(pair.1, 3).unwrap();
            let m = mutate_float(&a, &mut rng);
            let changed = a.values().iter().zip(m.values()).filter(|(x, y)| x != y).count();
            prop_assert!(changed <= 1);
            let c = crossover_float(&a, &b, &mut rng).unwrap();
            for v in m.values().iter().chain(c.values()) {
                prop_assert!((0.0..=1.0).contains(v));
            }
        }
    }
}
