use oddnl_core::encoding::{decode_bitstring, decode_float, BitMode, BitstringGenotype, FloatGenotype, GpTree};
use oddnl_core::{fitness, nonlinearity, walsh_transform, Fitness, OrbitTable, TruthTable};
use proptest::collection::vec;
use proptest::prelude::*;

fn table(max_n: u32) -> impl Strategy<Value = TruthTable> {
    (1..=max_n).prop_flat_map(|n| {
        vec(any::<bool>(), 1usize << n).prop_map(move |bits| TruthTable::from_bits(n, bits).unwrap())
    })
}

proptest! {
    #[test]
    fn single_flip_moves_every_coefficient_by_two(tt in table(9), pick in any::<prop::sample::Index>()) {
        let i = pick.index(tt.len());
        let mut flipped = tt.clone();
        flipped.flip(i);
        let a = walsh_transform(&tt);
        let b = walsh_transform(&flipped);
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert_eq!((x - y).abs(), 2);
        }
    }

    #[test]
    fn complement_negates_spectrum(tt in table(9)) {
        let a = walsh_transform(&tt);
        let b = walsh_transform(&tt.complement());
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert_eq!(*x, -*y);
        }
        prop_assert_eq!(fitness(&tt), fitness(&tt.complement()));
    }

    #[test]
    fn parseval_and_nonlinearity_range(tt in table(10)) {
        let ws = walsh_transform(&tt);
        prop_assert_eq!(ws.sum_of_squares(), 1u64 << (2 * tt.n()));
        let nl = nonlinearity(&ws);
        prop_assert!(nl <= 1 << (tt.n() - 1));
        let f = fitness(&tt);
        prop_assert!(f.value() >= nl as f64 && f.value() < nl as f64 + 1.0);
    }

    #[test]
    fn spectrum_entries_share_parity(tt in table(8)) {
        prop_assume!(tt.n() >= 2);
        let ws = walsh_transform(&tt);
        let w0 = ws.values()[0];
        // nonzero linear functions have even weight once n >= 2
        for w in ws.values() {
            prop_assert_eq!((w - w0).rem_euclid(4), 0);
        }
    }

    #[test]
    fn hex_round_trip(tt in table(10)) {
        let hex = tt.to_hex();
        prop_assert_eq!(TruthTable::from_hex(tt.n(), &hex).unwrap(), tt);
    }

    #[test]
    fn rotation_symmetric_expand_project(n in 1u32..=11, seed in any::<u64>()) {
        let orbits = OrbitTable::cached(n).unwrap();
        let bits: Vec<bool> = (0..orbits.num_orbits()).map(|k| (seed.rotate_left(k as u32 % 64) ^ k as u64) & 1 == 1).collect();
        let tt = orbits.expand(&bits).unwrap();
        prop_assert!(oddnl_core::is_rotation_symmetric(&tt));
        prop_assert_eq!(orbits.project(&tt).unwrap(), bits.clone());
        let g = BitstringGenotype::new(bits, BitMode::RotationSymmetric);
        prop_assert_eq!(decode_bitstring(&g, n, Some(&orbits)).unwrap(), tt);
    }

    #[test]
    fn fitness_order_is_total_and_consistent(a in (0u32..=240, 1u32..=512), b in (0u32..=240, 1u32..=512)) {
        let fa = Fitness::new(9, a.0, a.1);
        let fb = Fitness::new(9, b.0, b.1);
        prop_assert_eq!(fa.cmp(&fb), fa.value().partial_cmp(&fb.value()).unwrap());
    }

    #[test]
    fn float_decode_stays_in_range(d in 0.0f64..=1.0, bits in 1u32..=8) {
        let v = decode_float(&FloatGenotype::new(vec![d], bits).unwrap());
        prop_assert_eq!(v.len(), bits as usize);
        let int = v.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        prop_assert!(int < 1 << bits);
        prop_assert_eq!(int, ((d * (1u64 << bits) as f64).floor() as u64).min((1 << bits) - 1));
    }

    #[test]
    fn tree_display_round_trip(seed in any::<u64>(), n in 1u32..=8) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t = oddnl_core::encoding::tree::ramped_half_and_half(n, &Default::default(), &mut rng);
        let parsed: GpTree = t.to_string().parse().unwrap();
        prop_assert_eq!(parsed, t);
    }
}
