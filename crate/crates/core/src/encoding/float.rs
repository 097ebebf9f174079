use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::rsbf::OrbitTable;

use super::bitstring::{decode_bitstring, BitMode, BitstringGenotype};

/// A vector of reals in `[0, 1]`, each standing for `decode` consecutive genotype bits.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatGenotype {
    values: Vec<f64>,
    decode: u32,
}

impl FloatGenotype {
    pub fn new(values: Vec<f64>, decode: u32) -> Result<Self> {
        if decode == 0 || decode > 32 {
            return Err(Error::Config(format!("decode must be in 1..=32, got {decode}")));
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ValueOutOfRange(bad));
        }
        Ok(Self { values, decode })
    }

    /// Clips each value into `[0, 1]`; NaN maps to 0.
    pub(crate) fn clipped(values: Vec<f64>, decode: u32) -> Self {
        let values = values
            .into_iter()
            .map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect();
        Self { values, decode }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn decode(&self) -> u32 {
        self.decode
    }

    pub fn bit_len(&self) -> usize {
        self.values.len() * self.decode as usize
    }
}

/// Maps one real to its integer cell: `floor(d * 2^decode)`, with `d = 1`
/// clamped to the top cell.
pub fn int_value(d: f64, decode: u32) -> u64 {
    let cells = 1u64 << decode;
    let v = (d * cells as f64).floor() as u64;
    v.min(cells - 1)
}

/// Concatenates `decode` bits per value, most significant bit first.
pub fn decode_float(g: &FloatGenotype) -> Vec<bool> {
    let mut out = Vec::with_capacity(g.bit_len());
    for &d in &g.values {
        let v = int_value(d, g.decode);
        for k in (0..g.decode).rev() {
            out.push((v >> k) & 1 == 1);
        }
    }
    out
}

/// Decodes to a truth table: general when `orbits` is `None`, rotation-symmetric otherwise.
pub fn decode_float_genotype(g: &FloatGenotype, n: u32, orbits: Option<&OrbitTable>) -> Result<TruthTable> {
    let expected = match orbits {
        Some(ot) => ot.num_orbits(),
        None => 1usize << n,
    };
    if g.bit_len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: g.bit_len(),
        });
    }
    let mode = if orbits.is_some() {
        BitMode::RotationSymmetric
    } else {
        BitMode::General
    };
    decode_bitstring(&BitstringGenotype::new(decode_float(g), mode), n, orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(d: f64) -> Vec<bool> {
        decode_float(&FloatGenotype::new(vec![d], 3).unwrap())
    }

    #[test]
    fn boundaries_and_midpoint() {
        assert_eq!(single(0.0), vec![false, false, false]);
        assert_eq!(single(1.0), vec![true, true, true]);
        assert_eq!(single(0.5), vec![true, false, false]);
        assert_eq!(single(0.124), vec![false, false, false]);
        assert_eq!(single(0.125), vec![false, false, true]);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert_eq!(FloatGenotype::new(vec![1.5], 3), Err(Error::ValueOutOfRange(1.5)));
        assert!(FloatGenotype::new(vec![-0.1], 3).is_err());
        assert!(FloatGenotype::new(vec![f64::NAN], 3).is_err());
    }

    #[test]
    fn dimension_must_match_target_length() {
        let ot7 = OrbitTable::compute(7).unwrap();
        let g = FloatGenotype::new(vec![0.3; 20], 3).unwrap();
        assert_eq!(
            decode_float_genotype(&g, 7, Some(&ot7)),
            Err(Error::LengthMismatch {
                expected: 20,
                actual: 60
            })
        );
        let ot9 = OrbitTable::compute(9).unwrap();
        let t = decode_float_genotype(&g, 9, Some(&ot9)).unwrap();
        assert!(crate::rsbf::is_rotation_symmetric(&t));
    }

    #[test]
    fn zero_vector_is_constant_zero() {
        let g = FloatGenotype::new(vec![0.0; 4], 2).unwrap();
        assert_eq!(decode_float_genotype(&g, 3, None).unwrap().weight(), 0);
    }
}
