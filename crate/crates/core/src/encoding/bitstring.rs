use serde::{Deserialize, Serialize};

use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::rsbf::OrbitTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitMode {
    /// One bit per truth-table entry.
    General,
    /// One bit per rotation orbit.
    RotationSymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitstringGenotype {
    pub bits: Vec<bool>,
    pub mode: BitMode,
}

impl BitstringGenotype {
    pub fn new(bits: Vec<bool>, mode: BitMode) -> Self {
        Self { bits, mode }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Decodes a bitstring into the truth table it stands for. Rotation-symmetric
/// genotypes need the orbit table of dimension `n`.
pub fn decode_bitstring(g: &BitstringGenotype, n: u32, orbits: Option<&OrbitTable>) -> Result<TruthTable> {
    match g.mode {
        BitMode::General => {
            let expected = 1usize << n;
            if g.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    actual: g.len(),
                });
            }
            TruthTable::from_bits(n, g.bits.iter().copied())
        }
        BitMode::RotationSymmetric => {
            let ot = orbits
                .ok_or_else(|| Error::EncodingMismatch("rotation-symmetric genotype needs an orbit table".into()))?;
            if ot.n() != n {
                return Err(Error::EncodingMismatch(format!(
                    "orbit table is for n = {}, genotype for n = {n}",
                    ot.n()
                )));
            }
            ot.expand(&g.bits)
        }
    }
}

pub(crate) fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn bits_from_string(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("unexpected character {other:?} in bitstring"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        bits_from_string(s).unwrap()
    }

    #[test]
    fn general_copies_bits() {
        let g = BitstringGenotype::new(bits("0110"), BitMode::General);
        assert_eq!(
            decode_bitstring(&g, 2, None).unwrap(),
            TruthTable::from_bit_str(2, "0110").unwrap()
        );
    }

    #[test]
    fn rs_delegates_to_orbits() {
        let ot = OrbitTable::compute(3).unwrap();
        let g = BitstringGenotype::new(bits("0110"), BitMode::RotationSymmetric);
        assert_eq!(
            decode_bitstring(&g, 3, Some(&ot)).unwrap(),
            TruthTable::from_bit_str(3, "01111110").unwrap()
        );
        assert!(decode_bitstring(&g, 3, None).is_err());
    }

    #[test]
    fn length_violation() {
        let g = BitstringGenotype::new(bits("0110"), BitMode::General);
        assert_eq!(
            decode_bitstring(&g, 3, None),
            Err(Error::LengthMismatch { expected: 8, actual: 4 })
        );
    }
}
