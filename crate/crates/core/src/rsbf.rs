//! Rotation-symmetric Boolean functions.
//!
//! The rotation sends `(x_0, ..., x_{n-1})` to `(x_{n-1}, x_0, ..., x_{n-2})`.
//! With `x_0` as the most significant index bit this is a right rotation of
//! the `n`-bit index. Orbits are numbered in increasing order of their
//! smallest member, which is also their representative.

use std::sync::{Arc, OnceLock};

use crate::boolfn::{check_dimension, TruthTable, MAX_DIMENSION};
use crate::error::{Error, Result};

#[inline]
pub fn rotate(i: usize, n: u32) -> usize {
    (i >> 1) | ((i & 1) << (n - 1))
}

fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Number of rotation orbits `g_n`, counted with Burnside's lemma:
/// `g_n = (1/n) Σ_{t | n} φ(t) 2^(n/t)`.
pub fn orbit_count(n: u32) -> Result<usize> {
    check_dimension(n)?;
    let n = n as u64;
    let sum: u64 = (1..=n)
        .filter(|t| n.is_multiple_of(*t))
        .map(|t| totient(t) * (1u64 << (n / t)))
        .sum();
    Ok((sum / n) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    n: u32,
    orbit_of: Vec<u32>,
    representatives: Vec<u32>,
}

impl OrbitTable {
    pub fn compute(n: u32) -> Result<Self> {
        check_dimension(n)?;
        let len = 1usize << n;
        let mut orbit_of = vec![u32::MAX; len];
        let mut representatives = Vec::new();
        for i in 0..len {
            if orbit_of[i] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(i as u32);
            let mut j = i;
            loop {
                orbit_of[j] = id;
                j = rotate(j, n);
                if j == i {
                    break;
                }
            }
        }
        Ok(Self {
            n,
            orbit_of,
            representatives,
        })
    }

    /// Shared table for dimension `n`, computed on first use.
    pub fn cached(n: u32) -> Result<Arc<Self>> {
        static CACHE: [OnceLock<Arc<OrbitTable>>; MAX_DIMENSION as usize + 1] =
            [const { OnceLock::new() }; MAX_DIMENSION as usize + 1];
        check_dimension(n)?;
        Ok(CACHE[n as usize]
            .get_or_init(|| Arc::new(Self::compute(n).expect("dimension checked")))
            .clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_orbits(&self) -> usize {
        self.representatives.len()
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i] as usize
    }

    pub fn orbit_map(&self) -> &[u32] {
        &self.orbit_of
    }

    pub fn representatives(&self) -> &[u32] {
        &self.representatives
    }

    /// Spreads one bit per orbit over the full truth table.
    pub fn expand(&self, genotype: &[bool]) -> Result<TruthTable> {
        if genotype.len() != self.num_orbits() {
            return Err(Error::LengthMismatch {
                expected: self.num_orbits(),
                actual: genotype.len(),
            });
        }
        let len = 1usize << self.n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, &orbit) in self.orbit_of.iter().enumerate() {
            if genotype[orbit as usize] {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        TruthTable::from_words(self.n, words)
    }

    /// Reads back the per-orbit values at the representatives.
    pub fn project(&self, tt: &TruthTable) -> Result<Vec<bool>> {
        if tt.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: 1 << self.n,
                actual: tt.len(),
            });
        }
        Ok(self.representatives.iter().map(|&r| tt.get(r as usize)).collect())
    }
}

pub fn compute_orbits(n: u32) -> Result<OrbitTable> {
    OrbitTable::compute(n)
}

pub fn is_rotation_symmetric(tt: &TruthTable) -> bool {
    let n = tt.n();
    (0..tt.len()).all(|i| tt.get(i) == tt.get(rotate(i, n)))
}
