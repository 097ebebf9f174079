//! Genotype representations and their decoding to truth tables.

pub mod bitstring;
pub mod float;
pub mod tree;

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::{check_dimension, TruthTable};
use crate::error::{Error, Result};
use crate::rsbf::OrbitTable;

pub use bitstring::{decode_bitstring, BitMode, BitstringGenotype};
pub use float::{decode_float, decode_float_genotype, FloatGenotype};
pub use tree::{evaluate_tree, GpTree, Node, TreeEvaluator, TreeParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    #[serde(alias = "tt", alias = "bits")]
    Bitstring,
    #[serde(alias = "fp")]
    Float,
    #[serde(alias = "gp")]
    Tree,
}

impl std::str::FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bitstring" | "tt" | "bits" => Ok(Self::Bitstring),
            "float" | "fp" => Ok(Self::Float),
            "tree" | "gp" => Ok(Self::Tree),
            other => Err(Error::Config(format!("unknown encoding {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Genotype {
    Bits(BitstringGenotype),
    Float(FloatGenotype),
    Tree(GpTree),
}

impl Genotype {
    pub fn kind(&self) -> EncodingKind {
        match self {
            Genotype::Bits(_) => EncodingKind::Bitstring,
            Genotype::Float(_) => EncodingKind::Float,
            Genotype::Tree(_) => EncodingKind::Tree,
        }
    }
}

/// Serialized genotype as it appears in run logs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenotypeRecord {
    Bitstring { mode: BitMode, bits: String },
    Float { decode: u32, values: Vec<f64> },
    Tree { expr: String },
}

impl From<&Genotype> for GenotypeRecord {
    fn from(g: &Genotype) -> Self {
        match g {
            Genotype::Bits(b) => GenotypeRecord::Bitstring {
                mode: b.mode,
                bits: bitstring::bits_to_string(&b.bits),
            },
            Genotype::Float(f) => GenotypeRecord::Float {
                decode: f.decode(),
                values: f.values().to_vec(),
            },
            Genotype::Tree(t) => GenotypeRecord::Tree { expr: t.to_string() },
        }
    }
}

impl TryFrom<&GenotypeRecord> for Genotype {
    type Error = Error;

    fn try_from(r: &GenotypeRecord) -> Result<Self> {
        Ok(match r {
            GenotypeRecord::Bitstring { mode, bits } => {
                Genotype::Bits(BitstringGenotype::new(bitstring::bits_from_string(bits)?, *mode))
            }
            GenotypeRecord::Float { decode, values } => Genotype::Float(FloatGenotype::new(values.clone(), *decode)?),
            GenotypeRecord::Tree { expr } => Genotype::Tree(expr.parse()?),
        })
    }
}

/// User-facing encoding parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingConfig {
    pub n: u32,
    pub kind: EncodingKind,
    /// Restrict the search to rotation-symmetric functions.
    pub rotation_symmetric: bool,
    /// Bits per real value for the float encoding. `None` picks the default.
    pub decode: Option<u32>,
    pub tree: TreeParams,
}

impl EncodingConfig {
    pub fn new(n: u32, kind: EncodingKind) -> Self {
        Self {
            n,
            kind,
            rotation_symmetric: false,
            decode: None,
            tree: TreeParams::default(),
        }
    }

    pub fn rotation_symmetric(mut self, rs: bool) -> Self {
        self.rotation_symmetric = rs;
        self
    }
}

/// Default bits per real: 3 when it divides the genotype length, otherwise
/// the largest smaller divisor.
pub fn default_decode(bit_len: usize) -> u32 {
    (1..=3u32)
        .rev()
        .find(|&d| bit_len.is_multiple_of(d as usize))
        .unwrap_or(1)
}

/// A validated encoding with everything needed to decode and sample genotypes.
#[derive(Clone, Debug)]
pub struct Problem {
    n: u32,
    kind: EncodingKind,
    orbits: Option<Arc<OrbitTable>>,
    decode: u32,
    tree: TreeParams,
}

impl Problem {
    pub fn new(cfg: &EncodingConfig) -> Result<Self> {
        check_dimension(cfg.n)?;
        let orbits = if cfg.rotation_symmetric {
            if cfg.kind == EncodingKind::Tree {
                return Err(Error::Config(
                    "the tree encoding searches general functions; drop the rotation-symmetric flag".into(),
                ));
            }
            Some(OrbitTable::cached(cfg.n)?)
        } else {
            None
        };
        let bit_len = orbits.as_ref().map_or(1usize << cfg.n, |o| o.num_orbits());
        let decode = match cfg.decode {
            Some(d) if d == 0 || bit_len % d as usize != 0 => {
                return Err(Error::Config(format!(
                    "decode = {d} does not divide the genotype length {bit_len}"
                )))
            }
            Some(d) => d,
            None => default_decode(bit_len),
        };
        if cfg.kind == EncodingKind::Tree {
            if cfg.tree.max_depth < 1 || cfg.tree.max_nodes < 1 {
                return Err(Error::Config("tree limits must be positive".into()));
            }
            if cfg.n > u8::MAX as u32 {
                return Err(Error::UnsupportedDimension(cfg.n));
            }
        }
        Ok(Self {
            n: cfg.n,
            kind: cfg.kind,
            orbits,
            decode,
            tree: cfg.tree,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn orbits(&self) -> Option<&OrbitTable> {
        self.orbits.as_deref()
    }

    pub fn is_rotation_symmetric(&self) -> bool {
        self.orbits.is_some()
    }

    pub fn bit_mode(&self) -> BitMode {
        if self.orbits.is_some() {
            BitMode::RotationSymmetric
        } else {
            BitMode::General
        }
    }

    /// Genotype bit length: `2^n`, or `g_n` when rotation-symmetric.
    pub fn bit_len(&self) -> usize {
        self.orbits.as_ref().map_or(1usize << self.n, |o| o.num_orbits())
    }

    pub fn decode_bits(&self) -> u32 {
        self.decode
    }

    pub fn float_dimension(&self) -> usize {
        self.bit_len() / self.decode as usize
    }

    pub fn tree_params(&self) -> &TreeParams {
        &self.tree
    }

    pub fn decode(&self, g: &Genotype) -> Result<TruthTable> {
        match g {
            Genotype::Bits(b) => {
                if b.mode != self.bit_mode() {
                    return Err(Error::EncodingMismatch(format!(
                        "expected {:?} bitstring",
                        self.bit_mode()
                    )));
                }
                decode_bitstring(b, self.n, self.orbits())
            }
            Genotype::Float(f) => decode_float_genotype(f, self.n, self.orbits()),
            Genotype::Tree(t) => evaluate_tree(t, self.n),
        }
    }

    /// Samples a genotype of this problem's kind.
    pub fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype {
        match self.kind {
            EncodingKind::Bitstring => Genotype::Bits(BitstringGenotype::new(
                (0..self.bit_len()).map(|_| rng.random_bool(0.5)).collect(),
                self.bit_mode(),
            )),
            EncodingKind::Float => Genotype::Float(FloatGenotype::clipped(
                (0..self.float_dimension()).map(|_| rng.random::<f64>()).collect(),
                self.decode,
            )),
            EncodingKind::Tree => Genotype::Tree(tree::ramped_half_and_half(self.n, &self.tree, rng)),
        }
    }
}

pub fn random_genotype<R: Rng + ?Sized>(cfg: &EncodingConfig, rng: &mut R) -> Result<Genotype> {
    Ok(Problem::new(cfg)?.random_genotype(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match random_genotype(&EncodingConfig::new(3, EncodingKind::Bitstring), &mut rng).unwrap() {
            Genotype::Bits(b) => {
                assert_eq!(b.len(), 8);
                assert_eq!(b.mode, BitMode::General);
            }
            other => panic!("{other:?}"),
        }
        let cfg = EncodingConfig::new(9, EncodingKind::Float).rotation_symmetric(true);
        match random_genotype(&cfg, &mut rng).unwrap() {
            Genotype::Float(f) => {
                assert_eq!(f.dimension(), 20);
                assert_eq!(f.decode(), 3);
                assert!(f.values().iter().all(|v| (0.0..=1.0).contains(v)));
            }
            other => panic!("{other:?}"),
        }
        let mut cfg = EncodingConfig::new(5, EncodingKind::Tree);
        cfg.tree.max_depth = 5;
        match random_genotype(&cfg, &mut rng).unwrap() {
            Genotype::Tree(t) => {
                assert!(t.depth() <= 5);
                t.check_vars(5).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decode_defaults() {
        assert_eq!(default_decode(60), 3);
        assert_eq!(default_decode(20), 2);
        assert_eq!(default_decode(128), 2);
        assert_eq!(default_decode(7), 1);
    }

    #[test]
    fn config_validation() {
        let mut cfg = EncodingConfig::new(7, EncodingKind::Float).rotation_symmetric(true);
        cfg.decode = Some(3);
        assert!(matches!(Problem::new(&cfg), Err(Error::Config(_))));
        cfg.decode = Some(4);
        assert_eq!(Problem::new(&cfg).unwrap().float_dimension(), 5);
        let tree_rs = EncodingConfig::new(7, EncodingKind::Tree).rotation_symmetric(true);
        assert!(Problem::new(&tree_rs).is_err());
        assert!(Problem::new(&EncodingConfig::new(0, EncodingKind::Bitstring)).is_err());
    }

    #[test]
    fn rs_decodes_are_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in [EncodingKind::Bitstring, EncodingKind::Float] {
            let p = Problem::new(&EncodingConfig::new(7, kind).rotation_symmetric(true)).unwrap();
            for _ in 0..20 {
                let t = p.decode(&p.random_genotype(&mut rng)).unwrap();
                assert!(crate::rsbf::is_rotation_symmetric(&t));
            }
        }
    }

    #[test]
    fn genotype_record_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in [EncodingKind::Bitstring, EncodingKind::Float, EncodingKind::Tree] {
            let p = Problem::new(&EncodingConfig::new(5, kind)).unwrap();
            let g = p.random_genotype(&mut rng);
            let rec = GenotypeRecord::from(&g);
            let json = serde_json::to_string(&rec).unwrap();
            let back: GenotypeRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(Genotype::try_from(&back).unwrap(), g);
        }
    }
}
