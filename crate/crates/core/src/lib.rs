//! Evolutionary search for highly nonlinear Boolean functions in odd dimensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolfn`]: truth tables, the Walsh-Hadamard spectrum, nonlinearity,
//!   balancedness, reference bounds and the search fitness.
//! - [`rsbf`]: rotation orbits and rotation-symmetric expansion.
//! - [`encoding`]: bitstring, float and expression-tree genotypes.
//! - [`ea`]: steady-state tournament evolution, differential evolution and
//!   the run driver.
//! - [`local_search`]: mutation and bit-flip hill climbing inside a run.
//! - [`harness`], [`config`], [`verify`]: campaigns, result files and checks.

pub mod boolfn;
pub mod config;
pub mod ea;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod local_search;
pub mod rsbf;
pub mod verify;

pub use boolfn::{
    balancedness, bounds, fitness, nonlinearity, walsh_transform, Bounds, Fitness, PropertyReport, TruthTable,
    WalshSpectrum,
};
pub use ea::{run, Individual, OptimizerKind, RunConfig, RunRecord};
pub use encoding::{EncodingConfig, EncodingKind, Genotype, GpTree, Problem};
pub use error::{Error, Result};
pub use harness::{run_campaign, Campaign, CampaignResult, SummaryRow};
pub use local_search::{LsConfig, LsVariant};
pub use rsbf::{compute_orbits, is_rotation_symmetric, orbit_count, OrbitTable};
