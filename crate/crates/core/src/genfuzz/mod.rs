//! Seeded instance generators and the property-suite runner.

mod profiles;
mod suite;
mod triangulation;

use thiserror::Error;

pub use profiles::{random_canvas, Designation, GeneratorProfile, Instance, ProfileId};
pub use suite::{run_property_suite, Counterexample, PropertyCounts, SuiteReport};
pub use triangulation::{outer_triangles, random_disk_triangulation, random_disk_triangulation_styled, DiskStyle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("no instance found after {0} attempts")]
    Exhausted(usize),
}

/// Mixes a base seed with a stream label and an index.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(stream ^ mix(index)))
}
