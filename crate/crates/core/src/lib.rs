//! Probabilistic frames on finitely supported measures.
//!
//! A measure μ = Σ wᵢ δ_{xᵢ} on ℝⁿ is a frame when its frame operator
//! S = Σ wᵢ xᵢxᵢᵗ is positive definite. The crate computes frame bounds and
//! redundancy, exact W₂ couplings, mixed frame operators Σ γᵢⱼ xᵢyⱼᵗ, and
//! certifies or constructs exact, approximate and pseudo duals, including the
//! perturbation and sampling constructions.

#![forbid(unsafe_code)]

pub mod cli;
pub mod duals;
pub mod error;
pub mod fixtures;
pub mod frames;
pub mod measures;
pub mod numerics;
pub mod perturbation;
pub mod redundancy;
pub mod transport;

pub use error::{Error, Result};
pub use measures::DiscreteMeasure;
pub use numerics::Matrix;
pub use transport::Coupling;
