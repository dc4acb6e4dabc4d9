//! Chains, reward processes, structural classification and random generators.

mod chain;
mod generate;
mod structure;

pub use chain::{validate_chain, ChainModel, MrpModel};
pub use generate::{generate_perturbation, generate_random_unichain};
pub use structure::{classify_states, StateStructure};
