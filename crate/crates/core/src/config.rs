//! Run configuration shared by the engine, the oracles and the CLI.

use serde::{Deserialize, Serialize};

/// Bounds and reproducibility knobs for one job. A fixed seed makes every
/// output byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EngineConfig {
    /// Weight-filtration stage bound for all constructions.
    pub stage: u32,
    /// Chain degree bound for homology tables.
    pub degree_bound: i64,
    /// Word-length bound for the set-base oracle.
    pub word_bound: u32,
    /// Maximum total dimension / cardinality of any single stage object.
    pub budget: usize,
    /// Seed for randomized certification (test cones, sampled instances).
    pub seed: u64,
    /// Number of random test cones per universal-property certificate.
    pub cones: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            stage: 3,
            degree_bound: 4,
            word_bound: 6,
            budget: 1_000_000,
            seed: 0,
            cones: 3,
        }
    }
}

impl EngineConfig {
    pub fn with_stage(mut self, stage: u32) -> Self {
        self.stage = stage;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
