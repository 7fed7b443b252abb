//! Engine for finitely presented categories enriched in a computable monoidal
//! model category, over two concrete bases: bounded rational chain complexes
//! and finite sets.
//!
//! The central objects are two-object enriched categories presented by ordered
//! lists of cell attachments. Every infinite construction (free monoids,
//! pushout extensions, boundary objects, the cube resolution of the
//! isomorphism category) is exposed stage-by-stage through a weight
//! filtration, and every emitted colimit can be certified against randomly
//! generated test cones.

pub mod amalgam;
pub mod chain;
pub mod coherent;
pub mod config;
pub mod engine;
pub mod error;
pub mod filtered;
pub mod fset;
pub mod graded;
pub mod homotopy;
pub mod interval;
pub mod lifts;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod presentation;
pub mod rat;
pub mod report;
pub mod suite;
pub mod universal;
pub mod vcat;
pub mod wcons;

pub use config::EngineConfig;
pub use error::{HocatError, Result};
