use std::fmt;

/// Errors surfaced by the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HocatError {
    /// A stage object grew past the configured size budget.
    Budget { size: usize, budget: usize },
    /// Malformed input data (complexes, maps, presentations, diagrams).
    Malformed(String),
    /// A cell was routed to a constructor for the wrong hom slot.
    SlotMismatch { expected: (u8, u8), got: (u8, u8) },
    /// A linear system that must be solvable under the stated preconditions
    /// turned out infeasible; this signals a precondition violation.
    Infeasible(String),
    /// An internal invariant failed. Always a bug.
    Internal(String),
}

impl fmt::Display for HocatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HocatError::Budget { size, budget } => {
                write!(f, "size budget exceeded: {} > {}", size, budget)
            }
            HocatError::Malformed(msg) => write!(f, "malformed input: {}", msg),
            HocatError::SlotMismatch { expected, got } => write!(
                f,
                "cell slot ({},{}) routed to constructor for slot ({},{})",
                got.0, got.1, expected.0, expected.1
            ),
            HocatError::Infeasible(msg) => write!(f, "infeasible system: {}", msg),
            HocatError::Internal(msg) => write!(f, "internal invariant violated: {}", msg),
        }
    }
}

impl std::error::Error for HocatError {}

pub type Result<T> = std::result::Result<T, HocatError>;
