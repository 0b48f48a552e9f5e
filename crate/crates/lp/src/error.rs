use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: expected {expected} coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear program has no variables")]
    NoVariables,
    #[error("desk-scale guard `{guard}` exceeded: {actual} > {limit}")]
    Guard {
        guard: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("variable index {0} out of range")]
    BadIndex(usize),
}

impl LpError {
    /// Fails with a `Guard` error when `actual` exceeds `limit`.
    pub fn check(guard: &'static str, limit: usize, actual: usize) -> Result<(), LpError> {
        if actual > limit {
            Err(LpError::Guard {
                guard,
                limit,
                actual,
            })
        } else {
            Ok(())
        }
    }
}
