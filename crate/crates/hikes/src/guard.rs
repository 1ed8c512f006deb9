//! Desk-scale limits. Symbolic determinants and hike enumeration blow up fast
//! past these sizes, so the CLI refuses larger inputs unless told otherwise.

use hikes_core::Digraph;

pub const MAX_VERTICES: usize = 10;
pub const MAX_EDGES: usize = 20;
pub const MAX_LENGTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuardError {
    #[error("{n} vertices exceeds the limit of {MAX_VERTICES} (pass --unsafe-large to override)")]
    TooManyVertices { n: usize },
    #[error("{m} edges exceeds the limit of {MAX_EDGES} (pass --unsafe-large to override)")]
    TooManyEdges { m: usize },
    #[error("{what} = {value} exceeds the limit of {MAX_LENGTH} (pass --unsafe-large to override)")]
    TooLong { what: &'static str, value: usize },
}

pub fn check_graph(g: &Digraph) -> Result<(), GuardError> {
    if g.n_vertices() > MAX_VERTICES {
        return Err(GuardError::TooManyVertices { n: g.n_vertices() });
    }
    if g.edges().len() > MAX_EDGES {
        return Err(GuardError::TooManyEdges { m: g.edges().len() });
    }
    Ok(())
}

pub fn check_length(what: &'static str, value: usize) -> Result<(), GuardError> {
    if value > MAX_LENGTH {
        return Err(GuardError::TooLong { what, value });
    }
    Ok(())
}
