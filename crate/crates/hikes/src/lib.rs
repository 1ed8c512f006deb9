//! File formats, desk-scale guards and the verification driver behind the
//! `hikes` command-line tool.

pub mod guard;
pub mod json;
pub mod verify;

use std::path::Path;

use hikes_core::{parse_digraph, Digraph, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
}

/// Reads and parses a graph file.
pub fn load_graph(path: &Path) -> Result<Digraph, LoadError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: display.clone(),
        source,
    })?;
    parse_digraph(&text).map_err(|source| LoadError::Parse { path: display, source })
}
