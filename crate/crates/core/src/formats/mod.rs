//! Byte-exact readers and writers for graph6 and planar code.

pub mod graph6;
pub mod planar_code;

use thiserror::Error;

use crate::embedding::EmbeddingError;
use crate::graph::GraphError;

pub use graph6::{emit_graph6, parse_graph6, parse_graph6_file, GRAPH6_HEADER};
pub use planar_code::{emit_planar_code, parse_planar_code, PLANAR_CODE_HEADER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("byte {offset}: {reason}")]
    Malformed { offset: usize, reason: String },
    #[error("graph at byte {offset}: {source}")]
    Graph { offset: usize, source: GraphError },
    #[error("embedding at byte {offset}: {source}")]
    Embedding { offset: usize, source: EmbeddingError },
}

pub(crate) fn malformed(offset: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        offset,
        reason: reason.into(),
    }
}
