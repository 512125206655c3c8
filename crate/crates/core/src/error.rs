use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("arc {0}->{1} is a self-loop")]
    SelfLoop(u32, u32),

    #[error("arc {from}->{to} references a vertex outside 0..{n}")]
    VertexOutOfRange { from: u32, to: u32, n: usize },

    #[error("subgraph size {0} is not supported (expected 3 or 4)")]
    UnsupportedSize(usize),

    #[error("pattern {mask:#x} on {k} vertices is not weakly connected")]
    Disconnected { mask: u32, k: usize },

    #[error("invalid sampling probabilities: {0}")]
    SamplingProbabilities(String),

    #[error("graph has {0} arcs; randomization needs at least 2")]
    TooFewArcs(usize),

    #[error("invalid randomization config: {0}")]
    RandomizeConfig(String),

    #[error("class table mismatch: {0}")]
    ClassMismatch(String),

    #[error("all Z-scores are undefined; increase the number of random networks")]
    AllUndefined,

    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("export id table: {0}")]
    ExportTable(String),

    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
