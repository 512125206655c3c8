//! Network motif analysis of directed word co-occurrence networks: text
//! ingestion, connected 3- and 4-vertex subgraph census (ESU and RAND-ESU),
//! degree-preserving null models, and significance profiles.

pub mod census;
pub mod classes;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod manifest;
pub mod null_model;
pub mod pipeline;
pub mod report;
pub mod significance;

pub use census::{enumerate_full, enumerate_sampled, CensusResult, Enumeration};
pub use classes::{canonical_class, canonical_code, ClassTable, SubgraphClass};
pub use error::{Error, Result};
pub use graph::{load_edgelist, save_edgelist, DirectedGraph, Vertex};
pub use ingest::{build_network, tokenize, IngestConfig, Vocabulary};
pub use null_model::{generate_ensemble, randomize, RandomizeConfig, SwapReport};
pub use significance::{
    compare_profiles, pvalues, significance_profile, zscores, EnsembleStats, MotifLabel, SignificanceProfile,
    ZScore,
};
