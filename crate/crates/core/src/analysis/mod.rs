//! Exports for plotting: radar projections, MDS embeddings, vocabulary tables.

mod mds;
mod projection;
mod vocab;

pub use mds::{classical_mds, kernel_distances, MdsEmbedding};
pub use projection::{semantic_projection, SemanticProjection, RADAR_COMPONENTS};
pub use vocab::{vocab_report, VocabRow, DEFAULT_TOP_WORDS};
