//! Semantic spacetime knowledge graphs: typed associations between concept
//! tokens, a filesystem store, hub compounding, ingestion front ends and a
//! story engine that turns graph walks into explanation lines.

pub mod alias;
pub mod compound;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod render;
pub mod store;
pub mod story;
pub mod types;

pub use alias::{builtin_alias, Alias, AliasRegistry};
pub use error::{AliasError, IngestError, InvalidValue, SanitizeError, SearchError, StoreError};
pub use graph::Graph;
pub use story::{
    brainstorm, bounded_search, inverse_brainstorm, relevance, LoopMode, SearchOptions, StoryPath,
    StoryStep, StoryWalker,
};
pub use types::{
    expand_tuple, AssociationEdge, ConceptToken, ContextSet, EdgeKey, KnowledgeTuple,
    SignedAssocType, ROOT_CONCEPT,
};
